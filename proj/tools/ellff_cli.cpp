#include <iostream>

#include "CLI11.hpp"
#include "ellff/cli.hpp"
#include "ellff/errors.hpp"

using ellff::JobSpec;

namespace {

void curve_flags(CLI::App* sub, JobSpec& job)
{
    sub->add_option("--curve", job.curve, "curve text, e.g. \"a1=1, a4=t\"; ';' separates lines");
    sub->add_option("--curve-file", job.curve_file, "file with the curve text");
    sub->add_option("--fixture", job.fixture, "legendre:p=3,f=1 | dpct:p=3,n=1 | e-i2 | e-prime");
    sub->add_option("--annotate", job.annotations, "annotation for an additive fiber, e.g. \"inf: type=III*\"");
    sub->add_option("--q", job.q, "size of the constant field");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"elliptic curves over F_q(t): L-functions, heights, Mordell-Weil lattices"};
    app.require_subcommand(1);
    app.fallthrough();
    JobSpec job;
    std::string ds;
    app.add_option("--format", job.format, "json | csv | human")->check(CLI::IsMember({"json", "csv", "human"}));
    app.add_option("--threads", job.threads, "worker threads for point counting");
    app.add_option("--cache", job.cache, "point-count cache file (JSON lines)");

    auto add = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->callback([&job, name] { job.command = name; });
        return s;
    };
    auto* lf = add("lfunc", "L-polynomial");
    curve_flags(lf, job);
    auto* rk = add("rank", "analytic rank and leading coefficient");
    curve_flags(rk, job);
    auto* ht = add("heights", "canonical heights of points");
    curve_flags(ht, job);
    ht->add_option("--point", job.points, "point \"(x, y)\"");
    auto* la = add("lattice", "Gram matrix, relations and regulator of points");
    curve_flags(la, job);
    la->add_option("--point", job.points, "point \"(x, y)\"");
    auto* lg = add("legendre", "Legendre curve theorem check");
    lg->add_option("--p", job.p)->required();
    lg->add_option("--f", job.f);
    lg->add_option("--check", job.check, "all | lattice");
    auto* dp = add("dpct", "explicit points on y^2+xy+ty=x^3+tx^2");
    dp->add_option("--p", job.p)->required();
    dp->add_option("--n", job.n);
    dp->add_option("--check", job.check, "all | lattice");
    auto* tw = add("tower", "ranks in the Kummer tower t = u^d");
    curve_flags(tw, job);
    tw->add_option("--p", job.p, "use the Legendre curve over F_p");
    tw->add_option("--d", ds, "comma separated list")->required();
    auto* sz = add("surface-zeta", "zeta function of the elliptic surface");
    curve_flags(sz, job);
    sz->add_option("--n-max", job.n_max, "check point counts for n = 1..n_max");
    auto* bs = add("bsd-check", "refined BSD, Shioda-Tate and Artin-Tate bookkeeping");
    curve_flags(bs, job);
    bs->add_option("--point", job.points, "point \"(x, y)\"");
    auto* cm = add("cache-merge", "merge point-count caches");
    cm->add_option("inputs", job.inputs)->required();
    cm->add_option("--out", job.output)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (!ds.empty()) {
        try {
            job.ds = ellff::parse_int_list(ds);
        } catch (const ellff::InputError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return ellff::run(job, std::cout, std::cerr);
}
