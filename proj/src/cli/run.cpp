#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "ellff/cli.hpp"
#include "ellff/legendre.hpp"
#include "json.hpp"

namespace ellff {

namespace {

using json = nlohmann::ordered_json;
using RF = RationalFunction;

std::string qstr(const mpq_class& x)
{
    mpq_class y = x;
    y.canonicalize();
    return y.get_den() == 1 ? y.get_num().get_str() : y.get_str();
}

json zjson(const ZPoly& f)
{
    json a = json::array();
    for (auto& c : f) a.push_back(c.get_str());
    return a;
}

json qmatrix(const QMatrix& M)
{
    json a = json::array();
    for (auto& row : M) {
        json r = json::array();
        for (auto& x : row) r.push_back(qstr(x));
        a.push_back(r);
    }
    return a;
}

json zvectors(const std::vector<ZVector>& V)
{
    json a = json::array();
    for (auto& v : V) {
        json r = json::array();
        for (auto& x : v) r.push_back(x.get_si());
        a.push_back(r);
    }
    return a;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Output {
    json report;
    Table table;
    bool ok = true;
};

const FiniteField& field_of_size(uint64_t q)
{
    if (q < 2) throw InputError("--q must be a prime power, got " + std::to_string(q));
    for (uint64_t p = 2; p <= q; ++p) {
        if (q % p) continue;
        uint64_t r = q;
        uint32_t m = 0;
        while (r % p == 0) {
            r /= p;
            ++m;
        }
        if (r != 1) throw InputError("--q must be a prime power, got " + std::to_string(q));
        if (q > FiniteField::size_limit()) throw InputError("field of size " + std::to_string(q) + " is too large");
        return FiniteField::get(uint32_t(p), m);
    }
    throw InputError("bad --q");
}

int fixture_param(const std::string& spec, const std::string& key, int def)
{
    size_t at = spec.find(key + "=");
    if (at == std::string::npos) return def;
    size_t e = spec.find(',', at);
    std::string v = spec.substr(at + key.size() + 1, e == std::string::npos ? std::string::npos : e - at - key.size() - 1);
    try {
        return std::stoi(v);
    } catch (...) {
        throw InputError("fixture parameter " + key + " is not an integer: '" + v + "'");
    }
}

// the curve and, where the source provides them, points
struct Source {
    std::optional<EllipticCurveFF> E;
    std::optional<LegendreInstance> inst;
    std::vector<CurvePoint> points;
    std::string name;
};

Source resolve(const JobSpec& job, bool need_curve)
{
    Source s;
    if (!job.fixture.empty()) {
        const std::string& fx = job.fixture;
        s.name = fx;
        if (fx.rfind("legendre", 0) == 0) {
            s.inst = build_legendre(fixture_param(fx, "p", 3), fixture_param(fx, "f", 1));
        } else if (fx.rfind("dpct", 0) == 0) {
            s.inst = build_dpct(fixture_param(fx, "p", 3), fixture_param(fx, "n", 1));
        } else if (fx == "e-i2") {
            s.E = parse_curve("a1=1, a4=t\nannotate inf: type=III*", FiniteField::get(2, 1));
            s.points.push_back(parse_point("(0, 0)", FiniteField::get(2, 1)));
        } else if (fx == "e-prime") {
            s.E = parse_curve("a1=1, a6=t\nannotate inf: type=II*", FiniteField::get(2, 1));
        } else {
            throw InputError("unknown fixture '" + fx + "' (legendre:p=..,f=.. | dpct:p=..,n=.. | e-i2 | e-prime)");
        }
        if (s.inst) {
            s.E = s.inst->E();
            s.points = s.inst->points;
        }
    } else if (!job.curve.empty() || !job.curve_file.empty()) {
        std::string text = job.curve;
        if (!job.curve_file.empty()) {
            std::ifstream in(job.curve_file);
            if (!in) throw InputError("cannot read curve file " + job.curve_file);
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        for (auto& a : job.annotations) text += "\nannotate " + a;
        uint64_t q = job.q ? job.q : (job.p ? uint64_t(job.p) : 0);
        if (!q) throw InputError("a curve needs --q");
        const FiniteField& F = field_of_size(q);
        s.E = parse_curve(text, F);
        s.name = s.E->canonical();
    } else if (need_curve) {
        throw InputError("no curve given: use --curve, --curve-file or --fixture");
    }
    if (s.E && !job.points.empty()) {
        s.points.clear();
        for (auto& p : job.points) s.points.push_back(parse_point(p, s.E->field()));
    }
    return s;
}

LOptions lopts(const JobSpec& job, CountCache* cache)
{
    LOptions o;
    o.threads = job.threads;
    o.cache = cache;
    return o;
}

json curve_json(const EllipticCurveFF& E)
{
    json c;
    c["field"] = E.field().name();
    c["q"] = E.field().q();
    json a;
    static const char* names[5] = {"a1", "a2", "a3", "a4", "a6"};
    for (int i = 0; i < 5; ++i) a[names[i]] = E.model().a[i].str();
    c["coefficients"] = a;
    c["hash"] = E.hash();
    return c;
}

json l_json(const LPolynomial& L)
{
    json j;
    j["q"] = L.q;
    j["conductor_degree"] = L.conductor_degree;
    j["degree"] = L.degree;
    j["sign"] = L.sign;
    j["coefficients"] = zjson(L.coeffs);
    j["polynomial"] = L.str();
    j["method"] = L.method;
    j["functional_equation"] = functional_equation_holds(L.coeffs, L.q, L.degree, L.sign);
    return j;
}

Output cmd_lfunc(const Source& s, const LOptions& lo)
{
    Output o;
    auto L = l_polynomial(*s.E, lo);
    o.report["command"] = "lfunc";
    o.report["curve"] = curve_json(*s.E);
    o.report["l_function"] = l_json(L);
    o.report["root_modulus_error"] = root_modulus_error(L.coeffs, L.q);
    o.ok = o.report["l_function"]["functional_equation"].get<bool>();
    o.table.header = {"k", "coefficient"};
    for (size_t k = 0; k < L.coeffs.size(); ++k) o.table.rows.push_back({std::to_string(k), L.coeffs[k].get_str()});
    return o;
}

Output cmd_rank(const Source& s, const LOptions& lo)
{
    Output o;
    auto L = l_polynomial(*s.E, lo);
    auto ar = analytic_rank(L);
    o.report["command"] = "rank";
    o.report["curve"] = curve_json(*s.E);
    o.report["l_function"] = l_json(L);
    o.report["analytic_rank"] = ar.rank;
    o.report["leading"] = qstr(ar.leading);
    try {
        auto par = parity_condition(*s.E);
        o.report["parity"] = {{"value", par.value}, {"odd", par.odd}};
    } catch (const UnclassifiedFiberError&) {
        throw;
    } catch (const Error& e) {
        o.report["parity"] = {{"unavailable", e.what()}};
    }
    o.table.header = {"analytic_rank", "leading", "degree"};
    o.table.rows.push_back({std::to_string(ar.rank), qstr(ar.leading), std::to_string(L.degree)});
    return o;
}

Output cmd_heights(const Source& s)
{
    if (s.points.empty()) throw InputError("heights needs --point (or a fixture with points)");
    Output o;
    o.report["command"] = "heights";
    o.report["curve"] = curve_json(*s.E);
    o.report["unit"] = "log q";
    json pts = json::array();
    o.table.header = {"point", "height", "telescoping", "stable"};
    for (auto& P : s.points) {
        auto hp = height_parts(*s.E, P);
        auto tel = telescoping_height(*s.E, P);
        json j;
        j["point"] = P.str();
        j["height"] = qstr(hp.height);
        j["chi"] = hp.chi;
        j["intersection_with_zero"] = qstr(hp.intersection);
        json c = json::array();
        for (auto& l : hp.contributions) c.push_back({{"place", l.place.str()}, {"contribution", qstr(l.contr)}});
        j["local_contributions"] = c;
        j["telescoping"] = {{"value", qstr(tel.value)}, {"stable", tel.stable}, {"steps", tel.steps}};
        bool agree = tel.stable && tel.value == hp.height;
        j["agrees"] = agree;
        if (tel.stable && !agree) o.ok = false;
        pts.push_back(j);
        o.table.rows.push_back({P.str(), qstr(hp.height), qstr(tel.value), tel.stable ? "yes" : "no"});
    }
    o.report["points"] = pts;
    return o;
}

json lattice_json(const MWLattice& lat)
{
    json j;
    j["rank"] = lat.rank;
    j["gram"] = qmatrix(lat.gram);
    j["relations"] = zvectors(lat.kernel);
    j["basis"] = zvectors(lat.basis);
    j["regulator_prime"] = qstr(lat.regulator_prime);
    return j;
}

void gram_table(Table& t, const MWLattice& lat)
{
    for (size_t i = 0; i < lat.gram.size(); ++i) t.header.push_back("P" + std::to_string(i));
    for (auto& row : lat.gram) {
        std::vector<std::string> r;
        for (auto& x : row) r.push_back(qstr(x));
        t.rows.push_back(r);
    }
}

Output cmd_lattice(const Source& s)
{
    if (s.points.empty()) throw InputError("lattice needs --point (or a fixture with points)");
    Output o;
    auto lat = build_lattice(*s.E, s.points);
    o.report["command"] = "lattice";
    o.report["curve"] = curve_json(*s.E);
    json pts = json::array();
    for (auto& P : s.points) pts.push_back(P.str());
    o.report["points"] = pts;
    o.report["lattice"] = lattice_json(lat);
    gram_table(o.table, lat);
    return o;
}

Output cmd_theorem(const JobSpec& job, bool dpct, const LOptions& lo)
{
    if (job.p == 0) throw InputError(std::string(dpct ? "dpct" : "legendre") + " needs --p");
    int f = dpct ? job.n : job.f;
    auto inst = dpct ? build_dpct(job.p, f) : build_legendre(job.p, f);
    if (job.check != "all" && job.check != "lattice") throw InputError("--check must be all or lattice");
    TheoremOptions topt;
    topt.lopt = lo;
    topt.check_lfunction = topt.check_torsion = job.check == "all";
    auto rep = dpct ? verify_dpct(inst, topt) : verify_legendre_theorem(inst, topt);
    Output o;
    o.report["command"] = dpct ? "dpct" : "legendre";
    o.report["p"] = inst.p;
    o.report[dpct ? "n" : "f"] = f;
    o.report["d"] = inst.d;
    o.report["curve"] = curve_json(inst.E());
    o.report["points_on_curve"] = rep.on_curve;
    o.report["expected_rank"] = rep.expected_rank;
    o.report["lattice"] = lattice_json(rep.lattice);
    o.report["relations_match"] = rep.kernel_matches;
    o.report["relations_torsion"] = rep.relations_torsion;
    o.report["circulant"] = rep.circulant;
    if (topt.check_torsion) {
        o.report["torsion_order"] = rep.torsion_order;
        o.report["torsion_structure"] = rep.torsion_structure;
    }
    if (topt.check_lfunction) {
        o.report["l_function"] = l_json(rep.L);
        o.report["analytic_rank"] = rep.analytic_rank;
        o.report["leading"] = qstr(rep.leading);
        auto c = class_number_check(inst, rep);
        o.report["class_number"] = {{"lhs", qstr(c.lhs)},         {"rhs", qstr(c.rhs)},
                                    {"tau", qstr(c.tau)},         {"implied", qstr(c.implied)},
                                    {"p_exponent", c.p_exponent}, {"holds", c.holds}};
        if (!c.holds) {
            rep.ok = false;
            rep.failures.push_back("class number identity: implied value " + qstr(c.implied) + " is not a power of p");
        }
    }
    o.report["failures"] = rep.failures;
    o.report["ok"] = rep.ok;
    o.ok = rep.ok;
    gram_table(o.table, rep.lattice);
    return o;
}

Output cmd_tower(const JobSpec& job, const Source& s, const LOptions& lo)
{
    if (job.ds.empty()) throw InputError("tower needs --d");
    std::optional<EllipticCurveFF> base = s.E;
    if (!base) {
        if (job.p == 0) throw InputError("tower needs --curve/--fixture or --p for the Legendre curve");
        base = parse_curve("a2=t+1, a4=t", field_of_size(uint64_t(job.p)));
    }
    uint64_t p = base->field().p();
    std::vector<int> ds;
    json skipped = json::array();
    for (int d : job.ds) {
        if (d < 1) throw InputError("d must be positive");
        if (d % int(p) == 0) skipped.push_back({{"d", d}, {"reason", "p divides d"}});
        else ds.push_back(d);
    }
    auto rows = tower_scan(*base, ds, lo);
    Output o;
    o.report["command"] = "tower";
    o.report["curve"] = curve_json(*base);
    json r = json::array();
    o.table.header = {"d", "o_d", "q_d", "conductor_degree", "degree", "rank"};
    for (auto& row : rows) {
        r.push_back({{"d", row.d},
                     {"o_d", row.o_d},
                     {"q_d", row.q_d},
                     {"conductor_degree", row.conductor_degree},
                     {"degree", row.degree},
                     {"rank", row.rank}});
        o.table.rows.push_back({std::to_string(row.d), std::to_string(row.o_d), std::to_string(row.q_d),
                                std::to_string(row.conductor_degree), std::to_string(row.degree),
                                std::to_string(row.rank)});
    }
    o.report["rows"] = r;
    o.report["skipped"] = skipped;
    return o;
}

Output cmd_surface(const JobSpec& job, const Source& s, const LOptions& lo)
{
    auto L = l_polynomial(*s.E, lo);
    auto Z = assemble_surface_zeta(*s.E, L);
    auto chk = surface_count_consistency(*s.E, Z, job.n_max, lo);
    Output o;
    o.report["command"] = "surface-zeta";
    o.report["curve"] = curve_json(*s.E);
    o.report["l_function"] = l_json(L);
    json P = json::array();
    for (auto& f : Z.P) P.push_back(zjson(f));
    o.report["P"] = P;
    o.report["P2"] = zstr(Z.P[2]);
    auto lead = p2_leading(Z);
    o.report["p2_order_at_1_over_q"] = lead.rank;
    o.report["consistent"] = chk.ok;
    if (!chk.ok) o.report["detail"] = chk.detail;
    o.report["root_modulus_error_p2"] = root_modulus_error(Z.P[2], Z.q);
    o.table.header = {"n", "from_zeta", "direct"};
    json rows = json::array();
    // index 0 is unused
    for (size_t n = 1; n < chk.from_zeta.size(); ++n) {
        std::string z = chk.from_zeta[n].get_str(), d = chk.direct[n].get_str();
        rows.push_back({{"n", n}, {"from_zeta", z}, {"direct", d}});
        o.table.rows.push_back({std::to_string(n), z, d});
    }
    o.report["counts"] = rows;
    o.ok = chk.ok;
    return o;
}

Output cmd_bsd(const Source& s, const LOptions& lo)
{
    const EllipticCurveFF& E = *s.E;
    auto L = l_polynomial(E, lo);
    auto ar = analytic_rank(L);
    auto lat = build_lattice(E, s.points);
    auto tau = tamagawa(E);
    auto tor = torsion(E);
    Output o;
    o.report["command"] = "bsd-check";
    o.report["curve"] = curve_json(E);
    o.report["l_function"] = l_json(L);
    o.report["analytic_rank"] = ar.rank;
    o.report["leading"] = qstr(ar.leading);
    o.report["lattice"] = lattice_json(lat);
    json tp = json::array();
    for (auto& l : tau.places) tp.push_back({{"place", l.place.str()}, {"a_v", l.a_v}, {"c_v", l.c_v}});
    o.report["tamagawa"] = {{"places", tp}, {"q_exponent", tau.exponent}, {"tau", qstr(tau.tau)}};
    o.report["torsion_order"] = tor.order;
    o.report["torsion_structure"] = tor.structure;
    auto L2 = L;
    auto Z = assemble_surface_zeta(E, L2);
    auto st = shioda_tate_check(E, lat.rank, &Z);
    json br = json::array();
    for (auto& [v, k] : st.breakdown) br.push_back({{"place", v.str()}, {"f_v_minus_1", k}});
    o.report["shioda_tate"] = {{"mw_rank", st.mw_rank},     {"trivial_rank", st.trivial_rank},
                               {"ns_rank", st.ns_rank},     {"zeta_order", st.zeta_order},
                               {"consistent", st.consistent}, {"breakdown", br}};
    o.ok = st.consistent;
    if (ar.rank != lat.rank) {
        o.report["rbsd"] = {{"error", "analytic rank " + std::to_string(ar.rank) + " differs from the rank " +
                                          std::to_string(lat.rank) + " of the given points"}};
        o.ok = false;
    } else {
        auto r = rbsd_solve(L, lat, tau, tor.order);
        auto rns = ns_regulator(E, lat.regulator_prime, tor.order);
        auto brauer = artin_tate_leading(Z, st.ns_rank, rns, 1, surface_chi(E) - 1);
        o.report["rbsd"] = {{"regulator_prime", qstr(r.regulator)},
                            {"tau", qstr(r.tau)},
                            {"torsion", r.torsion},
                            {"implied_sha", qstr(r.implied_sha)}};
        o.report["artin_tate"] = {{"ns_regulator", qstr(rns)}, {"implied_brauer", qstr(brauer)}};
        if (r.implied_sha <= 0) o.ok = false;
        o.table.header = {"rank", "leading", "regulator_prime", "tau", "torsion", "implied_sha", "implied_brauer"};
        o.table.rows.push_back({std::to_string(r.rank), qstr(r.leading), qstr(r.regulator), qstr(r.tau),
                                std::to_string(r.torsion), qstr(r.implied_sha), qstr(brauer)});
    }
    o.report["ok"] = o.ok;
    return o;
}

Output cmd_cache_merge(const JobSpec& job)
{
    if (job.inputs.empty() || job.output.empty()) throw InputError("cache-merge needs inputs and --out");
    CountCache acc;
    json in = json::array();
    for (auto& path : job.inputs) {
        CountCache c;
        size_t n = c.load(path);
        in.push_back({{"path", path}, {"lines", n}, {"skipped", c.skipped()}});
        acc = CountCache::merge(acc, c);
    }
    acc.save(job.output);
    Output o;
    o.report["command"] = "cache-merge";
    o.report["inputs"] = in;
    o.report["entries"] = acc.size();
    o.table.header = {"entries"};
    o.table.rows.push_back({std::to_string(acc.size())});
    return o;
}

std::string csv_cell(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r += '"';
        r += c;
    }
    return r + "\"";
}

// heights and pairings are in units of log q
bool is_height_key(const std::string& k)
{
    return k == "height" || k == "gram" || k == "intersection_with_zero" ||
           k == "contribution" || k == "value";
}

void human(std::ostream& os, const json& j, int indent, bool heights)
{
    std::string pad(indent, ' ');
    auto scalar = [&](const json& v, bool h) {
        std::string s = v.is_string() ? v.get<std::string>() : v.dump();
        if (h && v.is_string()) s += " · log q";
        return s;
    };
    if (j.is_object()) {
        for (auto& [k, v] : j.items()) {
            bool h = heights || is_height_key(k);
            if (v.is_object()) {
                os << pad << k << ":\n";
                human(os, v, indent + 2, h);
            } else if (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array())) {
                os << pad << k << ":\n";
                for (auto& e : v) {
                    if (e.is_array()) {
                        std::string line;
                        for (auto& x : e) line += (line.empty() ? "" : "  ") + scalar(x, h);
                        os << pad << "  " << line << "\n";
                    } else {
                        os << pad << "  -\n";
                        human(os, e, indent + 4, h);
                    }
                }
            } else if (v.is_array()) {
                std::string line;
                for (auto& x : v) line += (line.empty() ? "" : ", ") + scalar(x, false);
                os << pad << k << ": " << line << "\n";
            } else {
                os << pad << k << ": " << scalar(v, h && k != "stable" && k != "steps") << "\n";
            }
        }
    }
}

void emit(const Output& o, const std::string& format, std::ostream& out)
{
    if (format == "json") {
        out << o.report.dump(2) << "\n";
    } else if (format == "csv") {
        auto line = [&](const std::vector<std::string>& r) {
            for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
            out << "\n";
        };
        line(o.table.header);
        for (auto& r : o.table.rows) line(r);
    } else {
        human(out, o.report, 0, false);
    }
}

}  // namespace

std::vector<int> parse_int_list(const std::string& s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            int v = std::stoi(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (...) {
            throw InputError("not an integer list: '" + s + "'");
        }
    }
    return out;
}

int run(const JobSpec& job, std::ostream& out, std::ostream& err)
{
    try {
        if (job.format != "json" && job.format != "csv" && job.format != "human")
            throw InputError("--format must be json, csv or human");
        if (job.threads < 1) throw InputError("--threads must be positive");
        std::unique_ptr<CountCache> cache;
        if (!job.cache.empty()) cache = std::make_unique<CountCache>(job.cache);
        LOptions lo = lopts(job, cache.get());
        const std::string& c = job.command;
        Output o;
        if (c == "lfunc") o = cmd_lfunc(resolve(job, true), lo);
        else if (c == "rank") o = cmd_rank(resolve(job, true), lo);
        else if (c == "heights") o = cmd_heights(resolve(job, true));
        else if (c == "lattice") o = cmd_lattice(resolve(job, true));
        else if (c == "legendre") o = cmd_theorem(job, false, lo);
        else if (c == "dpct") o = cmd_theorem(job, true, lo);
        else if (c == "tower") o = cmd_tower(job, resolve(job, false), lo);
        else if (c == "surface-zeta") o = cmd_surface(job, resolve(job, true), lo);
        else if (c == "bsd-check") o = cmd_bsd(resolve(job, true), lo);
        else if (c == "cache-merge") o = cmd_cache_merge(job);
        else throw InputError("unknown command '" + c + "'");
        emit(o, job.format, out);
        if (!o.ok) {
            err << "verification failed\n";
            return 1;
        }
        return 0;
    } catch (const UnclassifiedFiberError& e) {
        err << "error: unclassified fiber at " << e.place << ": " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const VerificationError& e) {
        err << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ellff
