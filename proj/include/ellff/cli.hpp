#pragma once

// the command-line front end as a library: a parsed job and the function
// that runs it.  tools/ellff_cli.cpp only maps flags onto JobSpec.

#include <iosfwd>
#include <string>
#include <vector>

namespace ellff {

struct JobSpec {
    std::string command;  // lfunc rank heights lattice legendre dpct tower surface-zeta bsd-check cache-merge
    std::string curve;        // inline text, ';' or newline separated
    std::string curve_file;
    std::string fixture;      // legendre:p=3,f=1  dpct:p=3,n=1  e-i2  e-prime
    std::vector<std::string> annotations;  // "inf: type=III*"
    std::vector<std::string> points;       // "(x, y)"
    uint64_t q = 0;
    int p = 0, f = 1, n = 1;
    std::vector<int> ds;
    int n_max = 4;
    std::string check = "all";  // legendre/dpct: all | lattice
    std::string format = "json";  // json | csv | human
    int threads = 1;
    std::string cache;
    std::vector<std::string> inputs;  // cache-merge
    std::string output;               // cache-merge
};

// exit code: 0 success, 1 a verification failed, 2 bad input
int run(const JobSpec& job, std::ostream& out, std::ostream& err);

// "2,4,10" -> {2, 4, 10}; throws InputError
std::vector<int> parse_int_list(const std::string& s);

}  // namespace ellff
