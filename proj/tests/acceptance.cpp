// Acceptance runner: one PASS/FAIL line per criterion. Criteria 1..10 run in-process at full
// scale; criterion 11 runs the CLI quick suite twice and compares the JSON bytes.
#include "cnc/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifndef CNC_CLI_PATH
#error "CNC_CLI_PATH must name the cnc executable"
#endif

using namespace cnc;

namespace {

// Wall-clock ceilings in seconds; 0 means none.
constexpr double kTimeLimit[] = {0, 60, 0, 0, 1, 0, 600, 0, 0, 0, 600};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Largest difference / tolerance ratio over the rows of a tolerance-based criterion.
double worst_ratio(const CriterionResult& r) {
    double w = 0;
    if (!r.details.contains("rows")) return w;
    for (const auto& row : r.details["rows"])
        if (row.contains("difference") && row["tolerance"].get<double>() > 0)
            w = std::max(w, row["difference"].get<double>() / row["tolerance"].get<double>());
    return w;
}

} // namespace

int main() {
    int failed = 0;
    for (int id = 1; id <= kVerifyCriteria; ++id) {
        const CriterionResult r = run_criterion(id, VerifyLevel::Full);
        const bool in_time = kTimeLimit[id] == 0 || r.seconds <= kTimeLimit[id];
        const bool pass = r.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s criterion %d: %s  [%llu cases, %llu failures, %.1f s", pass ? "PASS" : "FAIL", id, r.title.c_str(),
                    static_cast<unsigned long long>(r.cases), static_cast<unsigned long long>(r.failures), r.seconds);
        if (kTimeLimit[id] > 0) std::printf(", limit %.0f s", kTimeLimit[id]);
        if (id == 6 || id == 7) std::printf(", max |diff|/tol %.3g", worst_ratio(r));
        std::printf("]\n");
        if (!r.pass) std::printf("  details: %s\n", r.details.dump().c_str());
        std::fflush(stdout);
    }

    // Criterion 11: byte-identical JSON from two separate quick runs.
    const std::string a = "acceptance_verify_a.json", b = "acceptance_verify_b.json";
    const std::string base = std::string("\"") + CNC_CLI_PATH + "\" verify --level quick > /dev/null 2>&1 --json ";
    const int ra = std::system((base + a).c_str());
    const int rb = std::system((base + b).c_str());
    const std::string ja = slurp(a), jb = slurp(b);
    const bool same = !ja.empty() && ja == jb;
    const bool pass11 = same && ra == 0 && rb == 0;
    failed += pass11 ? 0 : 1;
    std::printf("%s criterion 11: repeated quick verify runs give identical JSON  [%zu bytes, exit codes %d/%d]\n",
                pass11 ? "PASS" : "FAIL", ja.size(), ra, rb);
    std::remove(a.c_str());
    std::remove(b.c_str());
    return failed == 0 ? 0 : 1;
}
