#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace compop {

// ---------------------------------------------------------------------------
// Acceptance verification suites. Each criterion prints one PASS/FAIL line
// with the measured and required values; suites group them as
//   core     : norm oracle equivalence, partial-sum growth, zeta sanity
//   spectral : exactness, spectra, decay fits, transference, Pietsch, Bernstein
//   kernels  : Gram bound checks
//   lp       : Littlewood-Paley stability
//   all      : everything
// ---------------------------------------------------------------------------
struct CriterionResult {
    int id = 0;              // 1..12, 0 for supporting checks
    std::string name;
    bool pass = false;
    bool ran = false;        // false when skipped by budget
    double seconds = 0.0;
    std::string detail;      // measured vs required
};

struct VerifyReport {
    std::vector<CriterionResult> results;
    bool all_pass = false;       // over the criteria that ran
    bool budget_exceeded = false;
    double total_seconds = 0.0;
};

VerifyReport run_acceptance(const std::string& suite, double budget_seconds, std::ostream& out,
                            int threads = 1);

} // namespace compop
