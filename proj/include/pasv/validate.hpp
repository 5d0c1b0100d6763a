#ifndef PASV_VALIDATE_HPP
#define PASV_VALIDATE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace pasv {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;   // worst observed defect for this check
    double tolerance = 0.0;  // threshold it was held against
    std::string detail;
    double seconds = 0.0;
};

struct ValidateOptions {
    bool quick = false;          // reduced parameter sweeps (m <= 2, single r)
    double tol_wigner = 1e-8;    // closed form vs oracle, ideal state
    double tol_evolved = 1e-6;   // closed form vs oracle, thermal channel
    double tol_identity = 1e-12; // polynomial identities
    double tol_quadrature = 1e-6; // grid normalization
};

/// Every module invariant, as one named check each.
std::vector<CheckResult> run_invariant_checks(const ValidateOptions& opt);

/// The numbered cross-validation criteria (normalization identity, Mandel-Q
/// threshold, oracle equivalences, channel self-consistency, limits,
/// thresholds, monotone decoherence, window normalization) plus the
/// qualitative structure checks.
std::vector<CheckResult> run_acceptance_criteria(const ValidateOptions& opt);

/// One aligned "[PASS]/[FAIL] name measured tol detail (time)" line per check.
void print_results(std::ostream& os, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace pasv

#endif
