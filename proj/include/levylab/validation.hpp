#pragma once

#include <string>
#include <vector>

namespace levylab {

struct CheckResult {
    enum class Status { Pass, Fail, Skip };
    std::string name;
    Status status = Status::Pass;
    std::string detail;
};

struct ValidationOptions {
    bool run_sampler = false;  // Monte Carlo checks are skipped when false
    int sampler_paths = 20000;
    // Test hook: adds an off-parity defect to the numeric oscillator matrix
    // elements before the consistency checks run. The parity-sparsity check
    // must then fail while sign-flip invariance still holds.
    bool perturb_q = false;
};

/// Cross-validates every closed form against its numeric counterpart.
/// Failures are entries, never exceptions.
std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

} // namespace levylab
