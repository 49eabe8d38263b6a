#pragma once

#include <optional>
#include <set>
#include <string>

#include "levylab/config.hpp"
#include "levylab/correlators.hpp"
#include "levylab/sampler.hpp"

namespace levylab {

// A stage failure; the pipeline has already written the FAILED marker file
// into the output directory when this reaches the caller.
class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& message)
        : std::runtime_error("[" + stage + "] " + message), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

inline const std::set<std::string> kAllStages = {"density", "spectrum", "chi2", "sample"};

struct PipelineOutcome {
    std::string out_dir;
    std::optional<Chi2Report> report;
    std::optional<double> e0_raw;
    std::vector<Chi2Estimate> estimates;
    std::vector<std::pair<std::string, double>> timings_ms;
};

/// Runs the requested stages in dependency order, writing artifacts and the
/// run manifest (run.json) into cfg.output.directory. Later stages recompute
/// what they need from earlier ones in-memory; artifacts are for the user.
PipelineOutcome run_pipeline(const PipelineConfig& cfg,
                             const std::set<std::string>& stages = kAllStages,
                             bool quiet = false);

} // namespace levylab
