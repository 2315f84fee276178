#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pfbench/config.hpp"
#include "pfbench/measures.hpp"
#include "pfbench/value_engine.hpp"

namespace pfb {

/// CLI-level overrides applied on top of the config file.
struct RunnerOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::filesystem::path> cache_dir;
    bool resume = false;
};

struct RunSummary {
    std::vector<SetupResult> results;
    std::vector<std::string> failures;  // "setup_id: message"
};

/// Runs the full grid. Each setup is isolated: a failing setup is recorded in
/// `failures` and the rest continue. Finished setups are persisted under
/// output_dir/setups/ and reloaded when resuming.
RunSummary run_benchmark(const ExperimentConfig& config,
                         const RunnerOptions& options = {});

/// Occlusion-scope characterization: R-OMS / NR-OMS statistics per setup and
/// occlusion fraction, written to output_dir/characterize.csv and .json.
void run_characterize(const ExperimentConfig& config,
                      const RunnerOptions& options = {});

/// Computes attributions only (no PF curves) and writes
/// output_dir/attributions.csv.
void run_attribute(const ExperimentConfig& config,
                   const RunnerOptions& options = {});

void save_setup_result(const std::filesystem::path& path,
                       const SetupResult& result);
SetupResult load_setup_result(const std::filesystem::path& path);

/// Reads the aggregate results.json written by run_benchmark.
std::vector<SetupResult> load_results_json(const std::filesystem::path& path);

/// File-name-safe version of a setup id.
std::string sanitize_id(const std::string& id);

}  // namespace pfb
