#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pfbench/config.hpp"
#include "pfbench/errors.hpp"
#include "pfbench/report.hpp"
#include "pfbench/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

struct CliState {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t workers = 0;
    bool workers_set = false;
    std::string cache_dir;
    bool cache_dir_set = false;
    bool resume = false;
    std::string results_path;
    std::string measure = "srg";
    std::string kind = "all";
};

pfb::RunnerOptions options_of(const CliState& st) {
    pfb::RunnerOptions opts;
    if (st.seed_set) opts.seed = st.seed;
    if (st.workers_set) opts.workers = st.workers;
    if (st.cache_dir_set) opts.cache_dir = st.cache_dir;
    opts.resume = st.resume;
    return opts;
}

pfb::Measure measure_of(const std::string& name) {
    if (name == "mif") return pfb::Measure::mif;
    if (name == "lif") return pfb::Measure::lif;
    if (name == "mrg") return pfb::Measure::mrg;
    if (name == "lrg") return pfb::Measure::lrg;
    if (name == "srg") return pfb::Measure::srg;
    throw pfb::ConfigError("unknown measure '" + name + "'");
}

std::vector<pfb::SetupResult> load_results(const CliState& st,
                                           const pfb::ExperimentConfig& cfg) {
    std::filesystem::path path =
        st.results_path.empty() ? cfg.output_dir / "results.json"
                                : std::filesystem::path(st.results_path);
    return pfb::load_results_json(path);
}

void add_common(CLI::App* cmd, CliState& st) {
    cmd->add_option("--config", st.config_path, "Experiment config (JSON)")
        ->required();
    cmd->add_option("--seed", st.seed, "Master seed override")
        ->each([&st](const std::string&) { st.seed_set = true; });
    cmd->add_option("--workers", st.workers, "Worker thread count override")
        ->each([&st](const std::string&) { st.workers_set = true; });
    cmd->add_option("--cache-dir", st.cache_dir,
                    "Occlusion cache directory override")
        ->each([&st](const std::string&) { st.cache_dir_set = true; });
    cmd->add_flag("--resume", st.resume, "Reuse persisted per-setup results");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Occlusion-based attribution benchmark"};
    app.require_subcommand(1);
    CliState st;

    CLI::App* characterize = app.add_subcommand(
        "characterize", "Probe R-OMS/NR-OMS across occlusion fractions");
    add_common(characterize, st);

    CLI::App* attribute =
        app.add_subcommand("attribute", "Compute attributions only");
    add_common(attribute, st);

    CLI::App* benchmark = app.add_subcommand(
        "benchmark", "Run the full grid: curves, measures, baselines");
    add_common(benchmark, st);

    CLI::App* rank = app.add_subcommand(
        "rank", "Extract rankings and consistency from saved results");
    add_common(rank, st);
    rank->add_option("--results", st.results_path,
                     "results.json path (default: <output_dir>/results.json)");
    rank->add_option("--measure", st.measure,
                     "Ranking measure: mif|lif|mrg|lrg|srg");

    CLI::App* report =
        app.add_subcommand("report", "Derived reports from saved results");
    add_common(report, st);
    report->add_option("--results", st.results_path,
                       "results.json path (default: <output_dir>/results.json)");
    report->add_option("--measure", st.measure,
                       "Report measure: mif|lif|mrg|lrg|srg");
    report->add_option("--kind", st.kind,
                       "rankings|consistency|boxplot|matching|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        pfb::ExperimentConfig cfg = pfb::load_config(st.config_path);
        pfb::RunnerOptions opts = options_of(st);

        if (characterize->parsed()) {
            pfb::run_characterize(cfg, opts);
            return kExitOk;
        }
        if (attribute->parsed()) {
            pfb::run_attribute(cfg, opts);
            return kExitOk;
        }
        if (benchmark->parsed()) {
            pfb::RunSummary summary = pfb::run_benchmark(cfg, opts);
            for (const auto& f : summary.failures)
                std::fprintf(stderr, "setup failed: %s\n", f.c_str());
            std::fprintf(stderr, "%zu/%zu setups completed\n",
                         summary.results.size(),
                         summary.results.size() + summary.failures.size());
            return summary.failures.empty() ? kExitOk : kExitPartial;
        }

        pfb::Measure measure = measure_of(st.measure);
        auto results = load_results(st, cfg);
        if (rank->parsed()) {
            pfb::write_rankings_report(cfg.output_dir, results, measure);
            pfb::write_consistency_report(cfg.output_dir, results, measure);
            return kExitOk;
        }
        if (st.kind == "rankings" || st.kind == "all")
            pfb::write_rankings_report(cfg.output_dir, results, measure);
        if (st.kind == "consistency" || st.kind == "all")
            pfb::write_consistency_report(cfg.output_dir, results, measure);
        if (st.kind == "boxplot" || st.kind == "all")
            pfb::write_boxplot_report(cfg.output_dir, results);
        if (st.kind == "matching")
            pfb::write_matching_report(cfg.output_dir, results, measure);
        return kExitOk;
    } catch (const pfb::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
}
