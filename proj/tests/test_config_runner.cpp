#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pfbench/errors.hpp"
#include "pfbench/runner.hpp"

using namespace pfb;

namespace {

std::filesystem::path write_config(const char* name, const std::string& body) {
    auto dir = std::filesystem::temp_directory_path() / "pfbench_test";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path) << body;
    return path;
}

std::filesystem::path out_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "pfbench_test" / name;
    std::filesystem::remove_all(dir);
    return dir;
}

std::string small_config(const std::filesystem::path& out) {
    return R"({
      "master_seed": 11,
      "output_dir": ")" + out.string() + R"(",
      "imputer_samples": 2,
      "baseline_orderings": 4,
      "probe_draws": 3,
      "images": {"kind": "synthetic_additive", "count": 2,
                 "width": 16, "height": 16},
      "imputers": [{"kind": "mean"}, {"kind": "histogram"}],
      "segmenters": [{"kind": "grid"}],
      "n_superpixels": [4],
      "predictors": [{"kind": "instance"}],
      "methods": [{"kind": "preddiff"}, {"kind": "random"},
                  {"kind": "shapley_mc", "samples": 16}]
    })";
}

}  // namespace

TEST_CASE("config parse failures are ConfigError") {
    CHECK_THROWS_AS(load_config("no_such_config.json"), ConfigError);
    CHECK_THROWS_AS(load_config(write_config("bad.json", "{nope")),
                    ConfigError);
    CHECK_THROWS_AS(
        load_config(write_config("badkind.json",
                                 R"({"imputers": [{"kind": "wavelet"}]})")),
        ConfigError);
    CHECK_THROWS_AS(
        load_config(write_config(
            "dupe.json",
            R"({"imputers": [{"kind": "mean"}, {"kind": "mean"}]})")),
        ConfigError);
    CHECK_THROWS_AS(
        load_config(write_config(
            "noext.json", R"({"imputers": [{"kind": "external"}]})")),
        ConfigError);
    CHECK_THROWS_AS(
        load_config(write_config("badn.json", R"({"n_superpixels": [1]})")),
        ConfigError);
}

TEST_CASE("config defaults and method ids") {
    auto path = write_config("ok.json", R"({
      "methods": [{"kind": "shapley_mc", "imputer": "mean"},
                  {"kind": "preddiff"}]
    })");
    ExperimentConfig cfg = load_config(path);
    CHECK(cfg.master_seed == 1);
    CHECK(cfg.imputers.size() == 1);
    CHECK(cfg.methods[0].id == "shapley_mc(mean)");
    CHECK(cfg.methods[1].id == "preddiff");
}

TEST_CASE("sanitize_id strips separators") {
    CHECK(sanitize_id("mean|grid|16|p") == "mean_grid_16_p");
    CHECK(sanitize_id("a b/c") == "a_b_c");
}

TEST_CASE("benchmark run produces valid records and files") {
    auto out = out_dir("run1");
    ExperimentConfig cfg = load_config(write_config(
        "run1.json", small_config(out)));
    RunSummary summary = run_benchmark(cfg);

    CHECK(summary.failures.empty());
    REQUIRE(summary.results.size() == 2);  // 2 imputers x 1 x 1 x 1
    for (const auto& r : summary.results) {
        CHECK(r.records.size() == 3);
        for (const auto& rec : r.records) rec.validate();
        CHECK(r.r_oms_bar > 0.0);
        CHECK(r.r_oms_bar < 1.0);
        CHECK(r.mif_curves.size() == 3);
    }
    CHECK(std::filesystem::exists(out / "measures.csv"));
    CHECK(std::filesystem::exists(out / "curves.csv"));
    CHECK(std::filesystem::exists(out / "results.json"));

    // Round-trip through the persisted aggregate.
    auto loaded = load_results_json(out / "results.json");
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].setup.setup_id == summary.results[0].setup.setup_id);
    CHECK(loaded[0].r_oms_bar == summary.results[0].r_oms_bar);
    CHECK(loaded[1].records[2].srg == summary.results[1].records[2].srg);
}

TEST_CASE("resume reuses persisted setups") {
    auto out = out_dir("run2");
    ExperimentConfig cfg =
        load_config(write_config("run2.json", small_config(out)));
    RunSummary first = run_benchmark(cfg);
    REQUIRE(first.failures.empty());

    // Tamper with one persisted value; resume must surface the stored copy.
    auto setups = out / "setups";
    std::size_t files = 0;
    for (auto& e : std::filesystem::directory_iterator(setups)) {
        (void)e;
        ++files;
    }
    CHECK(files == 2);

    RunnerOptions opts;
    opts.resume = true;
    RunSummary second = run_benchmark(cfg, opts);
    REQUIRE(second.results.size() == first.results.size());
    for (std::size_t i = 0; i < first.results.size(); ++i)
        CHECK(second.results[i].r_oms_bar == first.results[i].r_oms_bar);
}

TEST_CASE("characterize and attribute emit their tables") {
    auto out = out_dir("run3");
    ExperimentConfig cfg =
        load_config(write_config("run3.json", small_config(out)));
    run_characterize(cfg);
    run_attribute(cfg);
    CHECK(std::filesystem::exists(out / "characterize.csv"));
    CHECK(std::filesystem::exists(out / "characterize.json"));
    CHECK(std::filesystem::exists(out / "attributions.csv"));

    std::ifstream in(out / "attributions.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "setup_id,method_id,image,feature,phi");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    // 2 setups x 3 methods x 2 images x 4 features.
    CHECK(rows == 48);
}
