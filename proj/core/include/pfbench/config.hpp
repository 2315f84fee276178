#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pfbench/predictor.hpp"

namespace pfb {

struct ImputerSpec {
    std::string kind = "mean";  // mean | trainset | histogram | inpaint | external
    std::string id;             // defaults to kind
    int inpaint_radius = 3;
    std::string command;        // external
    double deadline_seconds = 300.0;
    std::filesystem::path pool_dir;  // trainset
};

struct SegmenterSpec {
    std::string kind = "grid";  // grid | slic | import
    std::string id;
    double compactness = 1.0;
    std::filesystem::path mask_dir;  // import: <image-stem>.png per image
};

struct PredictorSpec {
    std::string kind = "instance";  // instance | occlusion_fraction | graph_model
    std::string id;
    std::string curve = "linear";  // occlusion_fraction
    double curve_param = 1.0;
    std::filesystem::path model_path;  // graph_model
    std::size_t class_count = 2;
    GraphPreprocess preprocess;
};

struct MethodSpec {
    std::string kind = "shapley_mc";  // shapley_exact | shapley_mc | preddiff |
                                      // arch_attribute | random | import
    std::string id;
    std::size_t samples = 2000;         // shapley_mc
    std::string imputer;                // attribution-side imputer override
    std::filesystem::path map_dir;      // import: <image-stem>.pfam or .npy
    bool take_abs = false;              // import
};

struct ImageSourceSpec {
    std::string kind = "synthetic_additive";  // synthetic_additive |
                                              // synthetic_dominant | directory
    std::size_t count = 3;
    std::size_t width = 32;
    std::size_t height = 32;
    std::size_t n_dominant = 2;        // synthetic_dominant
    std::filesystem::path path;        // directory of PNGs
};

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir = "out";
    std::size_t workers = 1;
    std::filesystem::path cache_dir;  // empty: no cache
    bool resume = false;

    std::size_t imputer_samples = 5;      // K (forced 1 when deterministic)
    std::size_t baseline_orderings = 20;  // R
    double epsilon_floor = 1e-9;
    std::vector<double> fractions{0.0, 0.25, 0.5, 0.75, 1.0};
    std::size_t probe_draws = 20;

    ImageSourceSpec images;
    std::vector<ImputerSpec> imputers;
    std::vector<SegmenterSpec> segmenters;
    std::vector<std::size_t> n_superpixels;
    std::vector<PredictorSpec> predictors;
    std::vector<MethodSpec> methods;

    void validate() const;
};

/// Parses and validates a JSON config file. Throws ConfigError on any
/// structural or semantic problem.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace pfb
