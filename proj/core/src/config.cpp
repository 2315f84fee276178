#include "pfbench/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "pfbench/errors.hpp"

namespace pfb {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " +
                          e.what());
    }
}

ImputerSpec parse_imputer(const json& j) {
    ImputerSpec s;
    s.kind = get_or<std::string>(j, "kind", "mean");
    s.id = get_or<std::string>(j, "id", s.kind);
    s.inpaint_radius = get_or<int>(j, "radius", 3);
    s.command = get_or<std::string>(j, "command", "");
    s.deadline_seconds = get_or<double>(j, "deadline_seconds", 300.0);
    s.pool_dir = get_or<std::string>(j, "pool_dir", "");
    return s;
}

SegmenterSpec parse_segmenter(const json& j) {
    SegmenterSpec s;
    s.kind = get_or<std::string>(j, "kind", "grid");
    s.id = get_or<std::string>(j, "id", s.kind);
    s.compactness = get_or<double>(j, "compactness", 1.0);
    s.mask_dir = get_or<std::string>(j, "mask_dir", "");
    return s;
}

PredictorSpec parse_predictor(const json& j) {
    PredictorSpec s;
    s.kind = get_or<std::string>(j, "kind", "instance");
    s.id = get_or<std::string>(j, "id", s.kind);
    s.curve = get_or<std::string>(j, "curve", "linear");
    s.curve_param = get_or<double>(j, "curve_param", 1.0);
    s.model_path = get_or<std::string>(j, "model_path", "");
    s.class_count = get_or<std::size_t>(j, "class_count", 2);
    if (j.contains("preprocess")) {
        const json& p = j.at("preprocess");
        s.preprocess.resize_width = get_or<std::size_t>(p, "width", 224);
        s.preprocess.resize_height = get_or<std::size_t>(p, "height", 224);
        s.preprocess.mean = get_or<std::vector<float>>(
            p, "mean", {0.485f, 0.456f, 0.406f});
        s.preprocess.stddev = get_or<std::vector<float>>(
            p, "stddev", {0.229f, 0.224f, 0.225f});
        s.preprocess.swap_rb = get_or<bool>(p, "swap_rb", false);
    }
    return s;
}

MethodSpec parse_method(const json& j) {
    MethodSpec s;
    s.kind = get_or<std::string>(j, "kind", "shapley_mc");
    s.imputer = get_or<std::string>(j, "imputer", "");
    std::string default_id =
        s.imputer.empty() ? s.kind : s.kind + "(" + s.imputer + ")";
    s.id = get_or<std::string>(j, "id", default_id);
    s.samples = get_or<std::size_t>(j, "samples", 2000);
    s.map_dir = get_or<std::string>(j, "map_dir", "");
    s.take_abs = get_or<bool>(j, "take_abs", false);
    return s;
}

}  // namespace

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };

    if (workers < 1) fail("workers must be >= 1");
    if (imputer_samples < 1) fail("imputer_samples must be >= 1");
    if (baseline_orderings < 1) fail("baseline_orderings must be >= 1");
    if (!(epsilon_floor > 0.0) || epsilon_floor > 1e-3)
        fail("epsilon_floor must be in (0, 1e-3]");
    if (output_dir.empty()) fail("output_dir must be set");
    for (double f : fractions)
        if (f < 0.0 || f > 1.0) fail("fractions must lie in [0, 1]");
    if (probe_draws < 1) fail("probe_draws must be >= 1");

    static const std::set<std::string> image_kinds{
        "synthetic_additive", "synthetic_dominant", "directory"};
    if (!image_kinds.count(images.kind))
        fail("unknown image source kind '" + images.kind + "'");
    if (images.count < 1) fail("images.count must be >= 1");
    if (images.kind == "directory" && images.path.empty())
        fail("directory image source needs a path");
    if (images.kind == "synthetic_dominant" &&
        (images.n_dominant < 1))
        fail("synthetic_dominant needs n_dominant >= 1");

    if (imputers.empty()) fail("at least one imputer is required");
    static const std::set<std::string> imputer_kinds{
        "mean", "trainset", "histogram", "inpaint", "external"};
    std::set<std::string> imputer_ids;
    for (const auto& s : imputers) {
        if (!imputer_kinds.count(s.kind))
            fail("unknown imputer kind '" + s.kind + "'");
        if (!imputer_ids.insert(s.id).second)
            fail("duplicate imputer id '" + s.id + "'");
        if (s.kind == "external" && s.command.empty())
            fail("external imputer needs a command");
        if (s.kind == "trainset" && s.pool_dir.empty())
            fail("trainset imputer needs a pool_dir");
        if (s.kind == "inpaint" && s.inpaint_radius < 1)
            fail("inpaint radius must be >= 1");
        if (s.deadline_seconds <= 0.0)
            fail("external deadline must be positive");
    }

    if (segmenters.empty()) fail("at least one segmenter is required");
    static const std::set<std::string> segmenter_kinds{"grid", "slic",
                                                       "import"};
    std::set<std::string> segmenter_ids;
    for (const auto& s : segmenters) {
        if (!segmenter_kinds.count(s.kind))
            fail("unknown segmenter kind '" + s.kind + "'");
        if (!segmenter_ids.insert(s.id).second)
            fail("duplicate segmenter id '" + s.id + "'");
        if (s.kind == "import" && s.mask_dir.empty())
            fail("import segmenter needs a mask_dir");
        if (s.kind == "slic" && s.compactness <= 0.0)
            fail("slic compactness must be positive");
    }

    if (n_superpixels.empty()) fail("n_superpixels list is empty");
    for (std::size_t n : n_superpixels)
        if (n < 2) fail("each n_superpixels entry must be >= 2");

    if (predictors.empty()) fail("at least one predictor is required");
    static const std::set<std::string> predictor_kinds{
        "instance", "occlusion_fraction", "graph_model"};
    static const std::set<std::string> curve_kinds{"linear", "power",
                                                   "saturating"};
    std::set<std::string> predictor_ids;
    for (const auto& s : predictors) {
        if (!predictor_kinds.count(s.kind))
            fail("unknown predictor kind '" + s.kind + "'");
        if (!predictor_ids.insert(s.id).second)
            fail("duplicate predictor id '" + s.id + "'");
        if (s.kind == "occlusion_fraction" && !curve_kinds.count(s.curve))
            fail("unknown response curve '" + s.curve + "'");
        if (s.kind == "graph_model" && s.model_path.empty())
            fail("graph_model predictor needs a model_path");
        if (s.kind == "instance" && images.kind == "directory")
            fail("instance predictor requires a synthetic image source");
        if (s.kind != "instance" && s.class_count < 2)
            fail("predictor class_count must be >= 2");
    }

    if (methods.empty()) fail("at least one attribution method is required");
    static const std::set<std::string> method_kinds{
        "shapley_exact", "shapley_mc", "preddiff",
        "arch_attribute", "random", "import"};
    std::set<std::string> method_ids;
    for (const auto& s : methods) {
        if (!method_kinds.count(s.kind))
            fail("unknown method kind '" + s.kind + "'");
        if (!method_ids.insert(s.id).second)
            fail("duplicate method id '" + s.id + "'");
        if (s.kind == "shapley_mc" && s.samples < 1)
            fail("shapley_mc samples must be >= 1");
        if (s.kind == "import" && s.map_dir.empty())
            fail("import method needs a map_dir");
        if (!s.imputer.empty() && !imputer_ids.count(s.imputer))
            fail("method references unknown imputer '" + s.imputer + "'");
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");

    ExperimentConfig cfg;
    try {
        cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", 1);
        cfg.output_dir = get_or<std::string>(j, "output_dir", "out");
        cfg.workers = get_or<std::size_t>(j, "workers", 1);
        cfg.cache_dir = get_or<std::string>(j, "cache_dir", "");
        cfg.imputer_samples = get_or<std::size_t>(j, "imputer_samples", 5);
        cfg.baseline_orderings =
            get_or<std::size_t>(j, "baseline_orderings", 20);
        cfg.epsilon_floor = get_or<double>(j, "epsilon_floor", 1e-9);
        cfg.fractions = get_or<std::vector<double>>(
            j, "fractions", {0.0, 0.25, 0.5, 0.75, 1.0});
        cfg.probe_draws = get_or<std::size_t>(j, "probe_draws", 20);

        if (j.contains("images")) {
            const json& im = j.at("images");
            cfg.images.kind =
                get_or<std::string>(im, "kind", "synthetic_additive");
            cfg.images.count = get_or<std::size_t>(im, "count", 3);
            cfg.images.width = get_or<std::size_t>(im, "width", 32);
            cfg.images.height = get_or<std::size_t>(im, "height", 32);
            cfg.images.n_dominant = get_or<std::size_t>(im, "n_dominant", 2);
            cfg.images.path = get_or<std::string>(im, "path", "");
        }

        for (const char* key : {"imputers", "segmenters", "predictors",
                                "methods", "n_superpixels"}) {
            if (j.contains(key) && !j.at(key).is_array())
                throw ConfigError(std::string("'") + key +
                                  "' must be an array");
        }
        if (j.contains("imputers"))
            for (const auto& e : j.at("imputers"))
                cfg.imputers.push_back(parse_imputer(e));
        else {
            ImputerSpec s;
            s.id = s.kind;
            cfg.imputers.push_back(s);
        }
        if (j.contains("segmenters"))
            for (const auto& e : j.at("segmenters"))
                cfg.segmenters.push_back(parse_segmenter(e));
        else {
            SegmenterSpec s;
            s.id = s.kind;
            cfg.segmenters.push_back(s);
        }
        cfg.n_superpixels =
            get_or<std::vector<std::size_t>>(j, "n_superpixels", {16});
        if (j.contains("predictors"))
            for (const auto& e : j.at("predictors"))
                cfg.predictors.push_back(parse_predictor(e));
        else {
            PredictorSpec s;
            s.id = s.kind;
            cfg.predictors.push_back(s);
        }
        if (j.contains("methods"))
            for (const auto& e : j.at("methods"))
                cfg.methods.push_back(parse_method(e));
        else {
            MethodSpec m;
            m.id = m.kind;
            cfg.methods.push_back(m);
        }
    } catch (const json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }

    cfg.validate();
    return cfg;
}

}  // namespace pfb
