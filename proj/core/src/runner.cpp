#include "pfbench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <thread>

#include <json.hpp>

#include "pfbench/attribution.hpp"
#include "pfbench/errors.hpp"
#include "pfbench/png_io.hpp"
#include "pfbench/segmentation.hpp"
#include "pfbench/synthetic.hpp"

namespace pfb {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ExperimentConfig effective_config(const ExperimentConfig& config,
                                  const RunnerOptions& options) {
    ExperimentConfig cfg = config;
    if (options.seed) cfg.master_seed = *options.seed;
    if (options.workers) cfg.workers = *options.workers;
    if (options.cache_dir) cfg.cache_dir = *options.cache_dir;
    if (options.resume) cfg.resume = true;
    cfg.validate();
    return cfg;
}

/// Runs fn(0..count-1) on `workers` threads. Tasks only write to their own
/// slots; the first thrown exception is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < std::min(workers, count); ++t)
        threads.emplace_back(body);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

struct ResolvedSetup {
    ExperimentSetup setup;
    ImputerSpec imputer;
    SegmenterSpec segmenter;
    PredictorSpec predictor;
};

std::vector<ResolvedSetup> expand_grid(const ExperimentConfig& cfg) {
    std::vector<ResolvedSetup> grid;
    for (const auto& imp : cfg.imputers)
        for (const auto& seg : cfg.segmenters)
            for (std::size_t n : cfg.n_superpixels)
                for (const auto& pred : cfg.predictors) {
                    ResolvedSetup rs{{}, imp, seg, pred};
                    rs.setup.imputer_id = imp.id;
                    rs.setup.segmenter_id = seg.id;
                    rs.setup.n_superpixels = n;
                    rs.setup.predictor_id = pred.id;
                    rs.setup.imputer_samples = cfg.imputer_samples;
                    rs.setup.baseline_orderings = cfg.baseline_orderings;
                    rs.setup.master_seed = cfg.master_seed;
                    rs.setup.setup_id = imp.id + "|" + seg.id + "|" +
                                        std::to_string(n) + "|" + pred.id;
                    grid.push_back(std::move(rs));
                }
    return grid;
}

struct ImageUnit {
    ImageTensor image;
    SuperpixelMask mask;
    std::shared_ptr<Predictor> predictor;
    std::uint64_t image_id = 0;
    std::string stem;
    std::size_t class_index = 0;
};

ResponseCurve curve_from_spec(const PredictorSpec& spec) {
    ResponseCurve c;
    if (spec.curve == "linear") c.kind = ResponseCurve::Kind::linear;
    else if (spec.curve == "power") c.kind = ResponseCurve::Kind::power;
    else c.kind = ResponseCurve::Kind::saturating;
    c.param = spec.curve_param;
    return c;
}

std::vector<std::filesystem::path> list_pngs(
    const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".png")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

/// Shared per-run resources loaded once.
struct RunContext {
    std::map<std::string, std::shared_ptr<const std::vector<ImageTensor>>>
        pools;
    std::map<std::string, std::shared_ptr<Predictor>> graph_models;
    std::mutex mutex;

    std::shared_ptr<const std::vector<ImageTensor>> pool(
        const std::filesystem::path& dir) {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = pools.find(dir.string());
        if (it != pools.end()) return it->second;
        auto images = std::make_shared<std::vector<ImageTensor>>();
        for (const auto& p : list_pngs(dir))
            images->push_back(read_image_png(p));
        if (images->empty())
            throw ConfigError("trainset pool is empty: " + dir.string());
        auto shared =
            std::shared_ptr<const std::vector<ImageTensor>>(images);
        pools.emplace(dir.string(), shared);
        return shared;
    }

    std::shared_ptr<Predictor> graph_model(const PredictorSpec& spec) {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = graph_models.find(spec.model_path.string());
        if (it != graph_models.end()) return it->second;
        auto model = make_graph_model_predictor(spec.model_path,
                                                spec.preprocess,
                                                spec.class_count);
        graph_models.emplace(spec.model_path.string(), model);
        return model;
    }
};

std::vector<float> image_channel_means(const ImageTensor& img) {
    std::vector<float> means(img.channels(), 0.0f);
    std::vector<double> acc(img.channels(), 0.0);
    for (std::size_t i = 0; i < img.data().size(); ++i)
        acc[i % img.channels()] += img.data()[i];
    for (std::size_t c = 0; c < means.size(); ++c)
        means[c] = static_cast<float>(acc[c] /
                                      static_cast<double>(img.pixel_count()));
    return means;
}

SuperpixelMask segment_for(const SegmenterSpec& seg, const ImageTensor& image,
                           std::size_t n, const std::string& stem) {
    if (seg.kind == "grid") return grid_segment(image, n);
    if (seg.kind == "slic") {
        SlicParams params;
        params.n_target = n;
        params.compactness = seg.compactness;
        return slic_segment(image, params);
    }
    return import_mask(seg.mask_dir / (stem + ".png"), image.width(),
                       image.height());
}

std::vector<ImageUnit> build_units(const ExperimentConfig& cfg,
                                   const ResolvedSetup& rs, RunContext& run) {
    std::vector<ImageUnit> units;
    const std::size_t n = rs.setup.n_superpixels;

    if (cfg.images.kind == "directory") {
        auto files = list_pngs(cfg.images.path);
        if (files.empty())
            throw ConfigError("no PNG images in " + cfg.images.path.string());
        if (files.size() > cfg.images.count) files.resize(cfg.images.count);
        for (const auto& path : files) {
            ImageUnit u;
            u.stem = path.stem().string();
            u.image = read_image_png(path);
            u.mask = segment_for(rs.segmenter, u.image, n, u.stem);
            u.image_id = hash_id(u.stem);
            if (rs.predictor.kind == "graph_model")
                u.predictor = run.graph_model(rs.predictor);
            else
                u.predictor = std::make_shared<OcclusionFractionPredictor>(
                    std::vector<float>(u.image.channels(), 0.5f),
                    curve_from_spec(rs.predictor), rs.predictor.class_count);
            units.push_back(std::move(u));
        }
        for (auto& u : units)
            u.class_index = u.predictor->predict(u.image).argmax();
        return units;
    }

    for (std::size_t i = 0; i < cfg.images.count; ++i) {
        std::uint64_t inst_seed =
            StreamRng::mix(cfg.master_seed ^ StreamRng::mix(i + 1));
        SyntheticInstance inst;
        if (cfg.images.kind == "synthetic_additive")
            inst = make_additive_instance(inst_seed, n, cfg.images.width,
                                          cfg.images.height);
        else
            inst = make_dominant_instance(
                inst_seed, n, cfg.images.n_dominant,
                rs.predictor.kind == "occlusion_fraction"
                    ? curve_from_spec(rs.predictor)
                    : ResponseCurve{},
                cfg.images.width, cfg.images.height);
        ImageUnit u;
        u.stem = "synthetic_" + std::to_string(n) + "_" + std::to_string(i);
        u.image = std::move(inst.image);
        u.mask = std::move(inst.mask);
        u.image_id = inst.image_id;
        if (rs.predictor.kind == "occlusion_fraction" &&
            cfg.images.kind == "synthetic_additive")
            u.predictor = std::make_shared<OcclusionFractionPredictor>(
                inst.anchor_color, curve_from_spec(rs.predictor),
                rs.predictor.class_count);
        else
            u.predictor = inst.predictor;
        u.class_index = u.predictor->predict(u.image).argmax();
        units.push_back(std::move(u));
    }
    return units;
}

ImputerDescriptor imputer_for(const ImputerSpec& spec, const ImageUnit& unit,
                              const ExperimentConfig& cfg, RunContext& run) {
    if (spec.kind == "mean")
        return make_mean_imputer(image_channel_means(unit.image), spec.id);
    if (spec.kind == "trainset")
        return make_trainset_imputer(run.pool(spec.pool_dir), spec.id);
    if (spec.kind == "histogram") return make_histogram_imputer(spec.id);
    if (spec.kind == "inpaint")
        return make_inpaint_imputer(spec.inpaint_radius, spec.id);
    ExternalEndpoint ep;
    ep.command = spec.command;
    ep.work_dir = cfg.output_dir / "external_tmp";
    ep.deadline_seconds = spec.deadline_seconds;
    return make_external_imputer(std::move(ep),
                                 image_channel_means(unit.image), spec.id);
}

const ImputerSpec& imputer_spec_by_id(const ExperimentConfig& cfg,
                                      const std::string& id) {
    for (const auto& s : cfg.imputers)
        if (s.id == id) return s;
    throw ConfigError("unknown imputer id '" + id + "'");
}

AttributionVector attribute_one(const MethodSpec& method,
                                const EvalContext& attr_ctx,
                                const ImageUnit& unit,
                                const ExperimentConfig& cfg) {
    ValueFunctionSpec spec;
    spec.class_index = unit.class_index;
    spec.epsilon_floor = cfg.epsilon_floor;
    const std::size_t n = unit.mask.n();

    if (method.kind == "shapley_exact")
        return shapley_exact(make_log_value_function(attr_ctx, spec), n);
    if (method.kind == "shapley_mc")
        return shapley_mc(
            make_log_value_function(attr_ctx, spec), n, method.samples,
            StreamRng{cfg.master_seed, unit.image_id, hash_id(method.id)});
    if (method.kind == "preddiff")
        return preddiff(make_log_value_function(attr_ctx, spec), n);
    if (method.kind == "arch_attribute")
        return arch_attribute(make_log_value_function(attr_ctx, spec), n);
    if (method.kind == "random")
        return random_attribution(
            n, StreamRng{cfg.master_seed, unit.image_id, hash_id(method.id)});

    auto pfam = method.map_dir / (unit.stem + ".pfam");
    auto npy = method.map_dir / (unit.stem + ".npy");
    return import_pixel_attribution(
        std::filesystem::exists(pfam) ? pfam : npy, unit.mask,
        method.take_abs);
}

struct PerImageResult {
    double r_oms_bar = 0;
    double nr_oms_bar = 0;
    std::vector<PFCurve> mif_curves;  // aligned with cfg.methods
    std::vector<PFCurve> lif_curves;
};

PerImageResult evaluate_image(const ExperimentConfig& cfg,
                              const ResolvedSetup& rs, const ImageUnit& unit,
                              RunContext& run, OcclusionCache* cache) {
    ImputerDescriptor pf_imputer = imputer_for(rs.imputer, unit, cfg, run);
    EvalContext pf_ctx{*unit.predictor, unit.image,       unit.mask,
                       pf_imputer,      cfg.imputer_samples,
                       cfg.master_seed, unit.image_id,    cache};

    PerImageResult out;
    out.r_oms_bar =
        random_pf_baseline(pf_ctx, cfg.baseline_orderings, unit.class_index)
            .r_oms_bar;
    auto scope = probe_model_scope(pf_ctx, cfg.fractions, cfg.probe_draws,
                                   unit.class_index);
    for (const auto& s : scope) out.nr_oms_bar += s.nr_oms_mean;
    out.nr_oms_bar /= static_cast<double>(scope.size());

    auto curve_factory = [&](const FeatureOrdering& pi) {
        return pf_curve(pf_ctx, pi, unit.class_index);
    };

    for (const auto& method : cfg.methods) {
        ImputerDescriptor attr_imputer =
            method.imputer.empty()
                ? pf_imputer
                : imputer_for(imputer_spec_by_id(cfg, method.imputer), unit,
                              cfg, run);
        EvalContext attr_ctx{*unit.predictor, unit.image,       unit.mask,
                             attr_imputer,    cfg.imputer_samples,
                             cfg.master_seed, unit.image_id,    cache};
        AttributionVector phi = attribute_one(method, attr_ctx, unit, cfg);
        FeatureOrdering pi = ordering_from_attribution(phi);
        out.mif_curves.push_back(curve_factory(pi));
        out.lif_curves.push_back(curve_factory(reverse_ordering(pi)));
    }
    return out;
}

SetupResult evaluate_setup(const ExperimentConfig& cfg,
                           const ResolvedSetup& rs, RunContext& run) {
    std::vector<ImageUnit> units = build_units(cfg, rs, run);

    std::unique_ptr<OcclusionCache> cache;
    if (!cfg.cache_dir.empty()) {
        std::filesystem::create_directories(cfg.cache_dir);
        cache = std::make_unique<OcclusionCache>(
            cfg.cache_dir / (sanitize_id(rs.setup.setup_id) + ".bin"));
    }

    std::vector<PerImageResult> per_image(units.size());
    parallel_for(units.size(), cfg.workers, [&](std::size_t i) {
        per_image[i] = evaluate_image(cfg, rs, units[i], run, cache.get());
    });

    SetupResult result;
    result.setup = rs.setup;
    const double m = static_cast<double>(units.size());
    for (const auto& p : per_image) {
        result.r_oms_bar += p.r_oms_bar / m;
        result.nr_oms_bar += p.nr_oms_bar / m;
    }

    bool uniform_n = true;
    for (const auto& u : units)
        if (u.mask.n() != units.front().mask.n()) uniform_n = false;

    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        double mif = 0, lif = 0;
        for (const auto& p : per_image) {
            mif += auc(p.mif_curves[mi]) / m;
            lif += auc(p.lif_curves[mi]) / m;
        }
        MeasureRecord rec;
        rec.setup_id = rs.setup.setup_id;
        rec.method_id = cfg.methods[mi].id;
        rec.mif = mif;
        rec.lif = lif;
        rec.r_oms_bar = result.r_oms_bar;
        RelevanceGains g = relevance_gains(mif, lif, result.r_oms_bar);
        rec.mrg = g.mrg;
        rec.lrg = g.lrg;
        rec.srg = g.srg;
        rec.validate();
        result.records.push_back(std::move(rec));

        if (uniform_n) {
            // Pointwise mean curves; only well defined when every image has
            // the same feature count.
            PFCurve mean_mif, mean_lif;
            mean_mif.values.assign(units.front().mask.n() + 1, 0.0);
            mean_lif.values.assign(units.front().mask.n() + 1, 0.0);
            for (const auto& p : per_image)
                for (std::size_t s = 0; s < mean_mif.values.size(); ++s) {
                    mean_mif.values[s] += p.mif_curves[mi].values[s] / m;
                    mean_lif.values[s] += p.lif_curves[mi].values[s] / m;
                }
            result.mif_curves[cfg.methods[mi].id] = std::move(mean_mif);
            result.lif_curves[cfg.methods[mi].id] = std::move(mean_lif);
        }
    }
    return result;
}

json setup_to_json(const SetupResult& r) {
    json j;
    j["setup"] = {{"setup_id", r.setup.setup_id},
                  {"imputer_id", r.setup.imputer_id},
                  {"segmenter_id", r.setup.segmenter_id},
                  {"n_superpixels", r.setup.n_superpixels},
                  {"predictor_id", r.setup.predictor_id},
                  {"imputer_samples", r.setup.imputer_samples},
                  {"baseline_orderings", r.setup.baseline_orderings},
                  {"master_seed", r.setup.master_seed}};
    j["r_oms_bar"] = r.r_oms_bar;
    j["nr_oms_bar"] = r.nr_oms_bar;
    j["records"] = json::array();
    for (const auto& rec : r.records)
        j["records"].push_back({{"method_id", rec.method_id},
                                {"mif", rec.mif},
                                {"lif", rec.lif},
                                {"mrg", rec.mrg},
                                {"lrg", rec.lrg},
                                {"srg", rec.srg},
                                {"r_oms_bar", rec.r_oms_bar}});
    json curves = json::object();
    for (const auto& [method, curve] : r.mif_curves)
        curves[method] = {{"mif", curve.values},
                          {"lif", r.lif_curves.at(method).values}};
    j["curves"] = curves;
    return j;
}

SetupResult setup_from_json(const json& j) {
    SetupResult r;
    const json& s = j.at("setup");
    r.setup.setup_id = s.at("setup_id").get<std::string>();
    r.setup.imputer_id = s.at("imputer_id").get<std::string>();
    r.setup.segmenter_id = s.at("segmenter_id").get<std::string>();
    r.setup.n_superpixels = s.at("n_superpixels").get<std::size_t>();
    r.setup.predictor_id = s.at("predictor_id").get<std::string>();
    r.setup.imputer_samples = s.at("imputer_samples").get<std::size_t>();
    r.setup.baseline_orderings =
        s.at("baseline_orderings").get<std::size_t>();
    r.setup.master_seed = s.at("master_seed").get<std::uint64_t>();
    r.r_oms_bar = j.at("r_oms_bar").get<double>();
    r.nr_oms_bar = j.at("nr_oms_bar").get<double>();
    for (const auto& rec_j : j.at("records")) {
        MeasureRecord rec;
        rec.setup_id = r.setup.setup_id;
        rec.method_id = rec_j.at("method_id").get<std::string>();
        rec.mif = rec_j.at("mif").get<double>();
        rec.lif = rec_j.at("lif").get<double>();
        rec.mrg = rec_j.at("mrg").get<double>();
        rec.lrg = rec_j.at("lrg").get<double>();
        rec.srg = rec_j.at("srg").get<double>();
        rec.r_oms_bar = rec_j.at("r_oms_bar").get<double>();
        rec.validate();
        r.records.push_back(std::move(rec));
    }
    for (const auto& [method, c] : j.at("curves").items()) {
        PFCurve mif, lif;
        mif.values = c.at("mif").get<std::vector<double>>();
        lif.values = c.at("lif").get<std::vector<double>>();
        r.mif_curves[method] = std::move(mif);
        r.lif_curves[method] = std::move(lif);
    }
    return r;
}

void write_measures_csv(const std::filesystem::path& path,
                        const std::vector<SetupResult>& results) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "setup_id,method_id,imputer,segmenter,n_superpixels,predictor,"
           "mif,lif,mrg,lrg,srg,r_oms_bar,nr_oms_bar\n";
    for (const auto& r : results)
        for (const auto& rec : r.records)
            out << rec.setup_id << ',' << rec.method_id << ','
                << r.setup.imputer_id << ',' << r.setup.segmenter_id << ','
                << r.setup.n_superpixels << ',' << r.setup.predictor_id << ','
                << fmt17(rec.mif) << ',' << fmt17(rec.lif) << ','
                << fmt17(rec.mrg) << ',' << fmt17(rec.lrg) << ','
                << fmt17(rec.srg) << ',' << fmt17(rec.r_oms_bar) << ','
                << fmt17(r.nr_oms_bar) << '\n';
}

void write_curves_csv(const std::filesystem::path& path,
                      const std::vector<SetupResult>& results) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "setup_id,method_id,direction,step,value\n";
    for (const auto& r : results) {
        for (const auto& [method, curve] : r.mif_curves)
            for (std::size_t s = 0; s < curve.values.size(); ++s)
                out << r.setup.setup_id << ',' << method << ",mif," << s << ','
                    << fmt17(curve.values[s]) << '\n';
        for (const auto& [method, curve] : r.lif_curves)
            for (std::size_t s = 0; s < curve.values.size(); ++s)
                out << r.setup.setup_id << ',' << method << ",lif," << s << ','
                    << fmt17(curve.values[s]) << '\n';
    }
}

}  // namespace

std::string sanitize_id(const std::string& id) {
    std::string out;
    for (char c : id)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                c == '_' || c == '.')
                   ? c
                   : '_';
    return out;
}

void save_setup_result(const std::filesystem::path& path,
                       const SetupResult& result) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << setup_to_json(result).dump(2) << '\n';
}

SetupResult load_setup_result(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    json j;
    try {
        in >> j;
        return setup_from_json(j);
    } catch (const json::exception& e) {
        throw IoError("corrupt setup result " + path.string() + ": " +
                      e.what());
    }
}

std::vector<SetupResult> load_results_json(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    json j;
    std::vector<SetupResult> results;
    try {
        in >> j;
        for (const auto& e : j) results.push_back(setup_from_json(e));
    } catch (const json::exception& e) {
        throw IoError("corrupt results file " + path.string() + ": " +
                      e.what());
    }
    return results;
}

RunSummary run_benchmark(const ExperimentConfig& config,
                         const RunnerOptions& options) {
    ExperimentConfig cfg = effective_config(config, options);
    std::filesystem::create_directories(cfg.output_dir / "setups");

    RunContext run;
    RunSummary summary;
    for (const auto& rs : expand_grid(cfg)) {
        auto persisted =
            cfg.output_dir / "setups" /
            (sanitize_id(rs.setup.setup_id) + ".json");
        try {
            if (cfg.resume && std::filesystem::exists(persisted)) {
                summary.results.push_back(load_setup_result(persisted));
                continue;
            }
            SetupResult result = evaluate_setup(cfg, rs, run);
            save_setup_result(persisted, result);
            summary.results.push_back(std::move(result));
        } catch (const std::exception& e) {
            summary.failures.push_back(rs.setup.setup_id + ": " + e.what());
        }
    }

    write_measures_csv(cfg.output_dir / "measures.csv", summary.results);
    write_curves_csv(cfg.output_dir / "curves.csv", summary.results);
    json all = json::array();
    for (const auto& r : summary.results) all.push_back(setup_to_json(r));
    std::ofstream out(cfg.output_dir / "results.json");
    out << all.dump(2) << '\n';
    return summary;
}

void run_characterize(const ExperimentConfig& config,
                      const RunnerOptions& options) {
    ExperimentConfig cfg = effective_config(config, options);
    std::filesystem::create_directories(cfg.output_dir);

    RunContext run;
    std::ofstream csv(cfg.output_dir / "characterize.csv");
    if (!csv)
        throw IoError("cannot write " +
                      (cfg.output_dir / "characterize.csv").string());
    csv << "setup_id,fraction,r_oms_mean,r_oms_std,nr_oms_mean,nr_oms_std\n";
    json all = json::array();

    for (const auto& rs : expand_grid(cfg)) {
        std::vector<ImageUnit> units = build_units(cfg, rs, run);
        std::vector<std::vector<ScopeSample>> per_image(units.size());
        parallel_for(units.size(), cfg.workers, [&](std::size_t i) {
            ImputerDescriptor imp = imputer_for(rs.imputer, units[i], cfg, run);
            EvalContext ctx{*units[i].predictor, units[i].image,
                            units[i].mask,       imp,
                            cfg.imputer_samples, cfg.master_seed,
                            units[i].image_id,   nullptr};
            per_image[i] = probe_model_scope(ctx, cfg.fractions,
                                             cfg.probe_draws,
                                             units[i].class_index);
        });

        const double m = static_cast<double>(units.size());
        for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
            ScopeSample mean;
            mean.fraction = cfg.fractions[fi];
            for (const auto& p : per_image) {
                mean.r_oms_mean += p[fi].r_oms_mean / m;
                mean.r_oms_std += p[fi].r_oms_std / m;
                mean.nr_oms_mean += p[fi].nr_oms_mean / m;
                mean.nr_oms_std += p[fi].nr_oms_std / m;
            }
            csv << rs.setup.setup_id << ',' << fmt17(mean.fraction) << ','
                << fmt17(mean.r_oms_mean) << ',' << fmt17(mean.r_oms_std)
                << ',' << fmt17(mean.nr_oms_mean) << ','
                << fmt17(mean.nr_oms_std) << '\n';
            all.push_back({{"setup_id", rs.setup.setup_id},
                           {"fraction", mean.fraction},
                           {"r_oms_mean", mean.r_oms_mean},
                           {"r_oms_std", mean.r_oms_std},
                           {"nr_oms_mean", mean.nr_oms_mean},
                           {"nr_oms_std", mean.nr_oms_std}});
        }
    }
    std::ofstream js(cfg.output_dir / "characterize.json");
    js << all.dump(2) << '\n';
}

void run_attribute(const ExperimentConfig& config,
                   const RunnerOptions& options) {
    ExperimentConfig cfg = effective_config(config, options);
    std::filesystem::create_directories(cfg.output_dir);

    RunContext run;
    std::ofstream csv(cfg.output_dir / "attributions.csv");
    if (!csv)
        throw IoError("cannot write " +
                      (cfg.output_dir / "attributions.csv").string());
    csv << "setup_id,method_id,image,feature,phi\n";

    for (const auto& rs : expand_grid(cfg)) {
        std::vector<ImageUnit> units = build_units(cfg, rs, run);
        std::vector<std::vector<AttributionVector>> per_image(units.size());
        parallel_for(units.size(), cfg.workers, [&](std::size_t i) {
            for (const auto& method : cfg.methods) {
                const ImputerSpec& imp_spec =
                    method.imputer.empty()
                        ? rs.imputer
                        : imputer_spec_by_id(cfg, method.imputer);
                ImputerDescriptor imp =
                    imputer_for(imp_spec, units[i], cfg, run);
                EvalContext ctx{*units[i].predictor, units[i].image,
                                units[i].mask,       imp,
                                cfg.imputer_samples, cfg.master_seed,
                                units[i].image_id,   nullptr};
                per_image[i].push_back(
                    attribute_one(method, ctx, units[i], cfg));
            }
        });
        for (std::size_t i = 0; i < units.size(); ++i)
            for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
                for (std::size_t f = 0; f < per_image[i][mi].phi.size(); ++f)
                    csv << rs.setup.setup_id << ',' << cfg.methods[mi].id
                        << ',' << units[i].stem << ',' << f << ','
                        << fmt17(per_image[i][mi].phi[f]) << '\n';
    }
}

}  // namespace pfb
