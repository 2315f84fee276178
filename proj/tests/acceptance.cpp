// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and uses fixed seeds.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "pfbench/attribution.hpp"
#include "pfbench/imputer.hpp"
#include "pfbench/measures.hpp"
#include "pfbench/ranking.hpp"
#include "pfbench/runner.hpp"
#include "pfbench/segmentation.hpp"
#include "pfbench/synthetic.hpp"

using namespace pfb;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const char* name) {
    fs::path dir = fs::temp_directory_path() / "pfbench_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::vector<float> kAnchor{0.5f, 0.5f, 0.5f};

EvalContext context_for(const SyntheticInstance& inst,
                        const ImputerDescriptor& imputer,
                        OcclusionCache* cache = nullptr, std::size_t k = 1,
                        std::uint64_t seed = 1) {
    return EvalContext{*inst.predictor, inst.image, inst.mask, imputer,
                       k,               seed,       inst.image_id, cache};
}

double mif_auc(const EvalContext& ctx, const FeatureOrdering& pi) {
    return auc(pf_curve(ctx, pi, 0));
}

// ---------------------------------------------------------------- criterion 1

bool criterion_identities(std::string& detail) {
    ExperimentConfig cfg;
    cfg.master_seed = 101;
    cfg.output_dir = scratch("identities");
    cfg.imputer_samples = 2;
    cfg.baseline_orderings = 5;
    cfg.probe_draws = 3;
    cfg.images = {"synthetic_additive", 2, 16, 16, 2, {}};
    cfg.imputers = {{"mean", "mean", 3, "", 300.0, {}},
                    {"histogram", "histogram", 3, "", 300.0, {}},
                    {"inpaint", "inpaint", 3, "", 300.0, {}}};
    cfg.segmenters = {{"grid", "grid", 1.0, {}}};
    cfg.n_superpixels = {4, 8};
    cfg.predictors = {{"instance", "instance", "linear", 1.0, {}, 2, {}}};
    MethodSpec exact{"shapley_exact", "shapley_exact", 0, "", {}, false};
    MethodSpec mc{"shapley_mc", "shapley_mc", 32, "", {}, false};
    MethodSpec pd{"preddiff", "preddiff", 0, "", {}, false};
    MethodSpec arch{"arch_attribute", "arch_attribute", 0, "", {}, false};
    MethodSpec rnd{"random", "random", 0, "", {}, false};
    cfg.methods = {exact, mc, pd, arch, rnd};

    RunSummary summary = run_benchmark(cfg);
    if (!summary.failures.empty()) {
        detail = "setup failures: " + summary.failures.front();
        return false;
    }
    std::size_t records = 0;
    double worst = 0;
    for (const auto& r : summary.results) {
        for (const auto& rec : r.records) {
            ++records;
            worst = std::max(worst, std::fabs(rec.srg - (rec.lif - rec.mif)));
            worst = std::max(worst, std::fabs(rec.srg - (rec.mrg + rec.lrg)));
        }
    }
    std::ostringstream os;
    os << records << " records over " << summary.results.size()
       << " setups, max identity error " << worst;
    detail = os.str();
    return records == 30 && worst <= 1e-12;
}

// ---------------------------------------------------------------- criterion 2

// Independent oracle: average marginal contribution over all n! orderings.
std::vector<double> shapley_permutation_oracle(const std::vector<double>& table,
                                               std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> phi(n, 0.0);
    std::size_t count = 0;
    do {
        std::uint32_t bits = 0;
        double prev = table[0];
        for (std::size_t pos = 0; pos < n; ++pos) {
            bits |= 1u << perm[pos];
            phi[perm[pos]] += table[bits] - prev;
            prev = table[bits];
        }
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto& p : phi) p /= static_cast<double>(count);
    return phi;
}

ValueFunction table_game(const std::vector<double>& table, std::size_t n) {
    return [&table, n](const Coalition& s) {
        std::uint32_t bits = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (s.contains(i)) bits |= 1u << i;
        return table[bits];
    };
}

bool criterion_axioms(std::string& detail) {
    StreamRng rng{202};
    double worst = 0;
    for (int game = 0; game < 50; ++game) {
        std::size_t n = 2 + rng.below(7);  // 2..8
        std::vector<double> table(1u << n);
        for (auto& v : table) v = 4.0 * rng.next_double() - 2.0;
        std::vector<double> second(1u << n);
        for (auto& v : second) v = 4.0 * rng.next_double() - 2.0;

        auto phi = shapley_exact(table_game(table, n), n);
        auto oracle = shapley_permutation_oracle(table, n);
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::fabs(phi.phi[i] - oracle[i]));

        // Efficiency.
        double total = 0;
        for (double p : phi.phi) total += p;
        worst = std::max(
            worst, std::fabs(total - (table[(1u << n) - 1] - table[0])));

        // Null player: a fresh game that ignores player 0.
        std::vector<double> nulled(table.size());
        for (std::uint32_t bits = 0; bits < nulled.size(); ++bits)
            nulled[bits] = table[bits & ~1u];
        worst = std::max(
            worst, std::fabs(shapley_exact(table_game(nulled, n), n).phi[0]));

        // Symmetry: symmetrize players 0 and 1 by averaging over the swap.
        std::vector<double> sym(table.size());
        for (std::uint32_t bits = 0; bits < sym.size(); ++bits) {
            std::uint32_t swapped =
                (bits & ~3u) | ((bits & 1u) << 1) | ((bits >> 1) & 1u);
            sym[bits] = 0.5 * (table[bits] + table[swapped]);
        }
        auto phi_sym = shapley_exact(table_game(sym, n), n);
        worst = std::max(worst, std::fabs(phi_sym.phi[0] - phi_sym.phi[1]));

        // Linearity: phi(2 v + 3 w) = 2 phi(v) + 3 phi(w).
        std::vector<double> combo(table.size());
        for (std::size_t i = 0; i < combo.size(); ++i)
            combo[i] = 2.0 * table[i] + 3.0 * second[i];
        auto phi_combo = shapley_exact(table_game(combo, n), n);
        auto phi_second = shapley_exact(table_game(second, n), n);
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(
                worst, std::fabs(phi_combo.phi[i] - 2.0 * phi.phi[i] -
                                 3.0 * phi_second.phi[i]));
    }
    std::ostringstream os;
    os << "50 games, worst axiom/oracle error " << worst;
    detail = os.str();
    return worst <= 1e-9;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_mc_convergence(std::string& detail) {
    // Pair game: v(N)=1, everything else 0; phi = (0.5, 0.5).
    ValueFunction v = [](const Coalition& s) {
        return s.size() == 2 ? 1.0 : 0.0;
    };
    int within = 0;
    double rmse_small = 0, rmse_large = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto big = shapley_mc(v, 2, 4000, StreamRng{303, seed});
        auto small = shapley_mc(v, 2, 250, StreamRng{304, seed});
        double dev = std::max(std::fabs(big.phi[0] - 0.5),
                              std::fabs(big.phi[1] - 0.5));
        if (dev < 0.05) ++within;
        auto rmse = [](const AttributionVector& phi) {
            double s = 0;
            for (double p : phi.phi) s += (p - 0.5) * (p - 0.5);
            return std::sqrt(s / 2.0);
        };
        rmse_large += rmse(big) / 20.0;
        rmse_small += rmse(small) / 20.0;
    }
    std::ostringstream os;
    os << within << "/20 seeds within 0.05, RMSE " << rmse_large << " vs "
       << rmse_small << " at M=250";
    detail = os.str();
    return within == 20 && rmse_large < rmse_small / 3.0;
}

// ---------------------------------------------------------------- criterion 4

SyntheticInstance linear_fraction_instance(std::uint64_t seed, std::size_t n) {
    SyntheticInstance inst;
    inst.anchor_color = kAnchor;
    inst.image = make_synthetic_image(seed, 32, 32, 3, kAnchor);
    inst.mask = grid_segment(inst.image, n);  // equal 8x8 blocks for n=16
    inst.image_id = StreamRng::mix(seed);
    inst.predictor =
        std::make_shared<OcclusionFractionPredictor>(kAnchor, ResponseCurve{});
    return inst;
}

bool criterion_analytic_baseline(std::string& detail) {
    auto inst = linear_fraction_instance(404, 16);
    auto imputer = make_mean_imputer(kAnchor);
    auto ctx = context_for(inst, imputer);

    double worst_bar = 0;
    for (std::size_t r : {1u, 7u, 20u}) {
        BaselineResult base = random_pf_baseline(ctx, r, 0);
        worst_bar = std::max(worst_bar, std::fabs(base.r_oms_bar - 0.5));
    }

    auto scope =
        probe_model_scope(ctx, {0.0, 0.25, 0.5, 0.75, 1.0}, 50, 0);
    double worst_curve = 0;
    for (const auto& s : scope)
        worst_curve =
            std::max(worst_curve, std::fabs(s.r_oms_mean - (1.0 - s.fraction)));

    std::ostringstream os;
    os << "baseline error " << worst_bar << ", curve error " << worst_curve;
    detail = os.str();
    return worst_bar <= 1e-12 && worst_curve <= 0.02;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_additive_optimality(std::string& detail) {
    double worst_gap = 0;
    for (std::size_t n : {4u, 5u}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto inst = make_additive_instance(500 + seed, n, 16, 16);
            auto imputer = make_mean_imputer(kAnchor);
            OcclusionCache cache;
            auto ctx = context_for(inst, imputer, &cache);

            ValueFunctionSpec spec;
            auto phi = shapley_exact(make_log_value_function(ctx, spec), n);
            FeatureOrdering pi_shap = ordering_from_attribution(phi);
            double mif_shap = mif_auc(ctx, pi_shap);
            double lif_shap = mif_auc(ctx, reverse_ordering(pi_shap));
            double srg_shap = lif_shap - mif_shap;

            // Brute force over all n! orderings.
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            double best_mif = 1e9, best_lif = -1e9, best_srg = -1e9;
            do {
                FeatureOrdering pi{perm};
                double m = mif_auc(ctx, pi);
                double l = mif_auc(ctx, reverse_ordering(pi));
                best_mif = std::min(best_mif, m);
                best_lif = std::max(best_lif, l);
                best_srg = std::max(best_srg, l - m);
            } while (std::next_permutation(perm.begin(), perm.end()));

            worst_gap = std::max(worst_gap, mif_shap - best_mif);
            worst_gap = std::max(worst_gap, best_lif - lif_shap);
            worst_gap = std::max(worst_gap, best_srg - srg_shap);
        }
    }
    std::ostringstream os;
    os << "n=4,5 x 10 seeds, worst optimality gap " << worst_gap;
    detail = os.str();
    return worst_gap <= 1e-12;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_random_nulls(std::string& detail) {
    auto inst = make_additive_instance(606, 8, 16, 16);
    auto imputer = make_mean_imputer(kAnchor);
    OcclusionCache cache;
    auto ctx = context_for(inst, imputer, &cache);

    const std::size_t k = 200;
    std::vector<double> mif(k), lif(k), srg(k);
    for (std::size_t i = 0; i < k; ++i) {
        StreamRng rng{606, hash_id("null-orderings"), i};
        FeatureOrdering pi{rng.permutation(8)};
        mif[i] = mif_auc(ctx, pi);
        lif[i] = mif_auc(ctx, reverse_ordering(pi));
        srg[i] = lif[i] - mif[i];
    }
    BaselineResult base = random_pf_baseline(ctx, k, 0);

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto se_of = [&](const std::vector<double>& v) {
        double m = mean_of(v), s = 0;
        for (double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(v.size() - 1)) /
               std::sqrt(static_cast<double>(v.size()));
    };

    double se_base = se_of(base.per_ordering_auc);
    double mean_srg = mean_of(srg);
    double mean_mrg = base.r_oms_bar - mean_of(mif);
    double mean_lrg = mean_of(lif) - base.r_oms_bar;

    bool ok = std::fabs(mean_srg) < 3.0 * se_of(srg) &&
              std::fabs(mean_mrg) < 3.0 * (se_of(mif) + se_base) &&
              std::fabs(mean_lrg) < 3.0 * (se_of(lif) + se_base);
    std::ostringstream os;
    os << "mean SRG " << mean_srg << " (SE " << se_of(srg) << "), MRG "
       << mean_mrg << ", LRG " << mean_lrg;
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_ndcg(std::string& detail) {
    Ranking ref{"ref", {"a", "b", "c"}, Measure::srg};
    Ranking reversed{"s", {"c", "b", "a"}, Measure::srg};

    // Independent arithmetic: gains (3,2,1), discounts log2(i+2).
    double dcg = 1.0 / std::log2(2.0) + 2.0 / std::log2(3.0) +
                 3.0 / std::log2(4.0);
    double idcg = 3.0 / std::log2(2.0) + 2.0 / std::log2(3.0) +
                  1.0 / std::log2(4.0);
    double oracle = dcg / idcg;

    double got = ndcg(reversed, ref);
    bool ok = std::fabs(got - oracle) <= 1e-6 &&
              std::fabs(oracle - 0.7899980042460358) <= 1e-12;

    StreamRng rng{707};
    for (int i = 0; i < 100 && ok; ++i) {
        std::size_t k = 2 + rng.below(7);
        std::vector<std::string> methods;
        for (std::size_t m = 0; m < k; ++m)
            methods.push_back("m" + std::to_string(m));
        rng.shuffle(methods);
        Ranking r{"r", methods, Measure::srg};
        ok = std::fabs(ndcg(r, r) - 1.0) <= 1e-12;
    }
    std::ostringstream os;
    os << "oracle " << oracle << ", ndcg " << got
       << ", self-ndcg == 1 on 100 rankings";
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 8

bool criterion_stability(std::string& detail) {
    std::vector<ResponseCurve> curves{
        {ResponseCurve::Kind::power, 4.0},
        {ResponseCurve::Kind::linear, 1.0},
        {ResponseCurve::Kind::saturating, 0.45}};

    std::vector<MeasureRecord> records;
    double bar_min = 1.0, bar_max = 0.0;
    for (const auto& curve : curves) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            auto inst = make_dominant_instance(seed, 12, 2, curve, 48, 48);
            auto imputer = make_mean_imputer(kAnchor);
            OcclusionCache cache;
            auto ctx = context_for(inst, imputer, &cache);

            ValueFunctionSpec spec;
            auto phi =
                shapley_exact(make_log_value_function(ctx, spec), 12);
            FeatureOrdering pi = ordering_from_attribution(phi);

            MeasureRecord rec;
            rec.mif = mif_auc(ctx, pi);
            rec.lif = mif_auc(ctx, reverse_ordering(pi));
            rec.r_oms_bar = random_pf_baseline(ctx, 20, 0).r_oms_bar;
            RelevanceGains g =
                relevance_gains(rec.mif, rec.lif, rec.r_oms_bar);
            rec.mrg = g.mrg;
            rec.lrg = g.lrg;
            rec.srg = g.srg;
            records.push_back(rec);
            bar_min = std::min(bar_min, rec.r_oms_bar);
            bar_max = std::max(bar_max, rec.r_oms_bar);
        }
    }

    double var_srg = cross_setup_variance(records, Measure::srg);
    double var_mrg = cross_setup_variance(records, Measure::mrg);
    double var_lrg = cross_setup_variance(records, Measure::lrg);
    double baseline_var = std::max(var_mrg, var_lrg);

    std::ostringstream os;
    os << "Var(SRG) " << var_srg << " vs max(Var(MRG),Var(LRG)) "
       << baseline_var << ", baseline span [" << bar_min << ", " << bar_max
       << "]";
    detail = os.str();
    return 5.0 * var_srg <= baseline_var && bar_min < 0.45 && bar_max > 0.55;
}

// ---------------------------------------------------------------- criterion 9

bool criterion_determinism(std::string& detail) {
    auto run = [](std::size_t workers, const char* name) {
        ExperimentConfig cfg;
        cfg.master_seed = 909;
        cfg.output_dir = scratch(name);
        cfg.workers = workers;
        cfg.imputer_samples = 3;
        cfg.baseline_orderings = 6;
        cfg.probe_draws = 4;
        cfg.images = {"synthetic_additive", 4, 16, 16, 2, {}};
        cfg.imputers = {{"mean", "mean", 3, "", 300.0, {}},
                        {"histogram", "histogram", 3, "", 300.0, {}}};
        cfg.segmenters = {{"grid", "grid", 1.0, {}}};
        cfg.n_superpixels = {8};
        cfg.predictors = {{"instance", "instance", "linear", 1.0, {}, 2, {}}};
        MethodSpec mc{"shapley_mc", "shapley_mc", 40, "", {}, false};
        MethodSpec pd{"preddiff", "preddiff", 0, "", {}, false};
        MethodSpec rnd{"random", "random", 0, "", {}, false};
        cfg.methods = {mc, pd, rnd};
        run_benchmark(cfg);
        return cfg.output_dir;
    };

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };

    fs::path a = run(1, "det_w1");
    fs::path b = run(8, "det_w8");
    bool measures_equal =
        slurp(a / "measures.csv") == slurp(b / "measures.csv");
    bool curves_equal = slurp(a / "curves.csv") == slurp(b / "curves.csv");
    detail = std::string("measures.csv ") +
             (measures_equal ? "identical" : "differ") + ", curves.csv " +
             (curves_equal ? "identical" : "differ") + " across 1 vs 8 workers";
    return measures_equal && curves_equal;
}

// --------------------------------------------------------------- criterion 10

bool criterion_imputer_contracts(std::string& detail) {
    auto pool = std::make_shared<std::vector<ImageTensor>>();
    for (std::uint64_t s = 40; s < 43; ++s)
        pool->push_back(make_synthetic_image(s, 16, 16, 3, kAnchor));

    // Identity external imputer: copies the pre-filled input back.
    fs::path dir = scratch("external");
    fs::path script = dir / "identity.sh";
    std::ofstream(script) << "#!/bin/sh\ncp \"$1/input.png\" \"$1/output.png\"\n";
    fs::permissions(script, fs::perms::owner_all);
    ExternalEndpoint endpoint{script.string(), dir / "work", 30.0};

    std::vector<ImputerDescriptor> imputers{
        make_mean_imputer({0.3f, 0.5f, 0.7f}),
        make_histogram_imputer(),
        make_trainset_imputer(pool),
        make_inpaint_imputer(3),
        make_external_imputer(endpoint, {0.3f, 0.5f, 0.7f}),
    };

    StreamRng rng{1010};
    std::size_t checked = 0;
    for (const auto& desc : imputers) {
        for (int pair = 0; pair < 100; ++pair) {
            ImageTensor image =
                make_synthetic_image(rng.next_u64(), 16, 16, 3, kAnchor);
            SuperpixelMask mask = grid_segment(image, 8);
            Coalition present(8);
            do {
                present = Coalition::empty(8);
                for (std::size_t i = 0; i < 8; ++i)
                    if (rng.below(2)) present.insert(i);
            } while (present.is_empty() || present.is_full());

            OcclusionRequest req{image, mask, present,
                                 static_cast<std::uint64_t>(pair), 10};
            ImageTensor out = impute(desc, req, 77);

            for (std::size_t y = 0; y < 16; ++y)
                for (std::size_t x = 0; x < 16; ++x) {
                    if (!present.contains(mask.label_at(x, y))) continue;
                    for (std::size_t c = 0; c < 3; ++c)
                        if (out.at(x, y, c) != image.at(x, y, c)) {
                            detail = desc.id + " modified a kept pixel";
                            return false;
                        }
                }

            if (desc.kind == ImputerKind::inpaint) {
                for (std::size_t c = 0; c < 3; ++c) {
                    float lo = 1.0f, hi = 0.0f;
                    for (std::size_t y = 0; y < 16; ++y)
                        for (std::size_t x = 0; x < 16; ++x)
                            if (present.contains(mask.label_at(x, y))) {
                                lo = std::min(lo, image.at(x, y, c));
                                hi = std::max(hi, image.at(x, y, c));
                            }
                    for (std::size_t y = 0; y < 16; ++y)
                        for (std::size_t x = 0; x < 16; ++x)
                            if (out.at(x, y, c) < lo - 1e-6f ||
                                out.at(x, y, c) > hi + 1e-6f) {
                                detail = "inpaint left the kept range";
                                return false;
                            }
                }
            }
            ++checked;
        }
    }
    std::ostringstream os;
    os << checked << " (image, coalition) pairs across " << imputers.size()
       << " imputers";
    detail = os.str();
    return checked == 500;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool(std::string&)> fn;
    };
    const Criterion criteria[] = {
        {"SRG identities across the synthetic grid", criterion_identities},
        {"Shapley axioms vs permutation oracle", criterion_axioms},
        {"Monte Carlo convergence on the pair game", criterion_mc_convergence},
        {"analytic random baseline (linear response)",
         criterion_analytic_baseline},
        {"additive-model ordering optimality", criterion_additive_optimality},
        {"random-attribution null measures", criterion_random_nulls},
        {"nDCG hand oracle and self-agreement", criterion_ndcg},
        {"SRG stability across the 12-setup grid", criterion_stability},
        {"worker-count determinism", criterion_determinism},
        {"imputer kept-pixel and range contracts",
         criterion_imputer_contracts},
    };

    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        std::string det;
        bool ok = false;
        try {
            ok = c.fn(det);
        } catch (const std::exception& e) {
            det = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL",
                    index, c.name, det.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
