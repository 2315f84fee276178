#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pfbench/coalition.hpp"
#include "pfbench/imputer.hpp"
#include "pfbench/predictor.hpp"

namespace pfb {

struct ValueFunctionSpec {
    enum class Kind { pf_probability, log_probability };
    Kind kind = Kind::log_probability;
    std::size_t class_index = 0;  // c-hat
    double epsilon_floor = 1e-9;

    void validate() const;
};

/// Memoizes occluded predictions keyed by (image, imputer, coalition, K).
/// Hits are bit-identical to recomputation under the same master seed, so the
/// cache is transparent; writes are idempotent and last-writer-wins.
class OcclusionCache {
public:
    struct Key {
        std::uint64_t image_id;
        std::uint64_t imputer_hash;
        std::uint64_t coalition_hash;
        std::uint64_t k;
        bool operator==(const Key&) const = default;
    };

    OcclusionCache() = default;

    /// Opens (creating if absent) an append-only binary log backing the cache.
    explicit OcclusionCache(const std::filesystem::path& log_path);

    std::optional<ProbabilityVector> lookup(const Key& key) const;
    void store(const Key& key, const ProbabilityVector& value);
    std::size_t size() const;

private:
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return StreamRng::mix(k.image_id ^ StreamRng::mix(k.imputer_hash) ^
                                  StreamRng::mix(k.coalition_hash ^ k.k));
        }
    };

    void append_to_log(const Key& key, const ProbabilityVector& value);

    mutable std::mutex mutex_;
    std::unordered_map<Key, ProbabilityVector, KeyHash> map_;
    std::filesystem::path log_path_;
};

/// Everything needed to evaluate occluded predictions for one image.
struct EvalContext {
    const Predictor& predictor;
    const ImageTensor& image;
    const SuperpixelMask& mask;
    ImputerDescriptor imputer;
    std::size_t imputer_samples = 1;  // K; forced to 1 for deterministic imputers
    std::uint64_t master_seed = 0;
    std::uint64_t image_id = 0;
    OcclusionCache* cache = nullptr;
};

/// Mean prediction over K imputed samples, renormalized.
ProbabilityVector occluded_prediction(const EvalContext& ctx,
                                      const Coalition& present);

/// Original-class probability of the occluded sample.
double r_oms(const EvalContext& ctx, const Coalition& present,
             std::size_t class_index);

/// Maximum softmax probability (reference-free score).
double nr_oms(const Predictor& predictor, const ImageTensor& occluded_image);

/// v(S) = log(max(f_chat(x_S), epsilon_floor)).
double shapley_value_function(const EvalContext& ctx, const Coalition& present,
                              const ValueFunctionSpec& spec);

struct BaselineResult {
    double r_oms_bar = 0;
    std::vector<double> per_ordering_auc;
};

/// Mean PF AUC over R uniformly random orderings.
BaselineResult random_pf_baseline(const EvalContext& ctx, std::size_t orderings,
                                  std::size_t class_index);

struct ScopeSample {
    double fraction = 0;  // occluded fraction (n - s)/n
    double r_oms_mean = 0;
    double r_oms_std = 0;
    double nr_oms_mean = 0;
    double nr_oms_std = 0;
};

/// R-OMS / NR-OMS statistics over random coalitions at the given occlusion
/// fractions (draws per fraction point).
std::vector<ScopeSample> probe_model_scope(const EvalContext& ctx,
                                           const std::vector<double>& fractions,
                                           std::size_t draws,
                                           std::size_t class_index);

}  // namespace pfb
