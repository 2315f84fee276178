#include "pfbench/value_engine.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pfbench/errors.hpp"
#include "pfbench/measures.hpp"

namespace pfb {

void ValueFunctionSpec::validate() const {
    if (!(epsilon_floor > 0.0) || epsilon_floor > 1e-3)
        throw ValidationError("epsilon_floor must be in (0, 1e-3]");
}

OcclusionCache::OcclusionCache(const std::filesystem::path& log_path)
    : log_path_(log_path) {
    std::ifstream in(log_path_, std::ios::binary);
    while (in.good()) {
        Key key{};
        std::uint64_t classes = 0;
        in.read(reinterpret_cast<char*>(&key), sizeof(key));
        in.read(reinterpret_cast<char*>(&classes), sizeof(classes));
        if (!in.good() || classes == 0 || classes > (1u << 24)) break;
        ProbabilityVector pv;
        pv.probs.resize(classes);
        in.read(reinterpret_cast<char*>(pv.probs.data()),
                static_cast<std::streamsize>(classes * sizeof(double)));
        if (!in.good()) break;  // truncated tail record is dropped
        map_[key] = std::move(pv);
    }
}

std::optional<ProbabilityVector> OcclusionCache::lookup(const Key& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void OcclusionCache::store(const Key& key, const ProbabilityVector& value) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = map_.emplace(key, value);
    if (inserted && !log_path_.empty()) append_to_log(key, value);
}

std::size_t OcclusionCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return map_.size();
}

void OcclusionCache::append_to_log(const Key& key,
                                   const ProbabilityVector& value) {
    std::ofstream out(log_path_, std::ios::binary | std::ios::app);
    const std::uint64_t classes = value.probs.size();
    out.write(reinterpret_cast<const char*>(&key), sizeof(key));
    out.write(reinterpret_cast<const char*>(&classes), sizeof(classes));
    out.write(reinterpret_cast<const char*>(value.probs.data()),
              static_cast<std::streamsize>(classes * sizeof(double)));
}

ProbabilityVector occluded_prediction(const EvalContext& ctx,
                                      const Coalition& present) {
    const std::size_t k = ctx.imputer.is_deterministic() ? 1 : ctx.imputer_samples;
    if (k < 1) throw ValidationError("K must be >= 1");

    OcclusionCache::Key key{ctx.image_id, hash_id(ctx.imputer.id),
                            present.hash64(), k};
    if (ctx.cache) {
        if (auto hit = ctx.cache->lookup(key)) return *hit;
    }

    std::vector<double> acc(ctx.predictor.class_count(), 0.0);
    for (std::size_t sample = 0; sample < k; ++sample) {
        OcclusionRequest req{ctx.image, ctx.mask, present, sample, ctx.image_id};
        ImageTensor occluded = impute(ctx.imputer, req, ctx.master_seed);
        ProbabilityVector pv = ctx.predictor.predict(occluded);
        if (pv.probs.size() != acc.size())
            throw ValidationError("predictor class count changed");
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += pv.probs[i];
    }
    double sum = 0;
    for (auto& a : acc) {
        a /= static_cast<double>(k);
        sum += a;
    }
    ProbabilityVector result;
    result.probs.resize(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) result.probs[i] = acc[i] / sum;

    if (ctx.cache) ctx.cache->store(key, result);
    return result;
}

double r_oms(const EvalContext& ctx, const Coalition& present,
             std::size_t class_index) {
    return occluded_prediction(ctx, present).probs.at(class_index);
}

double nr_oms(const Predictor& predictor, const ImageTensor& occluded_image) {
    return predictor.predict(occluded_image).max();
}

double shapley_value_function(const EvalContext& ctx, const Coalition& present,
                              const ValueFunctionSpec& spec) {
    spec.validate();
    double p = r_oms(ctx, present, spec.class_index);
    if (spec.kind == ValueFunctionSpec::Kind::pf_probability) return p;
    return std::log(std::max(p, spec.epsilon_floor));
}

BaselineResult random_pf_baseline(const EvalContext& ctx, std::size_t orderings,
                                  std::size_t class_index) {
    if (orderings < 1) throw ValidationError("R must be >= 1");
    BaselineResult result;
    result.per_ordering_auc.reserve(orderings);
    const std::size_t n = ctx.mask.n();
    for (std::size_t r = 0; r < orderings; ++r) {
        StreamRng rng{ctx.master_seed, ctx.image_id, hash_id("rbar"), r};
        FeatureOrdering pi{rng.permutation(n)};
        PFCurve curve = pf_curve(ctx, pi, class_index);
        result.per_ordering_auc.push_back(auc(curve));
    }
    double sum = 0;
    for (double a : result.per_ordering_auc) sum += a;
    result.r_oms_bar = sum / static_cast<double>(orderings);
    return result;
}

std::vector<ScopeSample> probe_model_scope(const EvalContext& ctx,
                                           const std::vector<double>& fractions,
                                           std::size_t draws,
                                           std::size_t class_index) {
    const std::size_t n = ctx.mask.n();
    std::vector<ScopeSample> samples;
    samples.reserve(fractions.size());
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        double fraction = fractions[fi];
        if (fraction < 0.0 || fraction > 1.0)
            throw ValidationError("fractions must be in [0,1]");
        const std::size_t occluded =
            static_cast<std::size_t>(std::lround(fraction * n));
        const std::size_t d = (occluded == 0) ? 1 : draws;  // S = N is unique

        double r_sum = 0, r_sq = 0, n_sum = 0, n_sq = 0;
        for (std::size_t draw = 0; draw < d; ++draw) {
            StreamRng rng{ctx.master_seed, ctx.image_id, hash_id("probe"), fi,
                          draw};
            auto perm = rng.permutation(n);
            Coalition present(n);
            for (std::size_t i = 0; i < n - occluded; ++i)
                present.insert(perm[i]);

            ProbabilityVector pv = occluded_prediction(ctx, present);
            double r = pv.probs.at(class_index);
            double m = pv.max();
            r_sum += r;
            r_sq += r * r;
            n_sum += m;
            n_sq += m * m;
        }
        ScopeSample s;
        s.fraction = fraction;
        s.r_oms_mean = r_sum / d;
        s.r_oms_std = std::sqrt(std::max(0.0, r_sq / d - s.r_oms_mean * s.r_oms_mean));
        s.nr_oms_mean = n_sum / d;
        s.nr_oms_std =
            std::sqrt(std::max(0.0, n_sq / d - s.nr_oms_mean * s.nr_oms_mean));
        samples.push_back(s);
    }
    return samples;
}

}  // namespace pfb
