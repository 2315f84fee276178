#pragma once

#include <filesystem>
#include <functional>

#include "pfbench/coalition.hpp"
#include "pfbench/mask.hpp"
#include "pfbench/ordering.hpp"
#include "pfbench/rng.hpp"
#include "pfbench/value_engine.hpp"

namespace pfb {

/// Abstract coalition game v: 2^N -> R.
using ValueFunction = std::function<double(const Coalition&)>;

/// Wraps a value function and counts invocations (predictor-call budget).
class CountingValueFunction {
public:
    explicit CountingValueFunction(ValueFunction fn) : fn_(std::move(fn)) {}

    double operator()(const Coalition& s) const {
        ++calls_;
        return fn_(s);
    }
    std::size_t calls() const { return calls_; }

private:
    ValueFunction fn_;
    mutable std::size_t calls_ = 0;
};

struct ShapleyConfig {
    enum class Mode { exact, monte_carlo };
    Mode mode = Mode::monte_carlo;
    std::size_t mc_samples = 2000;  // permutations M
    ValueFunctionSpec value_spec;

    void validate(std::size_t n) const;
};

/// Exact Shapley values by full 2^n enumeration (n <= 20).
AttributionVector shapley_exact(const ValueFunction& v, std::size_t n);

/// Permutation-sampling estimate over M uniformly random permutations.
/// Efficiency holds exactly per permutation (telescoping sum).
AttributionVector shapley_mc(const ValueFunction& v, std::size_t n,
                             std::size_t permutations, StreamRng rng);

/// phi_i = v(N) - v(N \ {i}); n+1 value calls.
AttributionVector preddiff(const ValueFunction& v, std::size_t n);

/// phi_i = v({i}) - v(empty); n+1 value calls.
AttributionVector arch_attribute(const ValueFunction& v, std::size_t n);

/// i.i.d. uniform [0,1) scores; induces a uniformly random ordering.
AttributionVector random_attribution(std::size_t n, StreamRng rng);

/// Reads a pixel-wise attribution map (custom binary grid or NPY) and
/// averages it per superpixel, optionally on absolute values.
AttributionVector import_pixel_attribution(const std::filesystem::path& path,
                                           const SuperpixelMask& mask,
                                           bool take_abs);

/// Writes a pixel map in the custom binary grid format ("PFAM" header).
void export_pixel_attribution(const std::filesystem::path& path,
                              std::size_t width, std::size_t height,
                              const std::vector<float>& values);

/// The value function v(S) = log f_chat(x_S) bound to an evaluation context.
ValueFunction make_log_value_function(const EvalContext& ctx,
                                      const ValueFunctionSpec& spec);

}  // namespace pfb
