#include "pfbench/attribution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "pfbench/errors.hpp"

namespace pfb {

namespace {

constexpr std::size_t kExactLimit = 20;

double binom(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

Coalition coalition_from_bits(std::size_t n, std::uint32_t bits) {
    Coalition c(n);
    for (std::size_t i = 0; i < n; ++i)
        if (bits & (1u << i)) c.insert(i);
    return c;
}

}  // namespace

void ShapleyConfig::validate(std::size_t n) const {
    if (mode == Mode::exact && n > kExactLimit)
        throw ValidationError("exact Shapley limited to n <= 20");
    if (mode == Mode::monte_carlo && mc_samples < 1)
        throw ValidationError("M must be >= 1");
}

AttributionVector shapley_exact(const ValueFunction& v, std::size_t n) {
    if (n < 1) throw ValidationError("n must be >= 1");
    if (n > kExactLimit)
        throw ValidationError("exact Shapley limited to n <= 20");

    const std::uint32_t count = 1u << n;
    std::vector<double> values(count);
    for (std::uint32_t bits = 0; bits < count; ++bits)
        values[bits] = v(coalition_from_bits(n, bits));

    // N(s) = s!(n-s-1)!/n! = 1 / (n * C(n-1, s))
    std::vector<double> weight(n);
    for (std::size_t s = 0; s < n; ++s)
        weight[s] = 1.0 / (static_cast<double>(n) * binom(n - 1, s));

    AttributionVector out;
    out.phi.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bit = 1u << i;
        for (std::uint32_t bits = 0; bits < count; ++bits) {
            if (bits & bit) continue;
            std::size_t s = static_cast<std::size_t>(std::popcount(bits));
            out.phi[i] += weight[s] * (values[bits | bit] - values[bits]);
        }
    }
    return out;
}

AttributionVector shapley_mc(const ValueFunction& v, std::size_t n,
                             std::size_t permutations, StreamRng rng) {
    if (n < 1 || permutations < 1)
        throw ValidationError("shapley_mc needs n >= 1 and M >= 1");

    AttributionVector out;
    out.phi.assign(n, 0.0);
    const std::uint64_t stream_seed = rng.next_u64();
    for (std::size_t m = 0; m < permutations; ++m) {
        StreamRng perm_rng{stream_seed, m};
        auto perm = perm_rng.permutation(n);
        Coalition grown(n);
        double prev = v(grown);
        for (std::size_t pos = 0; pos < n; ++pos) {
            grown.insert(perm[pos]);
            double cur = v(grown);
            out.phi[perm[pos]] += cur - prev;
            prev = cur;
        }
    }
    for (auto& p : out.phi) p /= static_cast<double>(permutations);
    return out;
}

AttributionVector preddiff(const ValueFunction& v, std::size_t n) {
    AttributionVector out;
    out.phi.assign(n, 0.0);
    const double v_full = v(Coalition::full(n));
    for (std::size_t i = 0; i < n; ++i) {
        Coalition s = Coalition::full(n);
        s.erase(i);
        out.phi[i] = v_full - v(s);
    }
    return out;
}

AttributionVector arch_attribute(const ValueFunction& v, std::size_t n) {
    AttributionVector out;
    out.phi.assign(n, 0.0);
    const double v_empty = v(Coalition::empty(n));
    for (std::size_t i = 0; i < n; ++i) {
        Coalition s(n);
        s.insert(i);
        out.phi[i] = v(s) - v_empty;
    }
    return out;
}

AttributionVector random_attribution(std::size_t n, StreamRng rng) {
    AttributionVector out;
    out.phi.resize(n);
    for (auto& p : out.phi) p = rng.next_double();
    return out;
}

namespace {

struct PixelMap {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;  // row-major
};

PixelMap read_pfam(std::ifstream& in, const std::filesystem::path& path) {
    std::uint32_t w = 0, h = 0;
    in.read(reinterpret_cast<char*>(&w), 4);
    in.read(reinterpret_cast<char*>(&h), 4);
    if (!in.good() || w == 0 || h == 0)
        throw IoError("corrupt attribution map header in " + path.string());
    std::vector<float> raw(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
    if (!in.good())
        throw IoError("truncated attribution map " + path.string());
    PixelMap map{w, h, {}};
    map.values.assign(raw.begin(), raw.end());
    return map;
}

PixelMap read_npy(std::ifstream& in, const std::filesystem::path& path) {
    char rest[4];
    in.read(rest, 4);  // "UMPY" after the \x93N already consumed
    std::uint8_t major = 0, minor = 0;
    in.read(reinterpret_cast<char*>(&major), 1);
    in.read(reinterpret_cast<char*>(&minor), 1);
    std::uint32_t header_len = 0;
    if (major == 1) {
        std::uint16_t len16 = 0;
        in.read(reinterpret_cast<char*>(&len16), 2);
        header_len = len16;
    } else {
        in.read(reinterpret_cast<char*>(&header_len), 4);
    }
    std::string header(header_len, '\0');
    in.read(header.data(), header_len);
    if (!in.good()) throw IoError("corrupt NPY header in " + path.string());

    const bool f4 = header.find("<f4") != std::string::npos;
    const bool f8 = header.find("<f8") != std::string::npos;
    if (!f4 && !f8)
        throw IoError("NPY map must be little-endian float32/float64");
    if (header.find("'fortran_order': True") != std::string::npos)
        throw IoError("NPY map must be C-order");
    auto shape_pos = header.find("'shape':");
    auto open = header.find('(', shape_pos);
    auto close = header.find(')', open);
    if (shape_pos == std::string::npos || open == std::string::npos ||
        close == std::string::npos)
        throw IoError("NPY map header missing shape");
    std::size_t rows = 0, cols = 0;
    if (std::sscanf(header.substr(open, close - open + 1).c_str(), "(%zu, %zu)",
                    &rows, &cols) != 2)
        throw IoError("NPY map must be 2-dimensional");

    PixelMap map{cols, rows, {}};
    map.values.resize(rows * cols);
    if (f8) {
        in.read(reinterpret_cast<char*>(map.values.data()),
                static_cast<std::streamsize>(map.values.size() * 8));
    } else {
        std::vector<float> raw(rows * cols);
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(raw.size() * 4));
        map.values.assign(raw.begin(), raw.end());
    }
    if (!in.good()) throw IoError("truncated NPY map " + path.string());
    return map;
}

}  // namespace

AttributionVector import_pixel_attribution(const std::filesystem::path& path,
                                           const SuperpixelMask& mask,
                                           bool take_abs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open attribution map " + path.string());
    char magic[2];
    in.read(magic, 2);
    PixelMap map;
    if (magic[0] == 'P' && magic[1] == 'F') {
        char am[2];
        in.read(am, 2);
        if (am[0] != 'A' || am[1] != 'M')
            throw IoError("bad magic in attribution map " + path.string());
        map = read_pfam(in, path);
    } else if (static_cast<unsigned char>(magic[0]) == 0x93 && magic[1] == 'N') {
        map = read_npy(in, path);
    } else {
        throw IoError("unknown attribution map format " + path.string());
    }

    if (map.width != mask.width() || map.height != mask.height())
        throw ValidationError("attribution map dimensions do not match mask");
    for (double v : map.values)
        if (!std::isfinite(v))
            throw ValidationError("attribution map contains non-finite pixels");

    AttributionVector out;
    out.phi.assign(mask.n(), 0.0);
    std::vector<std::size_t> counts(mask.n(), 0);
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        std::int32_t label = mask.labels()[i];
        double v = map.values[i];
        out.phi[label] += take_abs ? std::fabs(v) : v;
        ++counts[label];
    }
    for (std::size_t i = 0; i < mask.n(); ++i) out.phi[i] /= counts[i];
    return out;
}

void export_pixel_attribution(const std::filesystem::path& path,
                              std::size_t width, std::size_t height,
                              const std::vector<float>& values) {
    if (values.size() != width * height)
        throw ValidationError("pixel map size does not match dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write attribution map " + path.string());
    out.write("PFAM", 4);
    std::uint32_t w = static_cast<std::uint32_t>(width);
    std::uint32_t h = static_cast<std::uint32_t>(height);
    out.write(reinterpret_cast<const char*>(&w), 4);
    out.write(reinterpret_cast<const char*>(&h), 4);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(float)));
}

ValueFunction make_log_value_function(const EvalContext& ctx,
                                      const ValueFunctionSpec& spec) {
    return [&ctx, spec](const Coalition& s) {
        return shapley_value_function(ctx, s, spec);
    };
}

}  // namespace pfb
