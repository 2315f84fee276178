#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "pfbench/attribution.hpp"
#include "pfbench/errors.hpp"

using namespace pfb;

namespace {

// v(S) = sum of per-player stakes plus a pair bonus; easy to reason about.
ValueFunction counting_game(std::vector<double> stakes) {
    return [stakes](const Coalition& s) {
        double v = 0;
        for (std::size_t i = 0; i < stakes.size(); ++i)
            if (s.contains(i)) v += stakes[i];
        return v;
    };
}

}  // namespace

TEST_CASE("two-player hand oracle") {
    // v(empty)=0, v({0})=1, v({1})=2, v(N)=4.
    ValueFunction v = [](const Coalition& s) {
        if (s.size() == 2) return 4.0;
        if (s.contains(0)) return 1.0;
        if (s.contains(1)) return 2.0;
        return 0.0;
    };
    auto phi = shapley_exact(v, 2);
    CHECK(phi.phi[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(phi.phi[1] == doctest::Approx(2.5).epsilon(1e-15));

    auto pd = preddiff(v, 2);
    CHECK(pd.phi[0] == doctest::Approx(2.0));  // 4 - v({1})
    CHECK(pd.phi[1] == doctest::Approx(3.0));  // 4 - v({0})

    auto arch = arch_attribute(v, 2);
    CHECK(arch.phi[0] == doctest::Approx(1.0));
    CHECK(arch.phi[1] == doctest::Approx(2.0));
}

TEST_CASE("additive games give the stakes back exactly") {
    std::vector<double> stakes{0.3, -1.2, 2.5, 0.0, 1.1};
    auto phi = shapley_exact(counting_game(stakes), 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(phi.phi[i] == doctest::Approx(stakes[i]).epsilon(1e-12));
}

TEST_CASE("efficiency and null player on a non-additive game") {
    ValueFunction v = [](const Coalition& s) {
        double base = static_cast<double>(s.size()) * 0.5;
        if (s.contains(0) && s.contains(2)) base += 3.0;  // synergy
        if (s.contains(3)) base -= 0.5;  // player 3 cancels its own base
        return base;
    };
    auto phi = shapley_exact(v, 4);
    double total = 0;
    for (double p : phi.phi) total += p;
    CHECK(total == doctest::Approx(v(Coalition::full(4)) -
                                   v(Coalition::empty(4)))
                       .epsilon(1e-12));
    CHECK(phi.phi[3] == doctest::Approx(0.0).epsilon(1e-12));  // null player
    CHECK(phi.phi[0] == doctest::Approx(phi.phi[2]).epsilon(1e-12));
}

TEST_CASE("monte carlo converges to the exact values") {
    ValueFunction v = [](const Coalition& s) {
        double base = 0;
        if (s.contains(0)) base += 1.0;
        if (s.contains(1) && s.contains(2)) base += 2.0;
        return base;
    };
    auto exact = shapley_exact(v, 3);
    auto mc = shapley_mc(v, 3, 20000, StreamRng{4});
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::fabs(mc.phi[i] - exact.phi[i]) < 0.05);

    // Efficiency holds exactly for any M (telescoping per permutation).
    auto tiny = shapley_mc(v, 3, 3, StreamRng{5});
    double total = 0;
    for (double p : tiny.phi) total += p;
    CHECK(total == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("monte carlo is seed deterministic") {
    // Non-additive game: marginals depend on the permutation, so different
    // seeds must yield different estimates at small M.
    ValueFunction v = [](const Coalition& s) {
        return s.contains(0) && s.contains(2) ? 5.0
                                              : static_cast<double>(s.size());
    };
    auto a = shapley_mc(v, 3, 5, StreamRng{9});
    auto b = shapley_mc(v, 3, 5, StreamRng{9});
    CHECK(a.phi == b.phi);
    auto c = shapley_mc(v, 3, 5, StreamRng{10});
    CHECK(a.phi != c.phi);
}

TEST_CASE("exact shapley bounds") {
    CHECK_THROWS_AS(shapley_exact(counting_game({}), 0), ValidationError);
    CHECK_THROWS_AS(shapley_exact(counting_game({1.0}), 21), ValidationError);
}

TEST_CASE("random attribution induces valid orderings") {
    auto phi = random_attribution(6, StreamRng{1});
    CHECK(phi.phi.size() == 6);
    for (double p : phi.phi) {
        CHECK(p >= 0.0);
        CHECK(p < 1.0);
    }
    CHECK(phi.phi == random_attribution(6, StreamRng{1}).phi);
}

TEST_CASE("pixel map import averages per superpixel") {
    auto dir = std::filesystem::temp_directory_path() / "pfbench_test";
    std::filesystem::create_directories(dir);
    auto path = dir / "map.pfam";

    // 4x2 map, two superpixels (left/right half).
    export_pixel_attribution(path, 4, 2,
                             {1.0f, 2.0f, -3.0f, -5.0f,
                              3.0f, 2.0f, -1.0f, -7.0f});
    SuperpixelMask mask(4, 2, {0, 0, 1, 1, 0, 0, 1, 1}, 2);

    auto phi = import_pixel_attribution(path, mask, false);
    CHECK(phi.phi[0] == doctest::Approx(2.0));
    CHECK(phi.phi[1] == doctest::Approx(-4.0));

    auto abs_phi = import_pixel_attribution(path, mask, true);
    CHECK(abs_phi.phi[0] == doctest::Approx(2.0));
    CHECK(abs_phi.phi[1] == doctest::Approx(4.0));

    SuperpixelMask wrong(2, 2, {0, 0, 1, 1}, 2);
    CHECK_THROWS_AS(import_pixel_attribution(path, wrong, false),
                    ValidationError);
}

TEST_CASE("npy import") {
    auto dir = std::filesystem::temp_directory_path() / "pfbench_test";
    std::filesystem::create_directories(dir);
    auto path = dir / "map.npy";

    // Hand-rolled NPY v1 header for a 2x3 float32 C-order array.
    std::string header =
        "{'descr': '<f4', 'fortran_order': False, 'shape': (2, 3), }";
    while ((10 + header.size() + 1) % 64 != 0) header += ' ';
    header += '\n';
    std::ofstream out(path, std::ios::binary);
    out.write("\x93NUMPY\x01\x00", 8);
    std::uint16_t len = static_cast<std::uint16_t>(header.size());
    out.write(reinterpret_cast<const char*>(&len), 2);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    float values[6] = {1, 2, 3, 4, 5, 6};
    out.write(reinterpret_cast<const char*>(values), sizeof(values));
    out.close();

    SuperpixelMask mask(3, 2, {0, 0, 1, 0, 0, 1}, 2);
    auto phi = import_pixel_attribution(path, mask, false);
    CHECK(phi.phi[0] == doctest::Approx((1.0 + 2.0 + 4.0 + 5.0) / 4.0));
    CHECK(phi.phi[1] == doctest::Approx((3.0 + 6.0) / 2.0));
}

TEST_CASE("counting wrapper tracks the call budget") {
    CountingValueFunction v(counting_game({1.0, 1.0}));
    preddiff([&v](const Coalition& s) { return v(s); }, 2);
    CHECK(v.calls() == 3);  // v(N) plus one drop per player
}
