#include <doctest.h>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "finrot/analysis.hpp"
#include "finrot/rotation_kernel.hpp"
#include "fixtures_gibbs.hpp"
#include "oracle_polar.hpp"
#include "test_helpers.hpp"

using namespace finrot;
using finrot_test::random_screen_image;
using finrot_test::rotate_polar_direct;

TEST_SUITE_BEGIN("analysis");

TEST_CASE("antidiagonal profile") {
    SUBCASE("index arithmetic on a 3x3 ramp") {
        // stored matrix [[1,2,3],[4,5,6],[7,8,9]] row-major
        const MonoImage img(OscillatorRep::from_size(3), PixelDomain::data,
                            {1, 2, 3, 4, 5, 6, 7, 8, 9});
        CHECK(antidiagonal_profile(img) == std::vector<double>{3, 5, 7});
    }
    SUBCASE("unrotated delta has its single one at the center") {
        const auto profile = antidiagonal_profile(pattern_delta(11));
        for (int i = 0; i < 11; ++i) CHECK(profile[i] == (i == 5 ? 1.0 : 0.0));
    }
}

TEST_CASE("overshoot stats") {
    SUBCASE("screen image stays in range") {
        const auto img = random_screen_image(OscillatorRep::from_size(7), 5);
        const auto rep = overshoot_stats(img);
        CHECK(rep.s >= 0.0);
        CHECK(rep.S <= 1.0);
        CHECK(rep.profile.size() == 7);
    }
    SUBCASE("tie-breaking picks the smallest flattened index") {
        const MonoImage img(OscillatorRep::from_size(2), PixelDomain::data, {0.5, 0.5, 0.5, 0.5});
        const auto rep = overshoot_stats(img);
        CHECK(rep.s_pos == std::array<int, 2>{0, 0});
        CHECK(rep.S_pos == std::array<int, 2>{0, 0});
    }
    SUBCASE("rotated delta N=11 at pi/4 dips below zero") {
        const auto pattern = pattern_delta(11);
        const WavefunctionTable table(pattern.rep());
        const auto kernel = build_kernel_cartesian(pattern.rep(), M_PI / 4, table);
        const auto rep = overshoot_stats(apply_kernel(kernel, pattern));
        CHECK(rep.s < 0.0);
        // asymmetry: the two excursions differ
        CHECK(std::abs(rep.s) != doctest::Approx(rep.S - 1.0).epsilon(1e-6));
    }
}

TEST_CASE("gibbs sweep basics") {
    SUBCASE("zero angle reproduces the pattern extrema") {
        const int sizes[] = {11, 31};
        const auto rows = gibbs_sweep(PatternKind::delta, sizes, 0.0);
        REQUIRE(rows.size() == 2);
        for (const auto& r : rows) {
            CHECK(r.s == doctest::Approx(0.0).epsilon(1e-10));
            CHECK(r.S == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    SUBCASE("parity violations rejected") {
        const int even[] = {10};
        const int odd[] = {11};
        CHECK_THROWS_AS(gibbs_sweep(PatternKind::delta, even, 0.5), DomainError);
        CHECK_THROWS_AS(gibbs_sweep(PatternKind::step, odd, 0.5), DomainError);
    }
}

TEST_CASE("production rotation matches the polar-mode oracle") {
    // The frozen fixtures below derive from this cross-validated pair.
    for (const int n : {11, 10}) {
        const MonoImage pattern = n % 2 ? pattern_delta(n) : pattern_step(n);
        const WavefunctionTable table(pattern.rep());
        for (const double theta : {M_PI / 8, M_PI / 4}) {
            const auto kernel = build_kernel_cartesian(pattern.rep(), theta, table);
            const auto fast = apply_kernel(kernel, pattern);
            const auto oracle = rotate_polar_direct(pattern, theta);
            CHECK(oracle.max_imag_residue < 1e-12);
            CHECK(finrot_test::max_abs_diff(fast.pixels(), oracle.image.pixels()) < 1e-12);
        }
    }
}

TEST_CASE("gibbs regression fixtures (frozen from the polar-sum oracle)") {
    for (const auto& fx : finrot_test::kGibbsFixtures) {
        CAPTURE(fx.n);
        CAPTURE(fx.theta);
        const MonoImage pattern = make_pattern(fx.kind, fx.n);
        const WavefunctionTable table(pattern.rep());
        const auto kernel = build_kernel_cartesian(pattern.rep(), fx.theta, table);
        const auto report = overshoot_stats(apply_kernel(kernel, pattern));
        CHECK(std::abs(report.s - fx.s) < 1e-10);
        CHECK(std::abs(report.S - fx.S) < 1e-10);
    }
}

TEST_CASE("sweep monotonicity facts at the reference parameter sets") {
    // What the computed transform actually does across the documented sweeps:
    // the delta line at pi/8 shrinks on both sides as pixellation refines;
    // the remaining combinations are dominated by screen-corner values and
    // are pinned by the fixtures rather than asserted monotone.
    const int sizes[] = {11, 31, 51};
    const auto rows = gibbs_sweep(PatternKind::delta, sizes, M_PI / 8);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].undershoot > rows[1].undershoot);
    CHECK(rows[1].undershoot > rows[2].undershoot);
    CHECK(rows[0].S > rows[1].S);
    CHECK(rows[1].S > rows[2].S);
}

TEST_CASE("edge stats cover the boundary only") {
    MonoImage img(OscillatorRep::from_size(5), PixelDomain::data);
    img.at(2, 2) = 100.0;  // interior: must not show up
    img.at(0, 3) = -7.0;
    img.at(4, 4) = 3.0;
    const auto [lo, hi] = edge_stats(img);
    CHECK(lo == -7.0);
    CHECK(hi == 3.0);
}

TEST_CASE("csv writers") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "finrot-analysis-tests";
    fs::create_directories(dir);

    SUBCASE("sweep table header and rows") {
        const std::vector<SweepRow> rows = {{11, -0.5, 1.25, 0.5, 0.25}};
        write_sweep_csv(dir / "sweep.csv", rows);
        std::ifstream is(dir / "sweep.csv");
        std::string header, line;
        std::getline(is, header);
        std::getline(is, line);
        CHECK(header == "N,s,S,undershoot,overshoot");
        CHECK(line.substr(0, 3) == "11,");
    }
    SUBCASE("profile csv") {
        const std::vector<double> profile = {0.0, 0.5, 1.0};
        write_profile_csv(dir / "profile.csv", profile);
        std::ifstream is(dir / "profile.csv");
        std::string header;
        std::getline(is, header);
        CHECK(header == "i,value");
        int count = 0;
        std::string line;
        while (std::getline(is, line)) {
            if (!line.empty()) ++count;
        }
        CHECK(count == 3);
    }
}

TEST_SUITE_END();
