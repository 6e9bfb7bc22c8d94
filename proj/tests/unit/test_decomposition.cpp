#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "zcjitter/decomposition.hpp"
#include "zcjitter/error.hpp"

using namespace zcjitter;

namespace {

ZeroCrossingSeries series_of(std::vector<double> delta) {
    ZeroCrossingSeries z;
    z.s.resize(delta.size());
    z.delta = std::move(delta);
    return z;
}

std::vector<double> gaussian(std::mt19937_64& rng, std::size_t n, double sigma) {
    std::normal_distribution<double> dist(0.0, sigma);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = dist(rng);
    }
    return v;
}

} // namespace

TEST_SUITE("decomposition") {

TEST_CASE("DRS regression from measured statistics") {
    const auto r = drs_from_stats(from_ps(56.0), from_ps(56.1), from_ps(50.6), from_ps(0.0));
    CHECK(std::abs(to_ps(r.sigma_n.value) - 43.1) <= 0.1);
    CHECK(std::abs(to_ps(r.sigma_a.value) - 35.7) <= 0.1);
    CHECK(std::abs(to_ps(r.sigma_b.value) - 35.9) <= 0.1);
    CHECK(r.valid());
}

TEST_CASE("DRS round trip is exact to machine precision") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double n = from_ps(u(rng));
        const double a = from_ps(u(rng));
        const double b = from_ps(u(rng));
        const double e1 = std::sqrt(n * n + a * a);
        const double e2 = std::sqrt(n * n + b * b);
        const double e3 = std::sqrt(a * a + b * b);
        const double e4 = std::sqrt(4 * n * n + a * a + b * b);
        const auto r = drs_from_stats(e1, e2, e3, e4);
        const double scale = 1e-24 * 1e4; // (100 ps)^2
        CHECK(std::abs(r.sigma_n.variance - n * n) <= 1e-13 * scale);
        CHECK(std::abs(r.sigma_a.variance - a * a) <= 1e-13 * scale);
        CHECK(std::abs(r.sigma_b.variance - b * b) <= 1e-13 * scale);
        CHECK(std::abs(r.consistency_residual) <= 1e-13 * scale);
    }
}

TEST_CASE("identical series put everything in the player term") {
    std::mt19937_64 rng(3);
    const auto d = gaussian(rng, 5000, 40e-12);
    const auto r = drs_decompose(series_of(d), series_of(d));
    CHECK(r.e3 == 0.0);
    CHECK(r.sigma_a.value == 0.0);
    CHECK(r.sigma_b.value == 0.0);
    CHECK(r.sigma_n.value == doctest::Approx(r.e1).epsilon(1e-12));
}

TEST_CASE("negative radicands are flagged, not thrown") {
    const auto r = drs_from_stats(from_ps(10.0), from_ps(10.0), from_ps(30.0), from_ps(10.0));
    CHECK_FALSE(r.sigma_n.valid);
    CHECK(r.sigma_n.value == 0.0);
    CHECK(r.sigma_n.variance < 0.0);
    CHECK_FALSE(r.valid());
}

TEST_CASE("unequal series lengths are a synchronization error") {
    CHECK_THROWS_AS(drs_decompose(series_of({1.0, 2.0, 3.0}), series_of({1.0, 2.0})), Error);
}

TEST_CASE("synthetic independent noises are recovered") {
    std::mt19937_64 rng(11);
    const std::size_t m = 24000;
    const auto n = gaussian(rng, m, 44.7e-12);
    const auto a = gaussian(rng, m, 35e-12);
    const auto b = gaussian(rng, m, 35e-12);
    std::vector<double> da(m), db(m);
    for (std::size_t k = 0; k < m; ++k) {
        da[k] = n[k] + a[k];
        db[k] = n[k] + b[k];
    }
    const auto r = drs_decompose(series_of(da), series_of(db));
    CHECK(r.sigma_n.value == doctest::Approx(44.7e-12).epsilon(0.05));
    CHECK(r.sigma_a.value == doctest::Approx(35e-12).epsilon(0.05));
    CHECK(r.sigma_b.value == doctest::Approx(35e-12).epsilon(0.05));
    CHECK(std::abs(r.consistency_relative) < 0.05);
}

TEST_CASE("decomposition error shrinks as one over root M") {
    const auto mean_error = [](std::size_t m) {
        std::mt19937_64 rng(1234 + m);
        double total = 0.0;
        const int trials = 60;
        for (int t = 0; t < trials; ++t) {
            const auto n = gaussian(rng, m, 1.0);
            const auto a = gaussian(rng, m, 1.0);
            const auto b = gaussian(rng, m, 1.0);
            std::vector<double> da(m), db(m);
            for (std::size_t k = 0; k < m; ++k) {
                da[k] = n[k] + a[k];
                db[k] = n[k] + b[k];
            }
            const auto r = drs_decompose(series_of(da), series_of(db));
            total += std::abs(r.sigma_n.variance - 1.0);
        }
        return total / trials;
    };
    const double ratio = mean_error(1000) / mean_error(4000);
    CHECK(ratio > 2.0 / 1.5);
    CHECK(ratio < 2.0 * 1.5);
}

TEST_CASE("player jitter and PI split") {
    const auto r = split_player_jitter_pi(from_ps(43.1), from_ps(33.5));
    CHECK(std::abs(to_ps(r.jitter.value) - 19.7) <= 0.1);
    CHECK(std::abs(to_ps(r.pi_scaled.value) - 38.4) <= 0.1);

    const auto limit = split_player_jitter_pi(from_ps(43.1), from_ps(43.1));
    CHECK(limit.pi_scaled.value == 0.0);
    CHECK(limit.jitter.value == doctest::Approx(from_ps(43.1)));

    // Forward model: sigma_n2^2 = j^2 + pi^2, sigma_n3^2 = j^2 + pi^2 / 2.
    const double j = 20e-12, pi = 40e-12;
    const double n2 = std::sqrt(j * j + pi * pi);
    const double n3 = std::sqrt(j * j + pi * pi / 2.0);
    CHECK(to_ps(n2) == doctest::Approx(44.7).epsilon(0.002));
    CHECK(to_ps(n3) == doctest::Approx(34.6).epsilon(0.002));
    const auto synthetic = split_player_jitter_pi(n2, n3);
    CHECK(synthetic.jitter.value == doctest::Approx(j).epsilon(0.05));
    CHECK(synthetic.pi_scaled.value == doctest::Approx(pi).epsilon(0.05));

    const auto bad = split_player_jitter_pi(from_ps(43.1), from_ps(20.0));
    CHECK_FALSE(bad.jitter.valid);
    CHECK(bad.pi_scaled.valid);
}

TEST_CASE("dev_j grows with sigma_n3") {
    const double n2 = from_ps(43.1);
    double previous = -1.0;
    for (double n3 = 31.0; n3 <= 43.0; n3 += 0.5) {
        const auto r = split_player_jitter_pi(n2, from_ps(n3));
        REQUIRE(r.jitter.valid);
        CHECK(r.jitter.value > previous);
        previous = r.jitter.value;
    }
}

TEST_CASE("recorder split regression") {
    const auto r = split_recorder_from_stats(from_ps(63.7), from_ps(63.1), from_ps(61.9), from_ps(110.6), from_ps(43.1));
    CHECK(std::abs(to_ps(r.pi_left.value) - 44.3) <= 0.2);
    CHECK(std::abs(to_ps(r.pi_right.value) - 43.3) <= 0.2);
    CHECK(std::abs(to_ps(r.jitter.value) - 15.7) <= 0.2);
}

TEST_CASE("recorder split on series") {
    std::mt19937_64 rng(5);
    const std::size_t m = 30000;
    const auto n = gaussian(rng, m, 43.1e-12);
    const auto jit = gaussian(rng, m, 15e-12);
    const auto left = gaussian(rng, m, 44e-12);
    const auto right = gaussian(rng, m, 30e-12);
    std::vector<double> dl(m), dr(m);
    for (std::size_t k = 0; k < m; ++k) {
        dl[k] = n[k] + jit[k] + left[k];
        dr[k] = n[k] + jit[k] + right[k];
    }
    const auto r = split_recorder_jitter_pi(series_of(dl), series_of(dr), testing::rms_of(n));
    CHECK(r.pi_left.value == doctest::Approx(44e-12).epsilon(0.05));
    CHECK(r.pi_right.value == doctest::Approx(30e-12).epsilon(0.05));
    CHECK(r.jitter.value == doctest::Approx(15e-12).epsilon(0.05));

    const auto same = split_recorder_jitter_pi(series_of(dl), series_of(dl), 0.0);
    CHECK(same.e7 == 0.0);
    CHECK(same.pi_left.value == 0.0);
    CHECK(same.pi_right.value == 0.0);
}

TEST_CASE("phase-resolved variance fit") {
    const double rate = 192000.0;
    const double f = 11884.877;
    const double w = kTwoPi * f;
    const std::size_t n = 180000; // about 11000 cycles
    std::mt19937_64 rng(21);
    const auto build = [&](double sigma_j, double sigma_am, double sigma_add) {
        const auto j = gaussian(rng, n, sigma_j);
        const auto am = gaussian(rng, n, sigma_am);
        const auto add = gaussian(rng, n, sigma_add);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = w * static_cast<double>(i) / rate + 0.3;
            x[i] = 0.9 * std::cos(ph) - 0.9 * w * j[i] * std::sin(ph) + am[i] * std::cos(ph) + add[i];
        }
        return x;
    };

    SUBCASE("jitter only gives A < 0 and B = |A|") {
        const double sj = 1e-8;
        const auto fit = phase_variance_fit(build(sj, 0.0, 0.0), rate, f);
        const double expected = -std::pow(0.9 * w * sj, 2) / 2.0;
        CHECK(fit.a == doctest::Approx(expected).epsilon(0.05));
        CHECK(fit.b == doctest::Approx(-fit.a).epsilon(0.05));
        CHECK(fit.residual_rms < 0.1 * fit.b);
        CHECK(fit.cycles >= 10000);
        CHECK(fit.count_by_phase.size() == kPhaseBins);
    }
    SUBCASE("equal jitter and AM cancel the phase dependence") {
        const double sj = 1e-8;
        const auto fit = phase_variance_fit(build(sj, 0.9 * w * sj, 0.0), rate, f);
        CHECK(std::abs(fit.a) < 0.1 * fit.b);
    }
    SUBCASE("phase-independent noise gives A = 0 and B = its variance") {
        const auto fit = phase_variance_fit(build(0.0, 0.0, 1e-4), rate, f);
        CHECK(std::abs(fit.a) < 0.1 * fit.b);
        CHECK(fit.b == doctest::Approx(1e-8).epsilon(0.05));
        CHECK(fit.residual_rms < 0.1 * fit.b);
    }
    SUBCASE("too few cycles") {
        std::vector<double> shortx(1000);
        for (std::size_t i = 0; i < shortx.size(); ++i) {
            shortx[i] = std::cos(w * static_cast<double>(i) / rate);
        }
        try {
            phase_variance_fit(shortx, rate, f);
            FAIL("expected a statistics error");
        } catch (const Error& e) {
            CHECK(e.category() == ErrorCategory::statistics);
        }
    }
}

TEST_CASE("quantization detection limit") {
    const double j24 = detection_limit(24, 0.9, 12000.0);
    CHECK(to_ps(j24) == doctest::Approx(1.7566).epsilon(1e-3));
    CHECK(std::abs(to_ps(j24) - 1.76) <= 0.01);
    CHECK(to_ps(detection_limit(16, 0.9, 12000.0)) == doctest::Approx(449.7).epsilon(1e-3));
    CHECK(detection_limit(24, 0.9, 24000.0) == doctest::Approx(j24 / 2.0));
    CHECK_THROWS_AS(detection_limit(24, 0.0, 12000.0), Error);
}

TEST_CASE("mean and standard error over windows") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto s = summarize(v);
    CHECK(s.count == 4);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(summarize(std::vector<double>{}).count == 0);
}

TEST_CASE("band annotations") {
    const auto bands = make_bands(12000.0, 6000.0, 1.0);
    CHECK(bands.jitter.low == doctest::Approx(1.0));
    CHECK(bands.jitter.high == doctest::Approx(6000.0));
    CHECK(bands.pi.low == doctest::Approx(6000.0));
    CHECK(bands.pi.high == doctest::Approx(18000.0));
}

} // TEST_SUITE
