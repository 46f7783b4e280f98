#include <doctest.h>

#include <cmath>
#include <random>

#include "fbpulse/bloch.hpp"
#include "fbpulse/error.hpp"
#include "oracle.hpp"

using namespace fbpulse;

namespace {

PulseSequence make_seq(double amplitude_hz, double flip_deg, std::vector<double> phases) {
    return PulseSequence{PulseParameters(amplitude_hz, flip_deg), std::move(phases), {}};
}

std::vector<double> random_phases(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    std::vector<double> out(n);
    for (auto& p : out) p = u(rng);
    return out;
}

Magnetization random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const double x = g(rng), y = g(rng), z = g(rng);
    const double n = std::sqrt(x * x + y * y + z * z);
    return {x / n, y / n, z / n};
}

void check_close(const Magnetization& a, const Magnetization& b, double tol) {
    CHECK(std::abs(a.mx - b.mx) <= tol);
    CHECK(std::abs(a.my - b.my) <= tol);
    CHECK(std::abs(a.mz - b.mz) <= tol);
}

} // namespace

TEST_CASE("flip_to_duration") {
    CHECK(flip_to_duration(90.0, 10'000.0) == doctest::Approx(2.5e-5).epsilon(1e-15));
    CHECK(flip_to_duration(90.0, 10'000.0) == 90.0 / (360.0 * 10'000.0));

    const double inv = flip_to_duration(0.57, 10'000.0);
    CHECK(inv == doctest::Approx(1.58333e-7).epsilon(1e-5));
    CHECK(inv * 18907 == doctest::Approx(2.9936e-3).epsilon(1e-4));

    const double band = flip_to_duration(0.29, 5'000.0);
    CHECK(band == doctest::Approx(1.61111e-7).epsilon(1e-5));
    CHECK(band * 41812 == doctest::Approx(6.7364e-3).epsilon(1e-4));

    CHECK_THROWS_AS(flip_to_duration(0.0, 10'000.0), InvalidParameter);
    CHECK_THROWS_AS(flip_to_duration(1.0, -5.0), InvalidParameter);
    CHECK_THROWS_AS(PulseParameters(0.0, 1.0), InvalidParameter);
}

TEST_CASE("rotate_step handedness") {
    SUBCASE("90 degrees about +x takes +z to -y") {
        const PulseParameters p(10'000.0, 90.0);
        const Magnetization m = rotate_step(Magnetization::north(), p, 0.0, 0.0);
        check_close(m, {0.0, -1.0, 0.0}, 1e-12);
    }
    SUBCASE("two 90 degree steps about +y invert") {
        const PulseParameters p(10'000.0, 90.0);
        Magnetization m = rotate_step(Magnetization::north(), p, kPi / 2, 0.0);
        m = rotate_step(m, p, kPi / 2, 0.0);
        check_close(m, Magnetization::south(), 1e-12);
    }
    SUBCASE("tilted field against quaternion oracle") {
        const PulseParameters p(10'000.0, 90.0);  // dwell 2.5e-5 s
        REQUIRE(p.dwell_s() == doctest::Approx(2.5e-5));
        const Magnetization m = rotate_step(Magnetization::north(), p, 0.0, 10'000.0);
        const auto r = oracle::rotate(oracle::step(10'000.0, 0.0, 10'000.0, p.dwell_s()), {0, 0, 1});
        check_close(m, {r.x, r.y, r.z}, 1e-12);
    }
    SUBCASE("random steps against quaternion oracle") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> nu(-30'000.0, 30'000.0);
        const PulseParameters p(8'000.0, 3.0);
        for (int i = 0; i < 200; ++i) {
            const Magnetization m0 = random_unit(rng);
            const double phase = random_phases(rng, 1)[0];
            const double off = nu(rng);
            const Magnetization m = rotate_step(m0, p, phase, off);
            const auto r = oracle::rotate(oracle::step(8'000.0, phase, off, p.dwell_s()),
                                          {m0.mx, m0.my, m0.mz});
            check_close(m, {r.x, r.y, r.z}, 1e-12);
        }
    }
    SUBCASE("non-unit input is rejected") {
        const PulseParameters p(10'000.0, 1.0);
        CHECK_THROWS_AS(rotate_step({0.0, 0.0, 2.0}, p, 0.0, 0.0), InvalidParameter);
    }
}

TEST_CASE("propagate") {
    std::mt19937_64 rng(11);

    SUBCASE("empty sequence is the identity") {
        const auto seq = make_seq(10'000.0, 1.0, {});
        const Magnetization m0 = random_unit(rng);
        CHECK(propagate(seq, 1234.0, m0) == m0);
    }
    SUBCASE("180 one-degree steps invert on resonance") {
        const auto seq = make_seq(10'000.0, 1.0, std::vector<double>(180, 0.0));
        check_close(propagate(seq, 0.0, Magnetization::north()), Magnetization::south(), 1e-9);
    }
    SUBCASE("random 100-step sequence at 7 kHz against quaternion product") {
        const auto phases = random_phases(rng, 100);
        const auto seq = make_seq(10'000.0, 0.57, phases);
        const auto q = oracle::sequence(10'000.0, phases, 7'000.0, seq.params.dwell_s());
        for (int i = 0; i < 10; ++i) {
            const Magnetization m0 = random_unit(rng);
            const auto r = oracle::rotate(q, {m0.mx, m0.my, m0.mz});
            check_close(propagate(seq, 7'000.0, m0), {r.x, r.y, r.z}, 1e-9);
        }
    }
}

TEST_CASE("propagator_matrix") {
    SUBCASE("empty sequence") {
        const auto seq = make_seq(10'000.0, 1.0, {});
        CHECK(propagator_matrix(seq, 500.0).max_abs_diff(Rotation3::identity()) == 0.0);
    }
    SUBCASE("90 degree x pulse") {
        const auto seq = make_seq(10'000.0, 90.0, {0.0});
        const Rotation3 r = propagator_matrix(seq, 0.0);
        check_close(r.apply(Magnetization::north()), {0.0, -1.0, 0.0}, 1e-12);
    }
    SUBCASE("agrees with propagate, orthogonal, det +1") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> nu(-20'000.0, 20'000.0);
        for (int trial = 0; trial < 100; ++trial) {
            const auto seq = make_seq(10'000.0, 0.57, random_phases(rng, 100));
            const double off = nu(rng);
            const Rotation3 r = propagator_matrix(seq, off);
            CHECK((r * r.transposed()).max_abs_diff(Rotation3::identity()) <= 1e-9);
            CHECK(std::abs(r.determinant() - 1.0) <= 1e-9);
            for (int i = 0; i < 10; ++i) {
                const Magnetization m0 = random_unit(rng);
                check_close(r.apply(m0), propagate(seq, off, m0), 1e-9);
            }
        }
    }
}

TEST_CASE("norm conservation over 1e5 random steps") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> nu(-20'000.0, 20'000.0);
    const auto seq = make_seq(10'000.0, 0.57, random_phases(rng, 100'000));
    for (int i = 0; i < 4; ++i) {
        const Magnetization m = propagate(seq, nu(rng), random_unit(rng));
        CHECK(std::abs(m.norm() - 1.0) <= 1e-9);
    }
}

TEST_CASE("constant phase shift rotates the transverse result") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> nu(-20'000.0, 20'000.0);
    std::uniform_real_distribution<double> shift(-kPi, kPi);
    for (int trial = 0; trial < 50; ++trial) {
        const auto base = random_phases(rng, 200);
        const double delta = shift(rng);
        std::vector<double> shifted(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) shifted[i] = normalize_phase(base[i] + delta);
        const double off = nu(rng);
        for (const Magnetization& m0 : {Magnetization::north(), Magnetization::south()}) {
            const Magnetization a = propagate(make_seq(10'000.0, 0.57, base), off, m0);
            const Magnetization b = propagate(make_seq(10'000.0, 0.57, shifted), off, m0);
            const double c = std::cos(delta), s = std::sin(delta);
            CHECK(std::abs(b.mx - (c * a.mx - s * a.my)) <= 1e-9);
            CHECK(std::abs(b.my - (s * a.mx + c * a.my)) <= 1e-9);
            CHECK(std::abs(b.mz - a.mz) <= 1e-9);
        }
    }
}

TEST_CASE("normalize_phase stays in [0, 2pi)") {
    for (double x : {0.0, -1e-300, -1e-17, kTwoPi, -kTwoPi, 7.0 * kPi, -3.5, 1e6}) {
        const double r = normalize_phase(x);
        CHECK(r >= 0.0);
        CHECK(r < kTwoPi);
    }
    CHECK(normalize_phase(kPi + kTwoPi) == doctest::Approx(kPi));
}

TEST_CASE("amplitude scaling keeps the dwell") {
    const PulseParameters p(10'000.0, 0.5);
    const PulseParameters q = p.scaled_amplitude(1.05);
    CHECK(q.dwell_s() == p.dwell_s());
    CHECK(q.amplitude_hz() == doctest::Approx(10'500.0));
    CHECK(q.flip_per_step_deg() == doctest::Approx(0.525));
    CHECK_THROWS_AS(p.scaled_amplitude(0.0), InvalidParameter);
}
