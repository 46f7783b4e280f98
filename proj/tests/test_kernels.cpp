#include <doctest.h>

#include <cstring>
#include <random>

#include "fbpulse/error.hpp"
#include "fbpulse/kernels.hpp"

using namespace fbpulse;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

struct Fixture {
    std::vector<double> offsets;
    std::vector<Magnetization> states;
};

Fixture random_fixture(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> nu(-25'000.0, 25'000.0);
    std::normal_distribution<double> g;
    Fixture f;
    for (std::size_t i = 0; i < n; ++i) {
        f.offsets.push_back(nu(rng));
        const double x = g(rng), y = g(rng), z = g(rng);
        const double r = std::sqrt(x * x + y * y + z * z);
        f.states.push_back({x / r, y / r, z / r});
    }
    return f;
}

} // namespace

TEST_CASE("scalar kernel matches apply_rotation lane by lane") {
    std::mt19937_64 rng(1);
    const PulseParameters p(10'000.0, 0.57);
    const auto f = random_fixture(rng, 13);
    const kernels::RotationTable table(p, f.offsets);
    kernels::StateArrays state(f.states);
    kernels::rotate_batch(kernels::Kind::Scalar, table, state, 0, state.size(), 1.234);
    for (std::size_t i = 0; i < f.states.size(); ++i) {
        const Magnetization expect = apply_rotation(f.states[i], step_rotation(p, f.offsets[i]),
                                                    std::cos(1.234), std::sin(1.234));
        CHECK(state.at(i) == expect);
    }
}

TEST_CASE("every available kernel is bitwise identical to scalar") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    const PulseParameters p(5'000.0, 0.29);

    for (kernels::Kind kind : kernels::available()) {
        CAPTURE(kernels::name(kind));
        // odd sizes exercise the scalar tail of the vector kernels
        for (std::size_t n : {1u, 3u, 4u, 7u, 40u, 401u}) {
            const auto f = random_fixture(rng, n);
            const kernels::RotationTable table(p, f.offsets);
            kernels::StateArrays ref(f.states), got(f.states);
            for (int step = 0; step < 500; ++step) {
                const double ph = phase(rng);
                kernels::rotate_batch(kernels::Kind::Scalar, table, ref, 0, n, ph);
                kernels::rotate_batch(kind, table, got, 0, n, ph);
            }
            CHECK(bitwise_equal(ref.mx, got.mx));
            CHECK(bitwise_equal(ref.my, got.my));
            CHECK(bitwise_equal(ref.mz, got.mz));
        }
    }
}

TEST_CASE("kernel ranges only touch their lanes") {
    std::mt19937_64 rng(4);
    const PulseParameters p(10'000.0, 1.0);
    const auto f = random_fixture(rng, 20);
    const kernels::RotationTable table(p, f.offsets);
    for (kernels::Kind kind : kernels::available()) {
        kernels::StateArrays state(f.states);
        kernels::rotate_batch(kind, table, state, 5, 14, 0.3);
        for (std::size_t i = 0; i < 20; ++i) {
            if (i < 5 || i >= 14) CHECK(state.at(i) == f.states[i]);
            else CHECK_FALSE(state.at(i) == f.states[i]);
        }
    }
}

TEST_CASE("kernel selection") {
    const auto avail = kernels::available();
    REQUIRE_FALSE(avail.empty());
    CHECK(avail.front() == kernels::Kind::Scalar);

    kernels::select(kernels::Kind::Scalar);
    CHECK(kernels::active() == kernels::Kind::Scalar);
    kernels::reset_selection();
    CHECK(kernels::is_available(kernels::active()));

    for (kernels::Kind kind : {kernels::Kind::Avx2, kernels::Kind::Neon})
        if (!kernels::is_available(kind)) CHECK_THROWS_AS(kernels::select(kind), InvalidParameter);
}
