#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qnn/core.hpp"
#include "qnn/errors.hpp"
#include "support.hpp"

using namespace qnn;

TEST_CASE("bits and spins map 0 to -1 and 1 to +1") {
    const std::vector<std::uint8_t> zeros{0, 0};
    CHECK(bits_to_spins(zeros) == SpinConfig{-1, -1});
    const std::vector<std::uint8_t> mixed{1, 0, 1};
    CHECK(bits_to_spins(mixed) == SpinConfig{1, -1, 1});

    for (std::uint64_t v = 0; v < 8; ++v) {
        const auto bits = bits_of(v, 3);
        CHECK(spins_to_bits(bits_to_spins(bits)) == bits);
    }

    const std::vector<std::uint8_t> bad{0, 2};
    CHECK_THROWS_AS((void)bits_to_spins(bad), InvalidInput);
    CHECK_THROWS_AS(SpinConfig({1, 0}), InvalidInput);
}

TEST_CASE("bits_of honours the bit order") {
    CHECK(bits_of(6, 3, BitOrder::MsbFirst) == std::vector<std::uint8_t>{1, 1, 0});
    CHECK(bits_of(6, 3, BitOrder::LsbFirst) == std::vector<std::uint8_t>{0, 1, 1});
    CHECK(bits_of(1, 4) == std::vector<std::uint8_t>{0, 0, 0, 1});
}

TEST_CASE("potential examples") {
    NeuralPotential p{{0.5, -0.5}, 0.25, {{{0, 1}, 1.0}}};
    CHECK(evaluate_potential(p, {1, 1}) == 0.75);

    NeuralPotential q{{0.0, 0.0}, 0.0, {{{0, 1}, 3.25}}};
    CHECK(evaluate_potential(q, {1, -1}) == -3.25);

    const auto zero = zero_potential(3, {{0, 2}});
    for (const auto &s : enumerate_inputs(3)) {
        CHECK(evaluate_potential(zero, s) == 0.0);
    }

    CHECK_THROWS_AS((void)evaluate_potential(p, {1, 1, 1}), InvalidInput);
}

TEST_CASE("term validation") {
    CHECK_THROWS_AS((NeuralPotential{{0, 0}, 0, {{{0}, 1.0}}}.validate()), InvalidInput);
    CHECK_THROWS_AS((NeuralPotential{{0, 0}, 0, {{{1, 0}, 1.0}}}.validate()), InvalidInput);
    CHECK_THROWS_AS((NeuralPotential{{0, 0}, 0, {{{0, 0}, 1.0}}}.validate()), InvalidInput);
    CHECK_THROWS_AS((NeuralPotential{{0, 0}, 0, {{{0, 2}, 1.0}}}.validate()), InvalidInput);
    CHECK_NOTHROW((NeuralPotential{{0, 0, 0}, 0, {{{0, 2}, 1.0}}}.validate()));
}

TEST_CASE("potential agrees with an independent expansion") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + trial % 5;
        const auto p = test::random_potential(rng, k);
        const auto bits = test::random_bits(rng, k);
        const auto s = bits_to_spins(bits);
        const std::vector<int> sv(s.values().begin(), s.values().end());
        CHECK(evaluate_potential(p, s) ==
              doctest::Approx(test::reference_potential(p, sv)).epsilon(1e-13));
    }
}

TEST_CASE("zeroed product weights leave the linear form exactly") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 2 + trial % 4;
        auto p = test::random_potential(rng, k);
        for (auto &t : p.multi_terms) {
            t.weight = 0.0;
        }
        const auto s = bits_to_spins(test::random_bits(rng, k));
        double linear = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            linear += p.linear_weights[i] * s[i];
        }
        linear -= p.bias;
        CHECK(evaluate_potential(p, s) == linear);
    }
}

TEST_CASE("potential is affine in every weight") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 2 + trial % 3;
        auto p = test::random_potential(rng, k, 1.0);
        const auto s = bits_to_spins(test::random_bits(rng, k));
        const double base = evaluate_potential(p, s);
        for (std::size_t i = 0; i < k; ++i) {
            auto q = p;
            q.linear_weights[i] += 0.5;
            CHECK(evaluate_potential(q, s) - base == doctest::Approx(0.5 * s[i]).epsilon(1e-12));
        }
        for (std::size_t m = 0; m < p.multi_terms.size(); ++m) {
            auto q = p;
            q.multi_terms[m].weight += 0.5;
            int prod = 1;
            for (auto l : p.multi_terms[m].indices) {
                prod *= s[l];
            }
            CHECK(evaluate_potential(q, s) - base == doctest::Approx(0.5 * prod).epsilon(1e-12));
        }
    }
}

TEST_CASE("activation values") {
    CHECK(activation(0.0) == 0.5);
    CHECK(activation(1.0) == doctest::Approx(0.853553390593273762200422181052).epsilon(1e-15));
    CHECK(activation(0.5) == doctest::Approx(0.723606797749978969640917366873).epsilon(1e-15));
    CHECK(activation(10.0) == doctest::Approx(0.997518595104994567832636876869).epsilon(1e-15));
    CHECK(activation(20.0) == doctest::Approx(0.999376169438922337349057659559).epsilon(1e-15));
    CHECK(Activation().value(1.0) == activation(1.0));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)activation(nan), InvalidInput);
    CHECK_THROWS_AS((void)activation(inf), InvalidInput);
    CHECK_THROWS_AS((void)activation_derivative(-inf), InvalidInput);
}

TEST_CASE("activation symmetry, range and monotonicity") {
    for (int i = 0; i < 100; ++i) {
        const double x = -10.0 + 0.2 * i;
        CHECK(activation(x) + activation(-x) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(activation(x) > 0.0);
        CHECK(activation(x) < 1.0);
    }
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        double a = u(rng);
        double b = u(rng);
        if (a == b) {
            continue;
        }
        if (a > b) {
            std::swap(a, b);
        }
        CHECK(activation(a) < activation(b));
    }
}

TEST_CASE("activation derivative against finite differences") {
    CHECK(activation_derivative(0.0) == 0.5);
    const double h = 1e-5;
    for (double x : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
        const long double fd =
            (test::reference_activation(x + h) - test::reference_activation(x - h)) / (2.0L * h);
        const double d = activation_derivative(x);
        CHECK(std::abs(d - static_cast<double>(fd)) / d < 1e-8);
        CHECK(Activation().derivative(x) == d);
    }
    CHECK(activation_derivative(1e3) < 1e-8);
    CHECK(activation_derivative(-1e3) < 1e-8);
    CHECK(activation_derivative(-1e3) > 0.0);
}

TEST_CASE("enumerate_inputs ascends with the first qubit most significant") {
    const auto one = enumerate_inputs(1);
    REQUIRE(one.size() == 2);
    CHECK(one[0] == SpinConfig{-1});
    CHECK(one[1] == SpinConfig{1});

    const auto two = enumerate_inputs(2);
    REQUIRE(two.size() == 4);
    CHECK(two[0] == SpinConfig{-1, -1});
    CHECK(two[1] == SpinConfig{-1, 1});
    CHECK(two[2] == SpinConfig{1, -1});
    CHECK(two[3] == SpinConfig{1, 1});

    const auto three = enumerate_inputs(3);
    REQUIRE(three.size() == 8);
    CHECK(three.front() == SpinConfig{-1, -1, -1});
    CHECK(three.back() == SpinConfig{1, 1, 1});

    CHECK_THROWS_AS((void)enumerate_inputs(0), InvalidInput);
    CHECK_THROWS_AS((void)enumerate_inputs(17), InvalidInput);
}

TEST_CASE("classical perceptron maps onto an equal spin potential") {
    std::mt19937_64 rng(15);
    for (std::size_t k = 1; k <= 5; ++k) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = test::random_potential(rng, k, 3.0, false);
            const auto q = classical_to_spin(p);
            for (std::uint64_t v = 0; v < (1u << k); ++v) {
                const auto bits = bits_of(v, k);
                CHECK(evaluate_potential(q, bits_to_spins(bits)) ==
                      doctest::Approx(evaluate_on_bits(p, bits)).epsilon(1e-13));
            }
        }
    }
    NeuralPotential with_term{{1, 1}, 0, {{{0, 1}, 1.0}}};
    CHECK_THROWS_AS((void)classical_to_spin(with_term), InvalidInput);
}
