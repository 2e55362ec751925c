#include "qnn/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qnn/errors.hpp"

namespace qnn {

namespace {

void check_spins(const std::vector<int> &spins) {
    for (int s : spins) {
        if (s != -1 && s != 1) {
            throw InvalidInput("spin value must be -1 or +1, got " + std::to_string(s));
        }
    }
}

void check_finite(double x) {
    if (!std::isfinite(x)) {
        throw InvalidInput("activation argument must be finite");
    }
}

// Shared affine evaluation; `input(i)` yields the value of input qubit i.
template <class Input>
double affine_form(const NeuralPotential &p, Input &&input) {
    double x = 0.0;
    for (std::size_t i = 0; i < p.linear_weights.size(); ++i) {
        x += p.linear_weights[i] * input(i);
    }
    for (const auto &term : p.multi_terms) {
        double product = 1.0;
        for (std::size_t l : term.indices) {
            product *= input(l);
        }
        x += term.weight * product;
    }
    return x - p.bias;
}

} // namespace

SpinConfig::SpinConfig(std::vector<int> spins) : spins_(std::move(spins)) { check_spins(spins_); }

SpinConfig::SpinConfig(std::initializer_list<int> spins) : spins_(spins) { check_spins(spins_); }

void NeuralPotential::validate() const {
    const std::size_t k = arity();
    for (const auto &term : multi_terms) {
        if (term.indices.size() < 2) {
            throw InvalidInput("multi-qubit term needs at least two indices");
        }
        for (std::size_t i = 0; i < term.indices.size(); ++i) {
            if (term.indices[i] >= k) {
                throw InvalidInput("multi-qubit term index " + std::to_string(term.indices[i]) +
                                   " out of range for arity " + std::to_string(k));
            }
            if (i > 0 && term.indices[i] <= term.indices[i - 1]) {
                throw InvalidInput("multi-qubit term indices must be strictly increasing");
            }
        }
    }
}

NeuralPotential zero_potential(std::size_t arity,
                               const std::vector<std::vector<std::size_t>> &terms) {
    NeuralPotential p;
    p.linear_weights.assign(arity, 0.0);
    for (const auto &indices : terms) {
        p.multi_terms.push_back({indices, 0.0});
    }
    p.validate();
    return p;
}

double Activation::value(double x) const {
    switch (kind_) {
    case ActivationKind::SigmoidAdiabatic:
        return activation(x);
    }
    throw InvalidInput("unknown activation kind");
}

double Activation::derivative(double x) const {
    switch (kind_) {
    case ActivationKind::SigmoidAdiabatic:
        return activation_derivative(x);
    }
    throw InvalidInput("unknown activation kind");
}

double activation(double x) {
    check_finite(x);
    return 0.5 * (1.0 + x / std::sqrt(1.0 + x * x));
}

double activation_derivative(double x) {
    check_finite(x);
    const double r = 1.0 + x * x;
    return 0.5 / (r * std::sqrt(r));
}

SpinConfig bits_to_spins(std::span<const std::uint8_t> bits) {
    std::vector<int> spins;
    spins.reserve(bits.size());
    for (auto b : bits) {
        if (b > 1) {
            throw InvalidInput("bit value must be 0 or 1, got " + std::to_string(b));
        }
        spins.push_back(2 * static_cast<int>(b) - 1);
    }
    return SpinConfig(std::move(spins));
}

std::vector<std::uint8_t> spins_to_bits(const SpinConfig &spins) {
    std::vector<std::uint8_t> bits;
    bits.reserve(spins.size());
    for (int s : spins.values()) {
        bits.push_back(s > 0 ? 1 : 0);
    }
    return bits;
}

std::vector<std::uint8_t> bits_of(std::uint64_t value, std::size_t k, BitOrder order) {
    if (k > 63) {
        throw InvalidInput("bit width too large");
    }
    std::vector<std::uint8_t> bits(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t shift = order == BitOrder::MsbFirst ? k - 1 - i : i;
        bits[i] = static_cast<std::uint8_t>((value >> shift) & 1U);
    }
    return bits;
}

double evaluate_potential(const NeuralPotential &p, const SpinConfig &s) {
    if (p.arity() != s.size()) {
        throw InvalidInput("potential arity " + std::to_string(p.arity()) +
                           " does not match configuration length " + std::to_string(s.size()));
    }
    return affine_form(p, [&](std::size_t i) { return static_cast<double>(s[i]); });
}

double evaluate_on_bits(const NeuralPotential &p, std::span<const std::uint8_t> bits) {
    if (p.arity() != bits.size()) {
        throw InvalidInput("potential arity does not match input length");
    }
    for (auto b : bits) {
        if (b > 1) {
            throw InvalidInput("classical perceptron inputs must be bits");
        }
    }
    return affine_form(p, [&](std::size_t i) { return static_cast<double>(bits[i]); });
}

double evaluate_affine(const NeuralPotential &p, std::span<const double> inputs) {
    return affine_form(p, [&](std::size_t i) { return inputs[i]; });
}

std::vector<SpinConfig> enumerate_inputs(std::size_t k) {
    if (k < 1 || k > 16) {
        throw InvalidInput("input arity must be in [1, 16]");
    }
    std::vector<SpinConfig> configs;
    configs.reserve(std::size_t{1} << k);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
        configs.push_back(bits_to_spins(bits_of(v, k, BitOrder::MsbFirst)));
    }
    return configs;
}

NeuralPotential classical_to_spin(const NeuralPotential &p) {
    if (!p.multi_terms.empty()) {
        throw InvalidInput("bit-to-spin reparameterisation is only defined for linear potentials");
    }
    NeuralPotential q;
    q.linear_weights.reserve(p.arity());
    double shift = 0.0;
    for (double w : p.linear_weights) {
        q.linear_weights.push_back(w / 2.0);
        shift += w / 2.0;
    }
    q.bias = p.bias - shift;
    return q;
}

} // namespace qnn
