#pragma once

/**
 * @file
 * Domain types shared by every layer of the simulator: spin configurations,
 * neural potentials with multi-qubit product terms and the sigmoid
 * activation realised by adiabatic passage.
 *
 * Qubit indices are 0-based throughout: input qubit 0 is the first input a1.
 * Bit b maps to spin 2b-1, i.e. |0> has <sigma_z> = -1 and |1> has +1.
 */

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace qnn {

/// Which end of an integer's binary expansion lands on input qubit 0.
enum class BitOrder { MsbFirst, LsbFirst };

/// Eigenvalues of sigma_z on the input register, one entry per qubit.
class SpinConfig {
  public:
    SpinConfig() = default;
    explicit SpinConfig(std::vector<int> spins);
    SpinConfig(std::initializer_list<int> spins);

    [[nodiscard]] std::size_t size() const noexcept { return spins_.size(); }
    [[nodiscard]] int operator[](std::size_t i) const { return spins_[i]; }
    [[nodiscard]] std::span<const int> values() const noexcept { return spins_; }

    bool operator==(const SpinConfig &) const = default;

  private:
    std::vector<int> spins_;
};

/// A product of sigma_z over two or more distinct input qubits.
struct MultiQubitTerm {
    std::vector<std::size_t> indices;
    double weight = 0.0;

    bool operator==(const MultiQubitTerm &) const = default;
};

/**
 * x = sum_i w_i s_i + sum_m w_m prod_{l in m} s_l - b.
 *
 * With no multi-qubit terms this is the standard spin-spin potential.
 */
struct NeuralPotential {
    std::vector<double> linear_weights;
    double bias = 0.0;
    std::vector<MultiQubitTerm> multi_terms;

    [[nodiscard]] std::size_t arity() const noexcept { return linear_weights.size(); }
    /// Number of trainable scalars: k linear weights, the bias and one per term.
    [[nodiscard]] std::size_t parameter_count() const noexcept {
        return linear_weights.size() + 1 + multi_terms.size();
    }

    /// Throws InvalidInput unless every term has >= 2 sorted, distinct, in-range indices.
    void validate() const;

    bool operator==(const NeuralPotential &) const = default;
};

/// A potential with the given arity and term index sets, every weight zero.
NeuralPotential zero_potential(std::size_t arity,
                               const std::vector<std::vector<std::size_t>> &terms = {});

enum class ActivationKind { SigmoidAdiabatic };

/// Pluggable activation; only the adiabatic sigmoid is provided.
class Activation {
  public:
    explicit Activation(ActivationKind kind = ActivationKind::SigmoidAdiabatic) : kind_(kind) {}

    [[nodiscard]] ActivationKind kind() const noexcept { return kind_; }
    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double derivative(double x) const;

  private:
    ActivationKind kind_;
};

/// f(x) = (1 + x / sqrt(1 + x^2)) / 2. Throws InvalidInput on non-finite x.
double activation(double x);
/// f'(x) = 1 / (2 (1 + x^2)^{3/2}).
double activation_derivative(double x);

SpinConfig bits_to_spins(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> spins_to_bits(const SpinConfig &spins);

/// The k-bit expansion of value with the requested bit order.
std::vector<std::uint8_t> bits_of(std::uint64_t value, std::size_t k,
                                  BitOrder order = BitOrder::MsbFirst);

/// Potential value on a spin configuration. Linear terms are summed in index
/// order, then multi-qubit terms in declaration order, then the bias is subtracted.
double evaluate_potential(const NeuralPotential &p, const SpinConfig &s);

/// Same affine form evaluated on classical {0,1} inputs (the classical perceptron).
double evaluate_on_bits(const NeuralPotential &p, std::span<const std::uint8_t> bits);

/// Unchecked affine form on arbitrary real inputs; used by the training loops.
double evaluate_affine(const NeuralPotential &p, std::span<const double> inputs);

/// All 2^k spin configurations in ascending order of their bit strings, a1 most significant.
std::vector<SpinConfig> enumerate_inputs(std::size_t k);

/**
 * Maps a linear classical perceptron over bits onto the spin-basis potential
 * that takes the same value on every input: w -> w/2, b -> b - sum(w)/2.
 * Throws InvalidInput if p has multi-qubit terms.
 */
NeuralPotential classical_to_spin(const NeuralPotential &p);

} // namespace qnn
