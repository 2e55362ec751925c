#pragma once

/**
 * @file
 * The quantum layer. A dense statevector engine applies perceptron gates
 * (input-conditioned real rotations of an output qubit) and whole networks
 * of them; a single-qubit time integrator realises the activation by
 * adiabatically ramping the transverse field of
 *
 *     H(t) = (x sigma_z + Omega(t) sigma_x) / 2.
 *
 * Register layout: qubit 0 is the most significant bit of the basis index.
 * sigma_z is diag(-1, +1) in the (|0>, |1>) basis, so the excitation
 * probability of a qubit equals (1 + <sigma_z>) / 2.
 */

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qnn/core.hpp"

namespace qnn {

using Amplitude = std::complex<double>;

class Statevector {
  public:
    /// The all-|0> register on `qubits` qubits.
    explicit Statevector(std::size_t qubits);

    /// Takes ownership of amplitudes; the length must be a power of two >= 2.
    static Statevector from_amplitudes(std::vector<Amplitude> amplitudes);
    static Statevector basis(std::size_t qubits, std::uint64_t index);

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] std::span<Amplitude> amplitudes() noexcept { return amplitudes_; }

    /// Sum of squared magnitudes, accumulated in index order.
    [[nodiscard]] double norm_squared() const noexcept;

    /// Mask selecting `qubit` in a basis index.
    [[nodiscard]] std::uint64_t mask(std::size_t qubit) const;

  private:
    Statevector(std::size_t qubits, std::vector<Amplitude> amplitudes);

    std::size_t qubits_;
    std::vector<Amplitude> amplitudes_;
};

void apply_hadamard(Statevector &psi, std::size_t qubit);

/// Hadamard on qubit j of the all-|0> register of n qubits.
Statevector prepare_superposition(std::size_t n, std::size_t j);

/// Marginal probability of |1> on qubit j.
double excitation_probability(const Statevector &psi, std::size_t j);

/// Real amplitudes of a single qubit.
struct QubitState {
    double ground = 0.0;
    double excited = 0.0;
};

/// The +sqrt(x^2 + Omega^2)/2 eigenvector of H: (sqrt(1 - f(x/Omega)), sqrt(f(x/Omega))).
QubitState instantaneous_upper_eigenstate(double x, double omega);

enum class Ramp { Linear, Exponential };

/**
 * Transverse-field ramp Omega(t) from omega_start down to omega_end over
 * [0, t_final], integrated with a fixed step dt.
 *
 * default_for(x) gives a geometric ramp from 1e4 * max(1, |x|) down to 1.
 */
struct AdiabaticSchedule {
    double omega_start = 1e4;
    double omega_end = 1.0;
    double t_final = 200.0;
    double dt = 1e-3;
    Ramp ramp = Ramp::Exponential;

    /// Throws InvalidInput unless omega_start >= omega_end > 0, t_final > 0 and dt <= t_final / 1000.
    void validate() const;
    [[nodiscard]] double omega_at(double t) const;

    static AdiabaticSchedule default_for(double x);
};

struct AdiabaticOutcome {
    double excitation = 0.0;      ///< |<1|psi(t_final)>|^2
    double max_norm_drift = 0.0;  ///< max over steps of | ||psi||^2 - 1 |
    std::size_t steps = 0;
};

/**
 * Evolves |+> under H(t) with a fixed-step fourth-order commutator-free
 * Magnus integrator (two exact 2x2 exponentials per step).
 *
 * Throws ScheduleTooFast when |x| > omega_start / 10 and IntegratorError when
 * the norm drifts by more than 1e-6.
 */
AdiabaticOutcome adiabatic_evolve(double x, const AdiabaticSchedule &schedule);

/**
 * One perceptron of a network: `inputs[i]` is the register qubit read as
 * input i of the potential; an empty list means qubits 0..k-1.
 */
struct Perceptron {
    NeuralPotential potential;
    std::size_t target = 0;
    std::vector<std::size_t> inputs;
};

/**
 * Rotates the target qubit, conditioned on the basis state of the inputs,
 * by the real rotation taking |0> to sqrt(1 - f(x))|0> + sqrt(f(x))|1>.
 * In strict mode the target must be in |0> beforehand.
 */
Statevector apply_perceptron_gate(Statevector psi, const Perceptron &perceptron,
                                  bool strict = false);

/// Gate with inputs on qubits 0..k-1 of the register.
Statevector apply_perceptron_gate(Statevector psi, const NeuralPotential &p, std::size_t target,
                                  bool strict = false);

/// Applies the perceptrons in order. Targets must be distinct and no
/// perceptron may read the target of itself or a later one.
Statevector apply_network(Statevector psi, std::span<const Perceptron> perceptrons,
                          bool strict = false);

} // namespace qnn
