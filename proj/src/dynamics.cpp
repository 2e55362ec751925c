#include "qnn/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "qnn/errors.hpp"

namespace qnn {

namespace {

constexpr double kIntegratorDriftLimit = 1e-6;
constexpr double kStrictTolerance = 1e-12;

void check_qubit(const Statevector &psi, std::size_t j) {
    if (j >= psi.qubit_count()) {
        throw InvalidInput("qubit index " + std::to_string(j) + " out of range for " +
                           std::to_string(psi.qubit_count()) + " qubits");
    }
}

// exp(-i (a_x sigma_x + a_z sigma_z)) applied to (g, e), with sigma_z = diag(-1, +1).
void apply_su2(double ax, double az, Amplitude &g, Amplitude &e) {
    const double r = std::hypot(ax, az);
    if (r == 0.0) {
        return;
    }
    const double c = std::cos(r);
    const double s = std::sin(r) / r;
    const Amplitude d00{c, s * az};
    const Amplitude d11{c, -s * az};
    const Amplitude off{0.0, -s * ax};
    const Amplitude g1 = d00 * g + off * e;
    const Amplitude e1 = off * g + d11 * e;
    g = g1;
    e = e1;
}

std::vector<std::size_t> resolved_inputs(const Perceptron &perceptron) {
    if (!perceptron.inputs.empty()) {
        return perceptron.inputs;
    }
    std::vector<std::size_t> inputs(perceptron.potential.arity());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        inputs[i] = i;
    }
    return inputs;
}

} // namespace

Statevector::Statevector(std::size_t qubits) : qubits_(qubits) {
    if (qubits < 1 || qubits > 30) {
        throw InvalidInput("qubit count must be in [1, 30]");
    }
    amplitudes_.assign(std::size_t{1} << qubits, Amplitude{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

Statevector::Statevector(std::size_t qubits, std::vector<Amplitude> amplitudes)
    : qubits_(qubits), amplitudes_(std::move(amplitudes)) {}

Statevector Statevector::from_amplitudes(std::vector<Amplitude> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw InvalidInput("amplitude count must be a power of two >= 2");
    }
    return {static_cast<std::size_t>(std::countr_zero(dim)), std::move(amplitudes)};
}

Statevector Statevector::basis(std::size_t qubits, std::uint64_t index) {
    Statevector psi(qubits);
    if (index >= psi.dimension()) {
        throw InvalidInput("basis index out of range");
    }
    psi.amplitudes_[0] = 0.0;
    psi.amplitudes_[index] = 1.0;
    return psi;
}

double Statevector::norm_squared() const noexcept {
    double sum = 0.0;
    for (const auto &a : amplitudes_) {
        sum += std::norm(a);
    }
    return sum;
}

std::uint64_t Statevector::mask(std::size_t qubit) const {
    if (qubit >= qubits_) {
        throw InvalidInput("qubit index out of range");
    }
    return std::uint64_t{1} << (qubits_ - 1 - qubit);
}

void apply_hadamard(Statevector &psi, std::size_t qubit) {
    check_qubit(psi, qubit);
    const std::uint64_t m = psi.mask(qubit);
    auto amps = psi.amplitudes();
    const double h = std::numbers::sqrt2 / 2.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & m) != 0) {
            continue;
        }
        const Amplitude a0 = amps[i];
        const Amplitude a1 = amps[i | m];
        amps[i] = h * (a0 + a1);
        amps[i | m] = h * (a0 - a1);
    }
}

Statevector prepare_superposition(std::size_t n, std::size_t j) {
    Statevector psi(n);
    apply_hadamard(psi, j);
    return psi;
}

double excitation_probability(const Statevector &psi, std::size_t j) {
    check_qubit(psi, j);
    const std::uint64_t m = psi.mask(j);
    const auto amps = psi.amplitudes();
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & m) != 0) {
            p += std::norm(amps[i]);
        }
    }
    return p;
}

QubitState instantaneous_upper_eigenstate(double x, double omega) {
    if (!(omega > 0.0)) {
        throw InvalidInput("omega must be positive");
    }
    const double scaled = x / omega;
    // 1 - f(u) == f(-u), evaluated directly to keep precision in the tails.
    return {std::sqrt(activation(-scaled)), std::sqrt(activation(scaled))};
}

void AdiabaticSchedule::validate() const {
    if (!(omega_end > 0.0) || !(omega_start >= omega_end) || !std::isfinite(omega_start)) {
        throw InvalidInput("schedule requires omega_start >= omega_end > 0");
    }
    if (!(t_final > 0.0) || !(dt > 0.0) || !std::isfinite(t_final)) {
        throw InvalidInput("schedule requires positive t_final and dt");
    }
    if (dt > t_final / 1000.0 * (1.0 + 1e-12)) {
        throw InvalidInput("schedule requires dt <= t_final / 1000");
    }
}

double AdiabaticSchedule::omega_at(double t) const {
    const double tau = std::clamp(t / t_final, 0.0, 1.0);
    switch (ramp) {
    case Ramp::Linear:
        return omega_start + (omega_end - omega_start) * tau;
    case Ramp::Exponential:
        return omega_start * std::pow(omega_end / omega_start, tau);
    }
    throw InvalidInput("unknown ramp");
}

AdiabaticSchedule AdiabaticSchedule::default_for(double x) {
    AdiabaticSchedule s;
    s.omega_start = 1e4 * std::max(1.0, std::abs(x));
    return s;
}

AdiabaticOutcome adiabatic_evolve(double x, const AdiabaticSchedule &schedule) {
    schedule.validate();
    if (!std::isfinite(x)) {
        throw InvalidInput("potential value must be finite");
    }
    if (std::abs(x) > schedule.omega_start / 10.0) {
        throw ScheduleTooFast("|x| exceeds omega_start / 10; the initial |+> is not adiabatic");
    }

    // Fourth-order commutator-free Magnus: two Gauss nodes, two exponentials.
    const double sqrt3 = std::numbers::sqrt3;
    const double node1 = 0.5 - sqrt3 / 6.0;
    const double node2 = 0.5 + sqrt3 / 6.0;
    const double alpha1 = 0.25 - sqrt3 / 6.0;
    const double alpha2 = 0.25 + sqrt3 / 6.0;

    const auto steps = static_cast<std::size_t>(std::llround(schedule.t_final / schedule.dt));
    const double h = schedule.t_final / static_cast<double>(steps);

    Amplitude g{std::numbers::sqrt2 / 2.0, 0.0};
    Amplitude e = g;
    AdiabaticOutcome out;
    out.steps = steps;
    // The x sigma_z weight of each exponential is (alpha1 + alpha2) x / 2 = x / 4.
    const double az = 0.5 * h * x * (alpha1 + alpha2);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * h;
        const double omega1 = schedule.omega_at(t + node1 * h);
        const double omega2 = schedule.omega_at(t + node2 * h);
        apply_su2(0.5 * h * (alpha2 * omega1 + alpha1 * omega2), az, g, e);
        apply_su2(0.5 * h * (alpha1 * omega1 + alpha2 * omega2), az, g, e);

        const double drift = std::abs(std::norm(g) + std::norm(e) - 1.0);
        out.max_norm_drift = std::max(out.max_norm_drift, drift);
        if (drift > kIntegratorDriftLimit) {
            throw IntegratorError("norm drift " + std::to_string(drift) + " at step " +
                                  std::to_string(n));
        }
    }
    out.excitation = std::norm(e);
    return out;
}

Statevector apply_perceptron_gate(Statevector psi, const Perceptron &perceptron, bool strict) {
    const auto &p = perceptron.potential;
    p.validate();
    const std::vector<std::size_t> inputs = resolved_inputs(perceptron);
    if (inputs.size() != p.arity()) {
        throw InvalidWiring("input wiring length does not match potential arity");
    }
    check_qubit(psi, perceptron.target);
    for (std::size_t q : inputs) {
        check_qubit(psi, q);
        if (q == perceptron.target) {
            throw InvalidWiring("target qubit " + std::to_string(q) + " is also an input");
        }
    }
    if (strict && excitation_probability(psi, perceptron.target) > kStrictTolerance) {
        throw InvalidInput("strict mode: target qubit is not in |0>");
    }

    // Rotation table indexed by the input pattern (input 0 most significant).
    const std::size_t k = inputs.size();
    if (k > 20) {
        throw InvalidInput("too many perceptron inputs");
    }
    std::vector<double> cos_half(std::size_t{1} << k);
    std::vector<double> sin_half(cos_half.size());
    std::vector<int> spins(k);
    for (std::uint64_t pattern = 0; pattern < cos_half.size(); ++pattern) {
        for (std::size_t i = 0; i < k; ++i) {
            spins[i] = ((pattern >> (k - 1 - i)) & 1U) != 0 ? 1 : -1;
        }
        const double x = evaluate_potential(p, SpinConfig(spins));
        cos_half[pattern] = std::sqrt(activation(-x));
        sin_half[pattern] = std::sqrt(activation(x));
    }

    std::vector<std::uint64_t> input_masks(k);
    for (std::size_t i = 0; i < k; ++i) {
        input_masks[i] = psi.mask(inputs[i]);
    }
    const std::uint64_t tmask = psi.mask(perceptron.target);
    auto amps = psi.amplitudes();
    for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
        if ((idx & tmask) != 0) {
            continue;
        }
        std::uint64_t pattern = 0;
        for (std::size_t i = 0; i < k; ++i) {
            pattern = (pattern << 1) | ((idx & input_masks[i]) != 0 ? 1U : 0U);
        }
        const double c = cos_half[pattern];
        const double s = sin_half[pattern];
        const Amplitude a0 = amps[idx];
        const Amplitude a1 = amps[idx | tmask];
        amps[idx] = c * a0 - s * a1;
        amps[idx | tmask] = s * a0 + c * a1;
    }
    return psi;
}

Statevector apply_perceptron_gate(Statevector psi, const NeuralPotential &p, std::size_t target,
                                  bool strict) {
    return apply_perceptron_gate(std::move(psi), Perceptron{p, target, {}}, strict);
}

Statevector apply_network(Statevector psi, std::span<const Perceptron> perceptrons, bool strict) {
    std::set<std::size_t> targets;
    for (const auto &perceptron : perceptrons) {
        if (!targets.insert(perceptron.target).second) {
            throw InvalidWiring("duplicate target qubit " + std::to_string(perceptron.target));
        }
    }
    // A perceptron may not read a qubit written by itself or a later perceptron.
    for (std::size_t j = 0; j < perceptrons.size(); ++j) {
        for (std::size_t q : resolved_inputs(perceptrons[j])) {
            for (std::size_t later = j; later < perceptrons.size(); ++later) {
                if (perceptrons[later].target == q) {
                    throw InvalidWiring("perceptron " + std::to_string(j) + " reads qubit " +
                                        std::to_string(q) + " before it is computed");
                }
            }
        }
    }
    for (const auto &perceptron : perceptrons) {
        psi = apply_perceptron_gate(std::move(psi), perceptron, strict);
    }
    return psi;
}

} // namespace qnn
