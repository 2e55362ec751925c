#pragma once

/**
 * @file
 * Full-batch gradient descent for single-layer networks of perceptrons
 * (one perceptron per output, no hidden layers), both the quantum path on
 * spin inputs and the classical baseline on {0,1} inputs.
 *
 * Cost with N examples and k outputs:
 *
 *     C = 1/(2 N k) sum_n sum_i (y_i - t_i)^2,   y_i = f(x_i).
 *
 * Gradients are exact derivatives of C; parameters move by -eta * gradient.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qnn/core.hpp"

namespace qnn {

/// How bit inputs are fed to the potentials.
enum class InputEncoding {
    Spin, ///< quantum perceptron: s = 2b - 1
    Bit,  ///< classical perceptron: s = b
};

struct TrainingExample {
    std::vector<std::uint8_t> bits;
    std::vector<std::uint8_t> target;
};

using TrainingSet = std::vector<TrainingExample>;

struct TrainerConfig {
    double eta = 1.5;
    std::size_t max_epochs = 10000;
    double cost_tolerance = 0.01;
    double init_range = 0.5;
    std::uint64_t seed = 1;
    std::size_t plateau_window = 200;
    double plateau_epsilon = 1e-4;

    /// Throws InvalidInput on non-positive fields (eta may be 0 for a no-op step).
    void validate() const;
};

struct TrainedNetwork {
    std::vector<NeuralPotential> perceptrons;
    std::size_t arity = 0;
    InputEncoding encoding = InputEncoding::Spin;
    std::string task;
    std::uint64_t seed = 0;
    std::size_t epochs = 0;

    [[nodiscard]] std::size_t output_count() const noexcept { return perceptrons.size(); }
    void validate() const;
};

/// Same shape as the network: one potential-shaped gradient per perceptron.
using NetworkGradient = std::vector<NeuralPotential>;

struct CostCurve {
    std::vector<double> costs; ///< costs[e - 1] is the cost after epoch e
    std::optional<std::size_t> epochs_to_tolerance;
    std::optional<double> plateau_value;
};

struct TrainResult {
    TrainedNetwork network;
    CostCurve curve;
};

/// Outputs f(x_i) on a spin configuration. Requires spin encoding.
std::vector<double> forward_network(const TrainedNetwork &net, const SpinConfig &s);

/// Outputs on a bit string, honouring the network's encoding.
std::vector<double> forward_bits(const TrainedNetwork &net, std::span<const std::uint8_t> bits);

double cost(const TrainedNetwork &net, const TrainingSet &set);

NetworkGradient quantum_gradients(const TrainedNetwork &net, const TrainingSet &set);
NetworkGradient classical_gradients(const TrainedNetwork &net, const TrainingSet &set);
/// Dispatches on net.encoding.
NetworkGradient gradients(const TrainedNetwork &net, const TrainingSet &set);

/// One full-batch step: every parameter decreases by eta times its gradient.
TrainedNetwork epoch_update(const TrainedNetwork &net, const TrainingSet &set,
                            const TrainerConfig &config);

/// Epoch updates until the cost drops below cost_tolerance or max_epochs is hit.
TrainResult train(const TrainedNetwork &initial, const TrainingSet &set,
                  const TrainerConfig &config);

/**
 * Mean of the last `window` costs when their spread (max - min) is below
 * epsilon; empty if the curve has no more than `window` entries.
 */
std::optional<double> detect_plateau(const CostCurve &curve, std::size_t window, double epsilon);
std::optional<double> detect_plateau(const CostCurve &curve, const TrainerConfig &config);

/**
 * Copies the templates and draws every parameter uniformly from
 * [-init_range, init_range]; per perceptron the order is linear weights,
 * bias, then multi-qubit weights.
 */
TrainedNetwork initialize_network(const std::vector<NeuralPotential> &templates,
                                  InputEncoding encoding, const TrainerConfig &config);

} // namespace qnn
