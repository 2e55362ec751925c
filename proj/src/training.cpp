#include "qnn/training.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qnn/errors.hpp"

namespace qnn {

namespace {

void check_set(const TrainedNetwork &net, const TrainingSet &set) {
    net.validate();
    if (set.empty()) {
        throw InvalidInput("training set is empty");
    }
    for (const auto &ex : set) {
        if (ex.bits.size() != net.arity) {
            throw InvalidInput("example input length " + std::to_string(ex.bits.size()) +
                               " does not match network arity " + std::to_string(net.arity));
        }
        if (ex.target.size() != net.output_count()) {
            throw InvalidInput("example target length does not match output count");
        }
        for (auto b : ex.bits) {
            if (b > 1) {
                throw InvalidInput("example inputs must be bits");
            }
        }
        for (auto t : ex.target) {
            if (t > 1) {
                throw InvalidInput("targets must be 0 or 1");
            }
        }
    }
}

std::vector<double> encode(std::span<const std::uint8_t> bits, InputEncoding encoding) {
    std::vector<double> s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        s[i] = encoding == InputEncoding::Spin ? 2.0 * bits[i] - 1.0 : static_cast<double>(bits[i]);
    }
    return s;
}

NetworkGradient zero_like(const TrainedNetwork &net) {
    NetworkGradient g = net.perceptrons;
    for (auto &p : g) {
        std::fill(p.linear_weights.begin(), p.linear_weights.end(), 0.0);
        p.bias = 0.0;
        for (auto &term : p.multi_terms) {
            term.weight = 0.0;
        }
    }
    return g;
}

NetworkGradient gradients_unchecked(const TrainedNetwork &net, const TrainingSet &set) {
    NetworkGradient grad = zero_like(net);
    const double scale =
        1.0 / (static_cast<double>(set.size()) * static_cast<double>(net.output_count()));
    for (const auto &ex : set) {
        const std::vector<double> s = encode(ex.bits, net.encoding);
        for (std::size_t i = 0; i < net.perceptrons.size(); ++i) {
            const auto &p = net.perceptrons[i];
            const double x = evaluate_affine(p, s);
            const double common = (activation(x) - ex.target[i]) * activation_derivative(x) * scale;
            auto &g = grad[i];
            for (std::size_t l = 0; l < s.size(); ++l) {
                g.linear_weights[l] += common * s[l];
            }
            g.bias -= common;
            for (std::size_t m = 0; m < p.multi_terms.size(); ++m) {
                double product = 1.0;
                for (std::size_t l : p.multi_terms[m].indices) {
                    product *= s[l];
                }
                g.multi_terms[m].weight += common * product;
            }
        }
    }
    return grad;
}

} // namespace

void TrainerConfig::validate() const {
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw InvalidInput("eta must be non-negative and finite");
    }
    if (max_epochs == 0) {
        throw InvalidInput("max_epochs must be positive");
    }
    if (!(cost_tolerance > 0.0) || !(init_range > 0.0) || !(plateau_epsilon > 0.0)) {
        throw InvalidInput("cost_tolerance, init_range and plateau_epsilon must be positive");
    }
    if (plateau_window == 0) {
        throw InvalidInput("plateau_window must be positive");
    }
}

void TrainedNetwork::validate() const {
    if (perceptrons.empty()) {
        throw InvalidInput("network has no perceptrons");
    }
    for (const auto &p : perceptrons) {
        if (p.arity() != arity) {
            throw InvalidInput("perceptron arity does not match network arity");
        }
        p.validate();
    }
}

std::vector<double> forward_network(const TrainedNetwork &net, const SpinConfig &s) {
    if (net.encoding != InputEncoding::Spin) {
        throw InvalidInput("forward_network needs a spin-encoded network");
    }
    if (s.size() != net.arity) {
        throw InvalidInput("configuration length does not match network arity");
    }
    std::vector<double> y;
    y.reserve(net.perceptrons.size());
    for (const auto &p : net.perceptrons) {
        y.push_back(activation(evaluate_potential(p, s)));
    }
    return y;
}

std::vector<double> forward_bits(const TrainedNetwork &net, std::span<const std::uint8_t> bits) {
    if (net.encoding == InputEncoding::Spin) {
        return forward_network(net, bits_to_spins(bits));
    }
    std::vector<double> y;
    y.reserve(net.perceptrons.size());
    for (const auto &p : net.perceptrons) {
        y.push_back(activation(evaluate_on_bits(p, bits)));
    }
    return y;
}

double cost(const TrainedNetwork &net, const TrainingSet &set) {
    check_set(net, set);
    double sum = 0.0;
    for (const auto &ex : set) {
        const std::vector<double> s = encode(ex.bits, net.encoding);
        for (std::size_t i = 0; i < net.perceptrons.size(); ++i) {
            const double err = activation(evaluate_affine(net.perceptrons[i], s)) - ex.target[i];
            sum += err * err;
        }
    }
    return sum / (2.0 * static_cast<double>(set.size()) * static_cast<double>(net.output_count()));
}

NetworkGradient quantum_gradients(const TrainedNetwork &net, const TrainingSet &set) {
    if (net.encoding != InputEncoding::Spin) {
        throw InvalidInput("quantum gradients need a spin-encoded network");
    }
    check_set(net, set);
    return gradients_unchecked(net, set);
}

NetworkGradient classical_gradients(const TrainedNetwork &net, const TrainingSet &set) {
    if (net.encoding != InputEncoding::Bit) {
        throw InvalidInput("classical gradients need a bit-encoded network");
    }
    check_set(net, set);
    return gradients_unchecked(net, set);
}

NetworkGradient gradients(const TrainedNetwork &net, const TrainingSet &set) {
    check_set(net, set);
    return gradients_unchecked(net, set);
}

TrainedNetwork epoch_update(const TrainedNetwork &net, const TrainingSet &set,
                            const TrainerConfig &config) {
    config.validate();
    const NetworkGradient grad = gradients(net, set);
    TrainedNetwork next = net;
    for (std::size_t i = 0; i < next.perceptrons.size(); ++i) {
        auto &p = next.perceptrons[i];
        const auto &g = grad[i];
        for (std::size_t l = 0; l < p.linear_weights.size(); ++l) {
            p.linear_weights[l] -= config.eta * g.linear_weights[l];
        }
        p.bias -= config.eta * g.bias;
        for (std::size_t m = 0; m < p.multi_terms.size(); ++m) {
            p.multi_terms[m].weight -= config.eta * g.multi_terms[m].weight;
        }
    }
    return next;
}

TrainResult train(const TrainedNetwork &initial, const TrainingSet &set,
                  const TrainerConfig &config) {
    config.validate();
    check_set(initial, set);
    TrainResult result{initial, {}};
    result.curve.costs.reserve(config.max_epochs);
    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        result.network = epoch_update(result.network, set, config);
        const double c = cost(result.network, set);
        result.curve.costs.push_back(c);
        result.network.epochs = epoch;
        if (c < config.cost_tolerance) {
            result.curve.epochs_to_tolerance = epoch;
            break;
        }
    }
    result.curve.plateau_value = detect_plateau(result.curve, config);
    return result;
}

std::optional<double> detect_plateau(const CostCurve &curve, std::size_t window, double epsilon) {
    if (window == 0 || curve.costs.size() <= window) {
        return std::nullopt;
    }
    const auto first = curve.costs.end() - static_cast<std::ptrdiff_t>(window);
    const auto [lo, hi] = std::minmax_element(first, curve.costs.end());
    if (*hi - *lo >= epsilon) {
        return std::nullopt;
    }
    double sum = 0.0;
    for (auto it = first; it != curve.costs.end(); ++it) {
        sum += *it;
    }
    return sum / static_cast<double>(window);
}

std::optional<double> detect_plateau(const CostCurve &curve, const TrainerConfig &config) {
    return detect_plateau(curve, config.plateau_window, config.plateau_epsilon);
}

TrainedNetwork initialize_network(const std::vector<NeuralPotential> &templates,
                                  InputEncoding encoding, const TrainerConfig &config) {
    config.validate();
    if (templates.empty()) {
        throw InvalidInput("no perceptron templates");
    }
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> draw(-config.init_range, config.init_range);
    TrainedNetwork net;
    net.arity = templates.front().arity();
    net.encoding = encoding;
    net.seed = config.seed;
    net.perceptrons = templates;
    for (auto &p : net.perceptrons) {
        for (auto &w : p.linear_weights) {
            w = draw(rng);
        }
        p.bias = draw(rng);
        for (auto &term : p.multi_terms) {
            term.weight = draw(rng);
        }
    }
    net.validate();
    return net;
}

} // namespace qnn
