#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <stdexcept>

#include "qnn/core.hpp"
#include "qnn/training.hpp"

namespace qnn::test {

inline std::vector<std::uint8_t> random_bits(std::mt19937_64 &rng, std::size_t k) {
    std::bernoulli_distribution coin(0.5);
    std::vector<std::uint8_t> bits(k);
    for (auto &b : bits) {
        b = coin(rng) ? 1 : 0;
    }
    return bits;
}

// Random potential on k inputs with up to three random product terms.
inline NeuralPotential random_potential(std::mt19937_64 &rng, std::size_t k, double range = 2.0,
                                        bool with_terms = true) {
    std::uniform_real_distribution<double> u(-range, range);
    NeuralPotential p;
    for (std::size_t i = 0; i < k; ++i) {
        p.linear_weights.push_back(u(rng));
    }
    p.bias = u(rng);
    if (with_terms && k >= 2) {
        std::uniform_int_distribution<int> count(0, 3);
        const int n = count(rng);
        for (int t = 0; t < n; ++t) {
            std::vector<std::size_t> idx;
            while (idx.size() < 2) {
                idx.clear();
                for (std::size_t i = 0; i < k; ++i) {
                    if (std::bernoulli_distribution(0.5)(rng)) {
                        idx.push_back(i);
                    }
                }
            }
            p.multi_terms.push_back({idx, u(rng)});
        }
    }
    return p;
}

// Direct expansion of the potential, summed in reverse order.
inline double reference_potential(const NeuralPotential &p, const std::vector<int> &s) {
    long double x = -static_cast<long double>(p.bias);
    for (std::size_t m = p.multi_terms.size(); m-- > 0;) {
        long double prod = p.multi_terms[m].weight;
        for (auto l : p.multi_terms[m].indices) {
            prod *= s[l];
        }
        x += prod;
    }
    for (std::size_t i = p.linear_weights.size(); i-- > 0;) {
        x += static_cast<long double>(p.linear_weights[i]) * s[i];
    }
    return static_cast<double>(x);
}

inline long double reference_activation(long double x) {
    return 0.5L * (1.0L + x / std::sqrt(1.0L + x * x));
}

inline double max_abs(const std::vector<double> &v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

// Parameter j of the network in the order linear weights, bias, terms per perceptron.
inline double &parameter(TrainedNetwork &net, std::size_t j) {
    for (auto &p : net.perceptrons) {
        if (j < p.linear_weights.size()) {
            return p.linear_weights[j];
        }
        j -= p.linear_weights.size();
        if (j == 0) {
            return p.bias;
        }
        --j;
        if (j < p.multi_terms.size()) {
            return p.multi_terms[j].weight;
        }
        j -= p.multi_terms.size();
    }
    throw std::out_of_range("parameter index");
}

inline std::size_t parameter_count(const TrainedNetwork &net) {
    std::size_t n = 0;
    for (const auto &p : net.perceptrons) {
        n += p.parameter_count();
    }
    return n;
}

inline std::vector<double> flatten(const NetworkGradient &g) {
    std::vector<double> v;
    for (const auto &p : g) {
        v.insert(v.end(), p.linear_weights.begin(), p.linear_weights.end());
        v.push_back(p.bias);
        for (const auto &t : p.multi_terms) {
            v.push_back(t.weight);
        }
    }
    return v;
}

// Cost recomputed from scratch: inputs encoded by hand, potential expanded
// directly and the sigmoid evaluated in long double.
inline double reference_cost(const TrainedNetwork &net, const TrainingSet &set) {
    long double sum = 0.0L;
    for (const auto &ex : set) {
        std::vector<int> s;
        for (auto b : ex.bits) {
            s.push_back(net.encoding == InputEncoding::Spin ? 2 * b - 1 : b);
        }
        for (std::size_t i = 0; i < net.perceptrons.size(); ++i) {
            const long double y =
                reference_activation(reference_potential(net.perceptrons[i], s));
            const long double e = y - ex.target[i];
            sum += e * e;
        }
    }
    return static_cast<double>(sum / (2.0L * set.size() * net.perceptrons.size()));
}

inline std::vector<double> finite_difference(const TrainedNetwork &net, const TrainingSet &set,
                                      double h) {
    std::vector<double> fd;
    for (std::size_t j = 0; j < parameter_count(net); ++j) {
        auto plus = net;
        auto minus = net;
        parameter(plus, j) += h;
        parameter(minus, j) -= h;
        fd.push_back((reference_cost(plus, set) - reference_cost(minus, set)) / (2.0 * h));
    }
    return fd;
}

inline double relative_gradient_error(const TrainedNetwork &net, const TrainingSet &set) {
    const auto analytic = flatten(gradients(net, set));
    const auto fd = finite_difference(net, set, 1e-6);
    std::vector<double> diff(fd.size());
    for (std::size_t j = 0; j < fd.size(); ++j) {
        diff[j] = analytic[j] - fd[j];
    }
    return max_abs(diff) / max_abs(fd);
}

} // namespace qnn::test
