#include "qnn/representability.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "qnn/errors.hpp"

namespace qnn {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Feature vector of one row: inputs, term products, then -1 for the bias.
std::vector<int> features(const NeuralPotential &tmpl, const std::vector<std::uint8_t> &bits) {
    std::vector<int> f;
    for (auto b : bits) {
        f.push_back(2 * b - 1);
    }
    for (const auto &term : tmpl.multi_terms) {
        int product = 1;
        for (std::size_t l : term.indices) {
            product *= 2 * bits[l] - 1;
        }
        f.push_back(product);
    }
    f.push_back(-1);
    return f;
}

/**
 * Phase one of the simplex method on  A theta >= 1  with theta free.
 * Columns: theta+ (d), theta- (d), surplus (m), artificial (m).
 * Returns theta when the artificial objective reaches zero.
 */
std::optional<std::vector<Rational>> phase_one(const std::vector<std::vector<int>> &a,
                                               std::size_t &pivots) {
    const std::size_t m = a.size();
    const std::size_t d = a.front().size();
    const std::size_t cols = 2 * d + 2 * m;
    const std::size_t rhs = cols;
    const std::size_t first_artificial = 2 * d + m;

    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols + 1));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            t[i][j] = a[i][j];
            t[i][d + j] = -a[i][j];
        }
        t[i][2 * d + i] = -1;
        t[i][first_artificial + i] = 1;
        t[i][rhs] = 1;
        basis[i] = first_artificial + i;
    }

    auto cost_of = [&](std::size_t j) { return j >= first_artificial ? 1 : 0; };

    while (true) {
        // Reduced costs; Bland: entering column is the lowest index with negative cost.
        std::optional<std::size_t> entering;
        for (std::size_t j = 0; j < cols && !entering; ++j) {
            Rational reduced = cost_of(j);
            for (std::size_t i = 0; i < m; ++i) {
                if (cost_of(basis[i]) != 0) {
                    reduced -= t[i][j];
                }
            }
            if (reduced < 0) {
                entering = j;
            }
        }
        if (!entering) {
            break;
        }
        const std::size_t e = *entering;

        // Ratio test, ties broken by the lowest basic index.
        std::optional<std::size_t> leave;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][e] > 0) {
                const Rational ratio = t[i][rhs] / t[i][e];
                if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        // The phase-one objective is bounded below by zero, so a pivot row exists.
        if (!leave) {
            throw std::logic_error("phase-one simplex found an unbounded direction");
        }

        const std::size_t r = *leave;
        const Rational pivot = t[r][e];
        for (auto &v : t[r]) {
            v /= pivot;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || t[i][e] == 0) {
                continue;
            }
            const Rational factor = t[i][e];
            for (std::size_t j = 0; j <= cols; ++j) {
                t[i][j] -= factor * t[r][j];
            }
        }
        basis[r] = e;
        ++pivots;
    }

    Rational objective = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= first_artificial) {
            objective += t[i][rhs];
        }
    }
    if (objective != 0) {
        return std::nullopt;
    }
    std::vector<Rational> theta(d, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < d) {
            theta[basis[i]] += t[i][rhs];
        } else if (basis[i] < 2 * d) {
            theta[basis[i] - d] -= t[i][rhs];
        }
    }
    return theta;
}

void check_output(const TaskSpec &task, std::size_t output) {
    task.validate();
    if (output >= task.output_count) {
        throw InvalidInput("output index " + std::to_string(output) + " out of range");
    }
}

} // namespace

std::vector<std::vector<int>> sign_constraints(const TaskSpec &task, std::size_t output) {
    check_output(task, output);
    std::vector<std::vector<int>> rows;
    for (const auto &ex : task.examples) {
        auto f = features(task.templates[output], ex.bits);
        const int sign = ex.target[output] != 0 ? 1 : -1;
        for (auto &v : f) {
            v *= sign;
        }
        rows.push_back(std::move(f));
    }
    return rows;
}

RepresentabilityResult check_exact_representability(const TaskSpec &task, std::size_t output) {
    if (task.input_count > 5) {
        throw InvalidInput("representability oracle supports at most 5 inputs");
    }
    const auto rows = sign_constraints(task, output);
    RepresentabilityResult result;
    const auto theta = phase_one(rows, result.pivots);
    if (!theta) {
        return result;
    }
    result.verdict = Verdict::Feasible;
    NeuralPotential w = task.templates[output];
    const std::size_t k = w.arity();
    for (std::size_t i = 0; i < k; ++i) {
        w.linear_weights[i] = (*theta)[i].convert_to<double>();
    }
    for (std::size_t m = 0; m < w.multi_terms.size(); ++m) {
        w.multi_terms[m].weight = (*theta)[k + m].convert_to<double>();
    }
    w.bias = theta->back().convert_to<double>();
    result.witness = std::move(w);
    return result;
}

double witness_cost(const TaskSpec &task, std::size_t output, const NeuralPotential &witness,
                    double scale) {
    check_output(task, output);
    NeuralPotential scaled = witness;
    for (auto &w : scaled.linear_weights) {
        w *= scale;
    }
    scaled.bias *= scale;
    for (auto &term : scaled.multi_terms) {
        term.weight *= scale;
    }
    double sum = 0.0;
    for (const auto &ex : task.examples) {
        const double err =
            activation(evaluate_potential(scaled, bits_to_spins(ex.bits))) - ex.target[output];
        sum += err * err;
    }
    return sum / (2.0 * static_cast<double>(task.examples.size()));
}

const char *to_string(Verdict verdict) {
    return verdict == Verdict::Feasible ? "feasible" : "infeasible";
}

} // namespace qnn
