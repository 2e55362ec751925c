#pragma once

/**
 * @file
 * Exact sign-representability of a truth-table output by a potential template.
 *
 * A template can drive the cost to zero (by scaling its weights) exactly
 * when some weights give x(s) the sign of the +-1 target on every row. With
 * features F_n = (s_1..s_k, products..., -1) and parameters theta =
 * (w_1..w_k, w_m..., b) this is feasibility of the system
 *
 *     (2 t_n - 1) F_n . theta >= 1   for every row n,
 *
 * decided here with a phase-one simplex in exact rational arithmetic
 * using Bland's rule, so the verdict is deterministic and free of rounding.
 */

#include <cstddef>
#include <optional>
#include <vector>

#include "qnn/core.hpp"
#include "qnn/tasks.hpp"

namespace qnn {

enum class Verdict { Feasible, Infeasible };

struct RepresentabilityResult {
    Verdict verdict = Verdict::Infeasible;
    /// Weights with margin >= 1 on every row; present iff feasible.
    std::optional<NeuralPotential> witness;
    std::size_t pivots = 0;

    [[nodiscard]] bool feasible() const noexcept { return verdict == Verdict::Feasible; }
};

/// Decides whether output `output` of the task is exactly representable by
/// its template. Requires input_count <= 5; throws InvalidInput otherwise.
RepresentabilityResult check_exact_representability(const TaskSpec &task, std::size_t output);

/// Margin system rows (2 t_n - 1) F_n for one output, in row order.
std::vector<std::vector<int>> sign_constraints(const TaskSpec &task, std::size_t output);

/// Single-output cost of `witness` scaled by `scale` on the task rows.
double witness_cost(const TaskSpec &task, std::size_t output, const NeuralPotential &witness,
                    double scale);

const char *to_string(Verdict verdict);

} // namespace qnn
