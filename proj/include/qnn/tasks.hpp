#pragma once

/**
 * @file
 * Benchmark truth-table tasks and their potential templates.
 *
 * Task ids: `xor`, `prime3`, `prime4`, `prime5`, `cnot`, `toffoli`,
 * `fredkin`, optionally suffixed with `:paper` (default), `:extended` or
 * `:linear` (every multi-qubit term removed, i.e. the standard two-qubit
 * interaction network).
 */

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qnn/core.hpp"
#include "qnn/training.hpp"

namespace qnn {

enum class TemplateVariant { Paper, Extended, Linear };
enum class GateKind { Cnot, Toffoli, Fredkin };

struct TaskSpec {
    std::string name; ///< base name, e.g. "toffoli"
    TemplateVariant variant = TemplateVariant::Paper;
    BitOrder bit_order = BitOrder::MsbFirst;
    std::size_t input_count = 0;
    std::size_t output_count = 0;
    TrainingSet examples;                   ///< one row per input, 2^input_count rows
    std::vector<NeuralPotential> templates; ///< one per output, all weights zero

    /// "name:variant", e.g. "fredkin:extended".
    [[nodiscard]] std::string id() const;
    void validate() const;
};

bool is_prime(std::uint64_t n);

TaskSpec xor_task(TemplateVariant variant = TemplateVariant::Paper);

/// Target 1 iff the integer encoded by the row is prime. Row n encodes the
/// integer n, laid onto the qubits in the given bit order.
TaskSpec prime_task(unsigned bits, BitOrder order = BitOrder::MsbFirst,
                    TemplateVariant variant = TemplateVariant::Paper);

TaskSpec gate_task(GateKind gate, TemplateVariant variant = TemplateVariant::Paper);

/// Resolves a task id; throws ConfigError for unknown names or suffixes.
TaskSpec make_task(std::string_view id, BitOrder order = BitOrder::MsbFirst);

/// Replaces the variant of a task id ("cnot:paper" + Linear -> "cnot:linear").
TaskSpec with_variant(const TaskSpec &task, TemplateVariant variant);

std::string_view to_string(TemplateVariant variant);
std::string_view to_string(BitOrder order);
TemplateVariant parse_variant(std::string_view text);
BitOrder parse_bit_order(std::string_view text);

struct RowCheck {
    std::vector<std::uint8_t> input;
    std::vector<std::uint8_t> target;
    std::vector<double> outputs;
    bool pass = false;
};

struct TruthTableReport {
    std::vector<RowCheck> rows;
    double max_deviation = 0.0; ///< max |y - t| over all rows and outputs

    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] std::size_t failures() const;
};

/// Rounds each output at `threshold` (strictly greater means 1) and compares to the targets.
TruthTableReport verify_truth_table(const TrainedNetwork &net, const TaskSpec &task,
                                    double threshold = 0.5);

/**
 * Same check through the statevector engine: inputs on qubits 0..k-1 in
 * the basis state of the row, output i on qubit k+i, probabilities read as
 * excitation probabilities. Bit-encoded networks are mapped to spin
 * potentials first.
 */
TruthTableReport verify_truth_table_statevector(const TrainedNetwork &net, const TaskSpec &task,
                                                double threshold = 0.5);

} // namespace qnn
