#pragma once

/**
 * @file
 * Experiment runner: resolves a config into a task, trains one network per
 * seed (seeds run concurrently, each with its own generator) and writes
 * per-seed `epoch,cost` CSV curves plus a JSON summary.
 *
 * Outputs are a pure function of the config; wall-clock times are kept in
 * memory only so that repeated runs produce byte-identical files.
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnn/representability.hpp"
#include "qnn/tasks.hpp"
#include "qnn/training.hpp"

namespace qnn {

enum class Mode { Quantum, Classical };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct ExperimentConfig {
    std::string task = "xor";
    Mode mode = Mode::Quantum;
    BitOrder bit_order = BitOrder::MsbFirst;
    std::optional<TemplateVariant> template_variant; ///< overrides the task id suffix
    double eta = 1.5;
    std::vector<std::uint64_t> seeds{1};
    std::size_t max_epochs = 10000;
    double cost_tolerance = 0.01;
    double init_range = 0.5;
    std::size_t plateau_window = 200;
    double plateau_epsilon = 1e-4;
    std::string output_dir;
    bool require_convergence = false;

    /// Throws ConfigError on an unresolvable task or non-positive numbers.
    void validate() const;

    /// The task to train. Classical mode always uses the linear template:
    /// the classical perceptron has no product terms.
    [[nodiscard]] TaskSpec resolve_task() const;
    [[nodiscard]] TrainerConfig trainer_config(std::uint64_t seed) const;

    /// Reads the keys of this struct; missing keys keep their current values.
    void merge_json(const nlohmann::json &j);
    [[nodiscard]] nlohmann::json to_json() const;
};

ExperimentConfig load_config(const std::filesystem::path &path);

struct SeedRun {
    std::uint64_t seed = 0;
    TrainedNetwork network;
    CostCurve curve;
    double final_cost = 0.0;
    double seconds = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::string task_id;
    std::vector<SeedRun> runs; ///< same order as config.seeds
    std::vector<Verdict> oracle_verdicts; ///< per output, for the trained template

    /// Lower middle order statistic of epochs_to_tolerance, counting
    /// non-converged seeds as infinite; empty when that statistic is infinite.
    [[nodiscard]] std::optional<std::size_t> median_epochs_to_tolerance() const;
    [[nodiscard]] bool all_converged() const;
};

ExperimentResult run_experiment(const ExperimentConfig &config);

/// Writes `cost_seed<seed>.csv` per run into `dir` and returns the paths.
std::vector<std::filesystem::path> emit_cost_curve_csv(const ExperimentResult &result,
                                                       const std::filesystem::path &dir);
void write_cost_curve_csv(const CostCurve &curve, std::ostream &out);

nlohmann::json summary_json(const ExperimentResult &result);
void emit_summary(const ExperimentResult &result, const std::filesystem::path &path);

nlohmann::json potential_to_json(const NeuralPotential &p);
NeuralPotential potential_from_json(const nlohmann::json &j);

/// Networks reconstructed from a summary file, one per seed.
struct LoadedSummary {
    std::string task_id;
    Mode mode = Mode::Quantum;
    BitOrder bit_order = BitOrder::MsbFirst;
    std::vector<TrainedNetwork> networks;
    std::vector<double> final_costs;

    [[nodiscard]] TaskSpec task() const;
};

LoadedSummary load_summary(const std::filesystem::path &path);

/// `cli` entry point: returns the process exit code (0 ok, 1 config error,
/// 2 non-convergence or failed verification, 3 I/O error).
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace qnn
