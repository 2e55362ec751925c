#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qnn/dynamics.hpp"
#include "qnn/errors.hpp"
#include "qnn/harness.hpp"

namespace qnn {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitIo = 3;

// "1,2,5-8" -> {1,2,5,6,7,8}
std::vector<std::uint64_t> parse_seed_list(const std::string &text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        try {
            const auto dash = item.find('-', 1);
            if (dash == std::string::npos) {
                seeds.push_back(std::stoull(item));
                continue;
            }
            const auto lo = std::stoull(item.substr(0, dash));
            const auto hi = std::stoull(item.substr(dash + 1));
            if (hi < lo) {
                throw ConfigError("empty seed range '" + item + "'");
            }
            for (auto s = lo; s <= hi; ++s) {
                seeds.push_back(s);
            }
        } catch (const std::logic_error &) {
            throw ConfigError("bad seed list entry '" + item + "'");
        }
    }
    if (seeds.empty()) {
        throw ConfigError("empty seed list");
    }
    return seeds;
}

struct TrainFlags {
    std::string config_path;
    std::string task;
    std::string mode;
    std::string template_variant;
    std::string bit_order;
    double eta = 0.0;
    std::uint64_t seed = 0;
    std::string seeds;
    std::size_t max_epochs = 0;
    double tol = 0.0;
    double init_range = 0.0;
    std::size_t plateau_window = 0;
    double plateau_epsilon = 0.0;
    std::string out;
    bool require_convergence = false;
};

void add_train_flags(CLI::App *cmd, TrainFlags &f) {
    cmd->add_option("--config", f.config_path, "JSON experiment config (flags override it)");
    cmd->add_option("--task", f.task, "xor, prime3..5, cnot, toffoli, fredkin[:paper|:extended|:linear]");
    cmd->add_option("--mode", f.mode, "quantum or classical");
    cmd->add_option("--template", f.template_variant, "paper, extended or linear");
    cmd->add_option("--bit-order", f.bit_order, "msb or lsb (integer encoding of prime tasks)");
    cmd->add_option("--eta", f.eta, "learning rate");
    cmd->add_option("--seed", f.seed, "single seed");
    cmd->add_option("--seeds", f.seeds, "seed list, e.g. 1-20 or 3,5,8");
    cmd->add_option("--max-epochs", f.max_epochs, "epoch budget");
    cmd->add_option("--tol", f.tol, "cost tolerance");
    cmd->add_option("--init-range", f.init_range, "uniform initialisation half-width");
    cmd->add_option("--plateau-window", f.plateau_window, "plateau detector window");
    cmd->add_option("--plateau-epsilon", f.plateau_epsilon, "plateau detector spread");
    cmd->add_option("--out", f.out, "output directory for CSV curves and summary.json");
    cmd->add_flag("--require-convergence", f.require_convergence,
                  "exit 2 unless the run reaches the tolerance");
}

ExperimentConfig build_config(const CLI::App *cmd, const TrainFlags &f,
                              std::vector<std::uint64_t> default_seeds) {
    ExperimentConfig config;
    config.seeds = std::move(default_seeds);
    if (!f.config_path.empty()) {
        config = load_config(f.config_path);
    }
    auto given = [&](const char *name) { return cmd->count(name) > 0; };
    if (given("--task")) {
        config.task = f.task;
    }
    if (given("--mode")) {
        config.mode = parse_mode(f.mode);
    }
    if (given("--template")) {
        config.template_variant = parse_variant(f.template_variant);
    }
    if (given("--bit-order")) {
        config.bit_order = parse_bit_order(f.bit_order);
    }
    if (given("--eta")) {
        config.eta = f.eta;
    }
    if (given("--seed")) {
        config.seeds = {f.seed};
    }
    if (given("--seeds")) {
        config.seeds = parse_seed_list(f.seeds);
    }
    if (given("--max-epochs")) {
        config.max_epochs = f.max_epochs;
    }
    if (given("--tol")) {
        config.cost_tolerance = f.tol;
    }
    if (given("--init-range")) {
        config.init_range = f.init_range;
    }
    if (given("--plateau-window")) {
        config.plateau_window = f.plateau_window;
    }
    if (given("--plateau-epsilon")) {
        config.plateau_epsilon = f.plateau_epsilon;
    }
    if (given("--out")) {
        config.output_dir = f.out;
    }
    if (f.require_convergence) {
        config.require_convergence = true;
    }
    config.validate();
    return config;
}

void print_optional(std::ostream &out, const std::optional<double> &v) {
    if (v) {
        out << *v;
    } else {
        out << "none";
    }
}

int run_training(const ExperimentConfig &config, bool sweep, std::ostream &out) {
    const ExperimentResult result = run_experiment(config);
    out << "task " << result.task_id << " mode " << to_string(config.mode) << " bit-order "
        << to_string(config.bit_order) << " eta " << config.eta << '\n';
    out << std::setprecision(6);
    for (const auto &run : result.runs) {
        out << "seed " << run.seed << ": epochs_to_tolerance=";
        if (run.curve.epochs_to_tolerance) {
            out << *run.curve.epochs_to_tolerance;
        } else {
            out << "none";
        }
        out << " final_cost=" << run.final_cost << " plateau=";
        print_optional(out, run.curve.plateau_value);
        out << " time=" << run.seconds << "s\n";
    }
    const auto median = result.median_epochs_to_tolerance();
    out << "median_epochs_to_tolerance=";
    if (median) {
        out << *median;
    } else {
        out << "none";
    }
    out << '\n' << "oracle_verdict=";
    for (std::size_t o = 0; o < result.oracle_verdicts.size(); ++o) {
        out << (o ? "," : "") << to_string(result.oracle_verdicts[o]);
    }
    out << '\n';

    if (!config.output_dir.empty()) {
        const auto paths = emit_cost_curve_csv(result, config.output_dir);
        emit_summary(result, std::filesystem::path(config.output_dir) / "summary.json");
        out << "wrote " << paths.size() << " curve(s) and summary.json to " << config.output_dir
            << '\n';
    }
    if (config.require_convergence) {
        const bool ok = sweep ? median.has_value() : result.all_converged();
        if (!ok) {
            return kExitNotConverged;
        }
    }
    return kExitOk;
}

struct AdiabaticFlags {
    double x_min = -3.0;
    double x_max = 3.0;
    double x_step = 1.0;
    double t_final = 200.0;
    double dt = 1e-3;
    double omega_ratio = 1e4;
    double omega_end = 1.0;
    std::string ramp = "exponential";
    double tol = 1e-3;
};

int run_adiabatic_check(const AdiabaticFlags &f, std::ostream &out) {
    if (!(f.x_step > 0.0) || f.x_max < f.x_min) {
        throw ConfigError("x grid needs x-step > 0 and x-max >= x-min");
    }
    Ramp ramp = Ramp::Exponential;
    if (f.ramp == "linear") {
        ramp = Ramp::Linear;
    } else if (f.ramp != "exponential") {
        throw ConfigError("ramp must be linear or exponential");
    }
    double max_error = 0.0;
    double max_drift = 0.0;
    out << "x,P,f(x/omega_end),abs_error,norm_drift\n" << std::setprecision(10);
    const auto count = static_cast<long>(std::floor((f.x_max - f.x_min) / f.x_step + 1e-9));
    for (long i = 0; i <= count; ++i) {
        const double x = f.x_min + static_cast<double>(i) * f.x_step;
        AdiabaticSchedule s;
        s.omega_start = f.omega_ratio * std::max(1.0, std::abs(x));
        s.omega_end = f.omega_end;
        s.t_final = f.t_final;
        s.dt = f.dt;
        s.ramp = ramp;
        s.validate();
        const AdiabaticOutcome o = adiabatic_evolve(x, s);
        const double expected = activation(x / s.omega_end);
        const double error = std::abs(o.excitation - expected);
        max_error = std::max(max_error, error);
        max_drift = std::max(max_drift, o.max_norm_drift);
        out << x << ',' << o.excitation << ',' << expected << ',' << error << ','
            << o.max_norm_drift << '\n';
    }
    out << "max_abs_error=" << max_error << " max_norm_drift=" << max_drift
        << (max_error < f.tol ? " within" : " above") << " tolerance " << f.tol << '\n';
    return max_error < f.tol ? kExitOk : kExitNotConverged;
}

void print_report(std::ostream &out, const char *path_name, const TruthTableReport &report) {
    out << "  " << path_name << ": " << (report.all_pass() ? "all rows pass" : "FAIL") << " ("
        << report.failures() << " failing rows, max deviation " << report.max_deviation << ")\n";
    for (const auto &row : report.rows) {
        out << "    ";
        for (auto b : row.input) {
            out << int(b);
        }
        out << " -> ";
        for (auto b : row.target) {
            out << int(b);
        }
        out << "  y=";
        for (std::size_t i = 0; i < row.outputs.size(); ++i) {
            out << (i ? "," : "") << row.outputs[i];
        }
        out << (row.pass ? "  ok" : "  FAIL") << '\n';
    }
}

int run_gate_verify(const std::string &summary_path, const std::optional<std::uint64_t> &seed,
                    double threshold, std::ostream &out) {
    const LoadedSummary loaded = load_summary(summary_path);
    const TaskSpec task = loaded.task();
    bool all_pass = true;
    std::size_t checked = 0;
    out << std::setprecision(8);
    for (const auto &net : loaded.networks) {
        if (seed && net.seed != *seed) {
            continue;
        }
        ++checked;
        out << "task " << task.id() << " seed " << net.seed << '\n';
        const auto scalar = verify_truth_table(net, task, threshold);
        const auto state = verify_truth_table_statevector(net, task, threshold);
        print_report(out, "scalar", scalar);
        print_report(out, "statevector", state);
        double gap = 0.0;
        for (std::size_t n = 0; n < scalar.rows.size(); ++n) {
            for (std::size_t i = 0; i < scalar.rows[n].outputs.size(); ++i) {
                gap = std::max(gap, std::abs(scalar.rows[n].outputs[i] - state.rows[n].outputs[i]));
            }
        }
        out << "  max |scalar - statevector| = " << gap << '\n';
        all_pass = all_pass && scalar.all_pass() && state.all_pass();
    }
    if (checked == 0) {
        throw ConfigError("no network with the requested seed in " + summary_path);
    }
    return all_pass ? kExitOk : kExitNotConverged;
}

int run_feasibility(const std::string &task_id, const std::string &variant,
                    std::size_t output_one_based, std::ostream &out) {
    out << std::setprecision(10);
    for (BitOrder order : {BitOrder::MsbFirst, BitOrder::LsbFirst}) {
        TaskSpec task = make_task(task_id, order);
        if (!variant.empty()) {
            task = with_variant(task, parse_variant(variant));
        }
        if (output_one_based > task.output_count) {
            throw ConfigError("task has only " + std::to_string(task.output_count) + " outputs");
        }
        for (std::size_t o = 0; o < task.output_count; ++o) {
            if (output_one_based != 0 && o + 1 != output_one_based) {
                continue;
            }
            const auto r = check_exact_representability(task, o);
            out << task.id() << " bit-order " << to_string(order) << " output " << (o + 1) << ": "
                << to_string(r.verdict);
            if (r.witness) {
                out << "  witness " << potential_to_json(*r.witness).dump()
                    << "  cost(x20)=" << witness_cost(task, o, *r.witness, 20.0);
            }
            out << '\n';
        }
    }
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum perceptrons with multi-qubit potentials: training and verification"};
    app.require_subcommand(1);

    TrainFlags train_flags;
    auto *train_cmd = app.add_subcommand("train", "train one or more seeds of a task");
    add_train_flags(train_cmd, train_flags);

    TrainFlags sweep_flags;
    auto *sweep_cmd = app.add_subcommand("sweep", "multi-seed run reporting the median epoch count");
    add_train_flags(sweep_cmd, sweep_flags);

    AdiabaticFlags adiabatic;
    auto *adiabatic_cmd =
        app.add_subcommand("adiabatic-check", "compare adiabatic evolution with the sigmoid");
    adiabatic_cmd->add_option("--x-min", adiabatic.x_min);
    adiabatic_cmd->add_option("--x-max", adiabatic.x_max);
    adiabatic_cmd->add_option("--x-step", adiabatic.x_step);
    adiabatic_cmd->add_option("--t-final", adiabatic.t_final);
    adiabatic_cmd->add_option("--dt", adiabatic.dt);
    adiabatic_cmd->add_option("--omega-ratio", adiabatic.omega_ratio,
                              "omega_start = ratio * max(1, |x|)");
    adiabatic_cmd->add_option("--omega-end", adiabatic.omega_end);
    adiabatic_cmd->add_option("--ramp", adiabatic.ramp, "exponential or linear");
    adiabatic_cmd->add_option("--tol", adiabatic.tol, "exit 2 if the max error reaches this");

    std::string summary_path;
    std::uint64_t verify_seed = 0;
    double threshold = 0.5;
    auto *verify_cmd = app.add_subcommand(
        "gate-verify", "check trained weights against the truth table (scalar and statevector)");
    verify_cmd->add_option("--summary", summary_path, "summary.json written by train")->required();
    verify_cmd->add_option("--seed", verify_seed, "only this seed");
    verify_cmd->add_option("--threshold", threshold);

    std::string feas_task;
    std::string feas_template;
    std::size_t feas_output = 0;
    auto *feas_cmd = app.add_subcommand(
        "feasibility", "exact sign-representability of each output under both bit orders");
    feas_cmd->add_option("--task", feas_task)->required();
    feas_cmd->add_option("--template", feas_template, "paper, extended or linear");
    feas_cmd->add_option("--output", feas_output, "1-based output index (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*train_cmd) {
            return run_training(build_config(train_cmd, train_flags, {1}), false, out);
        }
        if (*sweep_cmd) {
            return run_training(build_config(sweep_cmd, sweep_flags, parse_seed_list("1-20")),
                                true, out);
        }
        if (*adiabatic_cmd) {
            return run_adiabatic_check(adiabatic, out);
        }
        if (*verify_cmd) {
            std::optional<std::uint64_t> seed;
            if (verify_cmd->count("--seed") > 0) {
                seed = verify_seed;
            }
            return run_gate_verify(summary_path, seed, threshold, out);
        }
        if (*feas_cmd) {
            return run_feasibility(feas_task, feas_template, feas_output, out);
        }
    } catch (const IoError &e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidInput &e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ScheduleTooFast &e) {
        err << "schedule error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

} // namespace qnn
