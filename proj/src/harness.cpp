#include "qnn/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include "qnn/errors.hpp"

namespace qnn {

namespace {

using nlohmann::json;

std::string format_cost(double c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", c);
    return buf;
}

template <class T>
void read_key(const json &j, const char *key, T &value) {
    if (j.contains(key)) {
        try {
            value = j.at(key).get<T>();
        } catch (const json::exception &e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

SeedRun run_seed(const ExperimentConfig &config, const TaskSpec &task, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const TrainerConfig tc = config.trainer_config(seed);
    const InputEncoding encoding =
        config.mode == Mode::Quantum ? InputEncoding::Spin : InputEncoding::Bit;
    TrainedNetwork initial = initialize_network(task.templates, encoding, tc);
    initial.task = task.id();
    TrainResult trained = train(initial, task.examples, tc);
    SeedRun run;
    run.seed = seed;
    run.final_cost = trained.curve.costs.back();
    run.network = std::move(trained.network);
    run.curve = std::move(trained.curve);
    run.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

} // namespace

std::string_view to_string(Mode mode) { return mode == Mode::Quantum ? "quantum" : "classical"; }

Mode parse_mode(std::string_view text) {
    if (text == "quantum") {
        return Mode::Quantum;
    }
    if (text == "classical") {
        return Mode::Classical;
    }
    throw ConfigError("unknown mode '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
    (void)resolve_task();
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw ConfigError("eta must be positive");
    }
    if (seeds.empty()) {
        throw ConfigError("at least one seed is required");
    }
    if (max_epochs == 0 || plateau_window == 0) {
        throw ConfigError("max_epochs and plateau_window must be positive");
    }
    if (!(cost_tolerance > 0.0) || !(init_range > 0.0) || !(plateau_epsilon > 0.0)) {
        throw ConfigError("cost_tolerance, init_range and plateau_epsilon must be positive");
    }
}

TaskSpec ExperimentConfig::resolve_task() const {
    TaskSpec spec = make_task(task, bit_order);
    if (mode == Mode::Classical) {
        return with_variant(spec, TemplateVariant::Linear);
    }
    if (template_variant) {
        return with_variant(spec, *template_variant);
    }
    return spec;
}

TrainerConfig ExperimentConfig::trainer_config(std::uint64_t seed) const {
    TrainerConfig tc;
    tc.eta = eta;
    tc.max_epochs = max_epochs;
    tc.cost_tolerance = cost_tolerance;
    tc.init_range = init_range;
    tc.seed = seed;
    tc.plateau_window = plateau_window;
    tc.plateau_epsilon = plateau_epsilon;
    return tc;
}

void ExperimentConfig::merge_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    read_key(j, "task", task);
    if (j.contains("mode")) {
        mode = parse_mode(j.at("mode").get<std::string>());
    }
    if (j.contains("bit_order")) {
        bit_order = parse_bit_order(j.at("bit_order").get<std::string>());
    }
    if (j.contains("template") && !j.at("template").is_null()) {
        template_variant = parse_variant(j.at("template").get<std::string>());
    }
    read_key(j, "eta", eta);
    if (j.contains("seed")) {
        seeds = {j.at("seed").get<std::uint64_t>()};
    }
    read_key(j, "seeds", seeds);
    read_key(j, "max_epochs", max_epochs);
    read_key(j, "cost_tolerance", cost_tolerance);
    read_key(j, "init_range", init_range);
    read_key(j, "plateau_window", plateau_window);
    read_key(j, "plateau_epsilon", plateau_epsilon);
    read_key(j, "output_dir", output_dir);
    read_key(j, "require_convergence", require_convergence);
}

json ExperimentConfig::to_json() const {
    json j;
    j["task"] = task;
    j["mode"] = std::string(to_string(mode));
    j["bit_order"] = std::string(to_string(bit_order));
    j["template"] = template_variant ? json(std::string(to_string(*template_variant))) : json();
    j["eta"] = eta;
    j["seeds"] = seeds;
    j["max_epochs"] = max_epochs;
    j["cost_tolerance"] = cost_tolerance;
    j["init_range"] = init_range;
    j["plateau_window"] = plateau_window;
    j["plateau_epsilon"] = plateau_epsilon;
    j["output_dir"] = output_dir;
    j["require_convergence"] = require_convergence;
    return j;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    ExperimentConfig config;
    try {
        config.merge_json(json::parse(in));
    } catch (const json::exception &e) {
        throw ConfigError("malformed config " + path.string() + ": " + e.what());
    }
    return config;
}

std::optional<std::size_t> ExperimentResult::median_epochs_to_tolerance() const {
    if (runs.empty()) {
        return std::nullopt;
    }
    constexpr auto never = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> epochs;
    for (const auto &run : runs) {
        epochs.push_back(run.curve.epochs_to_tolerance.value_or(never));
    }
    std::sort(epochs.begin(), epochs.end());
    const std::size_t median = epochs[(epochs.size() - 1) / 2];
    if (median == never) {
        return std::nullopt;
    }
    return median;
}

bool ExperimentResult::all_converged() const {
    return std::all_of(runs.begin(), runs.end(),
                       [](const SeedRun &r) { return r.curve.epochs_to_tolerance.has_value(); });
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
    config.validate();
    const TaskSpec task = config.resolve_task();

    ExperimentResult result;
    result.config = config;
    result.task_id = task.id();
    result.runs.resize(config.seeds.size());

    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1,
                                                        config.seeds.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < config.seeds.size(); i += workers) {
                result.runs[i] = run_seed(config, task, config.seeds[i]);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }

    if (task.input_count <= 5) {
        for (std::size_t o = 0; o < task.output_count; ++o) {
            result.oracle_verdicts.push_back(check_exact_representability(task, o).verdict);
        }
    }
    return result;
}

void write_cost_curve_csv(const CostCurve &curve, std::ostream &out) {
    out << "epoch,cost\n";
    for (std::size_t e = 0; e < curve.costs.size(); ++e) {
        out << (e + 1) << ',' << format_cost(curve.costs[e]) << '\n';
    }
}

std::vector<std::filesystem::path> emit_cost_curve_csv(const ExperimentResult &result,
                                                       const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    std::vector<std::filesystem::path> paths;
    for (const auto &run : result.runs) {
        const auto path = dir / ("cost_seed" + std::to_string(run.seed) + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw IoError("cannot write " + path.string());
        }
        write_cost_curve_csv(run.curve, out);
        if (!out) {
            throw IoError("write failed for " + path.string());
        }
        paths.push_back(path);
    }
    return paths;
}

json potential_to_json(const NeuralPotential &p) {
    json terms = json::array();
    for (const auto &term : p.multi_terms) {
        terms.push_back({{"indices", term.indices}, {"weight", term.weight}});
    }
    return {{"linear", p.linear_weights}, {"bias", p.bias}, {"terms", terms}};
}

NeuralPotential potential_from_json(const json &j) {
    NeuralPotential p;
    try {
        p.linear_weights = j.at("linear").get<std::vector<double>>();
        p.bias = j.at("bias").get<double>();
        for (const auto &term : j.at("terms")) {
            p.multi_terms.push_back({term.at("indices").get<std::vector<std::size_t>>(),
                                     term.at("weight").get<double>()});
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed potential: ") + e.what());
    }
    p.validate();
    return p;
}

json summary_json(const ExperimentResult &result) {
    const auto &config = result.config;
    json per_seed = json::array();
    for (const auto &run : result.runs) {
        json weights = json::array();
        for (const auto &p : run.network.perceptrons) {
            weights.push_back(potential_to_json(p));
        }
        per_seed.push_back({
            {"seed", run.seed},
            {"epochs_run", run.network.epochs},
            {"epochs_to_tolerance",
             run.curve.epochs_to_tolerance ? json(*run.curve.epochs_to_tolerance) : json()},
            {"final_cost", run.final_cost},
            {"plateau", run.curve.plateau_value ? json(*run.curve.plateau_value) : json()},
            {"weights", weights},
        });
    }
    json verdicts = json::array();
    for (auto v : result.oracle_verdicts) {
        verdicts.push_back(to_string(v));
    }
    const auto median = result.median_epochs_to_tolerance();
    return {
        {"task", result.task_id},
        {"mode", std::string(to_string(config.mode))},
        {"bit_order", std::string(to_string(config.bit_order))},
        {"eta", config.eta},
        {"max_epochs", config.max_epochs},
        {"cost_tolerance", config.cost_tolerance},
        {"init_range", config.init_range},
        {"seeds", config.seeds},
        {"per_seed", per_seed},
        {"median_epochs_to_tolerance", median ? json(*median) : json()},
        {"oracle_verdict", verdicts},
    };
}

void emit_summary(const ExperimentResult &result, const std::filesystem::path &path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory for " + path.string());
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << summary_json(result).dump(2) << '\n';
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

TaskSpec LoadedSummary::task() const {
    TaskSpec spec = make_task(task_id, bit_order);
    return mode == Mode::Classical ? with_variant(spec, TemplateVariant::Linear) : spec;
}

LoadedSummary load_summary(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open summary " + path.string());
    }
    LoadedSummary loaded;
    try {
        const json j = json::parse(in);
        loaded.task_id = j.at("task").get<std::string>();
        loaded.mode = parse_mode(j.at("mode").get<std::string>());
        loaded.bit_order = parse_bit_order(j.value("bit_order", std::string("msb")));
        const TaskSpec spec = loaded.task();
        for (const auto &run : j.at("per_seed")) {
            TrainedNetwork net;
            net.arity = spec.input_count;
            net.encoding = loaded.mode == Mode::Quantum ? InputEncoding::Spin : InputEncoding::Bit;
            net.task = loaded.task_id;
            net.seed = run.at("seed").get<std::uint64_t>();
            net.epochs = run.value("epochs_run", std::size_t{0});
            for (const auto &p : run.at("weights")) {
                net.perceptrons.push_back(potential_from_json(p));
            }
            net.validate();
            loaded.networks.push_back(std::move(net));
            loaded.final_costs.push_back(run.at("final_cost").get<double>());
        }
    } catch (const json::exception &e) {
        throw ConfigError("malformed summary " + path.string() + ": " + e.what());
    } catch (const InvalidInput &e) {
        throw ConfigError("inconsistent summary " + path.string() + ": " + e.what());
    }
    return loaded;
}

} // namespace qnn
