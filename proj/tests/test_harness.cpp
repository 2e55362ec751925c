#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qnn/errors.hpp"
#include "qnn/harness.hpp"

using namespace qnn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    static std::mt19937_64 rng(std::random_device{}());
    const fs::path dir = fs::temp_directory_path() / ("qnn_test_" + name + "_" +
                                                      std::to_string(rng() % 1000000000));
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "qnn");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

ExperimentResult fake_result(const std::vector<std::optional<std::size_t>> &epochs) {
    ExperimentResult r;
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        SeedRun run;
        run.seed = i + 1;
        run.curve.epochs_to_tolerance = epochs[i];
        r.runs.push_back(run);
    }
    return r;
}

} // namespace

TEST_CASE("config parsing and validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    c.merge_json(nlohmann::json::parse(
        R"({"task": "toffoli", "template": "extended", "eta": 0.5, "seeds": [4, 9], "mode": "quantum"})"));
    CHECK(c.task == "toffoli");
    CHECK(c.eta == 0.5);
    CHECK(c.seeds == std::vector<std::uint64_t>{4, 9});
    CHECK(c.resolve_task().id() == "toffoli:extended");
    CHECK(c.max_epochs == 10000);

    c.merge_json(nlohmann::json::parse(R"({"seed": 3})"));
    CHECK(c.seeds == std::vector<std::uint64_t>{3});

    c.mode = Mode::Classical;
    CHECK(c.resolve_task().id() == "toffoli:linear");

    ExperimentConfig round;
    round.merge_json(c.to_json());
    CHECK(round.to_json() == c.to_json());

    ExperimentConfig bad;
    bad.task = "nand";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.eta = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.seeds.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(bad.merge_json(nlohmann::json::array()), ConfigError);
    CHECK_THROWS_AS((void)parse_mode("hybrid"), ConfigError);

    CHECK_THROWS_AS((void)load_config("/nonexistent/qnn/config.json"), IoError);
    const auto dir = scratch("cfg");
    fs::create_directories(dir);
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK_THROWS_AS((void)load_config(dir / "broken.json"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("median is the lower middle order statistic") {
    CHECK(fake_result({5, 1, 9}).median_epochs_to_tolerance() == 5);
    CHECK(fake_result({8, 2, 6, 4}).median_epochs_to_tolerance() == 4);
    CHECK(fake_result({3, std::nullopt, 7}).median_epochs_to_tolerance() == 7);
    CHECK_FALSE(fake_result({3, std::nullopt, std::nullopt}).median_epochs_to_tolerance());
    CHECK_FALSE(fake_result({3, std::nullopt, 7}).all_converged());
    CHECK(fake_result({3, 4}).all_converged());

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::optional<std::size_t>> e;
        std::vector<std::size_t> plain;
        for (int i = 0; i < 20; ++i) {
            plain.push_back(1 + rng() % 500);
            e.push_back(plain.back());
        }
        std::nth_element(plain.begin(), plain.begin() + 9, plain.end());
        CHECK(fake_result(e).median_epochs_to_tolerance() == plain[9]);
    }
}

TEST_CASE("cost curve csv format") {
    CostCurve curve;
    curve.costs = {0.125, 0.0625, 1.0 / 3.0};
    std::ostringstream out;
    write_cost_curve_csv(curve, out);
    CHECK(out.str() == "epoch,cost\n1,0.125\n2,0.0625\n3,0.333333333333\n");

    std::istringstream in(out.str());
    std::string line;
    std::size_t lines = 0;
    std::getline(in, line);
    ++lines;
    while (std::getline(in, line)) {
        ++lines;
        const double v = std::stod(line.substr(line.find(',') + 1));
        CHECK(std::isfinite(v));
    }
    CHECK(lines == 4);
}

TEST_CASE("experiment outputs are deterministic and reload exactly") {
    ExperimentConfig config;
    config.task = "cnot";
    config.seeds = {1, 2, 3};
    const auto a = run_experiment(config);
    const auto b = run_experiment(config);
    REQUIRE(a.runs.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.runs[i].seed == config.seeds[i]);
        CHECK(a.runs[i].curve.costs == b.runs[i].curve.costs);
    }
    CHECK(a.task_id == "cnot:paper");
    CHECK(a.oracle_verdicts == std::vector<Verdict>{Verdict::Feasible, Verdict::Feasible});

    const auto d1 = scratch("det1");
    const auto d2 = scratch("det2");
    const auto p1 = emit_cost_curve_csv(a, d1);
    const auto p2 = emit_cost_curve_csv(b, d2);
    emit_summary(a, d1 / "summary.json");
    emit_summary(b, d2 / "summary.json");
    REQUIRE(p1.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(p1[i].filename() == "cost_seed" + std::to_string(i + 1) + ".csv");
        CHECK(slurp(p1[i]) == slurp(p2[i]));
        const auto text = slurp(p1[i]);
        CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) ==
              a.runs[i].curve.costs.size() + 1);
    }
    CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));

    const auto j = nlohmann::json::parse(slurp(d1 / "summary.json"));
    for (const char *key : {"task", "mode", "eta", "seeds", "per_seed",
                            "median_epochs_to_tolerance", "oracle_verdict"}) {
        CHECK_MESSAGE(j.contains(key), key);
        CHECK_FALSE(j.at(key).is_null());
    }
    for (const auto &run : j.at("per_seed")) {
        for (const char *key : {"epochs_to_tolerance", "final_cost", "weights"}) {
            CHECK_FALSE(run.at(key).is_null());
        }
        CHECK(run.contains("plateau"));
    }
    CHECK(j.at("median_epochs_to_tolerance") == *a.median_epochs_to_tolerance());

    const auto loaded = load_summary(d1 / "summary.json");
    const auto task = loaded.task();
    REQUIRE(loaded.networks.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(cost(loaded.networks[i], task.examples) - loaded.final_costs[i]) < 1e-12);
        CHECK(loaded.networks[i].perceptrons == a.runs[i].network.perceptrons);
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("classical XOR summary reports the stall") {
    ExperimentConfig config;
    config.mode = Mode::Classical;
    config.max_epochs = 2000;
    config.seeds = {1};
    const auto result = run_experiment(config);
    const auto j = summary_json(result);
    CHECK(j.at("per_seed")[0].at("epochs_to_tolerance").is_null());
    CHECK(j.at("median_epochs_to_tolerance").is_null());
    CHECK(std::abs(j.at("per_seed")[0].at("plateau").get<double>() - 0.125) < 0.005);
    CHECK(j.at("oracle_verdict")[0] == "infeasible");
    CHECK(j.at("task") == "xor:linear");
}

TEST_CASE("summary weights round-trip through json") {
    const NeuralPotential p{{0.1, -2.5e-7, 3.0}, 1.0 / 3.0, {{{0, 2}, -7.25}, {{0, 1, 2}, 1e-300}}};
    CHECK(potential_from_json(potential_to_json(p)) == p);
    CHECK(potential_from_json(nlohmann::json::parse(potential_to_json(p).dump())) == p);
}

TEST_CASE("cli train and exit codes") {
    const auto dir = scratch("cli");
    auto r = cli({"train", "--task", "xor", "--mode", "quantum", "--eta", "1.5", "--seed", "7",
                  "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "cost_seed7.csv"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 2);

    r = cli({"gate-verify", "--summary", (dir / "summary.json").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("all rows pass") != std::string::npos);

    r = cli({"train", "--task", "xor", "--mode", "classical", "--max-epochs", "2000",
             "--require-convergence"});
    CHECK(r.code == 2);

    CHECK(cli({"train", "--task", "nand"}).code == 1);
    CHECK(cli({"train", "--eta", "-1"}).code == 1);
    CHECK(cli({"train", "--no-such-flag"}).code == 1);
    CHECK(cli({"train", "--seeds", "9-3"}).code == 1);
    CHECK(cli({"--help"}).code == 0);

    std::ofstream(dir / "blocker") << "x";
    CHECK(cli({"train", "--seed", "1", "--out", (dir / "blocker" / "sub").string()}).code == 3);
    CHECK(cli({"gate-verify", "--summary", (dir / "missing.json").string()}).code == 3);
    CHECK(cli({"train", "--config", (dir / "missing.json").string()}).code == 3);
    fs::remove_all(dir);
}

TEST_CASE("cli config file with flag overrides") {
    const auto dir = scratch("cfgcli");
    fs::create_directories(dir);
    std::ofstream(dir / "c.json") << R"({"task": "cnot", "seeds": [1, 2], "eta": 1.5})";
    const auto r = cli({"train", "--config", (dir / "c.json").string(), "--seeds", "3",
                        "--out", (dir / "run").string()});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "run" / "summary.json"));
    CHECK(j.at("task") == "cnot:paper");
    CHECK(j.at("seeds") == nlohmann::json::array({3}));
    fs::remove_all(dir);
}

TEST_CASE("cli feasibility and adiabatic check") {
    auto r = cli({"feasibility", "--task", "fredkin:paper"});
    CHECK(r.code == 0);
    CHECK(r.out.find("fredkin:paper bit-order msb output 3: infeasible") != std::string::npos);
    CHECK(r.out.find("fredkin:paper bit-order lsb output 3: infeasible") != std::string::npos);

    r = cli({"feasibility", "--task", "prime3", "--output", "1"});
    CHECK(r.out.find("bit-order msb output 1: infeasible") != std::string::npos);
    CHECK(r.out.find("bit-order lsb output 1: feasible") != std::string::npos);
    CHECK(cli({"feasibility", "--task", "prime3", "--output", "2"}).code == 1);

    r = cli({"adiabatic-check", "--x-min", "-1", "--x-max", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("max_abs_error=") != std::string::npos);
    CHECK(cli({"adiabatic-check", "--x-min", "1", "--x-max", "1", "--tol", "1e-9"}).code == 2);
    CHECK(cli({"adiabatic-check", "--ramp", "sideways"}).code == 1);
}
