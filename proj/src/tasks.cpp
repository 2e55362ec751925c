#include "qnn/tasks.hpp"

#include <algorithm>
#include <cmath>

#include "qnn/dynamics.hpp"
#include "qnn/errors.hpp"

namespace qnn {

namespace {

using Terms = std::vector<std::vector<std::size_t>>;
using RowRule = std::vector<std::uint8_t> (*)(const std::vector<std::uint8_t> &);

TrainingSet truth_table(std::size_t k, RowRule rule) {
    TrainingSet set;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
        auto bits = bits_of(v, k, BitOrder::MsbFirst);
        auto target = rule(bits);
        set.push_back({std::move(bits), std::move(target)});
    }
    return set;
}

std::vector<NeuralPotential> templates_for(std::size_t k, const std::vector<Terms> &terms,
                                           TemplateVariant variant) {
    std::vector<NeuralPotential> out;
    for (const auto &t : terms) {
        out.push_back(zero_potential(k, variant == TemplateVariant::Linear ? Terms{} : t));
    }
    return out;
}

std::vector<std::uint8_t> xor_rule(const std::vector<std::uint8_t> &a) {
    return {static_cast<std::uint8_t>(a[0] ^ a[1])};
}

std::vector<std::uint8_t> cnot_rule(const std::vector<std::uint8_t> &a) {
    return {a[0], static_cast<std::uint8_t>(a[0] ^ a[1])};
}

std::vector<std::uint8_t> toffoli_rule(const std::vector<std::uint8_t> &a) {
    return {a[0], a[1], static_cast<std::uint8_t>(a[2] ^ (a[0] & a[1]))};
}

std::vector<std::uint8_t> fredkin_rule(const std::vector<std::uint8_t> &a) {
    if (a[0] == 0) {
        return a;
    }
    return {a[0], a[2], a[1]};
}

TruthTableReport compare(const TaskSpec &task, double threshold,
                         const std::vector<std::vector<double>> &outputs) {
    TruthTableReport report;
    for (std::size_t n = 0; n < task.examples.size(); ++n) {
        const auto &ex = task.examples[n];
        RowCheck row{ex.bits, ex.target, outputs[n], true};
        for (std::size_t i = 0; i < ex.target.size(); ++i) {
            const std::uint8_t bit = row.outputs[i] > threshold ? 1 : 0;
            row.pass = row.pass && bit == ex.target[i];
            report.max_deviation =
                std::max(report.max_deviation, std::abs(row.outputs[i] - ex.target[i]));
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void check_network_matches(const TrainedNetwork &net, const TaskSpec &task) {
    net.validate();
    if (net.arity != task.input_count || net.output_count() != task.output_count) {
        throw InvalidInput("network shape does not match task " + task.id());
    }
}

} // namespace

std::string TaskSpec::id() const { return name + ":" + std::string(to_string(variant)); }

void TaskSpec::validate() const {
    if (examples.size() != (std::size_t{1} << input_count)) {
        throw InvalidInput("task " + name + " must have one row per input configuration");
    }
    if (templates.size() != output_count) {
        throw InvalidInput("task " + name + " needs one template per output");
    }
    std::vector<bool> seen(examples.size(), false);
    for (const auto &ex : examples) {
        if (ex.bits.size() != input_count || ex.target.size() != output_count) {
            throw InvalidInput("task " + name + " has a malformed row");
        }
        std::uint64_t v = 0;
        for (auto b : ex.bits) {
            v = (v << 1) | b;
        }
        if (seen[v]) {
            throw InvalidInput("task " + name + " repeats an input row");
        }
        seen[v] = true;
    }
    for (const auto &t : templates) {
        if (t.arity() != input_count) {
            throw InvalidInput("template arity does not match task inputs");
        }
        t.validate();
    }
}

bool is_prime(std::uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

TaskSpec xor_task(TemplateVariant variant) {
    TaskSpec task{"xor", variant, BitOrder::MsbFirst, 2, 1, truth_table(2, xor_rule), {}};
    task.templates = templates_for(2, {{{0, 1}}}, variant);
    return task;
}

TaskSpec prime_task(unsigned bits, BitOrder order, TemplateVariant variant) {
    if (bits < 3 || bits > 5) {
        throw InvalidInput("prime search supports 3, 4 or 5 bits");
    }
    TaskSpec task;
    task.name = "prime" + std::to_string(bits);
    task.variant = variant;
    task.bit_order = order;
    task.input_count = bits;
    task.output_count = 1;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
        task.examples.push_back(
            {bits_of(v, bits, order), {static_cast<std::uint8_t>(is_prime(v) ? 1 : 0)}});
    }
    // sigma_2 sigma_3 is the only multi-qubit term for every width.
    task.templates = templates_for(bits, {{{1, 2}}}, variant);
    return task;
}

TaskSpec gate_task(GateKind gate, TemplateVariant variant) {
    const bool extended = variant == TemplateVariant::Extended;
    switch (gate) {
    case GateKind::Cnot: {
        TaskSpec task{"cnot", variant, BitOrder::MsbFirst, 2, 2, truth_table(2, cnot_rule), {}};
        task.templates = templates_for(2, {{}, {{0, 1}}}, variant);
        return task;
    }
    case GateKind::Toffoli: {
        TaskSpec task{"toffoli", variant, BitOrder::MsbFirst, 3, 3, truth_table(3, toffoli_rule),
                      {}};
        const Terms third = extended ? Terms{{0, 1, 2}, {0, 2}, {1, 2}} : Terms{{0, 1, 2}};
        task.templates = templates_for(3, {{}, {}, third}, variant);
        return task;
    }
    case GateKind::Fredkin: {
        TaskSpec task{"fredkin", variant, BitOrder::MsbFirst, 3, 3, truth_table(3, fredkin_rule),
                      {}};
        const Terms second = extended ? Terms{{0, 1}, {0, 2}} : Terms{};
        const Terms third = extended ? Terms{{1, 2}, {0, 1}, {0, 2}} : Terms{{1, 2}};
        task.templates = templates_for(3, {{}, second, third}, variant);
        return task;
    }
    }
    throw InvalidInput("unknown gate");
}

std::string_view to_string(TemplateVariant variant) {
    switch (variant) {
    case TemplateVariant::Paper:
        return "paper";
    case TemplateVariant::Extended:
        return "extended";
    case TemplateVariant::Linear:
        return "linear";
    }
    return "?";
}

std::string_view to_string(BitOrder order) { return order == BitOrder::MsbFirst ? "msb" : "lsb"; }

TemplateVariant parse_variant(std::string_view text) {
    if (text == "paper") {
        return TemplateVariant::Paper;
    }
    if (text == "extended") {
        return TemplateVariant::Extended;
    }
    if (text == "linear" || text == "two-qubit") {
        return TemplateVariant::Linear;
    }
    throw ConfigError("unknown template variant '" + std::string(text) + "'");
}

BitOrder parse_bit_order(std::string_view text) {
    if (text == "msb") {
        return BitOrder::MsbFirst;
    }
    if (text == "lsb") {
        return BitOrder::LsbFirst;
    }
    throw ConfigError("unknown bit order '" + std::string(text) + "'");
}

TaskSpec make_task(std::string_view id, BitOrder order) {
    std::string_view base = id;
    TemplateVariant variant = TemplateVariant::Paper;
    if (const auto colon = id.find(':'); colon != std::string_view::npos) {
        base = id.substr(0, colon);
        variant = parse_variant(id.substr(colon + 1));
    }
    if (base == "xor") {
        return xor_task(variant);
    }
    if (base == "prime3" || base == "prime4" || base == "prime5") {
        return prime_task(static_cast<unsigned>(base.back() - '0'), order, variant);
    }
    if (base == "cnot") {
        return gate_task(GateKind::Cnot, variant);
    }
    if (base == "toffoli") {
        return gate_task(GateKind::Toffoli, variant);
    }
    if (base == "fredkin") {
        return gate_task(GateKind::Fredkin, variant);
    }
    throw ConfigError("unknown task '" + std::string(id) + "'");
}

TaskSpec with_variant(const TaskSpec &task, TemplateVariant variant) {
    return make_task(task.name + ":" + std::string(to_string(variant)), task.bit_order);
}

bool TruthTableReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const RowCheck &r) { return r.pass; });
}

std::size_t TruthTableReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const RowCheck &r) { return !r.pass; }));
}

TruthTableReport verify_truth_table(const TrainedNetwork &net, const TaskSpec &task,
                                    double threshold) {
    check_network_matches(net, task);
    std::vector<std::vector<double>> outputs;
    for (const auto &ex : task.examples) {
        outputs.push_back(forward_bits(net, ex.bits));
    }
    return compare(task, threshold, outputs);
}

TruthTableReport verify_truth_table_statevector(const TrainedNetwork &net, const TaskSpec &task,
                                                double threshold) {
    check_network_matches(net, task);
    const std::size_t k = task.input_count;
    std::vector<Perceptron> gates;
    for (std::size_t i = 0; i < net.perceptrons.size(); ++i) {
        const auto &p = net.perceptrons[i];
        gates.push_back({net.encoding == InputEncoding::Bit ? classical_to_spin(p) : p, k + i, {}});
    }
    std::vector<std::vector<double>> outputs;
    for (const auto &ex : task.examples) {
        std::uint64_t index = 0;
        for (auto b : ex.bits) {
            index = (index << 1) | b;
        }
        index <<= task.output_count;
        const Statevector psi =
            apply_network(Statevector::basis(k + task.output_count, index), gates, true);
        std::vector<double> y;
        for (std::size_t i = 0; i < task.output_count; ++i) {
            y.push_back(excitation_probability(psi, k + i));
        }
        outputs.push_back(std::move(y));
    }
    return compare(task, threshold, outputs);
}

} // namespace qnn
