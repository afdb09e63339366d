#include "neuropt/cli/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <type_traits>

#include "neuropt/errors.hpp"

namespace neuropt::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw ConfigError(where + ": " + what);
}

void expect_object(const json& j, const std::string& where)
{
    if (!j.is_object())
        fail(where, "expected an object");
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys)
{
    expect_object(j, where);
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : j.items())
        if (allowed.count(key) == 0)
            fail(where, "unknown key '" + key + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where)
{
    if (!j.contains(key))
        return;
    if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T> && !std::is_same_v<T, bool>)
        if (!j.at(key).is_number_unsigned())
            fail(where + "." + key, "expected a non-negative integer");
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(where + "." + key, "wrong type");
    }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out, const std::string& where)
{
    if (!j.contains(key) || j.at(key).is_null())
        return;
    T value{};
    read(j, key, value, where);
    out = value;
}

template <typename E>
E parse_enum(const std::string& text, const std::map<std::string, E>& table, const std::string& where)
{
    const auto it = table.find(text);
    if (it == table.end()) {
        std::string options;
        for (const auto& [name, value] : table)
            options += (options.empty() ? "" : ", ") + name;
        fail(where, "unknown value '" + text + "' (expected one of " + options + ")");
    }
    return it->second;
}

template <typename E>
std::string enum_name(E value, const std::map<std::string, E>& table)
{
    for (const auto& [name, v] : table)
        if (v == value)
            return name;
    return "?";
}

const std::map<std::string, ModelKind> kModels{
    {"linear", ModelKind::Linear}, {"izhikevich", ModelKind::Izhikevich}, {"lif", ModelKind::LIF}};
const std::map<std::string, Integrator> kIntegrators{{"euler", Integrator::Euler}, {"rk4", Integrator::RK4}};
const std::map<std::string, LinearClass> kLinearClasses{{"random", LinearClass::Random},
                                                        {"stable_node", LinearClass::StableNode},
                                                        {"stable_spiral", LinearClass::StableSpiral},
                                                        {"unstable_node", LinearClass::UnstableNode},
                                                        {"unstable_spiral", LinearClass::UnstableSpiral}};
const std::map<std::string, ThresholdVariant> kThresholds{{"fixed", ThresholdVariant::Fixed},
                                                          {"global_self_gap", ThresholdVariant::GlobalSelfGap},
                                                          {"ref_self_gap", ThresholdVariant::RefSelfGap}};
const std::map<std::string, DirectionalTarget> kTargets{{"self_best", DirectionalTarget::SelfBest},
                                                        {"global_best", DirectionalTarget::GlobalBest},
                                                        {"blend", DirectionalTarget::Blend}};
const std::map<std::string, ReferenceStrategy> kReferences{{"pg", ReferenceStrategy::SelfGlobalAverage},
                                                           {"pgn", ReferenceStrategy::SelfGlobalNeighbourAverage}};
const std::map<std::string, SpikeTopologyKind> kSpikeTopologies{{"ring", SpikeTopologyKind::Ring},
                                                                {"full", SpikeTopologyKind::Full}};
const std::map<std::string, InfoTopologyKind> kInfoTopologies{{"random_m", InfoTopologyKind::RandomM},
                                                              {"full", InfoTopologyKind::Full}};
const std::map<std::string, ExecutionMode> kModes{{"det", ExecutionMode::Deterministic},
                                                  {"async", ExecutionMode::Concurrent}};
const std::map<std::string, Logging> kLogging{
    {"summary", Logging::Summary}, {"trace", Logging::Trace}, {"full-state", Logging::FullState}};

template <typename E>
void read_enum(const json& j, const char* key, E& out, const std::map<std::string, E>& table, const std::string& where)
{
    if (!j.contains(key))
        return;
    std::string text;
    read(j, key, text, where);
    out = parse_enum(text, table, where + "." + key);
}

// Conditions, thresholds and rules accept a bare type name or an object with
// "type" plus parameters.
std::pair<std::string, json> typed(const json& j, const std::string& where)
{
    if (j.is_string())
        return {j.get<std::string>(), json::object()};
    expect_object(j, where);
    if (!j.contains("type") || !j.at("type").is_string())
        fail(where, "missing string 'type'");
    return {j.at("type").get<std::string>(), j};
}

SpikeCondition condition_from_json(const json& j, const std::string& where)
{
    const auto [type, body] = typed(j, where);
    if (type == "abs_threshold") {
        only_keys(body, where, {"type"});
        return AbsThreshold{};
    }
    if (type == "minkowski") {
        only_keys(body, where, {"type", "q", "weights"});
        WeightedMinkowski c;
        read(body, "q", c.q, where);
        read(body, "weights", c.weights, where);
        return c;
    }
    if (type == "shrinking_ball") {
        only_keys(body, where, {"type", "epsilon"});
        ShrinkingBall c;
        read(body, "epsilon", c.epsilon, where);
        return c;
    }
    if (type == "disc") {
        only_keys(body, where, {"type", "attractor", "repeller"});
        DiscCondition c;
        read(body, "attractor", c.attractor, where);
        read(body, "repeller", c.repeller, where);
        return c;
    }
    fail(where, "unknown condition '" + type + "'");
}

json to_json(const SpikeCondition& cond)
{
    return std::visit(
        [](const auto& c) -> json {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, AbsThreshold>)
                return {{"type", "abs_threshold"}};
            else if constexpr (std::is_same_v<C, WeightedMinkowski>)
                return {{"type", "minkowski"}, {"q", c.q}, {"weights", c.weights}};
            else if constexpr (std::is_same_v<C, ShrinkingBall>)
                return {{"type", "shrinking_ball"}, {"epsilon", c.epsilon}};
            else
                return {{"type", "disc"}, {"attractor", c.attractor}, {"repeller", c.repeller}};
        },
        cond);
}

ThresholdRule threshold_from_json(const json& j, const std::string& where)
{
    const auto [type, body] = typed(j, where);
    only_keys(body, where, {"type", "alpha"});
    ThresholdRule rule;
    rule.variant = parse_enum(type, kThresholds, where + ".type");
    read(body, "alpha", rule.alpha_thr, where);
    return rule;
}

json to_json(const ThresholdRule& rule)
{
    return {{"type", enum_name(rule.variant, kThresholds)}, {"alpha", rule.alpha_thr}};
}

SpikeRule rule_from_json(const json& j, const std::string& where)
{
    const auto [type, body] = typed(j, where);
    if (type == "random_reset") {
        only_keys(body, where, {"type"});
        return RandomReset{};
    }
    if (type == "fixed_reset") {
        only_keys(body, where, {"type"});
        return FixedReset{};
    }
    if (type == "directional") {
        only_keys(body, where, {"type", "alpha", "target"});
        Directional r;
        read(body, "alpha", r.alpha_d, where);
        read_enum(body, "target", r.target, kTargets, where);
        return r;
    }
    if (type == "de_best") {
        only_keys(body, where, {"type", "F"});
        DECurrentToBest r;
        read(body, "F", r.F, where);
        return r;
    }
    if (type == "de_rand") {
        only_keys(body, where, {"type", "F"});
        DERandVariant r;
        read(body, "F", r.F, where);
        return r;
    }
    fail(where, "unknown rule '" + type + "'");
}

json to_json(const SpikeRule& rule)
{
    return std::visit(
        [](const auto& r) -> json {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, RandomReset>)
                return {{"type", "random_reset"}};
            else if constexpr (std::is_same_v<R, FixedReset>)
                return {{"type", "fixed_reset"}};
            else if constexpr (std::is_same_v<R, Directional>)
                return {{"type", "directional"}, {"alpha", r.alpha_d}, {"target", enum_name(r.target, kTargets)}};
            else if constexpr (std::is_same_v<R, DECurrentToBest>)
                return {{"type", "de_best"}, {"F", r.F}};
            else
                return {{"type", "de_rand"}, {"F", r.F}};
        },
        rule);
}

DynamicsConfig dynamics_from_json(const json& j, const std::string& where)
{
    only_keys(j, where, {"model", "dt", "integrator", "linear_class", "matrix", "izhikevich", "lif"});
    DynamicsConfig dyn;
    read_enum(j, "model", dyn.model, kModels, where);
    read(j, "dt", dyn.dt, where);
    read_enum(j, "integrator", dyn.integrator, kIntegrators, where);
    read_enum(j, "linear_class", dyn.linear_class, kLinearClasses, where);
    if (j.contains("matrix") && !j.at("matrix").is_null()) {
        std::array<std::array<double, 2>, 2> m{};
        read(j, "matrix", m, where);
        LinearModel lin;
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                lin.a[r][c] = m[r][c];
        dyn.linear = lin;
    }
    if (j.contains("izhikevich")) {
        const json& z = j.at("izhikevich");
        const std::string w = where + ".izhikevich";
        only_keys(z, w, {"a", "b", "c", "d", "i_syn"});
        read(z, "a", dyn.izhikevich.a, w);
        read(z, "b", dyn.izhikevich.b, w);
        read(z, "c", dyn.izhikevich.c, w);
        read(z, "d", dyn.izhikevich.d, w);
        read(z, "i_syn", dyn.izhikevich.i_syn, w);
    }
    if (j.contains("lif")) {
        const json& l = j.at("lif");
        const std::string w = where + ".lif";
        only_keys(l, w, {"tau_m", "v_rest", "v_th", "i_syn"});
        read(l, "tau_m", dyn.lif.tau_m, w);
        read(l, "v_rest", dyn.lif.v_rest, w);
        read(l, "v_th", dyn.lif.v_th, w);
        read(l, "i_syn", dyn.lif.i_syn, w);
    }
    return dyn;
}

json to_json(const DynamicsConfig& dyn)
{
    json j{{"model", enum_name(dyn.model, kModels)},
           {"dt", dyn.dt},
           {"integrator", enum_name(dyn.integrator, kIntegrators)},
           {"linear_class", enum_name(dyn.linear_class, kLinearClasses)},
           {"izhikevich",
            {{"a", dyn.izhikevich.a},
             {"b", dyn.izhikevich.b},
             {"c", dyn.izhikevich.c},
             {"d", dyn.izhikevich.d},
             {"i_syn", dyn.izhikevich.i_syn}}},
           {"lif",
            {{"tau_m", dyn.lif.tau_m}, {"v_rest", dyn.lif.v_rest}, {"v_th", dyn.lif.v_th}, {"i_syn", dyn.lif.i_syn}}}};
    if (dyn.linear)
        j["matrix"] = {{dyn.linear->a[0][0], dyn.linear->a[0][1]}, {dyn.linear->a[1][0], dyn.linear->a[1][1]}};
    return j;
}

SpikeConfig spike_from_json(const json& j, const std::string& where)
{
    only_keys(j, where, {"condition", "threshold", "rule", "sigma", "crossover"});
    SpikeConfig spike;
    if (j.contains("condition"))
        spike.condition = condition_from_json(j.at("condition"), where + ".condition");
    if (j.contains("threshold"))
        spike.threshold = threshold_from_json(j.at("threshold"), where + ".threshold");
    if (j.contains("rule"))
        spike.rule = rule_from_json(j.at("rule"), where + ".rule");
    read_optional(j, "sigma", spike.sigma, where);
    if (j.contains("crossover") && !j.at("crossover").is_null()) {
        const json& c = j.at("crossover");
        only_keys(c, where + ".crossover", {"p_cr"});
        BinomialCrossover cr;
        read(c, "p_cr", cr.p_cr, where + ".crossover");
        spike.crossover = cr;
    }
    return spike;
}

json to_json(const SpikeConfig& spike)
{
    json j{{"condition", to_json(spike.condition)}, {"threshold", to_json(spike.threshold)},
           {"rule", to_json(spike.rule)}};
    if (spike.sigma)
        j["sigma"] = *spike.sigma;
    if (spike.crossover)
        j["crossover"] = {{"p_cr", spike.crossover->p_cr}};
    return j;
}

TransformParams transform_from_json(const json& j, const std::string& where)
{
    only_keys(j, where, {"alpha", "xref", "weights"});
    TransformParams t;
    read(j, "alpha", t.gain, where);
    read_enum(j, "xref", t.reference, kReferences, where);
    read(j, "weights", t.weights, where);
    return t;
}

json to_json(const TransformParams& t)
{
    return {{"alpha", t.gain}, {"xref", enum_name(t.reference, kReferences)}, {"weights", t.weights}};
}

UnitVariant variant_from_json(const json& j, const std::string& where)
{
    only_keys(j, where, {"name", "dynamics", "spike", "transform"});
    UnitVariant v;
    read(j, "name", v.name, where);
    if (j.contains("dynamics"))
        v.dynamics = dynamics_from_json(j.at("dynamics"), where + ".dynamics");
    if (j.contains("spike"))
        v.spike = spike_from_json(j.at("spike"), where + ".spike");
    if (j.contains("transform"))
        v.transform = transform_from_json(j.at("transform"), where + ".transform");
    return v;
}

json to_json(const UnitVariant& v)
{
    return {{"name", v.name},
            {"dynamics", to_json(v.dynamics)},
            {"spike", to_json(v.spike)},
            {"transform", to_json(v.transform)}};
}

} // namespace

RunSpec run_spec_from_json(const json& doc)
{
    const std::string root = "config";
    only_keys(doc, root,
              {"problem", "units", "unit", "population", "shuffle_population", "topology", "steps", "seed", "mode",
               "logging", "power_dt_ms"});
    RunSpec spec;
    RunConfig& c = spec.config;

    if (doc.contains("problem")) {
        const json& p = doc.at("problem");
        const std::string w = root + ".problem";
        only_keys(p, w, {"function", "dimension", "lower", "upper", "instance"});
        read(p, "function", c.problem.function, w);
        read(p, "dimension", c.problem.dimension, w);
        read(p, "lower", c.problem.lower, w);
        read(p, "upper", c.problem.upper, w);
        read_optional(p, "instance", c.problem.instance, w);
    }
    read(doc, "units", c.units, root);
    if (doc.contains("unit"))
        c.unit = variant_from_json(doc.at("unit"), root + ".unit");
    if (doc.contains("population")) {
        const json& pop = doc.at("population");
        if (!pop.is_array())
            fail(root + ".population", "expected an array");
        for (std::size_t k = 0; k < pop.size(); ++k) {
            const std::string w = root + ".population[" + std::to_string(k) + "]";
            only_keys(pop[k], w, {"fraction", "unit"});
            PopulationEntry entry;
            read(pop[k], "fraction", entry.fraction, w);
            if (pop[k].contains("unit"))
                entry.variant = variant_from_json(pop[k].at("unit"), w + ".unit");
            c.population.push_back(std::move(entry));
        }
    }
    read(doc, "shuffle_population", c.shuffle_population, root);
    if (doc.contains("topology")) {
        const json& t = doc.at("topology");
        const std::string w = root + ".topology";
        only_keys(t, w, {"spike", "info", "m"});
        read_enum(t, "spike", c.topology.spike, kSpikeTopologies, w);
        read_enum(t, "info", c.topology.info, kInfoTopologies, w);
        read(t, "m", c.topology.m, w);
    }
    read_optional(doc, "steps", c.steps, root);
    read(doc, "seed", c.seed, root);
    read_enum(doc, "mode", c.mode, kModes, root);
    read_enum(doc, "logging", spec.logging, kLogging, root);
    read(doc, "power_dt_ms", spec.power_dt_ms, root);
    if (!(spec.power_dt_ms > 0.0))
        fail(root + ".power_dt_ms", "must be positive");
    spec.config.record_positions = spec.logging == Logging::FullState;

    validate(c);
    return spec;
}

json to_json(const RunSpec& spec)
{
    const RunConfig& c = spec.config;
    json problem{{"function", c.problem.function},
                 {"dimension", c.problem.dimension},
                 {"lower", c.problem.lower},
                 {"upper", c.problem.upper}};
    if (c.problem.instance)
        problem["instance"] = *c.problem.instance;

    json j{{"problem", problem},
           {"units", c.units},
           {"unit", to_json(c.unit)},
           {"shuffle_population", c.shuffle_population},
           {"topology",
            {{"spike", enum_name(c.topology.spike, kSpikeTopologies)},
             {"info", enum_name(c.topology.info, kInfoTopologies)},
             {"m", c.topology.m}}},
           {"seed", c.seed},
           {"mode", enum_name(c.mode, kModes)},
           {"logging", to_string(spec.logging)},
           {"power_dt_ms", spec.power_dt_ms}};
    if (c.steps)
        j["steps"] = *c.steps;
    if (!c.population.empty()) {
        json pop = json::array();
        for (const auto& entry : c.population)
            pop.push_back({{"fraction", entry.fraction}, {"unit", to_json(entry.variant)}});
        j["population"] = std::move(pop);
    }
    return j;
}

json load_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

RunSpec load_run_spec(const std::filesystem::path& path)
{
    return run_spec_from_json(load_json(path));
}

std::string to_string(Logging logging)
{
    return enum_name(logging, kLogging);
}

std::string to_string(ExecutionMode mode)
{
    return enum_name(mode, kModes);
}

ExecutionMode parse_mode(const std::string& text)
{
    return parse_enum(text, kModes, "mode");
}

} // namespace neuropt::cli
