#include "neuropt/runtime.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "neuropt/channel.hpp"
#include "neuropt/errors.hpp"

namespace neuropt {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint32_t count_spikes(const std::vector<std::uint8_t>& s)
{
    return static_cast<std::uint32_t>(std::count(s.begin(), s.end(), std::uint8_t{1}));
}

const UnitVariant& variant_of(const RunConfig& config, std::size_t index)
{
    return config.population.empty() ? config.unit : config.population[index].variant;
}

// Per-unit records. The core writes spikes/times/positions, the selector
// writes best fitness; no field is written by two processes.
struct UnitLog
{
    std::vector<double> best;
    std::vector<std::uint32_t> spikes;
    std::vector<double> times;
    std::vector<Vector> positions;
};

struct Population
{
    std::shared_ptr<const ObjectiveFunction> objective;
    std::vector<SpikingCore> cores;
    std::vector<Selector> selectors;
    std::vector<SpikingHandler> handlers;
    std::vector<Sender> senders;
    std::vector<Receiver> receivers;
    std::optional<TensorContractionLayer> contraction;
    std::optional<NeighbourManager> neighbour_manager;
    HighLevelSelector high_level;
    std::vector<std::string> variant_names;
};

Population build_population(const RunConfig& config)
{
    const std::size_t n = config.units;
    const std::size_t d = config.problem.dimension;
    const SearchDomain domain = SearchDomain::box(d, config.problem.lower, config.problem.upper);

    Population pop;
    pop.objective = std::make_shared<const ObjectiveFunction>(make_objective(config));

    const auto assignment = assign_variants(config);
    for (std::size_t i = 0; i < n; ++i) {
        const UnitVariant& variant = variant_of(config, assignment[i]);
        Rng model_rng = make_stream(config.seed, i, "model");
        CoreParams params = resolve_core_params(variant, domain, model_rng);
        pop.cores.emplace_back(i, domain, std::move(params), make_stream(config.seed, i, "init"),
                               make_stream(config.seed, i, "spike"));
        pop.selectors.emplace_back(i, pop.objective);
        pop.handlers.emplace_back(i, n, d);
        pop.senders.emplace_back(i);
        pop.receivers.emplace_back(i, n, d);
        pop.variant_names.push_back(variant.name);
    }

    const SpikeTopology spike_topology =
        config.topology.spike == SpikeTopologyKind::Ring ? build_ring(n) : build_full_spike(n);
    Rng topo_rng = make_stream(config.seed, kGlobalStream, "topology");
    InfoTopology info_topology = config.topology.info == InfoTopologyKind::Full
                                     ? build_full_info(n)
                                     : build_random_info(n, config.topology.m, topo_rng);
    pop.contraction.emplace(spike_topology, d);
    pop.neighbour_manager.emplace(std::move(info_topology));
    return pop;
}

RunTrace assemble_trace(const RunConfig& config, const Population& pop, const std::vector<UnitLog>& logs)
{
    const std::size_t n = config.units;
    const std::size_t d = config.problem.dimension;

    RunTrace trace;
    trace.units = n;
    trace.dimension = d;
    trace.mode = config.mode;
    trace.optimum_value = pop.objective->optimum_value().value_or(0.0);
    trace.unit_variants = pop.variant_names;
    trace.info_neighbours = pop.neighbour_manager->topology().max_neighbours();
    trace.evaluations = pop.objective->evaluation_count();

    // Only steps that every unit finished (core step and its evaluation).
    std::size_t rows = std::numeric_limits<std::size_t>::max();
    for (const auto& log : logs)
        rows = std::min({rows, log.best.size(), log.spikes.size()});
    if (rows == std::numeric_limits<std::size_t>::max())
        rows = 0;
    trace.steps_completed = rows == 0 ? 0 : rows - 1;

    trace.unit_best = RealMatrix(rows, n);
    trace.spikes = Matrix<std::uint32_t>(rows, n);
    trace.global_best.resize(rows);
    trace.error.resize(rows);
    trace.wall_ms.resize(rows);
    for (std::size_t t = 0; t < rows; ++t) {
        double fg = std::numeric_limits<double>::infinity();
        double wall = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            trace.unit_best(t, i) = logs[i].best[t];
            trace.spikes(t, i) = logs[i].spikes[t];
            fg = std::min(fg, logs[i].best[t]);
            if (t < logs[i].times.size())
                wall = std::max(wall, logs[i].times[t]);
        }
        trace.global_best[t] = fg;
        trace.error[t] = std::abs(fg - trace.optimum_value);
        trace.wall_ms[t] = wall;
    }

    if (config.record_positions) {
        for (std::size_t t = 0; t < rows; ++t) {
            RealMatrix snap(n, d);
            for (std::size_t i = 0; i < n; ++i)
                std::copy(logs[i].positions[t].begin(), logs[i].positions[t].end(), snap.row(i).begin());
            trace.positions.push_back(std::move(snap));
        }
    }

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        trace.fallback_events += pop.cores[i].fallback_events();
        if (pop.selectors[i].is_init() && pop.selectors[i].best().fitness < best) {
            best = pop.selectors[i].best().fitness;
            trace.best_position = pop.selectors[i].best().position;
        }
    }
    return trace;
}

// Fixed-order sweep on one thread. One step: cores -> selectors -> handlers and
// senders -> collectors -> contraction, neighbour manager, high-level selector
// -> receivers -> delivery of the next core inputs.
RunTrace run_deterministic(const RunConfig& config)
{
    const std::size_t n = config.units;
    const std::size_t d = config.problem.dimension;
    const std::uint64_t budget = config.step_budget();

    Population pop = build_population(config);
    std::vector<UnitLog> logs(n);
    SpikeCollector spike_collector(n, d);
    BestCollector best_collector(n, d);
    BoolMatrix activations(n, d, 0);
    std::vector<CoreOutput> outputs(n);
    std::vector<CoreInputs> inputs(n);

    const auto start = Clock::now();

    auto sweep = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            BestUpdate best = pop.selectors[i].step(outputs[i].position);
            logs[i].best.push_back(best.fitness);
            inputs[i].self = std::move(best);
        }
        for (std::size_t i = 0; i < n; ++i) {
            HandlerOutput h = pop.handlers[i].step(outputs[i].spikes, activations);
            spike_collector.apply(h.row);
            inputs[i].activation = std::move(h.activation);
            best_collector.apply(pop.senders[i].step(inputs[i].self));
        }
        activations = pop.contraction->step(spike_collector.matrix());
        const NeighbourhoodBundle bundle =
            pop.neighbour_manager->step(best_collector.positions(), best_collector.fitness());
        const GlobalBest global = pop.high_level.step(best_collector.positions(), best_collector.fitness());
        for (std::size_t i = 0; i < n; ++i) {
            inputs[i].global = global;
            inputs[i].neighbours = std::make_shared<const NeighbourView>(pop.receivers[i].step(bundle));
        }
    };

    auto record = [&](std::size_t i) {
        logs[i].spikes.push_back(count_spikes(outputs[i].spikes));
        if (config.record_positions)
            logs[i].positions.push_back(outputs[i].position);
    };

    RunTrace trace;
    try {
        for (std::size_t i = 0; i < n; ++i) {
            outputs[i] = pop.cores[i].initialise();
            record(i);
        }
        sweep();
        for (std::size_t i = 0; i < n; ++i)
            logs[i].times.push_back(elapsed_ms(start));

        for (std::uint64_t t = 1; t <= budget; ++t) {
            for (std::size_t i = 0; i < n; ++i) {
                outputs[i] = pop.cores[i].step(inputs[i]);
                record(i);
            }
            sweep();
            const double now = elapsed_ms(start);
            for (std::size_t i = 0; i < n; ++i)
                logs[i].times.push_back(now);
        }
        trace = assemble_trace(config, pop, logs);
    } catch (const std::exception& e) {
        trace = assemble_trace(config, pop, logs);
        trace.aborted = true;
        trace.diagnostic = e.what();
    }
    return trace;
}

struct PopulationSnapshot
{
    RealMatrix positions;
    Vector fitness;
};

// Channels of the concurrent wiring. Broadcasts go to one slot per receiver.
struct Wiring
{
    explicit Wiring(std::size_t n)
        : core_self(n), core_global(n), core_activation(n), core_neighbours(n), selector_in(n), handler_spikes(n),
          handler_activations(n), sender_in(n), receiver_in(n), spike_rows(n), best_rows(n)
    {}

    std::vector<Slot<BestUpdate>> core_self;
    std::vector<Slot<GlobalBest>> core_global;
    std::vector<Slot<std::vector<std::uint8_t>>> core_activation;
    std::vector<Slot<std::shared_ptr<const NeighbourView>>> core_neighbours;
    std::vector<Slot<Vector>> selector_in;
    std::vector<Slot<std::vector<std::uint8_t>>> handler_spikes;
    std::vector<Slot<SharedBoolMatrix>> handler_activations;
    std::vector<Slot<BestUpdate>> sender_in;
    std::vector<Slot<SharedBundle>> receiver_in;
    Inbox<SpikeRow> spike_rows;
    Inbox<BestRow> best_rows;
    Slot<SharedBoolMatrix> contraction_in;
    Slot<std::shared_ptr<const PopulationSnapshot>> neighbour_in;
    Slot<std::shared_ptr<const PopulationSnapshot>> high_level_in;

    void close_all()
    {
        for (auto* group : {&core_activation, &handler_spikes})
            for (auto& s : *group)
                s.close();
        for (auto& s : core_self)
            s.close();
        for (auto& s : core_global)
            s.close();
        for (auto& s : core_neighbours)
            s.close();
        for (auto& s : selector_in)
            s.close();
        for (auto& s : handler_activations)
            s.close();
        for (auto& s : sender_in)
            s.close();
        for (auto& s : receiver_in)
            s.close();
        spike_rows.close();
        best_rows.close();
        contraction_in.close();
        neighbour_in.close();
        high_level_in.close();
    }

    std::uint64_t overwritten() const
    {
        std::uint64_t total = 0;
        auto add = [&](const auto& slots) {
            for (const auto& s : slots)
                total += s.overwritten();
        };
        add(core_self);
        add(core_global);
        add(core_activation);
        add(core_neighbours);
        add(selector_in);
        add(handler_spikes);
        add(handler_activations);
        add(sender_in);
        add(receiver_in);
        return total + contraction_in.overwritten() + neighbour_in.overwritten() + high_level_in.overwritten();
    }
};

// Every process runs on its own thread and talks only through `Wiring`. Cores
// wait for their selector's reply; every other input is read latest-wins.
RunTrace run_concurrent(const RunConfig& config)
{
    const std::size_t n = config.units;
    const std::size_t d = config.problem.dimension;
    const std::uint64_t budget = config.step_budget();

    Population pop = build_population(config);
    std::vector<UnitLog> logs(n);
    Wiring wires(n);

    std::mutex failure_mutex;
    std::string failure;
    std::atomic<bool> aborted{false};

    auto guarded = [&](std::function<void()> body) {
        return [&, body = std::move(body)] {
            try {
                body();
            } catch (const std::exception& e) {
                {
                    std::lock_guard lock(failure_mutex);
                    if (failure.empty())
                        failure = e.what();
                }
                aborted = true;
                wires.close_all();
            }
        };
    };

    const auto start = Clock::now();
    std::vector<std::thread> cores;
    std::vector<std::thread> selectors;
    std::vector<std::thread> others;

    for (std::size_t i = 0; i < n; ++i) {
        cores.emplace_back(guarded([&, i] {
            SpikingCore& core = pop.cores[i];
            UnitLog& log = logs[i];
            auto emit = [&](const CoreOutput& out) {
                log.spikes.push_back(count_spikes(out.spikes));
                log.times.push_back(elapsed_ms(start));
                if (config.record_positions)
                    log.positions.push_back(out.position);
                wires.selector_in[i].put(out.position);
                wires.handler_spikes[i].put(out.spikes);
            };

            emit(core.initialise());
            CoreInputs in;
            in.activation.assign(d, 0);
            std::uint64_t seen_self = 0;
            for (std::uint64_t t = 1; t <= budget && !aborted; ++t) {
                auto self = wires.core_self[i].wait_newer(seen_self);
                if (!self)
                    return;
                in.self = std::move(*self);
                if (auto a = wires.core_activation[i].latest())
                    in.activation = std::move(*a);
                if (auto g = wires.core_global[i].latest())
                    in.global = std::move(*g);
                if (auto nb = wires.core_neighbours[i].latest())
                    in.neighbours = std::move(*nb);
                emit(core.step(in));
            }
        }));

        selectors.emplace_back(guarded([&, i] {
            std::uint64_t seen = 0;
            for (std::uint64_t evals = 0; evals <= budget;) {
                auto x = wires.selector_in[i].wait_newer(seen);
                if (!x)
                    return;
                BestUpdate best = pop.selectors[i].step(*x);
                logs[i].best.push_back(best.fitness);
                ++evals;
                wires.core_self[i].put(best);
                wires.sender_in[i].put(std::move(best));
            }
        }));

        others.emplace_back(guarded([&, i] {
            std::uint64_t seen = 0;
            const auto zeros = std::make_shared<const BoolMatrix>(n, d, std::uint8_t{0});
            while (auto s = wires.handler_spikes[i].wait_newer(seen)) {
                const SharedBoolMatrix a = wires.handler_activations[i].latest().value_or(zeros);
                HandlerOutput out = pop.handlers[i].step(*s, *a);
                wires.spike_rows.put(i, std::move(out.row));
                wires.core_activation[i].put(std::move(out.activation));
            }
        }));

        others.emplace_back(guarded([&, i] {
            std::uint64_t seen = 0;
            while (auto best = wires.sender_in[i].wait_newer(seen))
                wires.best_rows.put(i, pop.senders[i].step(*best));
        }));

        others.emplace_back(guarded([&, i] {
            std::uint64_t seen = 0;
            while (auto bundle = wires.receiver_in[i].wait_newer(seen))
                wires.core_neighbours[i].put(std::make_shared<const NeighbourView>(pop.receivers[i].step(**bundle)));
        }));
    }

    // Spike collector
    others.emplace_back(guarded([&] {
        SpikeCollector collector(n, d);
        for (;;) {
            auto rows = wires.spike_rows.wait_any();
            if (rows.empty())
                return;
            for (const auto& [unit, row] : rows)
                collector.apply(row);
            wires.contraction_in.put(std::make_shared<const BoolMatrix>(collector.matrix()));
        }
    }));

    // Best collector; silent until every unit reported once.
    others.emplace_back(guarded([&] {
        BestCollector collector(n, d);
        for (;;) {
            auto rows = wires.best_rows.wait_any();
            if (rows.empty())
                return;
            for (const auto& [unit, row] : rows)
                collector.apply(row);
            if (!collector.complete())
                continue;
            auto snapshot = std::make_shared<const PopulationSnapshot>(
                PopulationSnapshot{collector.positions(), collector.fitness()});
            wires.neighbour_in.put(snapshot);
            wires.high_level_in.put(std::move(snapshot));
        }
    }));

    others.emplace_back(guarded([&] {
        std::uint64_t seen = 0;
        while (auto s = wires.contraction_in.wait_newer(seen)) {
            auto a = std::make_shared<const BoolMatrix>(pop.contraction->step(**s));
            for (auto& slot : wires.handler_activations)
                slot.put(a);
        }
    }));

    others.emplace_back(guarded([&] {
        std::uint64_t seen = 0;
        while (auto snap = wires.neighbour_in.wait_newer(seen)) {
            auto bundle = std::make_shared<const NeighbourhoodBundle>(
                pop.neighbour_manager->step((*snap)->positions, (*snap)->fitness));
            for (auto& slot : wires.receiver_in)
                slot.put(bundle);
        }
    }));

    others.emplace_back(guarded([&] {
        std::uint64_t seen = 0;
        while (auto snap = wires.high_level_in.wait_newer(seen)) {
            const GlobalBest g = pop.high_level.step((*snap)->positions, (*snap)->fitness);
            for (auto& slot : wires.core_global)
                slot.put(g);
        }
    }));

    for (auto& t : cores)
        t.join();
    for (auto& t : selectors)
        t.join();
    wires.close_all();
    for (auto& t : others)
        t.join();

    RunTrace trace = assemble_trace(config, pop, logs);
    trace.overwritten_messages = wires.overwritten();
    if (aborted) {
        trace.aborted = true;
        trace.diagnostic = failure;
    }
    return trace;
}

} // namespace

void validate(const RunConfig& config)
{
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };

    const auto names = benchmark_names();
    if (std::find(names.begin(), names.end(), config.problem.function) == names.end())
        fail("problem.function: unknown benchmark '" + config.problem.function + "'");
    if (config.problem.dimension == 0)
        fail("problem.dimension must be positive");
    if (config.problem.function == "rosenbrock" && config.problem.dimension < 2)
        fail("problem.dimension: rosenbrock needs at least 2 dimensions");
    if (!(config.problem.lower < config.problem.upper))
        fail("problem bounds: lower must be below upper");
    if (config.units < 3)
        fail("units: need at least 3");
    if (config.step_budget() < 1)
        fail("steps: budget must be at least 1");
    if (config.topology.info == InfoTopologyKind::RandomM &&
        (config.topology.m < 1 || config.topology.m > config.units - 1))
        fail("topology.m: need 1 <= m <= units - 1");

    double total = 0.0;
    for (const auto& entry : config.population) {
        if (!(entry.fraction > 0.0))
            fail("population: fractions must be positive");
        total += entry.fraction;
    }
    if (!config.population.empty() && std::abs(total - 1.0) > 1e-9)
        fail("population: fractions must sum to 1");

    const SearchDomain domain = SearchDomain::box(config.problem.dimension, config.problem.lower, config.problem.upper);
    auto check_variant = [&](const UnitVariant& v) {
        try {
            Rng rng(0);
            const CoreParams params = resolve_core_params(v, domain, rng);
            validate(params);
            if (!v.transform.weights.empty()) {
                const std::size_t expected =
                    v.transform.reference == ReferenceStrategy::SelfGlobalAverage
                        ? 2
                        : (config.topology.info == InfoTopologyKind::Full ? config.units - 1 : config.topology.m) + 2;
                if (v.transform.weights.size() != expected)
                    fail("transform.weights: expected " + std::to_string(expected) + " weights");
                const double sum = std::accumulate(v.transform.weights.begin(), v.transform.weights.end(), 0.0);
                if (std::abs(sum - 1.0) > 1e-12)
                    fail("transform.weights must sum to 1");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            fail(std::string("unit '") + v.name + "': " + e.what());
        }
    };
    if (config.population.empty())
        check_variant(config.unit);
    for (const auto& entry : config.population)
        check_variant(entry.variant);
}

ObjectiveFunction make_objective(const RunConfig& config)
{
    Rng rng = config.problem.instance ? Rng(*config.problem.instance)
                                      : make_stream(config.seed, kGlobalStream, "problem");
    return make_benchmark(config.problem.function, config.problem.dimension, rng);
}

std::vector<std::size_t> assign_variants(const RunConfig& config)
{
    const std::size_t n = config.units;
    std::vector<std::size_t> assignment(n, 0);
    if (config.population.empty())
        return assignment;

    // Largest-remainder apportionment of n units over the fractions.
    const std::size_t k = config.population.size();
    std::vector<std::size_t> counts(k);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t e = 0; e < k; ++e) {
        const double exact = config.population[e].fraction * static_cast<double>(n);
        counts[e] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[e];
        remainders.emplace_back(exact - std::floor(exact), e);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; assigned < n; ++r, ++assigned)
        ++counts[remainders[r % k].second];

    std::size_t slot = 0;
    for (std::size_t e = 0; e < k; ++e)
        for (std::size_t c = 0; c < counts[e] && slot < n; ++c)
            assignment[slot++] = e;

    if (config.shuffle_population) {
        Rng rng = make_stream(config.seed, kGlobalStream, "assignment");
        std::shuffle(assignment.begin(), assignment.end(), rng);
    }
    return assignment;
}

CoreParams resolve_core_params(const UnitVariant& variant, const SearchDomain& domain, Rng& rng)
{
    CoreParams params;
    const DynamicsConfig& dyn = variant.dynamics;
    switch (dyn.model) {
    case ModelKind::Linear: params.model = dyn.linear ? *dyn.linear : sample_linear_model(dyn.linear_class, rng); break;
    case ModelKind::Izhikevich: params.model = dyn.izhikevich; break;
    case ModelKind::LIF: params.model = dyn.lif; break;
    }
    params.integrator = dyn.integrator;
    params.dt = dyn.dt;
    params.threshold = variant.spike.threshold;
    params.condition = variant.spike.condition;
    params.crossover = variant.spike.crossover;
    params.transform = variant.transform;

    double width = 0.0;
    for (std::size_t j = 0; j < domain.dimension(); ++j)
        width += domain.width(j);
    width /= static_cast<double>(domain.dimension());
    const double sigma = variant.spike.sigma.value_or(0.05 * width * variant.transform.gain);

    params.rule = variant.spike.rule;
    if (auto* r = std::get_if<FixedReset>(&params.rule))
        r->sigma = sigma;
    else if (auto* dir = std::get_if<Directional>(&params.rule))
        dir->sigma = sigma;
    return params;
}

RunTrace run(const RunConfig& config)
{
    validate(config);
    return config.mode == ExecutionMode::Deterministic ? run_deterministic(config) : run_concurrent(config);
}

PowerEstimate estimate_power(std::size_t n, std::size_t d, std::size_t m, double dt_sim_seconds)
{
    constexpr double kSynapticEventJ = 23.6e-12;
    constexpr double kPerNeuronJ = 89.7e-12; // update (81 pJ) + spike (8.7 pJ)
    if (n == 0 || d == 0 || !(dt_sim_seconds > 0.0))
        throw std::invalid_argument("estimate_power: n, d and dt must be positive");

    PowerEstimate est;
    est.synaptic_events = static_cast<double>(n) * static_cast<double>(n - 1) * static_cast<double>(m) *
                          static_cast<double>(d);
    est.energy_per_step_j = kSynapticEventJ * est.synaptic_events + kPerNeuronJ * static_cast<double>(n);
    est.average_power_w = est.energy_per_step_j / dt_sim_seconds;
    return est;
}

} // namespace neuropt
