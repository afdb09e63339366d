#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neuropt/coordination.hpp"
#include "neuropt/dynamics.hpp"
#include "neuropt/heuristics.hpp"
#include "neuropt/matrix.hpp"
#include "neuropt/problem.hpp"
#include "neuropt/transform.hpp"
#include "neuropt/unit.hpp"

namespace neuropt {

enum class ModelKind { Linear, Izhikevich, LIF };
enum class ExecutionMode { Deterministic, Concurrent };
enum class SpikeTopologyKind { Ring, Full };
enum class InfoTopologyKind { RandomM, Full };

struct ProblemConfig
{
    std::string function = "sphere";
    std::size_t dimension = 2;
    double lower = -5.0;
    double upper = 5.0;
    /// Seed of the optimum shift; derived from the master seed when unset.
    std::optional<std::uint64_t> instance;
};

struct DynamicsConfig
{
    ModelKind model = ModelKind::Linear;
    Integrator integrator = Integrator::RK4;
    double dt = 0.01;
    LinearClass linear_class = LinearClass::Random;
    /// Overrides sampling when set.
    std::optional<LinearModel> linear;
    IzhikevichModel izhikevich{};
    LIFModel lif{};
};

struct SpikeConfig
{
    SpikeCondition condition = WeightedMinkowski{};
    ThresholdRule threshold{};
    SpikeRule rule = DERandVariant{};
    /// Noise of FixedReset / Directional. Unset means 0.05 of the domain width
    /// (in state units, i.e. scaled by the transform gain).
    std::optional<double> sigma;
    std::optional<BinomialCrossover> crossover;
};

/// Configuration of one kind of unit.
struct UnitVariant
{
    std::string name = "default";
    DynamicsConfig dynamics{};
    SpikeConfig spike{};
    TransformParams transform{};
};

struct PopulationEntry
{
    double fraction = 1.0;
    UnitVariant variant{};
};

struct TopologyConfig
{
    SpikeTopologyKind spike = SpikeTopologyKind::Ring;
    InfoTopologyKind info = InfoTopologyKind::RandomM;
    std::size_t m = 10;
};

struct RunConfig
{
    ProblemConfig problem{};
    std::size_t units = 30;
    /// Homogeneous population when `population` is empty.
    UnitVariant unit{};
    /// Hybrid population: entries are assigned in contiguous blocks sized by
    /// fraction (largest remainder), or shuffled when `shuffle_population`.
    std::vector<PopulationEntry> population;
    bool shuffle_population = false;
    TopologyConfig topology{};
    /// Per-core step budget; unset means 1000 * d.
    std::optional<std::uint64_t> steps;
    std::uint64_t seed = 1;
    ExecutionMode mode = ExecutionMode::Deterministic;
    bool record_positions = false;

    std::uint64_t step_budget() const { return steps.value_or(1000 * problem.dimension); }
};

/// Throws ConfigError describing the first problem found.
void validate(const RunConfig& config);

/// Everything a run produced. Row t of the per-step tables is logical step t;
/// row 0 is the evaluated initial population.
struct RunTrace
{
    std::size_t units = 0;
    std::size_t dimension = 0;
    std::uint64_t steps_completed = 0;
    ExecutionMode mode = ExecutionMode::Deterministic;
    double optimum_value = 0.0;

    Vector global_best;                 ///< f_g per step
    Vector error;                       ///< |f_g - f(x*)| per step
    RealMatrix unit_best;               ///< f_p, steps x units
    Matrix<std::uint32_t> spikes;       ///< spike count, steps x units
    Vector wall_ms;                     ///< elapsed time when the step finished
    std::vector<RealMatrix> positions;  ///< per step, units x d; only when recorded

    Vector best_position;
    std::uint64_t evaluations = 0;
    std::uint64_t fallback_events = 0;
    std::uint64_t overwritten_messages = 0;
    std::vector<std::string> unit_variants;
    std::size_t info_neighbours = 0;

    bool aborted = false;
    std::string diagnostic;

    std::size_t rows() const noexcept { return global_best.size(); }
};

/// Builds the population and coordination processes and runs them to the step
/// budget. Failures inside a process abort the run; the partial trace is
/// returned with `aborted` set.
RunTrace run(const RunConfig& config);

/// Objective instance a config resolves to (including the seeded shift).
ObjectiveFunction make_objective(const RunConfig& config);

/// Index into the population (0 for a homogeneous run) for every unit.
std::vector<std::size_t> assign_variants(const RunConfig& config);

/// Concrete heuristics of one unit; samples random linear coefficients from `rng`.
CoreParams resolve_core_params(const UnitVariant& variant, const SearchDomain& domain, Rng& rng);

struct PowerEstimate
{
    double synaptic_events = 0.0;
    double energy_per_step_j = 0.0;
    double average_power_w = 0.0;
};

/// Upper-bound energy model: N_syn = n (n - 1) m d, E = 23.6 pJ N_syn + 89.7 pJ n,
/// P = E / dt_sim.
PowerEstimate estimate_power(std::size_t n, std::size_t d, std::size_t m, double dt_sim_seconds);

} // namespace neuropt
