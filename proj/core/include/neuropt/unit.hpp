#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "neuropt/dynamics.hpp"
#include "neuropt/heuristics.hpp"
#include "neuropt/messages.hpp"
#include "neuropt/problem.hpp"
#include "neuropt/rng.hpp"
#include "neuropt/transform.hpp"

namespace neuropt {

/// Concrete heuristic set of one spiking core.
struct CoreParams
{
    NeuronModel model = LinearModel{};
    Integrator integrator = Integrator::RK4;
    double dt = 0.01;
    ThresholdRule threshold{};
    SpikeCondition condition = WeightedMinkowski{};
    SpikeRule rule = DERandVariant{};
    std::optional<BinomialCrossover> crossover;
    TransformParams transform{};
};

void validate(const CoreParams& params);

/// Latest inputs of a spiking core. Missing global best is read as g = p;
/// missing neighbourhood leaves DE rules without partners.
struct CoreInputs
{
    std::vector<std::uint8_t> activation;
    BestUpdate self;
    std::optional<GlobalBest> global;
    std::shared_ptr<const NeighbourView> neighbours;
};

/// Encodes the candidate into d neurons, applies h_s or h_d per dimension and
/// decodes the new position.
class SpikingCore
{
public:
    /// `init_rng` draws the initial position and retained noise; `spike_rng`
    /// is owned for the lifetime of the core and feeds the spike rules.
    SpikingCore(std::size_t unit_id, const SearchDomain& domain, CoreParams params, Rng init_rng, Rng spike_rng);

    /// Initial candidate and all-false spike vector.
    CoreOutput initialise();

    /// One step; throws NumericalError when a state becomes non-finite.
    CoreOutput step(const CoreInputs& inputs);

    std::size_t unit_id() const noexcept { return unit_id_; }
    std::uint64_t steps() const noexcept { return steps_; }
    std::uint64_t fallback_events() const noexcept { return fallbacks_; }
    const Vector& position() const noexcept { return position_; }
    const Vector& retained_noise() const noexcept { return retained_noise_; }
    const CoreParams& params() const noexcept { return params_; }
    /// States encoded at the start of the last step, before any update.
    const std::vector<NeuroState>& last_states() const noexcept { return last_states_; }

private:
    std::size_t unit_id_;
    SearchDomain domain_;
    CoreParams params_;
    Rng init_rng_;
    Rng spike_rng_;
    Vector position_;
    Vector retained_noise_;
    std::vector<NeuroState> last_states_;
    std::uint64_t steps_ = 0;
    std::uint64_t fallbacks_ = 0;
};

/// Greedy low-level selection: keeps (p, f_p) and replaces it on strict
/// improvement or on the first evaluation.
class Selector
{
public:
    Selector(std::size_t unit_id, std::shared_ptr<const ObjectiveFunction> objective);

    BestUpdate step(std::span<const double> candidate);

    bool is_init() const noexcept { return is_init_; }
    const BestUpdate& best() const noexcept { return best_; }

private:
    std::size_t unit_id_;
    std::shared_ptr<const ObjectiveFunction> objective_;
    BestUpdate best_;
    bool is_init_ = false;
};

struct HandlerOutput
{
    SpikeRow row;
    std::vector<std::uint8_t> activation;
};

/// Writes the unit's spikes as a row update of S and reads its row of A.
class SpikingHandler
{
public:
    SpikingHandler(std::size_t unit_id, std::size_t units, std::size_t dimension);

    /// Throws std::invalid_argument on shape mismatch.
    HandlerOutput step(std::span<const std::uint8_t> spikes, const BoolMatrix& activations) const;

private:
    std::size_t unit_id_;
    std::size_t units_;
    std::size_t dimension_;
};

/// Tags (p, f_p) with the unit index for the P / f_p collectors.
class Sender
{
public:
    explicit Sender(std::size_t unit_id) : unit_id_(unit_id) {}

    BestRow step(const BestUpdate& best) const { return {unit_id_, best.position, best.fitness}; }

private:
    std::size_t unit_id_;
};

/// Extracts slice [:, :, i] of the neighbourhood tensor and column i of F_n.
class Receiver
{
public:
    Receiver(std::size_t unit_id, std::size_t units, std::size_t dimension);

    /// Throws std::invalid_argument on shape mismatch.
    NeighbourView step(const NeighbourhoodBundle& bundle) const;

private:
    std::size_t unit_id_;
    std::size_t units_;
    std::size_t dimension_;
};

} // namespace neuropt
