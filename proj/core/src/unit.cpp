#include "neuropt/unit.hpp"

#include <stdexcept>
#include <string>

#include "neuropt/errors.hpp"

namespace neuropt {

void validate(const CoreParams& params)
{
    validate(params.model);
    validate(params.condition);
    validate(params.rule);
    if (params.crossover)
        validate(*params.crossover);
    if (!(params.dt > 0.0))
        throw std::invalid_argument("core: dt must be positive");
    if (!(params.threshold.alpha_thr > 0.0))
        throw std::invalid_argument("core: alpha_thr must be positive");
    if (!(params.transform.gain > 0.0))
        throw std::invalid_argument("core: transform gain must be positive");
}

SpikingCore::SpikingCore(std::size_t unit_id, const SearchDomain& domain, CoreParams params, Rng init_rng,
                         Rng spike_rng)
    : unit_id_(unit_id),
      domain_(domain),
      params_(std::move(params)),
      init_rng_(init_rng),
      spike_rng_(spike_rng)
{
    validate(params_);
    position_ = sample_uniform(domain_, init_rng_);
    std::uniform_real_distribution<double> unit_interval(0.0, 1.0);
    retained_noise_.resize(domain_.dimension());
    for (double& r : retained_noise_)
        r = unit_interval(init_rng_);
    last_states_.assign(domain_.dimension(), NeuroState{});
}

CoreOutput SpikingCore::initialise()
{
    return {std::vector<std::uint8_t>(domain_.dimension(), 0), position_};
}

CoreOutput SpikingCore::step(const CoreInputs& in)
{
    const std::size_t d = domain_.dimension();
    if (in.activation.size() != d || in.self.position.size() != d)
        throw std::invalid_argument("spiking core: input vectors have wrong length");

    const Vector& p = in.self.position;
    const Vector& g = (in.global && in.global->is_init) ? in.global->position : p;
    if (g.size() != d)
        throw std::invalid_argument("spiking core: global best has wrong length");

    static const RealMatrix kNoNeighbours;
    const RealMatrix& neighbours = in.neighbours ? in.neighbours->positions : kNoNeighbours;
    if (!neighbours.empty() && neighbours.cols() != d)
        throw std::invalid_argument("spiking core: neighbourhood has wrong width");

    const TransformParams& tp = params_.transform;
    ReferenceStrategy strategy = tp.reference;
    std::span<const double> weights = tp.weights;
    if (strategy == ReferenceStrategy::SelfGlobalNeighbourAverage && neighbours.rows() == 0) {
        // Nothing received yet from the neighbour manager.
        strategy = ReferenceStrategy::SelfGlobalAverage;
        weights = {};
    }
    const Vector xref = compute_xref(strategy, p, g, neighbours, weights);

    const std::uint64_t t = steps_++;
    CoreOutput out{std::vector<std::uint8_t>(d, 0), Vector(d)};
    std::vector<NeuroState> partners(neighbours.rows());

    for (std::size_t j = 0; j < d; ++j) {
        const double gain = tp.gain;
        const double r = retained_noise_[j];
        const NeuroState v = encode(position_[j], xref[j], gain, r);
        last_states_[j] = v;

        const double theta = threshold(params_.threshold, g[j], p[j], xref[j]);
        const double trace = jacobian_trace(params_.model, v);
        out.spikes[j] = phi_s(params_.condition, v, t, theta, trace) ? 1 : 0;

        NeuroState next;
        if (phi(params_.condition, v, t, theta, in.activation[j] != 0, trace)) {
            for (std::size_t k = 0; k < partners.size(); ++k)
                partners[k] = encode(neighbours(k, j), xref[j], gain, r);
            const SpikeContext ctx{encode(p[j], xref[j], gain, r), encode(g[j], xref[j], gain, r), partners};
            SpikeOutcome outcome = apply_spike_rule(params_.rule, v, ctx, spike_rng_);
            fallbacks_ += outcome.fallback ? 1 : 0;
            next = outcome.state;
            if (params_.crossover)
                next = apply_crossover(*params_.crossover, v, next, spike_rng_);
            if (!is_finite(next))
                throw NumericalError("spiking core " + std::to_string(unit_id_) + ": spike rule produced a non-finite state");
        } else {
            next = integrate_step(params_.model, v, params_.dt, params_.integrator);
        }
        out.position[j] = decode(next, xref[j], gain);
    }

    position_ = clip(domain_, out.position);
    out.position = position_;
    return out;
}

Selector::Selector(std::size_t unit_id, std::shared_ptr<const ObjectiveFunction> objective)
    : unit_id_(unit_id), objective_(std::move(objective))
{
    if (!objective_)
        throw std::invalid_argument("selector: objective is null");
}

BestUpdate Selector::step(std::span<const double> candidate)
{
    const double fx = objective_->evaluate(candidate);
    if (!is_init_ || fx < best_.fitness) {
        best_.position.assign(candidate.begin(), candidate.end());
        best_.fitness = fx;
        is_init_ = true;
    }
    return best_;
}

SpikingHandler::SpikingHandler(std::size_t unit_id, std::size_t units, std::size_t dimension)
    : unit_id_(unit_id), units_(units), dimension_(dimension)
{
    if (unit_id_ >= units_)
        throw std::invalid_argument("spiking handler: unit id out of range");
}

HandlerOutput SpikingHandler::step(std::span<const std::uint8_t> spikes, const BoolMatrix& activations) const
{
    if (spikes.size() != dimension_)
        throw std::invalid_argument("spiking handler: spike vector has wrong length");
    require_shape(activations.rows(), activations.cols(), units_, dimension_, "spiking handler: activation matrix");
    const auto a = activations.row(unit_id_);
    return {SpikeRow{unit_id_, {spikes.begin(), spikes.end()}}, {a.begin(), a.end()}};
}

Receiver::Receiver(std::size_t unit_id, std::size_t units, std::size_t dimension)
    : unit_id_(unit_id), units_(units), dimension_(dimension)
{
    if (unit_id_ >= units_)
        throw std::invalid_argument("receiver: unit id out of range");
}

NeighbourView Receiver::step(const NeighbourhoodBundle& bundle) const
{
    const std::size_t m = bundle.positions.extent(0);
    if (bundle.positions.extent(1) != dimension_ || bundle.positions.extent(2) != units_)
        throw std::invalid_argument("receiver: neighbourhood tensor has wrong shape");
    require_shape(bundle.fitness.rows(), bundle.fitness.cols(), m, units_, "receiver: fitness matrix");

    NeighbourView view{RealMatrix(m, dimension_), Vector(m)};
    for (std::size_t l = 0; l < m; ++l) {
        for (std::size_t j = 0; j < dimension_; ++j)
            view.positions(l, j) = bundle.positions(l, j, unit_id_);
        view.fitness[l] = bundle.fitness(l, unit_id_);
    }
    return view;
}

} // namespace neuropt
