#include "neuropt/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace neuropt {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};

double l2(const NeuroState& v)
{
    return std::hypot(v[0], v[1]);
}

NeuroState gaussian(Rng& rng, double sigma)
{
    if (sigma == 0.0)
        return {0.0, 0.0};
    std::normal_distribution<double> dist(0.0, sigma);
    const double a = dist(rng);
    return {a, dist(rng)};
}

// Indices of value-distinct entries, first occurrence kept.
std::vector<std::size_t> distinct_indices(std::span<const NeuroState> states)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](std::size_t k) { return states[k] == states[i]; });
        if (!seen)
            out.push_back(i);
    }
    return out;
}

// Draws `count` entries without replacement (partial Fisher-Yates).
std::vector<std::size_t> draw_without_replacement(std::vector<std::size_t> pool, std::size_t count, Rng& rng)
{
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(count);
    return pool;
}

SpikeOutcome fallback(const SpikeContext& ctx, Rng& rng)
{
    return {ctx.self_best + gaussian(rng, kFallbackSigma), true};
}

} // namespace

double threshold(const ThresholdRule& rule, double global_best, double self_best, double xref)
{
    switch (rule.variant) {
    case ThresholdVariant::Fixed: return rule.alpha_thr;
    case ThresholdVariant::GlobalSelfGap: return rule.alpha_thr * std::abs(global_best - self_best);
    case ThresholdVariant::RefSelfGap: return rule.alpha_thr * std::abs(xref - self_best);
    }
    return rule.alpha_thr;
}

void validate(const SpikeCondition& cond)
{
    std::visit(overloaded{
                   [](const AbsThreshold&) {},
                   [](const WeightedMinkowski& c) {
                       if (!(c.q >= 1.0))
                           throw std::invalid_argument("minkowski condition: q must be >= 1");
                       for (double w : c.weights) {
                           if (!(w >= 0.0 && w <= 1.0))
                               throw std::invalid_argument("minkowski condition: weights must lie in [0, 1]");
                       }
                       if (std::abs(std::hypot(c.weights[0], c.weights[1]) - 1.0) > 1e-9)
                           throw std::invalid_argument("minkowski condition: weights must form a unit vector");
                   },
                   [](const ShrinkingBall& c) {
                       if (!(c.epsilon > 0.0))
                           throw std::invalid_argument("shrinking ball condition: epsilon must be positive");
                   },
                   [](const DiscCondition& c) {
                       if (!(c.attractor > 0.0 && c.attractor < c.repeller))
                           throw std::invalid_argument("disc condition: need 0 < attractor < repeller");
                   },
               },
               cond);
}

bool phi_s(const SpikeCondition& cond, const NeuroState& v, std::uint64_t t, double theta, double model_trace)
{
    return std::visit(overloaded{
                          [&](const AbsThreshold&) { return std::abs(v[0]) >= theta; },
                          [&](const WeightedMinkowski& c) {
                              const double a = std::abs(c.weights[0] * v[0]);
                              const double b = std::abs(c.weights[1] * v[1]);
                              const double norm = c.q == 2.0 ? std::hypot(a, b)
                                                             : std::pow(std::pow(a, c.q) + std::pow(b, c.q), 1.0 / c.q);
                              return norm > theta;
                          },
                          [&](const ShrinkingBall& c) {
                              return l2(v) < c.epsilon / (1.0 + static_cast<double>(t));
                          },
                          [&](const DiscCondition& c) {
                              return model_trace <= 0.0 ? l2(v) <= c.attractor : l2(v) >= c.repeller;
                          },
                      },
                      cond);
}

bool phi(const SpikeCondition& cond, const NeuroState& v, std::uint64_t t, double theta, bool activation,
         double model_trace)
{
    return phi_s(cond, v, t, theta, model_trace) || activation;
}

void validate(const SpikeRule& rule)
{
    auto check_F = [](double F) {
        if (!(F >= 0.0 && F <= 2.0))
            throw std::invalid_argument("DE rule: F must lie in [0, 2]");
    };
    std::visit(overloaded{
                   [](const RandomReset&) {},
                   [](const FixedReset& r) {
                       if (!(r.sigma >= 0.0))
                           throw std::invalid_argument("fixed reset: sigma must be >= 0");
                   },
                   [](const Directional& r) {
                       if (!(r.alpha_d > 0.0))
                           throw std::invalid_argument("directional rule: alpha_d must be positive");
                       if (!(r.sigma >= 0.0))
                           throw std::invalid_argument("directional rule: sigma must be >= 0");
                   },
                   [&](const DECurrentToBest& r) { check_F(r.F); },
                   [&](const DERandVariant& r) { check_F(r.F); },
               },
               rule);
}

void validate(const BinomialCrossover& crossover)
{
    if (!(crossover.p_cr >= 0.0 && crossover.p_cr <= 1.0))
        throw std::invalid_argument("crossover: p_cr must lie in [0, 1]");
}

SpikeOutcome apply_spike_rule(const SpikeRule& rule, const NeuroState& v, const SpikeContext& ctx, Rng& rng)
{
    return std::visit(
        overloaded{
            [&](const RandomReset&) -> SpikeOutcome { return {gaussian(rng, 1.0), false}; },
            [&](const FixedReset& r) -> SpikeOutcome { return {ctx.self_best + gaussian(rng, r.sigma), false}; },
            [&](const Directional& r) -> SpikeOutcome {
                NeuroState target = ctx.global_best;
                if (r.target == DirectionalTarget::SelfBest)
                    target = ctx.self_best;
                else if (r.target == DirectionalTarget::Blend)
                    target = 0.5 * (ctx.self_best + ctx.global_best);
                return {v + r.alpha_d * (target - v) + gaussian(rng, r.sigma), false};
            },
            [&](const DECurrentToBest& r) -> SpikeOutcome {
                const auto pool = distinct_indices(ctx.neighbour_best);
                if (pool.size() < 2)
                    return fallback(ctx, rng);
                const auto idx = draw_without_replacement(pool, 2, rng);
                const auto& n = ctx.neighbour_best;
                return {v + r.F * (ctx.global_best - v) + r.F * (n[idx[0]] - n[idx[1]]), false};
            },
            [&](const DERandVariant& r) -> SpikeOutcome {
                const auto pool = distinct_indices(ctx.neighbour_best);
                if (pool.size() < 3)
                    return fallback(ctx, rng);
                const auto idx = draw_without_replacement(pool, 3, rng);
                const auto& n = ctx.neighbour_best;
                return {v + r.F * (n[idx[0]] - v) + r.F * (n[idx[1]] - n[idx[2]]), false};
            },
        },
        rule);
}

NeuroState apply_crossover(const BinomialCrossover& crossover, const NeuroState& before, const NeuroState& after,
                           Rng& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    NeuroState out;
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = crossover.p_cr - u(rng) > 0.0 ? after[k] : before[k];
    return out;
}

} // namespace neuropt
