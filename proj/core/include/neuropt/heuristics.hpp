#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>

#include "neuropt/rng.hpp"
#include "neuropt/state.hpp"

namespace neuropt {

// Thresholds

enum class ThresholdVariant {
    Fixed,         ///< alpha_thr
    GlobalSelfGap, ///< alpha_thr |g_j - p_j|
    RefSelfGap,    ///< alpha_thr |xref_j - p_j|
};

struct ThresholdRule
{
    ThresholdVariant variant = ThresholdVariant::GlobalSelfGap;
    double alpha_thr = 1.0;
};

double threshold(const ThresholdRule& rule, double global_best, double self_best, double xref);

// Self-spiking conditions

/// |v_1| >= theta
struct AbsThreshold
{};

/// ||w (.) v||_q > theta
struct WeightedMinkowski
{
    double q = 2.0;
    std::array<double, 2> weights{1.0, 0.0};
};

/// ||v||_2 < epsilon / (1 + t)
struct ShrinkingBall
{
    double epsilon = 1.0;
};

/// ||v||_2 <= attractor when tr <= 0, else ||v||_2 >= repeller.
struct DiscCondition
{
    double attractor = 0.5;
    double repeller = 1.5;
};

using SpikeCondition = std::variant<AbsThreshold, WeightedMinkowski, ShrinkingBall, DiscCondition>;

void validate(const SpikeCondition& cond);

/// Self-spiking predicate. `theta` is used by AbsThreshold and
/// WeightedMinkowski; `model_trace` selects the Disc branch.
bool phi_s(const SpikeCondition& cond, const NeuroState& v, std::uint64_t t, double theta, double model_trace);

/// phi_s OR the neighbour-induced activation.
bool phi(const SpikeCondition& cond, const NeuroState& v, std::uint64_t t, double theta, bool activation,
         double model_trace);

// Spike-triggered rules

/// Fresh state, components ~ N(0, 1).
struct RandomReset
{};

/// Self-best state plus N(0, sigma) noise.
struct FixedReset
{
    double sigma = 0.5;
};

enum class DirectionalTarget { SelfBest, GlobalBest, Blend };

/// v + alpha_d (target - v) + N(0, sigma)
struct Directional
{
    double alpha_d = 0.5;
    double sigma = 0.5;
    DirectionalTarget target = DirectionalTarget::GlobalBest;
};

/// DE/current-to-best/1: v + F (global - v) + F (n_r1 - n_r2)
struct DECurrentToBest
{
    double F = 0.5;
};

/// DE/current-to-rand/1: v + F (n_r1 - v) + F (n_r2 - n_r3)
struct DERandVariant
{
    double F = 0.5;
};

using SpikeRule = std::variant<RandomReset, FixedReset, Directional, DECurrentToBest, DERandVariant>;

/// Optional binomial crossover applied after a rule: each state component
/// keeps the new value with probability p_cr, otherwise the old one.
struct BinomialCrossover
{
    double p_cr = 0.9;
};

void validate(const SpikeRule& rule);
void validate(const BinomialCrossover& crossover);

/// Encoded states the rules read from. All states must be encoded with the
/// current reference point.
struct SpikeContext
{
    NeuroState self_best{};
    NeuroState global_best{};
    std::span<const NeuroState> neighbour_best{};
};

struct SpikeOutcome
{
    NeuroState state{};
    /// The DE rule lacked distinct neighbours and fell back to FixedReset(0.1).
    bool fallback = false;
};

/// Sigma of the FixedReset fallback used when DE sampling is impossible.
inline constexpr double kFallbackSigma = 0.1;

SpikeOutcome apply_spike_rule(const SpikeRule& rule, const NeuroState& v, const SpikeContext& ctx, Rng& rng);

NeuroState apply_crossover(const BinomialCrossover& crossover, const NeuroState& before, const NeuroState& after,
                           Rng& rng);

} // namespace neuropt
