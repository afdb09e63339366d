#pragma once

#include <span>
#include <vector>

#include "neuropt/matrix.hpp"
#include "neuropt/state.hpp"

namespace neuropt {

enum class ReferenceStrategy {
    SelfGlobalAverage,          ///< w1 p + w2 g
    SelfGlobalNeighbourAverage, ///< w1 p + w2 g + sum_k w_{k+2} p_k
};

struct TransformParams
{
    double gain = 1.0;
    ReferenceStrategy reference = ReferenceStrategy::SelfGlobalAverage;
    /// Normalised weights (p, g, neighbours...). Empty selects uniform weighting.
    std::vector<double> weights;
};

/// Reference point for the position/state mapping. `neighbours` holds one
/// neighbour best position per row and is ignored by SelfGlobalAverage.
/// Throws std::invalid_argument when weights are not normalised, have the
/// wrong count, or when the neighbour strategy gets no neighbours.
Vector compute_xref(ReferenceStrategy strategy, std::span<const double> self_best, std::span<const double> global_best,
                    const RealMatrix& neighbours, std::span<const double> weights = {});

/// Maps one position component to its state: (gain (x - xref), 2r - (1 - xref)).
inline NeuroState encode(double x, double xref, double gain, double retained_noise)
{
    return {gain * (x - xref), 2.0 * retained_noise - (1.0 - xref)};
}

/// Inverse of encode; only the first component carries position.
inline double decode(const NeuroState& v, double xref, double gain)
{
    return v[0] / gain + xref;
}

} // namespace neuropt
