#include "neuropt/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace neuropt {

namespace {

void check_weights(std::span<const double> weights, std::size_t expected)
{
    if (weights.size() != expected) {
        throw std::invalid_argument("compute_xref: expected " + std::to_string(expected) + " weights, got " +
                                    std::to_string(weights.size()));
    }
    double sum = 0.0;
    for (double w : weights)
        sum += w;
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("compute_xref: weights must sum to 1");
}

} // namespace

Vector compute_xref(ReferenceStrategy strategy, std::span<const double> self_best, std::span<const double> global_best,
                    const RealMatrix& neighbours, std::span<const double> weights)
{
    const std::size_t d = self_best.size();
    if (global_best.size() != d)
        throw std::invalid_argument("compute_xref: p and g differ in length");

    const bool with_neighbours = strategy == ReferenceStrategy::SelfGlobalNeighbourAverage;
    const std::size_t m = with_neighbours ? neighbours.rows() : 0;
    if (with_neighbours) {
        if (m == 0)
            throw std::invalid_argument("compute_xref: neighbour strategy needs at least one neighbour");
        if (neighbours.cols() != d)
            throw std::invalid_argument("compute_xref: neighbour rows have wrong length");
    }

    const std::size_t count = m + 2;
    std::vector<double> uniform;
    if (weights.empty()) {
        uniform.assign(count, 1.0 / static_cast<double>(count));
        weights = uniform;
    } else {
        check_weights(weights, count);
    }

    Vector xref(d);
    for (std::size_t j = 0; j < d; ++j) {
        double acc = weights[0] * self_best[j] + weights[1] * global_best[j];
        for (std::size_t k = 0; k < m; ++k)
            acc += weights[k + 2] * neighbours(k, j);
        xref[j] = acc;
    }
    return xref;
}

} // namespace neuropt
