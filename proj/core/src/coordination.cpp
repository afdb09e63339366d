#include "neuropt/coordination.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace neuropt {

namespace {

void check_square_no_loops(const BoolMatrix& m, const char* what)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::invalid_argument(std::string(what) + ": adjacency must be square and non-empty");
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (m(i, i) != 0)
            throw std::invalid_argument(std::string(what) + ": self-connection at unit " + std::to_string(i));
    }
}

} // namespace

SpikeTopology::SpikeTopology(BoolMatrix adjacency) : adjacency_(std::move(adjacency))
{
    check_square_no_loops(adjacency_, "spike topology");
}

WeightTensor::WeightTensor(const SpikeTopology& topology, std::size_t dimension)
    : weights_(topology.units(), topology.units(), dimension, 0)
{
    const auto& w = topology.adjacency();
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t k = 0; k < w.cols(); ++k)
            for (std::size_t j = 0; j < dimension; ++j)
                weights_(i, k, j) = w(i, k);
}

InfoTopology::InfoTopology(BoolMatrix adjacency) : adjacency_(std::move(adjacency))
{
    check_square_no_loops(adjacency_, "info topology");
    neighbours_.resize(adjacency_.rows());
    for (std::size_t i = 0; i < adjacency_.rows(); ++i) {
        for (std::size_t k = 0; k < adjacency_.cols(); ++k) {
            if (adjacency_(i, k) != 0)
                neighbours_[i].push_back(k);
        }
        if (neighbours_[i].empty())
            throw std::invalid_argument("info topology: unit " + std::to_string(i) + " has no neighbours");
        max_neighbours_ = std::max(max_neighbours_, neighbours_[i].size());
    }
}

SpikeTopology build_ring(std::size_t n)
{
    if (n < 3)
        throw std::invalid_argument("build_ring: need at least 3 units");
    BoolMatrix w(n, n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        w(i, (i + 1) % n) = 1;
        w(i, (i + n - 1) % n) = 1;
    }
    return SpikeTopology(std::move(w));
}

SpikeTopology build_full_spike(std::size_t n)
{
    if (n < 2)
        throw std::invalid_argument("build_full_spike: need at least 2 units");
    BoolMatrix w(n, n, 1);
    for (std::size_t i = 0; i < n; ++i)
        w(i, i) = 0;
    return SpikeTopology(std::move(w));
}

InfoTopology build_random_info(std::size_t n, std::size_t m, Rng& rng)
{
    if (n < 2 || m < 1 || m > n - 1)
        throw std::invalid_argument("build_random_info: need 1 <= m <= n - 1");
    BoolMatrix w(n, n, 0);
    std::vector<std::size_t> others(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t slot = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k != i)
                others[slot++] = k;
        }
        for (std::size_t l = 0; l < m; ++l) {
            std::uniform_int_distribution<std::size_t> pick(l, others.size() - 1);
            std::swap(others[l], others[pick(rng)]);
            w(i, others[l]) = 1;
        }
    }
    return InfoTopology(std::move(w));
}

InfoTopology build_full_info(std::size_t n)
{
    if (n < 2)
        throw std::invalid_argument("build_full_info: need at least 2 units");
    BoolMatrix w(n, n, 1);
    for (std::size_t i = 0; i < n; ++i)
        w(i, i) = 0;
    return InfoTopology(std::move(w));
}

BoolMatrix tensor_contract(const WeightTensor& weights, const BoolMatrix& spikes)
{
    const std::size_t n = weights.units();
    const std::size_t d = weights.dimension();
    require_shape(spikes.rows(), spikes.cols(), n, d, "tensor_contract: spike matrix");

    BoolMatrix out(n, d, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            std::uint8_t acc = 0;
            for (std::size_t k = 0; k < n && acc == 0; ++k)
                acc = (weights(i, k, j) != 0 && spikes(k, j) != 0) ? 1 : 0;
            out(i, j) = acc;
        }
    }
    return out;
}

NeighbourhoodBundle gather_neighbourhoods(const InfoTopology& topology, const RealMatrix& positions,
                                          std::span<const double> fitness)
{
    const std::size_t n = topology.units();
    const std::size_t d = positions.cols();
    if (positions.rows() != n)
        throw std::invalid_argument("neighbour manager: position matrix has wrong row count");
    if (fitness.size() != n)
        throw std::invalid_argument("neighbour manager: fitness vector has wrong length");

    const std::size_t m = topology.max_neighbours();
    NeighbourhoodBundle bundle{Tensor3<double>(m, d, n), RealMatrix(m, n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& hood = topology.neighbours(i);
        for (std::size_t l = 0; l < m; ++l) {
            const std::size_t k = l < hood.size() ? hood[l] : i;
            for (std::size_t j = 0; j < d; ++j)
                bundle.positions(l, j, i) = positions(k, j);
            bundle.fitness(l, i) = fitness[k];
        }
    }
    return bundle;
}

GlobalBest HighLevelSelector::step(const RealMatrix& positions, std::span<const double> fitness)
{
    if (fitness.empty())
        throw std::invalid_argument("high-level selector: empty population");
    if (positions.rows() != fitness.size())
        throw std::invalid_argument("high-level selector: positions and fitness differ in length");

    // std::min_element returns the first minimum, so ties go to the lowest index.
    const auto it = std::min_element(fitness.begin(), fitness.end());
    const auto best = static_cast<std::size_t>(std::distance(fitness.begin(), it));
    if (!best_.is_init || *it < best_.fitness) {
        const auto row = positions.row(best);
        best_.position.assign(row.begin(), row.end());
        best_.fitness = *it;
        best_.is_init = true;
    }
    return best_;
}

void SpikeCollector::apply(const SpikeRow& row)
{
    if (row.unit >= spikes_.rows() || row.spikes.size() != spikes_.cols())
        throw std::invalid_argument("spike collector: malformed row update");
    std::copy(row.spikes.begin(), row.spikes.end(), spikes_.row(row.unit).begin());
}

BestCollector::BestCollector(std::size_t units, std::size_t dimension)
    : positions_(units, dimension), fitness_(units, 0.0), reported_(units, 0)
{}

void BestCollector::apply(const BestRow& row)
{
    if (row.unit >= positions_.rows() || row.position.size() != positions_.cols())
        throw std::invalid_argument("best collector: malformed row update");
    std::copy(row.position.begin(), row.position.end(), positions_.row(row.unit).begin());
    fitness_[row.unit] = row.fitness;
    if (reported_[row.unit] == 0) {
        reported_[row.unit] = 1;
        ++reported_count_;
    }
}

} // namespace neuropt
