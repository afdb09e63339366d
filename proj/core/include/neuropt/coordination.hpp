#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "neuropt/matrix.hpp"
#include "neuropt/messages.hpp"
#include "neuropt/rng.hpp"

namespace neuropt {

/// Spike-propagation graph W_s (n x n, zero diagonal).
class SpikeTopology
{
public:
    /// Throws std::invalid_argument for a non-square matrix or self-synapses.
    explicit SpikeTopology(BoolMatrix adjacency);

    std::size_t units() const noexcept { return adjacency_.rows(); }
    const BoolMatrix& adjacency() const noexcept { return adjacency_; }

private:
    BoolMatrix adjacency_;
};

/// W_s replicated over d slices: weights(i, k, j) == W_s(i, k).
class WeightTensor
{
public:
    WeightTensor(const SpikeTopology& topology, std::size_t dimension);

    std::size_t units() const noexcept { return weights_.extent(0); }
    std::size_t dimension() const noexcept { return weights_.extent(2); }
    std::uint8_t operator()(std::size_t i, std::size_t k, std::size_t j) const { return weights_(i, k, j); }

private:
    Tensor3<std::uint8_t> weights_;
};

/// Information-sharing graph W_x with its neighbour lists (ascending).
class InfoTopology
{
public:
    /// Throws std::invalid_argument for a non-square matrix, self-loops or a
    /// unit without neighbours.
    explicit InfoTopology(BoolMatrix adjacency);

    std::size_t units() const noexcept { return adjacency_.rows(); }
    const BoolMatrix& adjacency() const noexcept { return adjacency_; }
    const std::vector<std::size_t>& neighbours(std::size_t i) const { return neighbours_[i]; }
    /// Largest neighbourhood size.
    std::size_t max_neighbours() const noexcept { return max_neighbours_; }

private:
    BoolMatrix adjacency_;
    std::vector<std::vector<std::size_t>> neighbours_;
    std::size_t max_neighbours_ = 0;
};

/// Bidirectional ring, n >= 3.
SpikeTopology build_ring(std::size_t n);
/// Complete graph without self-synapses, n >= 2.
SpikeTopology build_full_spike(std::size_t n);

/// Every unit gets exactly m distinct random neighbours, 1 <= m <= n - 1.
InfoTopology build_random_info(std::size_t n, std::size_t m, Rng& rng);
InfoTopology build_full_info(std::size_t n);

/// A(i, j) = OR_k ( W(i, k, j) AND S(k, j) ).
BoolMatrix tensor_contract(const WeightTensor& weights, const BoolMatrix& spikes);

/// Positions and fitness grouped per neighbourhood. Slot l of slice i holds the
/// l-th neighbour of i; unused slots repeat unit i's own row.
NeighbourhoodBundle gather_neighbourhoods(const InfoTopology& topology, const RealMatrix& positions,
                                          std::span<const double> fitness);

/// Greedy global selection over the population's particular bests.
class HighLevelSelector
{
public:
    /// Throws std::invalid_argument for an empty population or length mismatch.
    GlobalBest step(const RealMatrix& positions, std::span<const double> fitness);

    const GlobalBest& best() const noexcept { return best_; }

private:
    GlobalBest best_;
};

class TensorContractionLayer
{
public:
    TensorContractionLayer(const SpikeTopology& topology, std::size_t dimension) : weights_(topology, dimension) {}

    BoolMatrix step(const BoolMatrix& spikes) const { return tensor_contract(weights_, spikes); }

private:
    WeightTensor weights_;
};

class NeighbourManager
{
public:
    explicit NeighbourManager(InfoTopology topology) : topology_(std::move(topology)) {}

    NeighbourhoodBundle step(const RealMatrix& positions, std::span<const double> fitness) const
    {
        return gather_neighbourhoods(topology_, positions, fitness);
    }

    const InfoTopology& topology() const noexcept { return topology_; }

private:
    InfoTopology topology_;
};

/// Assembles S from per-unit row updates, applied in arrival order.
class SpikeCollector
{
public:
    SpikeCollector(std::size_t units, std::size_t dimension) : spikes_(units, dimension, 0) {}

    void apply(const SpikeRow& row);
    const BoolMatrix& matrix() const noexcept { return spikes_; }

private:
    BoolMatrix spikes_;
};

/// Assembles P and f_p from per-unit row updates. `complete()` turns true once
/// every unit has reported at least once.
class BestCollector
{
public:
    BestCollector(std::size_t units, std::size_t dimension);

    void apply(const BestRow& row);
    const RealMatrix& positions() const noexcept { return positions_; }
    const Vector& fitness() const noexcept { return fitness_; }
    bool complete() const noexcept { return reported_count_ == reported_.size(); }

private:
    RealMatrix positions_;
    Vector fitness_;
    std::vector<std::uint8_t> reported_;
    std::size_t reported_count_ = 0;
};

} // namespace neuropt
