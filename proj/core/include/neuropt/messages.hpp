#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "neuropt/matrix.hpp"

namespace neuropt {

// Payloads exchanged between processes. Population-wide matrices travel as
// shared immutable snapshots so one broadcast does not copy n times.

/// Spiking Core -> Selector / Spiking Handler.
struct CoreOutput
{
    std::vector<std::uint8_t> spikes;
    Vector position;
};

/// Selector -> Spiking Core / Sender.
struct BestUpdate
{
    Vector position;
    double fitness = 0.0;
};

/// High-Level Selector -> Spiking Cores.
struct GlobalBest
{
    Vector position;
    double fitness = 0.0;
    bool is_init = false;
};

/// Spiking Handler -> spike collector: one row of S.
struct SpikeRow
{
    std::size_t unit = 0;
    std::vector<std::uint8_t> spikes;
};

/// Sender -> best collector: one row of P and one entry of f_p.
struct BestRow
{
    std::size_t unit = 0;
    Vector position;
    double fitness = 0.0;
};

/// Neighbour Manager output: positions m x d x n and fitness m x n.
struct NeighbourhoodBundle
{
    Tensor3<double> positions;
    RealMatrix fitness;
};

/// Receiver -> Spiking Core: this unit's slice of the bundle.
struct NeighbourView
{
    RealMatrix positions; ///< m x d
    Vector fitness;       ///< m
};

using SharedBoolMatrix = std::shared_ptr<const BoolMatrix>;
using SharedBundle = std::shared_ptr<const NeighbourhoodBundle>;

} // namespace neuropt
