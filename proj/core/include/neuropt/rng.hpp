#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace neuropt {

using Rng = std::mt19937_64;

/// Mixes (master seed, unit, role) into an independent stream seed. The same
/// triple always yields the same seed, independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t unit, std::string_view role) noexcept;

inline Rng make_stream(std::uint64_t master, std::uint64_t unit, std::string_view role)
{
    return Rng(derive_seed(master, unit, role));
}

/// Unit index used for population-level streams (topology, problem instance).
inline constexpr std::uint64_t kGlobalStream = ~std::uint64_t{0};

} // namespace neuropt
