#include "neuropt/rng.hpp"

namespace neuropt {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t unit, std::string_view role) noexcept
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ splitmix64(unit + 1));
    h = splitmix64(h ^ fnv1a(role));
    return h;
}

} // namespace neuropt
