#pragma once

#include <array>
#include <cmath>

namespace neuropt {

/// Per-dimension neuromorphic state. Component 0 is the membrane-potential
/// analogue and carries position; component 1 is auxiliary (recovery).
using NeuroState = std::array<double, 2>;

inline NeuroState operator+(const NeuroState& a, const NeuroState& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline NeuroState operator-(const NeuroState& a, const NeuroState& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline NeuroState operator*(double k, const NeuroState& a) { return {k * a[0], k * a[1]}; }

inline bool is_finite(const NeuroState& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }

} // namespace neuropt
