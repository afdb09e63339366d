#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neuropt/matrix.hpp"
#include "neuropt/rng.hpp"

namespace neuropt {

/// Box-constrained feasible region: lower[j] <= x[j] <= upper[j].
class SearchDomain
{
public:
    SearchDomain(Vector lower, Vector upper);

    /// Same bounds on every axis.
    static SearchDomain box(std::size_t dimension, double lower, double upper);

    std::size_t dimension() const noexcept { return lower_.size(); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }
    double width(std::size_t j) const { return upper_[j] - lower_[j]; }
    bool contains(std::span<const double> x) const;

private:
    Vector lower_;
    Vector upper_;
};

/// A deterministic objective with an evaluation counter. The counter is atomic
/// so one instance can be shared by every unit's Selector.
class ObjectiveFunction
{
public:
    using Evaluator = std::function<double(std::span<const double>)>;

    ObjectiveFunction(std::string identifier, std::size_t dimension, Evaluator evaluator,
                      std::optional<double> optimum_value = std::nullopt,
                      std::optional<Vector> optimum_position = std::nullopt);

    ObjectiveFunction(const ObjectiveFunction& other);
    ObjectiveFunction& operator=(const ObjectiveFunction&) = delete;

    /// Throws std::invalid_argument when x has the wrong length.
    double evaluate(std::span<const double> x) const;
    double operator()(std::span<const double> x) const { return evaluate(x); }

    const std::string& identifier() const noexcept { return identifier_; }
    std::size_t dimension() const noexcept { return dimension_; }
    const std::optional<double>& optimum_value() const noexcept { return optimum_value_; }
    const std::optional<Vector>& optimum_position() const noexcept { return optimum_position_; }
    std::uint64_t evaluation_count() const noexcept { return evaluations_.load(std::memory_order_relaxed); }

private:
    std::string identifier_;
    std::size_t dimension_;
    Evaluator evaluator_;
    std::optional<double> optimum_value_;
    std::optional<Vector> optimum_position_;
    mutable std::atomic<std::uint64_t> evaluations_{0};
};

Vector sample_uniform(const SearchDomain& domain, Rng& rng);

/// Componentwise projection onto the box.
Vector clip(const SearchDomain& domain, std::span<const double> x);

/// Names accepted by make_benchmark.
std::span<const std::string_view> benchmark_names();

/// Native test function with its optimum (value 0) moved to `shift`.
ObjectiveFunction make_benchmark(std::string_view name, std::size_t dimension, Vector shift);

/// Native test function with the optimum drawn uniformly in [-4, 4]^d.
ObjectiveFunction make_benchmark(std::string_view name, std::size_t dimension, Rng& shift_rng);

} // namespace neuropt
