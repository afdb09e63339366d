#include "neuropt/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace neuropt {

SearchDomain::SearchDomain(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.empty())
        throw std::invalid_argument("SearchDomain: dimension must be positive");
    if (lower_.size() != upper_.size())
        throw std::invalid_argument("SearchDomain: bound vectors differ in length");
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!(lower_[j] < upper_[j]))
            throw std::invalid_argument("SearchDomain: lower bound must be below upper bound on axis " +
                                        std::to_string(j));
    }
}

SearchDomain SearchDomain::box(std::size_t dimension, double lower, double upper)
{
    return {Vector(dimension, lower), Vector(dimension, upper)};
}

bool SearchDomain::contains(std::span<const double> x) const
{
    if (x.size() != dimension())
        return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] < lower_[j] || x[j] > upper_[j])
            return false;
    }
    return true;
}

ObjectiveFunction::ObjectiveFunction(std::string identifier, std::size_t dimension, Evaluator evaluator,
                                     std::optional<double> optimum_value, std::optional<Vector> optimum_position)
    : identifier_(std::move(identifier)),
      dimension_(dimension),
      evaluator_(std::move(evaluator)),
      optimum_value_(optimum_value),
      optimum_position_(std::move(optimum_position))
{
    if (dimension_ == 0)
        throw std::invalid_argument("ObjectiveFunction: dimension must be positive");
    if (!evaluator_)
        throw std::invalid_argument("ObjectiveFunction: empty evaluator");
}

ObjectiveFunction::ObjectiveFunction(const ObjectiveFunction& other)
    : identifier_(other.identifier_),
      dimension_(other.dimension_),
      evaluator_(other.evaluator_),
      optimum_value_(other.optimum_value_),
      optimum_position_(other.optimum_position_),
      evaluations_(other.evaluation_count())
{}

double ObjectiveFunction::evaluate(std::span<const double> x) const
{
    if (x.size() != dimension_) {
        throw std::invalid_argument("ObjectiveFunction '" + identifier_ + "': expected " +
                                    std::to_string(dimension_) + " components, got " + std::to_string(x.size()));
    }
    evaluations_.fetch_add(1, std::memory_order_relaxed);
    return evaluator_(x);
}

Vector sample_uniform(const SearchDomain& domain, Rng& rng)
{
    Vector x(domain.dimension());
    for (std::size_t j = 0; j < x.size(); ++j) {
        std::uniform_real_distribution<double> dist(domain.lower()[j], domain.upper()[j]);
        x[j] = dist(rng);
    }
    return x;
}

Vector clip(const SearchDomain& domain, std::span<const double> x)
{
    if (x.size() != domain.dimension())
        throw std::invalid_argument("clip: dimension mismatch");
    Vector out(x.begin(), x.end());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = std::min(domain.upper()[j], std::max(domain.lower()[j], out[j]));
    return out;
}

namespace {

constexpr std::array<std::string_view, 9> kNames = {
    "sphere",     "ellipsoid_separable", "rastrigin_separable", "attractive_sector", "rosenbrock",
    "ellipsoid",  "bent_cigar",          "rastrigin",           "schwefel",
};

// Per-axis conditioning factor base^(i/(d-1)), equal to 1 when d == 1.
double conditioning(double base, std::size_t i, std::size_t d)
{
    if (d == 1)
        return 1.0;
    return std::pow(base, static_cast<double>(i) / static_cast<double>(d - 1));
}

// Minimiser of -y sin(sqrt|y|) on [0, 500], refined by Newton on the first
// derivative so the shifted optimum value is zero to machine precision.
double schwefel_argmin()
{
    double y = 420.9687;
    for (int it = 0; it < 50; ++it) {
        const double s = std::sqrt(y);
        const double d1 = -std::sin(s) - 0.5 * s * std::cos(s);
        const double d2 = -0.75 * std::cos(s) / s + 0.25 * std::sin(s);
        const double step = d1 / d2;
        y -= step;
        if (std::abs(step) < 1e-15 * y)
            break;
    }
    return y;
}

double schwefel_term(double y)
{
    return -y * std::sin(std::sqrt(std::abs(y)));
}

using Kernel = std::function<double(std::span<const double> z)>;

Kernel make_kernel(std::string_view name, std::size_t d, const Vector& shift)
{
    using std::numbers::pi;
    if (name == "sphere") {
        return [](std::span<const double> z) {
            double s = 0.0;
            for (double v : z)
                s += v * v;
            return s;
        };
    }
    if (name == "ellipsoid_separable") {
        return [d](std::span<const double> z) {
            double s = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i)
                s += conditioning(1e6, i, d) * z[i] * z[i];
            return s;
        };
    }
    if (name == "rastrigin_separable") {
        return [d](std::span<const double> z) {
            double s = 10.0 * static_cast<double>(d);
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double y = conditioning(std::sqrt(10.0), i, d) * z[i];
                s += y * y - 10.0 * std::cos(2.0 * pi * y);
            }
            return s;
        };
    }
    if (name == "attractive_sector") {
        // Steep on the side of each axis that points away from the origin.
        return [shift](std::span<const double> z) {
            double s = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double scale = z[i] * shift[i] > 0.0 ? 100.0 : 1.0;
                s += scale * scale * z[i] * z[i];
            }
            return std::pow(s, 0.9);
        };
    }
    if (name == "rosenbrock") {
        if (d < 2)
            throw std::invalid_argument("make_benchmark: rosenbrock needs dimension >= 2");
        return [](std::span<const double> z) {
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < z.size(); ++i) {
                const double a = z[i] + 1.0;
                const double b = z[i + 1] + 1.0;
                s += 100.0 * (a * a - b) * (a * a - b) + (a - 1.0) * (a - 1.0);
            }
            return s;
        };
    }
    if (name == "ellipsoid") {
        // Cumulative-sum ellipsoid: couples every axis to all preceding ones.
        return [d](std::span<const double> z) {
            double s = 0.0;
            double partial = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                partial += z[i];
                s += conditioning(1e6, i, d) * partial * partial;
            }
            return s;
        };
    }
    if (name == "bent_cigar") {
        return [](std::span<const double> z) {
            double s = z[0] * z[0];
            for (std::size_t i = 1; i < z.size(); ++i)
                s += 1e6 * z[i] * z[i];
            return s;
        };
    }
    if (name == "rastrigin") {
        return [d](std::span<const double> z) {
            double s = 10.0 * static_cast<double>(d);
            for (double v : z)
                s += v * v - 10.0 * std::cos(2.0 * pi * v);
            return s;
        };
    }
    if (name == "schwefel") {
        const double y_star = schwefel_argmin();
        const double f_star = schwefel_term(y_star);
        return [y_star, f_star](std::span<const double> z) {
            double s = 0.0;
            for (double v : z) {
                const double y = y_star + 50.0 * v;
                const double excess = std::max(0.0, std::abs(y) - 500.0);
                s += schwefel_term(y) - f_star + excess * excess;
            }
            return s;
        };
    }
    throw std::invalid_argument("make_benchmark: unknown function '" + std::string(name) + "'");
}

} // namespace

std::span<const std::string_view> benchmark_names()
{
    return kNames;
}

ObjectiveFunction make_benchmark(std::string_view name, std::size_t dimension, Vector shift)
{
    if (dimension == 0)
        throw std::invalid_argument("make_benchmark: dimension must be positive");
    if (shift.size() != dimension)
        throw std::invalid_argument("make_benchmark: shift has wrong length");
    Kernel kernel = make_kernel(name, dimension, shift);
    auto evaluator = [kernel = std::move(kernel), shift](std::span<const double> x) {
        Vector z(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            z[j] = x[j] - shift[j];
        return kernel(z);
    };
    return ObjectiveFunction(std::string(name), dimension, std::move(evaluator), 0.0, shift);
}

ObjectiveFunction make_benchmark(std::string_view name, std::size_t dimension, Rng& shift_rng)
{
    std::uniform_real_distribution<double> dist(-4.0, 4.0);
    Vector shift(dimension);
    for (double& s : shift)
        s = dist(shift_rng);
    return make_benchmark(name, dimension, std::move(shift));
}

} // namespace neuropt
