#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "neuropt/transform.hpp"

using namespace neuropt;

TEST_SUITE("transform")
{
    TEST_CASE("reference point")
    {
        const RealMatrix none;
        const Vector p{1.0, 0.0};
        const Vector g{0.0, 1.0};
        const Vector half = compute_xref(ReferenceStrategy::SelfGlobalAverage, p, g, none, Vector{0.5, 0.5});
        CHECK(half == Vector{0.5, 0.5});

        const Vector same{2.0, 2.0};
        CHECK(compute_xref(ReferenceStrategy::SelfGlobalAverage, same, same, none, Vector{0.3, 0.7}) == same);

        RealMatrix nb(1, 2);
        nb(0, 0) = 1.0;
        nb(0, 1) = 1.0;
        const Vector third = compute_xref(ReferenceStrategy::SelfGlobalNeighbourAverage, p, g, nb);
        CHECK(third[0] == doctest::Approx(2.0 / 3.0));
        CHECK(third[1] == doctest::Approx(2.0 / 3.0));
    }

    TEST_CASE("reference point rejects bad weights")
    {
        const RealMatrix none;
        const Vector p{1.0};
        CHECK_THROWS_AS(compute_xref(ReferenceStrategy::SelfGlobalAverage, p, p, none, Vector{0.5, 0.6}),
                        std::invalid_argument);
        CHECK_THROWS_AS(compute_xref(ReferenceStrategy::SelfGlobalAverage, p, p, none, Vector{1.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(compute_xref(ReferenceStrategy::SelfGlobalNeighbourAverage, p, p, none),
                        std::invalid_argument);
    }

    TEST_CASE("encode examples")
    {
        const NeuroState a = encode(0.5, 0.0, 1.0, 0.25);
        CHECK(a[0] == 0.5);
        CHECK(a[1] == -0.5);
        const NeuroState b = encode(1.5, 1.0, 2.0, 0.5);
        CHECK(b[0] == 1.0);
        CHECK(b[1] == 1.0);
        CHECK(encode(3.0, 3.0, 1.7, 0.1)[0] == 0.0);
    }

    TEST_CASE("decode examples")
    {
        CHECK(decode(NeuroState{0.0, 9.0}, 4.0, 3.0) == 4.0);
        CHECK(decode(NeuroState{1.0, 0.0}, 1.0, 2.0) == 1.5);
    }

    TEST_CASE("round trip within a few ulps")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> coord(-5.0, 5.0);
        std::uniform_real_distribution<double> r(0.0, 1.0);
        const double eps = std::numeric_limits<double>::epsilon();
        std::size_t worst = 0;
        for (double a : {0.5, 1.0, 2.0, 10.0}) {
            for (int k = 0; k < 20000; ++k) {
                const double xv = coord(rng);
                const double xr = coord(rng);
                const double back = decode(encode(xv, xr, a, r(rng)), xr, a);
                if (std::abs(back - xv) > 4.0 * eps * std::max({1.0, std::abs(xv), std::abs(xr)}))
                    ++worst;
            }
        }
        CHECK(worst == 0);
    }

    TEST_CASE("encode is affine in x and the second component ignores x")
    {
        for (double a : {0.5, 1.0, 2.0, 10.0}) {
            const NeuroState lo = encode(1.0, 0.25, a, 0.3);
            const NeuroState hi = encode(2.0, 0.25, a, 0.3);
            CHECK(hi[0] - lo[0] == doctest::Approx(a));
            CHECK(hi[1] == lo[1]);
        }
    }

    TEST_CASE("reference point stays in the convex hull")
    {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> coord(-5.0, 5.0);
        std::uniform_real_distribution<double> w(0.0, 1.0);
        for (int k = 0; k < 500; ++k) {
            const Vector p{coord(rng)};
            const Vector g{coord(rng)};
            RealMatrix nb(3, 1);
            for (std::size_t l = 0; l < 3; ++l)
                nb(l, 0) = coord(rng);
            Vector weights(5);
            double total = 0.0;
            for (double& x : weights)
                total += (x = w(rng));
            for (double& x : weights)
                x /= total;
            // renormalise exactly on the last weight
            double head = 0.0;
            for (std::size_t l = 0; l + 1 < weights.size(); ++l)
                head += weights[l];
            weights.back() = 1.0 - head;
            const double lo = std::min({p[0], g[0], nb(0, 0), nb(1, 0), nb(2, 0)});
            const double hi = std::max({p[0], g[0], nb(0, 0), nb(1, 0), nb(2, 0)});
            const double x = compute_xref(ReferenceStrategy::SelfGlobalNeighbourAverage, p, g, nb, weights)[0];
            CHECK(x >= lo - 1e-12);
            CHECK(x <= hi + 1e-12);
        }
    }
}
