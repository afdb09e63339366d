#include <doctest.h>

#include <random>
#include <stdexcept>

#include "neuropt/coordination.hpp"

using namespace neuropt;

namespace {

BoolMatrix brute_force(const BoolMatrix& ws, const BoolMatrix& s)
{
    const std::size_t n = ws.rows();
    const std::size_t d = s.cols();
    BoolMatrix a(n, d, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (ws(i, k) != 0 && s(k, j) != 0)
                    a(i, j) = 1;
    return a;
}

} // namespace

TEST_SUITE("coordination")
{
    TEST_CASE("ring topology")
    {
        const SpikeTopology r3 = build_ring(3);
        for (std::size_t i = 0; i < 3; ++i) {
            int ones = 0;
            for (std::size_t k = 0; k < 3; ++k)
                ones += r3.adjacency()(i, k);
            CHECK(ones == 2);
        }
        const SpikeTopology r4 = build_ring(4);
        CHECK(r4.adjacency()(0, 1) == 1);
        CHECK(r4.adjacency()(0, 3) == 1);
        CHECK(r4.adjacency()(0, 2) == 0);
        CHECK_THROWS_AS(build_ring(2), std::invalid_argument);
        BoolMatrix self(2, 2, 0);
        self(1, 1) = 1;
        CHECK_THROWS_AS(SpikeTopology{self}, std::invalid_argument);
    }

    TEST_CASE("random information topology")
    {
        Rng a(21);
        Rng b(21);
        const InfoTopology t = build_random_info(30, 10, a);
        CHECK(t.adjacency() == build_random_info(30, 10, b).adjacency());
        for (std::size_t i = 0; i < 30; ++i) {
            CHECK(t.neighbours(i).size() == 10);
            CHECK(t.adjacency()(i, i) == 0);
        }
        CHECK(t.max_neighbours() == 10);

        Rng c(1);
        const InfoTopology full = build_random_info(5, 4, c);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t k = 0; k < 5; ++k)
                CHECK(full.adjacency()(i, k) == (i == k ? 0 : 1));
        CHECK_THROWS_AS(build_random_info(5, 5, c), std::invalid_argument);
        CHECK_THROWS_AS(InfoTopology(BoolMatrix(3, 3, 0)), std::invalid_argument);
    }

    TEST_CASE("contraction examples")
    {
        const std::size_t n = 4, d = 2;
        BoolMatrix s(n, d, 0);
        const WeightTensor ring(build_ring(n), d);
        CHECK(tensor_contract(ring, s) == BoolMatrix(n, d, 0));

        s(0, 0) = 1;
        const BoolMatrix a = tensor_contract(ring, s);
        BoolMatrix expect(n, d, 0);
        expect(1, 0) = 1;
        expect(3, 0) = 1;
        CHECK(a == expect);

        BoolMatrix single(5, 3, 0);
        single(2, 1) = 1;
        const BoolMatrix af = tensor_contract(WeightTensor(build_full_spike(5), 3), single);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(af(i, j) == ((j == 1 && i != 2) ? 1 : 0));
    }

    TEST_CASE("contraction matches the triple loop")
    {
        std::mt19937_64 rng(77);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 2 + rng() % 7;
            const std::size_t d = 1 + rng() % 4;
            BoolMatrix ws(n, n, 0);
            BoolMatrix s(n, d, 0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    ws(i, k) = (i != k && rng() % 2) ? 1 : 0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < d; ++j)
                    s(k, j) = rng() % 3 == 0;
            CHECK(tensor_contract(WeightTensor(SpikeTopology(ws), d), s) == brute_force(ws, s));
        }
    }

    TEST_CASE("weight tensor replicates slices")
    {
        const WeightTensor w(build_ring(5), 3);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t k = 0; k < 5; ++k)
                for (std::size_t j = 0; j < 3; ++j)
                    CHECK(w(i, k, j) == build_ring(5).adjacency()(i, k));
    }

    TEST_CASE("neighbourhood assembly")
    {
        const std::size_t n = 3, d = 2;
        RealMatrix p(n, d);
        Vector f(n);
        for (std::size_t i = 0; i < n; ++i) {
            p(i, 0) = 10.0 * i;
            p(i, 1) = 10.0 * i + 1;
            f[i] = 0.5 * i;
        }
        const InfoTopology full = build_full_info(n);
        const NeighbourhoodBundle b = gather_neighbourhoods(full, p, f);
        REQUIRE(b.positions.extent(0) == 2);
        // unit 1's neighbours are 0 and 2, in ascending order
        CHECK(b.positions(0, 0, 1) == 0.0);
        CHECK(b.positions(1, 1, 1) == 21.0);
        CHECK(b.fitness(1, 1) == 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < 2; ++l) {
                const std::size_t k = full.neighbours(i)[l];
                CHECK(k != i);
                CHECK(b.positions(l, 0, i) == p(k, 0));
                CHECK(b.fitness(l, i) == f[k]);
            }

        BoolMatrix ragged(n, n, 0);
        ragged(0, 1) = ragged(0, 2) = 1;
        ragged(1, 2) = 1;
        ragged(2, 0) = 1;
        const NeighbourhoodBundle r = gather_neighbourhoods(InfoTopology(ragged), p, f);
        CHECK(r.positions(0, 0, 1) == 20.0);
        CHECK(r.positions(1, 0, 1) == 10.0);
        CHECK(r.fitness(1, 1) == f[1]);
        CHECK_THROWS_AS(gather_neighbourhoods(full, RealMatrix(2, d), f), std::invalid_argument);
    }

    TEST_CASE("high-level selector")
    {
        RealMatrix p(3, 1);
        p(0, 0) = 0.0;
        p(1, 0) = 1.0;
        p(2, 0) = 2.0;
        HighLevelSelector hls;
        GlobalBest g = hls.step(p, Vector{3.0, 1.0, 2.0});
        CHECK(g.is_init);
        CHECK(g.fitness == 1.0);
        CHECK(g.position == Vector{1.0});

        HighLevelSelector tie;
        CHECK(tie.step(p, Vector{1.0, 1.0, 4.0}).position == Vector{0.0});

        HighLevelSelector keep;
        keep.step(p, Vector{9.0, 0.5, 9.0});
        g = keep.step(p, Vector{0.7, 0.8, 0.9});
        CHECK(g.fitness == 0.5);
        CHECK(g.position == Vector{1.0});
        CHECK_THROWS_AS(keep.step(p, Vector{1.0}), std::invalid_argument);
    }

    TEST_CASE("collectors")
    {
        SpikeCollector sc(3, 2);
        sc.apply(SpikeRow{1, {1, 0}});
        sc.apply(SpikeRow{1, {0, 1}});
        CHECK(sc.matrix()(1, 0) == 0);
        CHECK(sc.matrix()(1, 1) == 1);
        CHECK_THROWS_AS(sc.apply(SpikeRow{3, {0, 0}}), std::invalid_argument);

        BestCollector bc(2, 1);
        bc.apply(BestRow{0, {1.0}, 4.0});
        CHECK_FALSE(bc.complete());
        bc.apply(BestRow{1, {2.0}, 3.0});
        CHECK(bc.complete());
        CHECK(bc.fitness() == Vector{4.0, 3.0});
    }
}
