#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "dimlab/dyadic.hpp"
#include "dimlab/error.hpp"
#include "dimlab/estimate.hpp"

using namespace dimlab;

namespace {

using Key = std::vector<std::int64_t>;

Key cell_of(const PointSet& x, std::size_t i, double h) {
    Key k(x.ambient_dim());
    for (std::size_t a = 0; a < x.ambient_dim(); ++a) {
        const double o = std::floor(x.bbox().lo[a]);
        k[a] = static_cast<std::int64_t>(std::floor((x.coord(i, a) - o) / h));
    }
    return k;
}

std::size_t brute_cells(const PointSet& x, double r) {
    std::set<Key> cells;
    for (std::size_t i = 0; i < x.size(); ++i) cells.insert(cell_of(x, i, r / std::sqrt(double(x.ambient_dim()))));
    return cells.size();
}

// Every cover by cubes from the band is generated by giving each point a level and
// taking the cube that holds it there; the minimum over all assignments is the optimum.
double assignment_oracle(const PointSet& x, int lo, int hi, double s) {
    const std::size_t n = x.ambient_dim(), count = x.size();
    std::vector<int> level(count, lo);
    double best = INFINITY;
    while (true) {
        std::set<std::pair<int, Key>> cubes;
        for (std::size_t i = 0; i < count; ++i) {
            Key k(n);
            for (std::size_t a = 0; a < n; ++a)
                k[a] = static_cast<std::int64_t>(std::floor(std::ldexp(x.coord(i, a), level[i])));
            cubes.insert({level[i], k});
        }
        double c = 0;
        for (const auto& [m, k] : cubes) c += std::pow(std::sqrt(double(n)) * std::ldexp(1.0, -m), s);
        best = std::min(best, c);
        std::size_t i = 0;
        while (i < count && ++level[i] > hi) level[i++] = lo;
        if (i == count) break;
    }
    return best;
}

}  // namespace

TEST_CASE("least squares recovers an exact line") {
    std::vector<double> x{0, 1, 2, 3, 4}, y;
    for (double v : x) y.push_back(2.5 * v - 1.0);
    const LinearFit f = least_squares(x, y, 0, 5);
    CHECK(f.slope == doctest::Approx(2.5));
    CHECK(f.intercept == doctest::Approx(-1.0));
    CHECK(f.residual == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(least_squares(x, y, 2, 3), ParameterError);
}

TEST_CASE("scale grids") {
    const ScaleGrid g = ScaleGrid::dyadic(2, 1, 6);
    REQUIRE(g.size() == 6);
    CHECK(g.scales().front() == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(g.window_begin() == 2);
    CHECK(g.window_end() == 4);
    CHECK(ScaleGrid(std::vector<double>{0.5, 0.25, 0.125}).window_begin() == 0);
    CHECK_THROWS_AS(ScaleGrid(std::vector<double>{0.25, 0.5}), ParameterError);
    CHECK_THROWS_AS(ScaleGrid(std::vector<double>{0.5, 1.5}), ParameterError);
    const PointSet x = gen_sequence_set(1.0, 1000);
    const ScaleGrid a = ScaleGrid::dyadic_for(x, 0.5);
    CHECK(std::pow(a.scales().back(), 2.0) >= x.resolution());
}

TEST_CASE("covering number counts occupied grid cells") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unif(-0.3, 1.7);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 1 + trial % 3, count = 50 + gen() % 400;
        std::vector<double> c(n * count);
        for (double& v : c) v = unif(gen);
        const PointSet x(n, c, 1e-9, "random");
        for (double r : {0.9, 0.3, 0.07, 0.01}) CHECK(covering_number(x, r) == brute_cells(x, r));
    }
    const PointSet sq = gen_uniform_grid(2, 64);
    CHECK(covering_number(sq, std::sqrt(2.0) / 8) == 64);
}

TEST_CASE("ball covering number counts cells with a point in the ball") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> unif;
    std::vector<double> c(2 * 500);
    for (double& v : c) v = unif(gen);
    const PointSet x(2, c, 1e-9, "random");
    for (int t = 0; t < 10; ++t) {
        const std::vector<double> center{unif(gen), unif(gen)};
        const double R = 0.1 + 0.3 * unif(gen), r = R / 8;
        std::set<Key> cells;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::hypot(x.coord(i, 0) - center[0], x.coord(i, 1) - center[1]) <= R)
                cells.insert(cell_of(x, i, r / std::sqrt(2.0)));
        CHECK(ball_covering_number(x, center, R, r) == cells.size());
    }
}

TEST_CASE("allowed levels bracket the diameters") {
    for (std::size_t n : {1, 2, 3})
        for (double theta : {1.0, 0.7, 0.3})
            for (double delta : {0.5, 0.1, 0.013}) {
                int lo = 0, hi = 0;
                const bool ok = allowed_levels(n, theta, delta, lo, hi);
                std::vector<int> want;
                for (int m = 0; m < 80; ++m) {
                    const double d = std::sqrt(double(n)) * std::ldexp(1.0, -m);
                    if (d <= delta * (1 + 1e-12) && d >= std::pow(delta, 1 / theta) * (1 - 1e-12)) want.push_back(m);
                }
                CHECK(ok == !want.empty());
                if (ok) {
                    CHECK(lo == want.front());
                    CHECK(hi == want.back());
                }
            }
}

TEST_CASE("tree DP equals the assignment oracle") {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> unif;
    int checked = 0;
    while (checked < 40) {
        const std::size_t n = 1 + gen() % 2, count = 2 + gen() % 5;
        const int lo = 1 + static_cast<int>(gen() % 3), depth = static_cast<int>(gen() % 5);
        if (std::pow(depth + 1.0, double(count)) > 2e4) continue;
        std::vector<double> c(n * count);
        for (double& v : c) v = unif(gen);
        const PointSet x(n, c, 1e-12, "dp");
        const double h = 0.5 * std::log2(double(n));
        const double delta = std::sqrt(double(n)) * std::ldexp(1.0, -lo);
        const double theta = (lo - h) / (lo + depth + 0.5 - h);
        const double s = double(n) * (0.05 + 0.95 * unif(gen));
        const CoverCost cc = intermediate_cover_cost(x, theta, delta, s);
        REQUIRE(cc.level_lo == lo);
        REQUIRE(cc.level_hi == lo + depth);
        const double want = assignment_oracle(x, lo, lo + depth, s);
        CHECK(cc.cost == doctest::Approx(want).epsilon(1e-12));
        CHECK(cc.cover.cost() == doctest::Approx(cc.cost).epsilon(1e-12));
        CHECK(covers(cc.cover, x));
        CHECK(admissible(cc.cover));
        ++checked;
    }
}

TEST_CASE("cover cost is nonincreasing in s") {
    const PointSet x = gen_sequence_set(1.0, 3000);
    double prev = INFINITY;
    for (double s = 0.0; s <= 1.0; s += 0.05) {
        const double c = intermediate_cover_cost(x, 0.5, 1.0 / 16, s).cost;
        CHECK(c <= prev * (1 + 1e-12));
        prev = c;
    }
}

TEST_CASE("box estimates") {
    const PointSet sq = gen_uniform_grid(2, 512);
    CHECK(box_dim_estimate(sq, ScaleGrid::dyadic_for(sq)).value == doctest::Approx(2.0).epsilon(0.02));
    const PointSet line = gen_uniform_grid(1, 4096);
    CHECK(box_dim_estimate(line, ScaleGrid::dyadic_for(line)).value == doctest::Approx(1.0).epsilon(0.02));
    const PointSet e = gen_sequence_set(1.0, 1 << 16);
    const BoxEstimate b = box_dim_estimate(e, ScaleGrid::dyadic_for(e));
    CHECK(b.value == doctest::Approx(0.5).epsilon(0.12));
    CHECK(b.counts.size() == b.scales.size());
    for (std::size_t k = 0; k + 1 < b.counts.size(); ++k) CHECK(b.counts[k] <= b.counts[k + 1]);
}

TEST_CASE("intermediate estimate at theta = 1 tracks the box estimate") {
    const PointSet e = gen_sequence_set(1.0, 1 << 14);
    const PointSet c = gen_bm_carpet(CarpetSpec(2, 3, {{1, 1}, {2, 2}, {1, 3}}), 7);
    for (const PointSet* x : {&e, &c}) {
        const double box = box_dim_estimate(*x, ScaleGrid::dyadic_for(*x)).value;
        const double one = intermediate_dim_estimate(*x, 1.0, ScaleGrid::dyadic_for(*x)).value;
        CHECK(std::abs(box - one) <= 0.02);
    }
}

TEST_CASE("intermediate estimate is nondecreasing in theta") {
    const PointSet e = gen_sequence_set(1.0, 1 << 15);
    double prev = 0.0;
    for (double theta : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        const double v = intermediate_dim_estimate(e, theta, ScaleGrid::dyadic_for(e, theta)).value;
        CHECK(v >= prev - 0.03);
        CHECK(v == doctest::Approx(theta / (theta + 1)).epsilon(0.25));
        prev = v;
    }
}

TEST_CASE("assouad spectrum estimate of a sequence set") {
    const PointSet e = gen_sequence_set(1.0, 1 << 16);
    const auto a = assouad_spectrum_estimate(e, 0.5, ScaleGrid::dyadic_for(e, 0.5));
    CHECK(a.value == doctest::Approx(1.0).epsilon(0.1));
    CHECK(a.witness.count > 0);
    CHECK(a.witness.R > a.witness.r);
    CHECK(ball_covering_number(e, a.witness.center, a.witness.R, a.witness.r) == a.witness.count);
    CHECK_THROWS_AS(assouad_spectrum_estimate(e, 1.0, ScaleGrid::dyadic_for(e)), ParameterError);
}

TEST_CASE("stratified centers") {
    const PointSet sq = gen_uniform_grid(2, 200);
    const auto idx = stratified_centers(sq, 1000);
    CHECK(idx.size() <= 1000);
    CHECK(idx.size() >= 500);
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == idx.size());
    CHECK(stratified_centers(sq, 100000).size() == sq.size());
}
