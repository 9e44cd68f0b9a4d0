#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dimlab/error.hpp"
#include "dimlab/sets.hpp"

using namespace dimlab;

namespace {

double brute_gap(const PointSet& x) {
    double best = INFINITY;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            double d2 = 0;
            for (std::size_t a = 0; a < x.ambient_dim(); ++a) {
                const double t = x.coord(i, a) - x.coord(j, a);
                d2 += t * t;
            }
            best = std::min(best, std::sqrt(d2));
        }
    return best;
}

}  // namespace

TEST_CASE("point set validation") {
    CHECK_THROWS_AS(PointSet(2, {0.0, 0.0, 0.0, 0.0}, 0.1, "dup"), ParameterError);
    CHECK_THROWS_AS(PointSet(1, {0.0, NAN}, 0.1, "nan"), ParameterError);
    CHECK_THROWS_AS(PointSet(2, {0.0, 1.0, 2.0}, 0.1, "ragged"), ParameterError);
    CHECK_THROWS_AS(PointSet(1, {}, 0.1, "empty"), ParameterError);
    CHECK_THROWS_AS(PointSet(1, {0.0}, 0.0, "res"), ParameterError);

    const PointSet x(2, {0.0, 1.0, 3.0, -1.0}, 0.5, "two");
    CHECK(x.size() == 2);
    CHECK(x.bbox().lo == std::vector<double>{0.0, -1.0});
    CHECK(x.bbox().hi == std::vector<double>{3.0, 1.0});
    CHECK(x.bbox().diagonal() == doctest::Approx(std::sqrt(13.0)));
    const auto y = x.with_resolution(0.25);
    CHECK(y.resolution() == 0.25);
    CHECK(y.coords().data() == x.coords().data());
}

TEST_CASE("sequence set") {
    const PointSet x = gen_sequence_set(1.5, 1000);
    REQUIRE(x.size() == 1001);
    std::vector<double> got(x.coords().begin(), x.coords().end());
    std::sort(got.begin(), got.end());
    CHECK(got.front() == 0.0);
    for (int m = 1; m <= 1000; ++m) CHECK(got[1001 - m] == doctest::Approx(std::pow(m, -1.5)).epsilon(1e-14));
    // resolution: gap from the smallest sampled point to the next one, m_max + 1
    CHECK(x.resolution() == doctest::Approx(std::pow(1000.0, -1.5) - std::pow(1001.0, -1.5)).epsilon(1e-10));
    CHECK_THROWS_AS(gen_sequence_set(0.0, 10), ParameterError);
    CHECK_THROWS_AS(gen_sequence_set(1.0, 0), ParameterError);
}

TEST_CASE("product") {
    const PointSet a = gen_sequence_set(1.0, 4), b = gen_uniform_grid(2, 3);
    const PointSet p = gen_product(a, b);
    CHECK(p.ambient_dim() == 3);
    CHECK(p.size() == a.size() * b.size());
    CHECK_THROWS_AS(gen_product(a, b, GeneratorLimits{10}), CapacityError);
}

TEST_CASE("carpet spec") {
    const CarpetSpec e = example_carpet_e();
    CHECK(e.base_x() == 32);
    CHECK(e.base_y() == 243);
    CHECK(e.digit_count() == 106);
    CHECK(e.occupied_columns() == 32);
    std::multiset<int> counts(e.column_counts().begin(), e.column_counts().end());
    CHECK(counts.count(27) == 2);
    CHECK(counts.count(3) == 11);
    CHECK(counts.count(1) == 19);
    const CarpetSpec f = example_carpet_e_prime();
    CHECK(f.digit_count() == 106);
    CHECK(f.max_column_count() == 27);
    CHECK(f.min_column_count() == 1);
    CHECK(e.gamma() == doctest::Approx(std::log(3.0) / std::log(2.0)));

    CHECK_THROWS_AS(CarpetSpec(2, 3, {{3, 1}}), ParameterError);
    CHECK_THROWS_AS(CarpetSpec(2, 3, {{1, 1}, {1, 1}}), ParameterError);
    CHECK_THROWS_AS(CarpetSpec(3, 3, {{1, 1}}), ParameterError);
    CHECK_THROWS_AS(CarpetSpec(2, 3, {}), ParameterError);
}

TEST_CASE("carpet points are the affine images of the corner") {
    const CarpetSpec c(2, 3, {{1, 1}, {2, 2}, {1, 3}});
    const PointSet one = gen_bm_carpet(c, 1);
    std::set<std::pair<double, double>> got;
    for (std::size_t i = 0; i < one.size(); ++i) got.insert({one.coord(i, 0), one.coord(i, 1)});
    CHECK(got == std::set<std::pair<double, double>>{{0.0, 0.0}, {0.5, 1.0 / 3}, {0.0, 2.0 / 3}});

    const PointSet two = gen_bm_carpet(c, 2);
    CHECK(two.size() == 9);
    // corners in units of 1/4 and 1/9: 2(i1-1) + (i2-1), 3(j1-1) + (j2-1)
    std::set<std::pair<long, long>> units;
    for (std::size_t i = 0; i < two.size(); ++i)
        units.insert({std::lround(two.coord(i, 0) * 4), std::lround(two.coord(i, 1) * 9)});
    for (auto [i1, j1] : c.digits())
        for (auto [i2, j2] : c.digits()) CHECK(units.count({2 * (i1 - 1) + (i2 - 1), 3 * (j1 - 1) + (j2 - 1)}) == 1);
    CHECK_THROWS_AS(gen_bm_carpet(c, 0), ParameterError);
    CHECK_THROWS_AS(gen_bm_carpet(example_carpet_e(), 5, GeneratorLimits{1000}), CapacityError);
}

TEST_CASE("percolation") {
    const auto full = gen_percolation({2, 3, 1.0, 2, 5});
    REQUIRE(full.points);
    CHECK(full.points->size() == 81);
    CHECK(full.survivors_per_level == std::vector<std::size_t>{1, 9, 81});
    // centers of the level-2 cells
    std::set<std::pair<long, long>> cells;
    for (std::size_t i = 0; i < 81; ++i)
        cells.insert({std::lround(full.points->coord(i, 0) * 18), std::lround(full.points->coord(i, 1) * 18)});
    CHECK(cells.size() == 81);
    CHECK(cells.count({1, 1}) == 1);
    CHECK(cells.count({17, 17}) == 1);

    const auto a = gen_percolation({2, 3, 0.6, 5, 42}), b = gen_percolation({2, 3, 0.6, 5, 42});
    CHECK(a.survivors_per_level == b.survivors_per_level);
    if (a.points) {
        const auto ca = a.points->coords(), cb = b.points->coords();
        CHECK(std::equal(ca.begin(), ca.end(), cb.begin(), cb.end()));
    }
    for (std::size_t l = 1; l < a.survivors_per_level.size(); ++l)
        CHECK(a.survivors_per_level[l] <= 9 * a.survivors_per_level[l - 1]);

    // Each cell survives independently with probability p: mean first-level count is 9p.
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) sum += gen_percolation({2, 3, 0.5, 1, seed}).survivors_per_level[1];
    CHECK(sum / 400 == doctest::Approx(4.5).epsilon(0.05));

    CHECK_THROWS_AS(gen_percolation({2, 1, 0.5, 3, 0}), ParameterError);
    CHECK_THROWS_AS(gen_percolation({2, 3, 0.0, 3, 0}), ParameterError);
    CHECK_THROWS_AS(gen_percolation({2, 3, 0.5, 0, 0}), ParameterError);
}

TEST_CASE("uniform grid") {
    const PointSet g = gen_uniform_grid(2, 4);
    CHECK(g.size() == 16);
    CHECK(g.bbox().lo == std::vector<double>{0.125, 0.125});
    CHECK(g.resolution() == doctest::Approx(0.25));
}

TEST_CASE("radial stretch grid and power map") {
    const double s = 1.0, alpha = 0.6;
    const PointSet g = gen_radial_stretch_grid(s, 2, alpha, 6);
    CHECK(g.size() == 36);
    // Every point is v |v|^-(1+alpha) for v in {1..6}^2.
    std::vector<std::pair<double, double>> want;
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j) {
            const double r = std::hypot(double(i), double(j));
            want.push_back({i * std::pow(r, -1 - alpha), j * std::pow(r, -1 - alpha)});
        }
    for (auto [wx, wy] : want) {
        bool found = false;
        for (std::size_t k = 0; k < g.size() && !found; ++k)
            found = std::abs(g.coord(k, 0) - wx) < 1e-14 && std::abs(g.coord(k, 1) - wy) < 1e-14;
        CHECK(found);
    }

    const PointSet h = apply_power_map(g, 0.5);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double r = std::hypot(g.coord(k, 0), g.coord(k, 1));
        const double rh = std::hypot(h.coord(k, 0), h.coord(k, 1));
        CHECK(rh == doctest::Approx(std::sqrt(r)).epsilon(1e-13));
        CHECK(h.coord(k, 0) * g.coord(k, 1) == doctest::Approx(h.coord(k, 1) * g.coord(k, 0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(apply_power_map(g, 0.0), ParameterError);
    CHECK_THROWS_AS(gen_radial_stretch_grid(1.0, 2, 1.5, 4), ParameterError);
}

TEST_CASE("min pairwise gap matches brute force") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 3, count = 2 + gen() % 300;
        std::vector<double> c(n * count);
        for (double& v : c) v = unif(gen);
        const PointSet x(n, c, 1e-9, "random");
        CHECK(min_pairwise_gap(x) == doctest::Approx(brute_gap(x)).epsilon(1e-14));
    }
    CHECK(min_pairwise_gap(gen_sequence_set(1.0, 50)) == doctest::Approx(1.0 / 49 - 1.0 / 50));
}
