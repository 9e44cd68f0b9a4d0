#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dimlab/error.hpp"
#include "dimlab/formulas.hpp"

using namespace dimlab;

namespace {

const double kLog2 = std::log(2.0), kLog3 = std::log(3.0);

// Straight transcription of the carpet recursion with a plain ternary-search
// Legendre transform over every column (no grouping of equal counts).
struct CarpetOracle {
    CarpetSpec c;
    double lm, ln, lM, lN, g;

    explicit CarpetOracle(CarpetSpec spec) : c(std::move(spec)) {
        lm = std::log(double(c.base_x()));
        ln = std::log(double(c.base_y()));
        lM = std::log(double(c.occupied_columns()));
        lN = std::log(double(c.digit_count()));
        g = ln / lm;
    }
    double pressure(double lam) const {
        double s = 0;
        for (int ni : c.column_counts()) s += std::pow(double(ni), lam);
        return std::log(s) - lM;
    }
    double I(double t) const {
        double a = 0, b = 1;
        while (t * b - pressure(b) > t * (b / 2) - pressure(b / 2) && b < 1e6) b *= 2;
        for (int k = 0; k < 300; ++k) {
            const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
            if (t * m1 - pressure(m1) < t * m2 - pressure(m2)) a = m1;
            else b = m2;
        }
        const double l = 0.5 * (a + b);
        return l * t - pressure(l);
    }
    double solve(double theta) const {
        int L = 1;
        while (!(std::pow(g, -L) < theta)) ++L;
        auto f = [&](double s) {
            const double base = (s - lM / lm) * ln;
            double t = base;
            for (int l = 1; l < L; ++l) t = base + g * I(t);
            const double gl = std::pow(g, L) * theta;
            return gl * lN - (gl - 1) * t + g * (1 - std::pow(g, L - 1) * theta) * (lM - I(t)) - s * ln;
        };
        double lo = hausdorff() - 1e-9, hi = lM / lm + (lN - lM) / ln + 1e-9;
        const double flo = f(lo);
        for (int k = 0; k < 200; ++k) {
            const double mid = 0.5 * (lo + hi);
            if ((f(mid) > 0) == (flo > 0)) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }
    double hausdorff() const {
        double s = 0;
        for (int ni : c.column_counts()) s += std::pow(double(ni), 1 / g);
        return std::log(s) / lm;
    }
};

std::vector<double> interior(int n) {
    std::vector<double> t;
    for (int i = 1; i <= n; ++i) t.push_back(double(i) / (n + 1));
    return t;
}

}  // namespace

TEST_CASE("tau, phi and alpha") {
    CHECK(tau(1, 2, 4) == doctest::Approx(4.0 / 3));
    CHECK(tau(2, 2, 4) == 2.0);
    CHECK(tau(0, 2, 4) == 0.0);
    CHECK(phi(2, 2) == 0.0);
    CHECK(alpha_hoelder(4, 2) == 0.5);
    CHECK(alpha_hoelder(4, 2) * phi(1, 2) == doctest::Approx(phi(4.0 / 3, 2)));
    CHECK(phi_inverse(phi(0.7, 3), 3) == doctest::Approx(0.7));
    CHECK_THROWS_AS(tau(1, 2, 2), ParameterError);
    CHECK_THROWS_AS(phi(0, 2), ParameterError);

    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u;
    for (int i = 0; i < 2000; ++i) {
        const int n = 1 + int(gen() % 4);
        const double p = n * (1.01 + 10 * u(gen)), s = n * u(gen);
        const double ts = tau(s, n, p);
        CHECK(ts >= s - 1e-15);
        CHECK(ts <= n + 1e-12);
        CHECK(tau(std::min(s + 0.01, double(n)), n, p) >= ts);
    }
    CHECK(tau(0.6, 2, 1e12) == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("Sobolev exponent models") {
    CHECK(p_sob(2, 2, SobolevExponentModel::exact_2d()).value == 4.0);
    CHECK(p_sob(2, 2, SobolevExponentModel::exact_2d()).tag == ExponentTag::exact);
    CHECK(std::isinf(p_sob(2, 1, SobolevExponentModel::exact_2d()).value));
    CHECK(p_sob(3, 2, SobolevExponentModel::iwaniec_martin(1)).value == doctest::Approx(6.0));
    CHECK(p_sob(3, 2, SobolevExponentModel::iwaniec_martin(1)).tag == ExponentTag::lower_bound);
    CHECK(p_sob(3, 2, SobolevExponentModel::conjectured()).value == doctest::Approx(6.0));
    CHECK(p_sob(3, 2, SobolevExponentModel::conjectured()).tag == ExponentTag::conjectural);
    CHECK(p_sob(3, 3, SobolevExponentModel::iwaniec_martin(2)).value == doctest::Approx(18.0 / 5));
    CHECK_THROWS_AS(p_sob(3, 2, SobolevExponentModel::exact_2d()), ModelError);
    CHECK_THROWS_AS(p_sob(2, 0.5, SobolevExponentModel::exact_2d()), ParameterError);
}

TEST_CASE("sequence set profiles") {
    CHECK(seq_profile(1, DimensionKind::intermediate)(0.5) == doctest::Approx(1.0 / 3));
    CHECK(seq_profile(1, DimensionKind::assouad_spectrum)(0.5) == 1.0);
    CHECK(seq_profile(1, DimensionKind::assouad_spectrum)(0.2) == doctest::Approx(0.625));
    CHECK(seq_profile(2, DimensionKind::box)(1.0) == doctest::Approx(1.0 / 3));
    CHECK(seq_profile(2, DimensionKind::hausdorff)(1.0) == 0.0);
    CHECK(seq_profile(2, DimensionKind::assouad)(1.0) == 1.0);
    CHECK_THROWS_AS(seq_profile(0, DimensionKind::box), ParameterError);
    CHECK_THROWS_AS(seq_profile(1, DimensionKind::intermediate)(0.0), ParameterError);
    CHECK_THROWS_AS(seq_profile(1, DimensionKind::assouad_spectrum)(1.0), ParameterError);
}

TEST_CASE("carpet closed forms") {
    const ProfileBundle b = bm_bundle(example_carpet_e());
    const double lg = kLog3 / kLog2;  // gamma = log 243 / log 32
    CHECK(b.at(DimensionKind::hausdorff)(1) == doctest::Approx(std::log(57.0) / std::log(32.0)).epsilon(1e-14));
    CHECK(b.at(DimensionKind::box)(1) == doctest::Approx(1 - kLog2 / kLog3 + std::log(106.0) / std::log(243.0)).epsilon(1e-14));
    CHECK(b.at(DimensionKind::assouad)(1) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(b.at(DimensionKind::lower)(1) == doctest::Approx(1.0).epsilon(1e-14));
    const double box = b.at(DimensionKind::box)(1);
    for (double t : {0.1, 0.3, 0.6}) {
        const double want = t < 1 / lg ? (box - t * (std::log(106.0 / 27) / std::log(32.0) + 0.6)) / (1 - t) : 1.6;
        CHECK(b.at(DimensionKind::assouad_spectrum)(t) == doctest::Approx(want).epsilon(1e-13));
    }
    // the spectrum reaches the Assouad value exactly at 1/gamma
    CHECK(b.at(DimensionKind::assouad_spectrum)(1 / lg - 1e-12) == doctest::Approx(1.6).epsilon(1e-9));

    // uniform fibres: every notion agrees
    const ProfileBundle u = bm_bundle(CarpetSpec(2, 3, {{1, 1}, {1, 3}, {2, 2}, {2, 3}}));
    const double h = u.at(DimensionKind::hausdorff)(1);
    for (auto k : {DimensionKind::box, DimensionKind::assouad, DimensionKind::lower})
        CHECK(u.at(k)(1) == doctest::Approx(h).epsilon(1e-14));
    CHECK(u.at(DimensionKind::intermediate)(0.3) == doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("carpet intermediate dimensions") {
    const CarpetSpec e = example_carpet_e(), f = example_carpet_e_prime();
    const ProfileBundle b = bm_bundle(e);
    CHECK(bm_intermediate(e, 1.0) == b.at(DimensionKind::box)(1));
    CHECK(std::abs(bm_intermediate(e, 1e-4) - std::log(57.0) / std::log(32.0)) <= 0.02);

    const CarpetOracle oe(e), of(f);
    for (double t : {0.9, 0.63, 0.5, 0.398, 0.3, 0.2, 0.1, 0.03}) {
        CHECK(bm_intermediate(e, t) == doctest::Approx(oe.solve(t)).epsilon(1e-8));
        CHECK(bm_intermediate(f, t) == doctest::Approx(of.solve(t)).epsilon(1e-8));
    }
    const double theta0 = std::pow(kLog2 / kLog3, 2);
    CHECK(bm_intermediate(f, theta0) / bm_intermediate(e, theta0) < 0.9995);

    // continuity across the breakpoints gamma^-L and monotonicity
    const double g = e.gamma();
    for (int L = 1; L <= 4; ++L) {
        const double tl = std::pow(g, -L);
        CHECK(std::abs(bm_intermediate(e, tl + 1e-9) - bm_intermediate(e, tl - 1e-9)) <= 1e-6);
    }
    double prev = 0;
    for (double t : interior(99)) {
        const double v = bm_intermediate(e, t);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("carpet rate function") {
    const CarpetSpec e = example_carpet_e();
    const CarpetOracle o(e);
    for (double t : {0.0, 0.5, 1.5, 2.5, 3.2})
        CHECK(bm_rate_function(e, t) == doctest::Approx(o.I(t)).epsilon(1e-9));
    // midpoint convexity on a grid
    for (double t = 0.1; t < 3.2; t += 0.1) {
        const double mid = bm_rate_function(e, t), l = bm_rate_function(e, t - 0.05), r = bm_rate_function(e, t + 0.05);
        CHECK(mid <= 0.5 * (l + r) + 1e-9);
    }
}

TEST_CASE("chain of dimensions holds for every family") {
    std::vector<ProfileBundle> bundles{seq_bundle(0.5), seq_bundle(2.0, 2), bm_bundle(example_carpet_e()),
                                       bm_bundle(example_carpet_e_prime()), g_set_bundle(1, 2, 0.5),
                                       g_set_bundle(0.3, 3, 0.9), percolation_bundle(2, 3, 0.5)};
    for (const auto& b : bundles) {
        const double h = b.at(DimensionKind::hausdorff)(1), box = b.at(DimensionKind::box)(1);
        const double a = b.at(DimensionKind::assouad)(1);
        for (double t : interior(99)) {
            const double d = b.at(DimensionKind::intermediate)(t);
            CHECK(h <= d + 1e-12);
            CHECK(d <= box + 1e-12);
            if (!b.has(DimensionKind::assouad_spectrum)) continue;
            const double sp = b.at(DimensionKind::assouad_spectrum)(t);
            CHECK(box <= sp + 1e-12);
            CHECK(sp <= a + 1e-12);
        }
        CHECK(std::abs(b.at(DimensionKind::intermediate)(1 - 1e-12) - box) <= 1e-9);
    }
}

TEST_CASE("Banaji-Rutar bound") {
    CHECK(banaji_rutar_lower(0, 2.0 / 3, 2, 0.5) == doctest::Approx(0.4));
    CHECK(banaji_rutar_lower(0.2, 0.7, 1.5, 1.0) == doctest::Approx(0.7));
    CHECK(banaji_rutar_lower(0.7, 0.7, 0.7, 0.3) == 0.7);
    CHECK(banaji_rutar_doubling(0.8, 0.25) == doctest::Approx(0.2));
    CHECK_THROWS_AS(banaji_rutar_lower(0.8, 0.7, 1.5, 0.5), ParameterError);
    CHECK_THROWS_AS(banaji_rutar_lower(0.1, 0.7, INFINITY, 0.5), ParameterError);

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u;
    for (int i = 0; i < 20; ++i) {
        const double s = 0.1 + 3 * u(gen), alpha = 0.05 + 0.95 * u(gen);
        const int n = 1 + int(gen() % 3);
        const double beta = n / (1 + s * alpha);
        for (double t : interior(20))
            CHECK(banaji_rutar_lower(0, beta, n, t) == doctest::Approx(n * t / (t + s * alpha)).epsilon(1e-13));
    }
}

TEST_CASE("G-set profiles") {
    CHECK(g_set_profile(1, 2, 0.5, DimensionKind::intermediate)(0.5) == doctest::Approx(1.0));
    CHECK(g_set_profile(1, 2, 0.5, DimensionKind::intermediate)(1.0) == doctest::Approx(2 / 1.5));
    CHECK(g_set_profile(1, 2, 0.5, DimensionKind::box)(1.0) == doctest::Approx(2 / 1.5));
    for (double t : {0.1, 0.5, 0.9})
        CHECK(g_set_profile(0.7, 3, 1.0, DimensionKind::intermediate)(t) == doctest::Approx(3 * t / (0.7 + t)));
    CHECK(g_set_profile(1, 2, 0.5, DimensionKind::assouad)(1.0) == 2.0);
    CHECK(g_set_profile(1, 2, 0.5, DimensionKind::lower)(1.0) == 0.0);
    CHECK_THROWS_AS(g_set_profile(1, 2, 1.5, DimensionKind::box), ParameterError);
}

TEST_CASE("percolation profiles") {
    CHECK(percolation_profile(2, 3, 1.0 / 9, DimensionKind::box).extinct);
    CHECK(percolation_bundle(2, 3, 1.0 / 9).profiles.empty());
    const auto p = percolation_profile(2, 3, 0.5, DimensionKind::box);
    REQUIRE(p.profile);
    CHECK((*p.profile)(1) == doctest::Approx(2 - kLog2 / kLog3));
    CHECK((*percolation_profile(2, 3, 0.5, DimensionKind::assouad).profile)(1) == 2.0);
    CHECK((*percolation_profile(2, 3, 0.5, DimensionKind::intermediate).profile)(0.2) == doctest::Approx(2 - kLog2 / kLog3));
    CHECK_THROWS_AS(percolation_profile(2, 3, 1.0, DimensionKind::box), ParameterError);
}

TEST_CASE("products and the general spectrum bound") {
    const auto pb = product_bounds(seq_bundle(1), seq_bundle(1));
    CHECK(pb.box == doctest::Approx(1.0));
    CHECK(pb.box_tag == BoundTag::exact);
    CHECK(pb.intermediate_upper(0.5) == doctest::Approx(2.0 / 3));
    CHECK(pb.intermediate_upper.tag() == BoundTag::upper);
    CHECK(pb.intermediate_upper.ambient_dim() == 2);
    REQUIRE(pb.quasi_hausdorff_upper);
    CHECK(*pb.quasi_hausdorff_upper == 0.0);

    CHECK(spectrum_general_bound(0.5, 1, 0.5) == 1.0);
    CHECK(spectrum_general_bound(0.5, 1, 0) == 0.5);
    CHECK(spectrum_general_bound(0, 1, 0.7) == 0.0);
    CHECK_THROWS_AS(spectrum_general_bound(0.5, 1, 1.0), ParameterError);
}

TEST_CASE("profile json and sampled tables") {
    const auto p = seq_profile(1, DimensionKind::intermediate);
    const auto j = profile_to_json(p, {0.25, 0.5});
    CHECK(j.at("kind") == "intermediate");
    CHECK(j.at("family") == "seq");
    CHECK(j.at("n") == 1);
    CHECK(j.at("params").at("s") == 1.0);
    REQUIRE(j.at("samples").size() == 2);
    CHECK(j.at("samples")[1].at("value").get<double>() == doctest::Approx(1.0 / 3));
    CHECK(j.at("samples")[1].at("tag") == "exact");
    CHECK(profile_to_json(seq_profile(1, DimensionKind::box), {0.5}).at("samples")[0].at("theta").is_null());

    const auto t = DimensionProfile::sampled(DimensionKind::intermediate, 1, "table", {}, {0.2, 0.6, 1.0}, {0.1, 0.3, 0.4});
    CHECK(t(0.4) == doctest::Approx(0.2));
    CHECK(t(0.8) == doctest::Approx(0.35));
    CHECK(t(0.1) == doctest::Approx(0.1));
    CHECK_THROWS_AS(DimensionProfile::sampled(DimensionKind::intermediate, 1, "bad", {}, {0.5, 0.5}, {0.1, 0.2}), ParameterError);

    CHECK(parse_kind("assouad_spectrum") == DimensionKind::assouad_spectrum);
    CHECK_THROWS_AS(parse_kind("nonsense"), ParameterError);
}
