#include <doctest.h>

#include <cmath>
#include <random>

#include "dimlab/distort.hpp"
#include "dimlab/error.hpp"

using namespace dimlab;

namespace {

std::vector<double> interior(int n) {
    std::vector<double> t;
    for (int i = 1; i <= n; ++i) t.push_back(double(i) / (n + 1));
    return t;
}

double Phi2(double s) { return 1 / s - 0.5; }

}  // namespace

TEST_CASE("Holder and Sobolev upper bounds") {
    CHECK(hoelder_upper(0.5, 0.25) == 2.0);
    CHECK(hoelder_upper(0.9, 0.25, 2) == 2.0);
    CHECK_THROWS_AS(hoelder_upper(0.5, 0.0), ParameterError);
    CHECK(sobolev_upper(1, 2, 4) == doctest::Approx(4.0 / 3));
    CHECK(sobolev_upper(0, 2, 4) == 0.0);
    CHECK(sobolev_upper(2, 2, 4) == 2.0);
    CHECK_THROWS_AS(sobolev_upper(1, 2, 2), ParameterError);

    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u;
    for (int i = 0; i < 1000; ++i) {
        const int n = 2 + int(gen() % 3);
        const double p = n * (1.001 + 5 * u(gen)), d = n * (0.001 + 0.998 * u(gen));
        CHECK(sobolev_upper(d, n, p) < hoelder_upper(d, 1 - double(n) / p));
    }
}

TEST_CASE("planar interval matches the closed form") {
    for (double K : {1.5, 2.0, 4.0})
        for (double d : {0.1, 0.5, 1.0, 1.5, 1.9}) {
            const auto iv = qc_interval(d, DistortionContext::planar(K));
            // alpha(2K/(K-1)) = 1/K in the plane
            const double hi = std::min(K * d, 1 / (Phi2(d) / K + 0.5));
            const double lo = 1 / (K * Phi2(d) + 0.5);
            CHECK(iv.lo == doctest::Approx(lo).epsilon(1e-13));
            CHECK(iv.hi == doctest::Approx(hi).epsilon(1e-13));
            CHECK(iv.hoelder_clamped == (K * d < 1 / (Phi2(d) / K + 0.5)));
            CHECK(iv.lo <= d);
            CHECK(d <= iv.hi);
        }
}

TEST_CASE("qc interval degenerate cases") {
    for (double d : {0.0, 0.3, 1.7, 2.0}) {
        const auto iv = qc_interval(d, DistortionContext::planar(1.0));
        CHECK(iv.lo == d);
        CHECK(iv.hi == d);
    }
    for (double K : {1.2, 3.0}) {
        CHECK(qc_interval(0.0, DistortionContext::planar(K)).hi == 0.0);
        CHECK(qc_interval(2.0, DistortionContext::planar(K)).lo == 2.0);
        CHECK(qc_interval(3.0, DistortionContext::with_default_model(3, K)).lo == 3.0);
    }
    CHECK_THROWS_AS(qc_interval(2.5, DistortionContext::planar(2)), ParameterError);
    CHECK_THROWS_AS(qc_interval(1.0, DistortionContext::planar(0.5)), ParameterError);
    CHECK_THROWS_AS(qc_interval(1.0, {3, 2.0, SobolevExponentModel::exact_2d(), {}, {}}), ModelError);
    CHECK_THROWS_AS(qc_interval(1.0, {2, 2.0, SobolevExponentModel::exact_2d(), 1.5, {}}), ParameterError);
    const auto h = hausdorff_distortion_bounds(0.8, DistortionContext::planar(2));
    const auto q = qc_interval(0.8, DistortionContext::planar(2));
    CHECK(h.lo == q.lo);
    CHECK(h.hi == q.hi);
}

TEST_CASE("composing two bounds is never tighter than the direct one") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u;
    for (int i = 0; i < 300; ++i) {
        const int n = 2 + int(gen() % 2);
        const double d = n * u(gen), k1 = 1 + 3 * u(gen), k2 = 1 + 3 * u(gen);
        auto ctx = [n](double K) { return DistortionContext::with_default_model(n, K); };
        const auto first = qc_interval(d, ctx(k1));
        const double lo = qc_interval(first.lo, ctx(k2)).lo, hi = qc_interval(first.hi, ctx(k2)).hi;
        const auto direct = qc_interval(d, ctx(k1 * k2));
        CHECK(lo <= direct.lo + 1e-12);
        CHECK(hi >= direct.hi - 1e-12);
    }
}

TEST_CASE("exponent tags and reverse Holder overrides") {
    const auto c3 = qc_interval(1.0, DistortionContext::with_default_model(3, 2));
    CHECK(c3.hi_tag == ExponentTag::conjectural);
    const auto im = qc_interval(1.0, {3, 2.0, SobolevExponentModel::iwaniec_martin(1.5), {}, {}});
    CHECK(im.hi_tag == ExponentTag::lower_bound);

    const auto spec = seq_bundle(1.0, 2).at(DimensionKind::assouad_spectrum);
    const auto b1 = assouad_spectrum_qc_bounds(spec, DistortionContext::planar(1.0), 1.0);
    CHECK(b1.theta_image == 0.5);
    CHECK(b1.dim_lo == doctest::Approx(spec(0.5)));
    CHECK(b1.dim_hi == doctest::Approx(spec(0.5)));
    const auto b2 = assouad_spectrum_qc_bounds(spec, DistortionContext::planar(2.0), 0.5);
    CHECK(b2.theta_lower == doctest::Approx(0.8));
    CHECK(b2.theta_upper == doctest::Approx(0.5));
    CHECK(b2.dim_lo <= b2.dim_hi);
    CHECK(b2.assumptions.empty());
    DistortionContext user{3, 2.0, SobolevExponentModel::conjectured(), 7.0, {}};
    const auto b3 = assouad_spectrum_qc_bounds(seq_bundle(1.0, 3).at(DimensionKind::assouad_spectrum), user, 1.0);
    CHECK(!b3.assumptions.empty());
    CHECK_THROWS_AS(assouad_spectrum_qc_bounds(seq_bundle(1.0, 2).at(DimensionKind::box), DistortionContext::planar(2), 1), ParameterError);
}

TEST_CASE("planar rule") {
    CHECK(planar_rule(0.5, 0.5) == 1.0);
    CHECK(planar_rule(1.0 / 3, 0.5) == doctest::Approx(Phi2(1.0 / 3) / Phi2(0.5)));
    CHECK(planar_rule(0.5, 1.0 / 3) == doctest::Approx(Phi2(1.0 / 3) / Phi2(0.5)));
}

TEST_CASE("classification of sequence sets") {
    const auto e1 = seq_bundle(1.0, 2), e12 = seq_bundle(0.5, 2), e14 = seq_bundle(0.25, 2);
    const auto c = min_dilatation(e1, e12);
    CHECK(c.k_lower == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(!c.witnesses.empty());
    CHECK(!c.verdict.empty());
    CHECK(min_dilatation(e1, e14).k_lower == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(min_dilatation(e12, e1).k_lower == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(min_dilatation(e1, e1).k_lower == 1.0);

    // without extrapolation the grid value approaches 2 from below
    MinDilatationConfig raw;
    raw.extrapolate = false;
    raw.refine = false;
    const double k_raw = min_dilatation(e1, e12, raw).k_lower;
    CHECK(k_raw < 2.0);
    CHECK(k_raw > 1.99);

    MinDilatationConfig with_spec;
    with_spec.include_assouad_spectrum = true;
    for (double t : {0.1, 0.5, 1.0, 3.0, 10.0}) with_spec.t_grid.push_back(t);
    const auto cs = min_dilatation(e1, e12, with_spec);
    for (const auto& w : cs.witnesses)
        if (w.rule == "assouad_spectrum") CHECK(w.k < 2.0);

    CHECK_THROWS_AS(min_dilatation(seq_bundle(1.0, 1), seq_bundle(0.5, 1)), ParameterError);
    CHECK_THROWS_AS(min_dilatation(seq_bundle(1.0, 2), seq_bundle(0.5, 3)), ParameterError);
    CHECK_THROWS_AS(min_dilatation(seq_bundle(1.0, 3), seq_bundle(0.5, 3)), ModelError);
    MinDilatationConfig conj;
    conj.model = SobolevExponentModel::conjectured();
    CHECK(min_dilatation(seq_bundle(1.0, 3), seq_bundle(0.5, 3), conj).k_lower >= 1.0);
}

TEST_CASE("classification of the example carpets") {
    const auto be = bm_bundle(example_carpet_e()), bf = bm_bundle(example_carpet_e_prime());
    MinDilatationConfig holder, planar;
    holder.use_sobolev = false;
    planar.use_hoelder = false;
    // grid oracle for the Holder ratio at theta0 = (log_3 2)^2
    const double theta0 = std::pow(std::log(2.0) / std::log(3.0), 2);
    const double ratio = bm_intermediate(example_carpet_e(), theta0) / bm_intermediate(example_carpet_e_prime(), theta0);
    const double kh = min_dilatation(be, bf, holder).k_lower;
    const double kp = min_dilatation(be, bf, planar).k_lower;
    CHECK(kh >= ratio - 1e-12);
    CHECK(std::abs(kh - 1.0005) <= 1e-3);
    CHECK(std::abs(kp - 1.0014) <= 1e-3);
    CHECK(kp > kh);
}

TEST_CASE("radial stretch sharpness") {
    const auto thetas = interior(99);
    for (double s : {0.5, 2.0})
        for (double a : {0.3, 0.9})
            for (double K : {1.0, 1.7}) {
                const auto r = radial_stretch_sharpness_check(s, a, K, thetas);
                CHECK(r.max_residual <= 1e-12);
                CHECK(r.holds());
                CHECK(r.beta == doctest::Approx(a / K));
                for (std::size_t i = 0; i < thetas.size(); ++i)
                    CHECK(r.dim_alpha[i] == doctest::Approx(2 * thetas[i] / (thetas[i] + s * a)));
            }
    CHECK_THROWS_AS(radial_stretch_sharpness_check(1.0, 0.5, 0.5, thetas), ParameterError);
}

TEST_CASE("extremality transfer") {
    const auto thetas = interior(49);
    const auto r = extremality_transfer_check(g_set_bundle(1, 2, 0.8), g_set_bundle(1, 2, 0.4), 2.0, thetas);
    CHECK(r.profile_hypothesis);
    CHECK(r.box_extremal);
    CHECK(r.banaji_rutar_extremal);
    CHECK(r.conclusion_holds);
    CHECK(r.failed.empty());
    // sequence sets have Assouad dimension 1 < 2: the hypothesis fails
    const auto bad = extremality_transfer_check(seq_bundle(1, 2), seq_bundle(0.5, 2), 2.0, thetas);
    CHECK(!bad.profile_hypothesis);
    CHECK(!bad.failed.empty());
}

TEST_CASE("report json") {
    const auto j = to_json(qc_interval(1.0, DistortionContext::planar(2)));
    CHECK(j.contains("lo"));
    CHECK(j.at("hi_tag") == "exact");
    const auto c = to_json(min_dilatation(seq_bundle(1, 2), seq_bundle(0.5, 2)));
    for (const char* key : {"k_lower", "direction", "rule", "theta_star", "witnesses", "assumptions", "inputs", "verdict"})
        CHECK(c.contains(key));
}
