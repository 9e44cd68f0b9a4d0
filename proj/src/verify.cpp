#include "dimlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "dimlab/capacity.hpp"
#include "dimlab/distort.hpp"
#include "dimlab/dyadic.hpp"
#include "dimlab/error.hpp"
#include "dimlab/estimate.hpp"
#include "dimlab/formulas.hpp"
#include "dimlab/sets.hpp"

namespace dimlab::verify {

bool SuiteResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

std::string str(double v, int prec = 8) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

void add(SuiteResult& r, std::string name, bool ok, std::string detail) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
}

std::vector<double> interior_grid(int count) {
    std::vector<double> t;
    for (int i = 1; i <= count; ++i) t.push_back(double(i) / (count + 1));
    return t;
}

CarpetSpec small_carpet() { return CarpetSpec(2, 3, {{1, 1}, {2, 2}, {1, 3}}); }

// ---------------------------------------------------------------------------

SuiteResult chain() {
    SuiteResult r{"chain", {}};
    std::vector<ProfileBundle> bundles = {
        seq_bundle(0.25), seq_bundle(1.0), seq_bundle(2.0),
        g_set_bundle(1.0, 2, 0.5), g_set_bundle(2.0, 3, 0.8),
        bm_bundle(example_carpet_e()), bm_bundle(example_carpet_e_prime()),
        bm_bundle(small_carpet()), percolation_bundle(2, 3, 0.5)};
    const std::vector<double> thetas = interior_grid(99);
    const double slack = 1e-12;
    for (const ProfileBundle& b : bundles) {
        const std::string tag = b.family + "/" + b.at(DimensionKind::box).params().dump();
        const double h = b.at(DimensionKind::hausdorff)(1.0);
        const double box = b.at(DimensionKind::box)(1.0);
        const auto& it = b.at(DimensionKind::intermediate);
        double worst = 0.0, prev = -1.0;
        bool monotone = true;
        for (double t : thetas) {
            const double v = it(t);
            worst = std::max({worst, h - v, v - box});
            if (v < prev - slack) monotone = false;
            prev = v;
        }
        add(r, tag + " hausdorff <= intermediate <= box", worst <= slack,
            "max violation " + str(worst));
        add(r, tag + " intermediate nondecreasing", monotone, "");
        if (b.has(DimensionKind::lower))
            add(r, tag + " lower <= hausdorff", b.at(DimensionKind::lower)(1.0) <= h + slack, "");
        if (b.has(DimensionKind::assouad_spectrum) && b.has(DimensionKind::assouad)) {
            const auto& sp = b.at(DimensionKind::assouad_spectrum);
            const double a = b.at(DimensionKind::assouad)(1.0);
            double w = 0.0;
            for (double t : thetas) w = std::max({w, box - sp(t), sp(t) - a});
            add(r, tag + " box <= spectrum <= assouad", w <= slack, "max violation " + str(w));
        }
        if (b.has(DimensionKind::lower) && b.has(DimensionKind::assouad)) {
            const double lam = b.at(DimensionKind::lower)(1.0);
            const double a = b.at(DimensionKind::assouad)(1.0);
            double w = -std::numeric_limits<double>::infinity();
            for (double t : thetas) w = std::max(w, banaji_rutar_lower(lam, box, a, t) - it(t));
            add(r, tag + " intermediate lower bound below profile", w <= slack,
                "max excess " + str(w));
        }
    }
    return r;
}

SuiteResult carpets() {
    SuiteResult r{"carpets", {}};
    const CarpetSpec e = example_carpet_e(), f = example_carpet_e_prime();
    const ProfileBundle be = bm_bundle(e), bf = bm_bundle(f);
    const double h = be.at(DimensionKind::hausdorff)(1.0);
    const double b = be.at(DimensionKind::box)(1.0);
    add(r, "hausdorff of E ~ 1.16658", std::abs(h - 1.16658) <= 1e-4, str(h));
    add(r, "box of E ~ 1.21804", std::abs(b - 1.21804) <= 1e-4, str(b));
    add(r, "E and E' share hausdorff and box",
        std::abs(h - bf.at(DimensionKind::hausdorff)(1.0)) <= 1e-12 &&
            std::abs(b - bf.at(DimensionKind::box)(1.0)) <= 1e-12,
        "");
    const double g = e.gamma();
    const double theta0 = 1.0 / (g * g);
    const double d = bm_intermediate(e, theta0), dp = bm_intermediate(f, theta0);
    add(r, "d'/d < 0.9995 at theta0", dp / d < 0.9995,
        "d=" + str(d, 10) + " d'=" + str(dp, 10) + " ratio=" + str(dp / d, 10));

    MinDilatationConfig holder;
    holder.use_sobolev = false;
    const auto ch = min_dilatation(be, bf, holder);
    MinDilatationConfig planar;
    planar.use_hoelder = false;
    const auto cp = min_dilatation(be, bf, planar);
    add(r, "Holder rule K >= 1.0005", ch.k_lower >= 1.0005 - 1e-3, str(ch.k_lower, 10));
    add(r, "planar rule K >= 1.0014", cp.k_lower >= 1.0014 - 1e-3, str(cp.k_lower, 10));
    add(r, "planar rule beats Holder rule", cp.k_lower > ch.k_lower, "");
    return r;
}

SuiteResult sequence() {
    SuiteResult r{"sequence", {}};
    const PointSet x = gen_sequence_set(1.0, 1 << 20);
    const auto b = box_dim_estimate(x, ScaleGrid::dyadic_for(x, 1.0));
    add(r, "box estimate of E_1 in [0.45, 0.55]", b.value >= 0.45 && b.value <= 0.55, str(b.value));
    const auto it = intermediate_dim_estimate(x, 0.5, ScaleGrid::dyadic_for(x, 0.5));
    add(r, "intermediate estimate of E_1 at 1/2 in [0.28, 0.38]", it.value >= 0.28 && it.value <= 0.38,
        str(it.value));
    return r;
}

// Exhaustive minimum over subsets of the occupied cubes in the level band.
double exhaustive_cover(const PointSet& x, int lo, int hi, double s) {
    const std::size_t n = x.ambient_dim(), np = x.size();
    std::map<std::pair<int, std::vector<std::int64_t>>, std::uint64_t> cells;
    for (int m = lo; m <= hi; ++m) {
        const double side = std::ldexp(1.0, -m);
        for (std::size_t i = 0; i < np; ++i) {
            std::vector<std::int64_t> key(n);
            for (std::size_t a = 0; a < n; ++a)
                key[a] = static_cast<std::int64_t>(std::floor(x.coord(i, a) / side));
            cells[{m, key}] |= std::uint64_t(1) << i;
        }
    }
    std::vector<std::uint64_t> masks;
    std::vector<double> costs;
    for (const auto& [key, mask] : cells) {
        masks.push_back(mask);
        costs.push_back(std::pow(std::sqrt(double(n)) * std::ldexp(1.0, -key.first), s));
    }
    const std::uint64_t full = np == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << np) - 1;
    const std::size_t k = masks.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t sub = 1; sub < (std::uint64_t(1) << k); ++sub) {
        std::uint64_t got = 0;
        double c = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            if (sub >> j & 1) {
                got |= masks[j];
                c += costs[j];
            }
        if (got == full) best = std::min(best, c);
    }
    return best;
}

SuiteResult dp() {
    SuiteResult r{"dp", {}};
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int agree = 0, total = 0;
    double worst = 0.0;
    while (total < 50) {
        const std::size_t n = 1 + gen() % 2;
        const std::size_t count = 2 + gen() % 5;
        const int lo = 1 + static_cast<int>(gen() % 3);
        const int depth = static_cast<int>(gen() % 9);
        const int hi = lo + depth;
        std::vector<double> c(n * count);
        for (double& v : c) v = unif(gen);
        const PointSet x(n, std::move(c), 1e-12, "dp-oracle");
        // delta = sqrt(n) 2^-lo puts the top of the band at lo; theta puts its bottom at hi.
        const double h = 0.5 * std::log2(double(n));
        const double delta = std::sqrt(double(n)) * std::ldexp(1.0, -lo);
        const double theta = (lo - h) / (hi + 0.5 - h);
        const double s = double(n) * (0.05 + 0.95 * unif(gen));
        int band_lo = 0, band_hi = 0;
        allowed_levels(n, theta, delta, band_lo, band_hi);
        // Keep the subset enumeration small.
        std::size_t candidates = 0;
        for (int m = band_lo; m <= band_hi; ++m) {
            std::vector<std::vector<std::int64_t>> keys;
            for (std::size_t i = 0; i < x.size(); ++i) {
                std::vector<std::int64_t> key(n);
                for (std::size_t a = 0; a < n; ++a)
                    key[a] = static_cast<std::int64_t>(std::floor(x.coord(i, a) * std::ldexp(1.0, m)));
                keys.push_back(key);
            }
            std::sort(keys.begin(), keys.end());
            candidates += std::unique(keys.begin(), keys.end()) - keys.begin();
        }
        if (candidates > 20 || band_lo != lo || band_hi != hi) continue;
        ++total;
        const double got = intermediate_cover_cost(x, theta, delta, s).cost;
        const double want = exhaustive_cover(x, lo, hi, s);
        const double err = std::abs(got - want) / want;
        worst = std::max(worst, err);
        if (err <= 1e-12) ++agree;
    }
    add(r, "tree DP equals exhaustive minimum on 50 random sets", agree == total,
        std::to_string(agree) + "/" + std::to_string(total) + ", max rel err " + str(worst));
    return r;
}

SuiteResult sharpness() {
    SuiteResult r{"sharpness", {}};
    const std::vector<double> thetas = interior_grid(99);
    double worst = 0.0;
    for (double s : {0.25, 0.5, 1.0, 2.0})
        for (double a : {0.3, 0.5, 0.7, 0.9})
            for (double K : {1.0, 1.25, 1.5, 2.0})
                worst = std::max(worst, radial_stretch_sharpness_check(s, a, K, thetas).max_residual);
    add(r, "stretch identity on 4x4x4 grid, 99 thetas", worst <= 1e-12, "max residual " + str(worst));
    const auto emp = radial_stretch_sharpness_check(1.0, 0.8, 2.0, {0.5}, EmpiricalSharpnessConfig{});
    const auto& e = *emp.empirical;
    add(r, "empirical stretch estimates within 0.07", e.agrees,
        "alpha: " + str(e.estimate_alpha, 4) + " vs " + str(e.predicted_alpha, 4) +
            ", beta: " + str(e.estimate_beta, 4) + " vs " + str(e.predicted_beta, 4));
    return r;
}

SuiteResult distortion() {
    SuiteResult r{"distortion", {}};
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const int n = 1 + static_cast<int>(gen() % 4);
        const double s = n * (0.001 + 0.998 * unif(gen));
        const double p = n * (1.0 + 1e-3 + 20.0 * unif(gen));
        const double lhs = alpha_hoelder(p, n) * phi(s, n);
        const double rhs = phi(tau(s, n, p), n);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0));
    }
    add(r, "alpha(p) Phi(s) = Phi(tau_p(s)) on 1e4 samples", worst <= 1e-14,
        "max scaled err " + str(worst));

    bool collapse = true;
    for (int n : {2, 3}) {
        const auto ctx1 = DistortionContext::with_default_model(n, 1.0);
        for (double s : {0.1, 0.7, 1.3, 1.9}) {
            const auto iv = qc_interval(s, ctx1);
            collapse = collapse && iv.lo == s && iv.hi == s;
        }
        const auto ctx = DistortionContext::with_default_model(n, 3.0);
        for (double s : {0.0, double(n)}) {
            const auto iv = qc_interval(s, ctx);
            collapse = collapse && iv.lo == s && iv.hi == s;
        }
    }
    add(r, "qc interval collapses at K = 1 and at s in {0, n}", collapse, "");

    int strict = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = 1 + static_cast<int>(gen() % 4);
        const double s = n * (0.01 + 0.98 * unif(gen));
        const double p = n * (1.01 + 10.0 * unif(gen));
        if (sobolev_upper(s, n, p) < hoelder_upper(s, alpha_hoelder(p, n))) ++strict;
    }
    add(r, "Sobolev bound strictly below Holder bound", strict == 1000,
        std::to_string(strict) + "/1000");

    const auto ga = g_set_bundle(1.0, 2, 0.8), gb = g_set_bundle(1.0, 2, 0.4);
    const auto tr = extremality_transfer_check(ga, gb, 2.0, interior_grid(99));
    add(r, "extremality transfers for radial stretch grids",
        tr.failed.empty() && tr.conclusion_residual <= 1e-12,
        "conclusion residual " + str(tr.conclusion_residual));
    return r;
}

SuiteResult classification() {
    SuiteResult r{"classification", {}};
    const auto e1 = seq_bundle(1.0, 2), e12 = seq_bundle(0.5, 2);
    MinDilatationConfig cfg;
    cfg.include_assouad_spectrum = true;
    for (int i = 0; i <= 20; ++i) cfg.t_grid.push_back(0.1 * std::pow(100.0, i / 20.0));
    const auto cert = min_dilatation(e1, e12, cfg);
    double k_main = 1.0, k_spec = 1.0;
    for (const Witness& w : cert.witnesses) {
        double& k = w.rule == "assouad_spectrum" ? k_spec : k_main;
        k = std::max(k, w.k);
    }
    add(r, "E_1 vs E_1/2 gives K = 2", std::abs(k_main - 2.0) <= 1e-6, str(k_main, 12));
    add(r, "Assouad spectrum rule stays below 2", k_spec < 2.0, str(k_spec, 8));
    const auto rev = min_dilatation(e12, e1);
    add(r, "certificate symmetric in its arguments", std::abs(rev.k_lower - min_dilatation(e1, e12).k_lower) <= 1e-12,
        str(rev.k_lower, 12));
    add(r, "identical bundles give K = 1", min_dilatation(e1, e1).k_lower == 1.0, "");
    return r;
}

std::vector<std::pair<std::string, PointSet>> capacity_fixtures() {
    std::vector<std::pair<std::string, PointSet>> fx;
    fx.emplace_back("E_1 m<=500", gen_sequence_set(1.0, 500));
    fx.emplace_back("E_2 m<=300", gen_sequence_set(2.0, 300));
    fx.emplace_back("line grid 256", gen_uniform_grid(1, 256));
    fx.emplace_back("square grid 24^2", gen_uniform_grid(2, 24));
    fx.emplace_back("carpet 2x3 level 5", gen_bm_carpet(small_carpet(), 5));
    fx.emplace_back("E_1 x E_1 m<=20", gen_product(gen_sequence_set(1.0, 20), gen_sequence_set(1.0, 20)));
    fx.emplace_back("stretch grid", gen_radial_stretch_grid(1.0, 2, 0.8, 20));
    fx.emplace_back("example carpet E level 1", gen_bm_carpet(example_carpet_e(), 1));
    for (std::uint64_t seed = 0;; ++seed) {
        const auto smp = gen_percolation({2, 3, 0.7, 4, seed});
        if (smp.points && smp.points->size() >= 100) {
            fx.emplace_back("percolation seed " + std::to_string(seed), *smp.points);
            break;
        }
    }
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unif;
    std::vector<double> c(128);
    for (double& v : c) v = unif(gen);
    fx.emplace_back("64 random points", PointSet(2, std::move(c), 1e-3, "random"));
    return fx;
}

SuiteResult capacity_suite() {
    SuiteResult r{"capacity", {}};
    for (const auto& [name, x] : capacity_fixtures()) {
        const double s = 0.5 * double(x.ambient_dim());
        const double bound = std::pow(4.0, double(x.ambient_dim()));
        double gap = 0.0, dev = 0.0, worst_c = 0.0;
        bool lower = true, upper = true;
        for (double rr : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64})
            for (double th : {0.5, 0.8}) {
                const auto cap = capacity(x, {rr, th, s, int(x.ambient_dim())});
                gap = std::max(gap, cap.duality_gap);
                dev = std::max(dev, cap.equilibrium_deviation);
                const auto rep = capacity_cover_sandwich_check(x, rr, th, s, bound);
                lower = lower && rep.lower_holds;
                upper = upper && rep.upper_holds;
                worst_c = std::max(worst_c, rep.empirical_constant);
            }
        add(r, name + ": gap <= 1e-8, deviation <= 1e-6", gap <= 1e-8 && dev <= 1e-6,
            "gap " + str(gap, 3) + ", deviation " + str(dev, 3));
        add(r, name + ": sandwich holds at every scale", lower && upper,
            "max constant " + str(worst_c, 4) + " vs " + str(bound, 4));
    }
    bool mc = true;
    std::string worst;
    double worst_z = -1e300;
    for (int n : {1, 2, 3})
        for (double a : {0.3, 1.0})
            for (double yn : {0.05, 0.4}) {
                std::vector<double> y(n, 0.0);
                y[0] = yn;
                const auto chk = symmetrization_monte_carlo(n, a, y, {0.1, 0.5, 0.5 * n, n}, 200000,
                                                            100 + n);
                mc = mc && chk.holds;
                const double z = chk.difference / std::max(chk.standard_error, 1e-300);
                if (z > worst_z) {
                    worst_z = z;
                    worst = "max z " + str(z, 3);
                }
            }
    add(r, "shifted ball energy <= centered (3 SE)", mc, worst);
    return r;
}

SuiteResult percolation() {
    SuiteResult r{"percolation", {}};
    double sum = 0.0;
    int survivors = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto smp = gen_percolation({2, 3, 0.5, 7, seed});
        if (!smp.points) continue;
        ++survivors;
        sum += box_dim_estimate(*smp.points, ScaleGrid::dyadic_for(*smp.points)).value;
    }
    const double target = 2.0 - std::log(2.0) / std::log(3.0);
    const double mean = survivors ? sum / survivors : 0.0;
    add(r, "mean box estimate given survival within 0.1", survivors > 0 && std::abs(mean - target) <= 0.1,
        "mean " + str(mean, 5) + " over " + std::to_string(survivors) + " survivors, target " + str(target, 5));
    int extinct = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        if (gen_percolation({2, 3, 1.0 / 9.0, 256, seed}).extinct()) ++extinct;
    add(r, "extinction frequency at p = 1/9 above 0.95", extinct > 190,
        std::to_string(extinct) + "/200 at depth 256");  // critical case: depth 7 is far too shallow
    return r;
}

const std::map<std::string, std::function<SuiteResult()>>& registry() {
    static const std::map<std::string, std::function<SuiteResult()>> m = {
        {"chain", chain},           {"carpets", carpets},         {"sequence", sequence},
        {"dp", dp},                 {"sharpness", sharpness},     {"distortion", distortion},
        {"classification", classification}, {"capacity", capacity_suite}, {"percolation", percolation}};
    return m;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"chain",      "carpets",        "sequence",
                                                   "dp",         "sharpness",      "distortion",
                                                   "classification", "capacity", "percolation"};
    return names;
}

std::vector<SuiteResult> run(const std::string& name) {
    std::vector<SuiteResult> out;
    if (name == "all") {
        for (const auto& n : suite_names()) out.push_back(registry().at(n)());
        return out;
    }
    const auto it = registry().find(name);
    if (it == registry().end()) throw ParameterError("unknown verification suite '" + name + "'");
    out.push_back(it->second());
    return out;
}

nlohmann::json to_json(const SuiteResult& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const Check& c : r.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", std::move(checks)}};
}

}  // namespace dimlab::verify
