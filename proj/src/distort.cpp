#include "dimlab/distort.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dimlab/error.hpp"
#include "dimlab/estimate.hpp"
#include "dimlab/sets.hpp"

namespace dimlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double phi_or_inf(double d, int n) { return d <= 0.0 ? kInf : phi(d, n); }

double inverse_phi_clamped(double y, int n, bool& clamped) {
    if (y <= -1.0 / n) {  // below the range of Phi on (0, n]
        clamped = true;
        return n;
    }
    double d = phi_inverse(y, n);
    if (d > n) {
        clamped = true;
        d = n;
    }
    return d;
}

struct Alphas {
    double at_k = 1.0, at_kinv = 1.0;  // alpha(p(K)), alpha(p(K^(n-1)))
    ExponentTag tag_k = ExponentTag::exact, tag_kinv = ExponentTag::exact;
};

Alphas sobolev_alphas(const DistortionContext& ctx) {
    const SobolevExponent pk = p_sob(ctx.n, ctx.K, ctx.p_model);
    const SobolevExponent pinv = p_sob(ctx.n, std::pow(ctx.K, ctx.n - 1), ctx.p_model);
    return {alpha_hoelder(pk.value, ctx.n), alpha_hoelder(pinv.value, ctx.n), pk.tag, pinv.tag};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

void DistortionContext::validate() const {
    detail::require(n >= 2, "distortion context: n must be >= 2");
    detail::require(std::isfinite(K) && K >= 1.0, "distortion context: K must be >= 1");
    if (p_model.mode == SobolevExponentModel::Mode::exact_2d && n != 2)
        throw ModelError("distortion context: the exact planar exponent requires n = 2");
    for (const auto& p : {p_rh, p_rh_inverse})
        if (p) detail::require(*p > n, "distortion context: reverse Holder exponent must exceed n");
}

double hoelder_upper(double dim_theta, double alpha, std::optional<int> ambient_dim) {
    detail::require(alpha > 0.0 && alpha <= 1.0, "hoelder_upper: alpha must lie in (0,1]");
    detail::require(dim_theta >= 0.0, "hoelder_upper: dimension must be >= 0");
    const double v = dim_theta / alpha;
    return ambient_dim ? std::min(v, double(*ambient_dim)) : v;
}

double sobolev_upper(double dim_theta, int n, double p) {
    detail::require(p > n, "sobolev_upper: p must exceed n");
    detail::require(dim_theta >= 0.0 && dim_theta <= n, "sobolev_upper: dimension must lie in [0,n]");
    if (dim_theta == 0.0 || dim_theta == n) return dim_theta;
    return tau(dim_theta, n, p);
}

DimensionInterval qc_interval(double d, const DistortionContext& ctx) {
    ctx.validate();
    detail::require(d >= 0.0 && d <= ctx.n, "qc_interval: dimension must lie in [0,n]");
    const Alphas a = sobolev_alphas(ctx);
    DimensionInterval iv;
    iv.hi_tag = a.tag_k;
    iv.lo_tag = a.tag_kinv;
    if (ctx.K == 1.0 || d == 0.0 || d == ctx.n) {
        iv.lo = iv.hi = d;
        return iv;
    }
    const double ph = phi(d, ctx.n);
    // Phi is decreasing: the larger Phi value gives the smaller dimension.
    iv.hi = inverse_phi_clamped(a.at_k * ph, ctx.n, iv.clamped);
    iv.lo = inverse_phi_clamped(ph / a.at_kinv, ctx.n, iv.clamped);
    const double holder = ctx.K * d;
    if (holder < iv.hi) {
        iv.hi = holder;
        iv.hoelder_clamped = true;
    }
    return iv;
}

DimensionInterval hausdorff_distortion_bounds(double s, const DistortionContext& ctx) {
    return qc_interval(s, ctx);
}

// ---------------------------------------------------------------------------

SpectrumQcBounds assouad_spectrum_qc_bounds(const DimensionProfile& spectrum,
                                            const DistortionContext& ctx, double t) {
    ctx.validate();
    detail::require(t > 0.0 && std::isfinite(t), "assouad_spectrum_qc_bounds: t must be positive");
    detail::require(spectrum.kind() == DimensionKind::assouad_spectrum,
                    "assouad_spectrum_qc_bounds: needs an assouad_spectrum profile");
    const int n = ctx.n;
    SpectrumQcBounds b;
    b.t = t;
    b.theta_image = 1.0 / (1.0 + t);
    b.theta_lower = ctx.K / (ctx.K + t);
    b.theta_upper = 1.0 / (1.0 + ctx.K * t);

    auto alpha_rh = [&](double k, const std::optional<double>& user) {
        if (user) return alpha_hoelder(*user, n);
        return alpha_hoelder(p_sob(n, k, ctx.p_model).value, n);
    };
    const double a_k = alpha_rh(ctx.K, ctx.p_rh);
    const double a_kinv = alpha_rh(std::pow(ctx.K, n - 1), ctx.p_rh_inverse);
    if (n != 2 && ctx.K > 1.0 && !(ctx.p_rh && ctx.p_rh_inverse))
        b.assumptions.push_back("assumption: p_rh taken equal to the " + ctx.p_model.name() +
                                " Sobolev exponent");
    if (ctx.p_rh || ctx.p_rh_inverse) b.assumptions.push_back("assumption: user-supplied p_rh");

    b.phi_lower = a_k * phi_or_inf(spectrum(b.theta_lower), n);
    b.phi_upper = phi_or_inf(spectrum(b.theta_upper), n) / a_kinv;
    bool clamped = false;
    b.dim_hi = std::isinf(b.phi_lower) ? 0.0 : inverse_phi_clamped(b.phi_lower, n, clamped);
    b.dim_lo = std::isinf(b.phi_upper) ? 0.0 : inverse_phi_clamped(b.phi_upper, n, clamped);
    return b;
}

double assouad_spectrum_implied_k(const DimensionProfile& e_spectrum,
                                  const DimensionProfile& f_spectrum,
                                  const DistortionContext& ctx_template, double t, double k_max) {
    detail::require(k_max > 1.0, "assouad_spectrum_implied_k: k_max must exceed 1");
    const double target = f_spectrum(1.0 / (1.0 + t));
    auto feasible = [&](double K) {
        DistortionContext ctx = ctx_template;
        ctx.K = K;
        const SpectrumQcBounds b = assouad_spectrum_qc_bounds(e_spectrum, ctx, t);
        return b.dim_lo <= target + 1e-12 && target <= b.dim_hi + 1e-12;
    };
    if (feasible(1.0)) return 1.0;
    // Feasibility need not be monotone in K: scan, then refine the first transition.
    const int steps = 4000;
    const double ratio = std::pow(k_max, 1.0 / steps);
    double prev = 1.0;
    for (int i = 1; i <= steps; ++i) {
        const double K = std::pow(ratio, i);
        if (feasible(K)) {
            double lo = prev, hi = K;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (feasible(mid) ? hi : lo) = mid;
            }
            return hi;
        }
        prev = K;
    }
    return k_max;
}

// ---------------------------------------------------------------------------

double planar_rule(double d, double d_image) {
    const double a = phi_or_inf(d, 2), b = phi_or_inf(d_image, 2);
    if (a == b) return 1.0;
    if (a <= 0.0 || b <= 0.0) return kInf;  // one of them has full dimension
    return std::max(a / b, b / a);
}

std::vector<double> MinDilatationConfig::default_thetas(std::size_t count, double min_theta) {
    detail::require(count >= 2, "theta grid needs at least two points");
    detail::require(min_theta > 0.0 && min_theta < 1.0, "theta grid minimum must lie in (0,1)");
    std::vector<double> out(count);
    const double lmin = std::log(min_theta);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::exp(lmin * (1.0 - double(i) / double(count - 1)));
    out.back() = 1.0;
    return out;
}

namespace {

struct RuleEval {
    std::string rule;
    std::string direction;
    // Implied K from the dimensions of E and F at one theta.
    std::function<double(double, double)> k;
};

// Smallest K >= 1 with pred(K) true, pred monotone.
double smallest_k(const std::function<bool(double)>& pred) {
    if (pred(1.0)) return 1.0;
    double hi = 2.0;
    while (!pred(hi)) {
        hi *= 2.0;
        if (hi > 1e12) return kInf;
    }
    double lo = hi / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::vector<RuleEval> build_rules(int n, const MinDilatationConfig& cfg,
                                  std::vector<std::string>& assumptions) {
    std::vector<RuleEval> rules;
    const double inv_exp = 1.0 / (n - 1);
    if (cfg.use_hoelder) {
        // f is locally 1/K-Holder; f^-1 is K^(n-1)-quasiconformal.
        rules.push_back({"hoelder", "forward", [](double de, double df) {
                             return de > 0.0 ? df / de : (df > 0.0 ? kInf : 1.0);
                         }});
        rules.push_back({"hoelder", "inverse", [inv_exp](double de, double df) {
                             const double r = df > 0.0 ? de / df : (de > 0.0 ? kInf : 1.0);
                             return std::pow(r, inv_exp);
                         }});
    }
    if (cfg.use_sobolev) {
        const auto model = cfg.model;
        if (model.mode == SobolevExponentModel::Mode::exact_2d && n != 2)
            throw ModelError("min_dilatation: the exact planar exponent requires n = 2");
        if (n == 2 && model.mode == SobolevExponentModel::Mode::exact_2d) {
            // Phi(f(E)) in [Phi(E)/K, K Phi(E)]: each side is one map direction.
            rules.push_back({"planar", "forward", [](double de, double df) {
                                 const double a = phi_or_inf(de, 2), b = phi_or_inf(df, 2);
                                 if (a == b) return 1.0;
                                 return b > 0.0 ? std::max(1.0, a / b) : kInf;
                             }});
            rules.push_back({"planar", "inverse", [](double de, double df) {
                                 const double a = phi_or_inf(de, 2), b = phi_or_inf(df, 2);
                                 if (a == b) return 1.0;
                                 return a > 0.0 ? std::max(1.0, b / a) : kInf;
                             }});
        } else {
            if (model.mode != SobolevExponentModel::Mode::iwaniec_martin_lower)
                assumptions.push_back("assumption: Sobolev exponent from the " + model.name() +
                                      " model");
            auto forward = [n, model](double de, double df) {
                const double a = phi_or_inf(de, n), b = phi_or_inf(df, n);
                if (a == b) return 1.0;
                return smallest_k([&](double K) {
                    return alpha_hoelder(p_sob(n, K, model).value, n) * a <= b;
                });
            };
            auto inverse = [n, model](double de, double df) {
                const double a = phi_or_inf(de, n), b = phi_or_inf(df, n);
                if (a == b) return 1.0;
                return smallest_k([&](double K) {
                    return b * alpha_hoelder(p_sob(n, std::pow(K, n - 1), model).value, n) <= a;
                });
            };
            rules.push_back({"sobolev", "forward", forward});
            rules.push_back({"sobolev", "inverse", inverse});
        }
    }
    return rules;
}

}  // namespace

ClassificationCertificate min_dilatation(const ProfileBundle& e, const ProfileBundle& f,
                                         const MinDilatationConfig& cfg) {
    if (e.ambient_dim != f.ambient_dim)
        throw ParameterError("min_dilatation: bundles live in different ambient dimensions (" +
                             std::to_string(e.ambient_dim) + " vs " +
                             std::to_string(f.ambient_dim) + ")");
    const int n = static_cast<int>(e.ambient_dim);
    detail::require(n >= 2, "min_dilatation: ambient dimension must be >= 2");
    const DimensionProfile& pe = e.at(DimensionKind::intermediate);
    const DimensionProfile& pf = f.at(DimensionKind::intermediate);

    std::vector<double> thetas = cfg.thetas.empty() ? MinDilatationConfig::default_thetas() : cfg.thetas;
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
    for (double t : thetas)
        detail::require(t > 0.0 && t <= 1.0, "min_dilatation: thetas must lie in (0,1]");

    ClassificationCertificate cert;
    const std::vector<RuleEval> rules = build_rules(n, cfg, cert.assumptions);
    cert.inputs = {{"e", e.family},
                   {"f", f.family},
                   {"n", n},
                   {"model", cfg.model.name()},
                   {"theta_count", thetas.size()},
                   {"theta_min", thetas.front()},
                   {"theta_max", thetas.back()}};

    std::vector<double> de(thetas.size()), df(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        de[i] = pe(thetas[i]);
        df[i] = pf(thetas[i]);
    }

    cert.k_lower = 1.0;
    cert.rule = "none";
    cert.direction = "none";
    cert.theta_star = thetas.back();
    auto consider = [&](const Witness& w) {
        cert.witnesses.push_back(w);
        if (w.k > cert.k_lower) {
            cert.k_lower = w.k;
            cert.rule = w.rule;
            cert.direction = w.direction;
            cert.theta_star = w.theta;
        }
    };

    for (const RuleEval& rule : rules) {
        std::size_t best = 0;
        std::vector<double> ks(thetas.size());
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            ks[i] = rule.k(de[i], df[i]);
            if (ks[i] > ks[best]) best = i;
        }
        Witness w{thetas[best], rule.rule, rule.direction, de[best], df[best], ks[best]};
        if (cfg.refine && thetas.size() >= 3 && ks[best] > 1.0) {
            // Golden section on the bracket around the grid maximum.
            double a = thetas[best == 0 ? 0 : best - 1];
            double b = thetas[std::min(best + 1, thetas.size() - 1)];
            auto k_at = [&](double t) { return rule.k(pe(t), pf(t)); };
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            double c = b - g * (b - a), d = a + g * (b - a);
            double kc = k_at(c), kd = k_at(d);
            for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
                if (kc >= kd) {
                    b = d; d = c; kd = kc;
                    c = b - g * (b - a); kc = k_at(c);
                } else {
                    a = c; c = d; kc = kd;
                    d = a + g * (b - a); kd = k_at(d);
                }
            }
            const double t = kc >= kd ? c : d;
            const double kt = std::max(kc, kd);
            if (kt > w.k) w = {t, rule.rule, rule.direction, pe(t), pf(t), kt};
        }
        consider(w);
        if (cfg.extrapolate && thetas.size() >= 2) {
            const double t1 = thetas[0], t2 = thetas[1];
            const double v1 = ks[0], v2 = ks[1];
            if (std::isfinite(v1) && std::isfinite(v2)) {
                const double ext = (t2 * v1 - t1 * v2) / (t2 - t1);
                consider({0.0, rule.rule + "_extrapolated", rule.direction, de[0], df[0], ext});
            }
        }
    }

    if (cfg.include_assouad_spectrum && e.has(DimensionKind::assouad_spectrum) &&
        f.has(DimensionKind::assouad_spectrum)) {
        std::vector<double> ts = cfg.t_grid;
        if (ts.empty())
            for (int i = 0; i <= 40; ++i) ts.push_back(0.1 * std::pow(100.0, i / 40.0));
        DistortionContext ctx{n, 1.0, cfg.model, {}, {}};
        const auto& se = e.at(DimensionKind::assouad_spectrum);
        const auto& sf = f.at(DimensionKind::assouad_spectrum);
        for (double t : ts) {
            const double th = 1.0 / (1.0 + t);
            consider({th, "assouad_spectrum", "forward", se(th), sf(th),
                      assouad_spectrum_implied_k(se, sf, ctx, t)});
        }
        if (n != 2) cert.assumptions.push_back("assumption: p_rh taken equal to the Sobolev exponent");
    }

    std::ostringstream os;
    if (cert.k_lower > 1.0) {
        os << "no K-quasiconformal map of R^" << n << " with K < " << fmt(cert.k_lower)
           << " sends " << e.family << " onto " << f.family << " (rule " << cert.rule << ", "
           << cert.direction << ", theta " << fmt(cert.theta_star) << ")";
    } else {
        os << "profiles coincide on the grid; no dilatation bound beyond K >= 1";
    }
    cert.verdict = os.str();
    return cert;
}

// ---------------------------------------------------------------------------

RadialStretchSharpness radial_stretch_sharpness_check(
    double s, double alpha, double K, const std::vector<double>& thetas,
    const std::optional<EmpiricalSharpnessConfig>& empirical) {
    detail::require(K >= 1.0 && std::isfinite(K), "radial_stretch_sharpness_check: K must be >= 1");
    const double beta = alpha / K;
    detail::require(beta > 0.0 && beta < 1.0,
                    "radial_stretch_sharpness_check: alpha/K must lie in (0,1)");
    const ProfileBundle ga = g_set_bundle(s, 2, alpha);
    const ProfileBundle gb = g_set_bundle(s, 2, beta);
    const auto& pa = ga.at(DimensionKind::intermediate);
    const auto& pb = gb.at(DimensionKind::intermediate);

    RadialStretchSharpness r;
    r.s = s;
    r.alpha = alpha;
    r.K = K;
    r.beta = beta;
    r.thetas = thetas;
    for (double t : thetas) {
        const double da = pa(t), db = pb(t);
        r.dim_alpha.push_back(da);
        r.dim_beta.push_back(db);
        const double lhs = 1.0 / db - 0.5;
        const double rhs = (1.0 / da - 0.5) / K;
        r.max_residual = std::max(r.max_residual, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }

    if (empirical) {
        RadialStretchSharpness::Empirical emp;
        emp.theta = empirical->theta;
        emp.m_max = empirical->m_max;
        emp.tolerance = empirical->tolerance;
        const PointSet xa =
            gen_radial_stretch_grid(s, 2, alpha, static_cast<std::int64_t>(empirical->m_max));
        const PointSet xb = apply_power_map(xa, 1.0 / K);
        emp.estimate_alpha =
            intermediate_dim_estimate(xa, emp.theta, ScaleGrid::dyadic_for(xa, emp.theta)).value;
        emp.estimate_beta =
            intermediate_dim_estimate(xb, emp.theta, ScaleGrid::dyadic_for(xb, emp.theta)).value;
        emp.predicted_alpha = pa(emp.theta);
        emp.predicted_beta = pb(emp.theta);
        emp.agrees = std::abs(emp.estimate_alpha - emp.predicted_alpha) <= emp.tolerance &&
                     std::abs(emp.estimate_beta - emp.predicted_beta) <= emp.tolerance;
        r.empirical = emp;
    }
    return r;
}

ExtremalityTransfer extremality_transfer_check(const ProfileBundle& e, const ProfileBundle& f,
                                               double K, const std::vector<double>& thetas,
                                               double tol) {
    ExtremalityTransfer r;
    r.K = K;
    auto value_or_nan = [](const ProfileBundle& b, DimensionKind k) {
        return b.has(k) ? b.at(k)(1.0) : std::numeric_limits<double>::quiet_NaN();
    };
    r.lambda = value_or_nan(e, DimensionKind::lower);
    r.beta = value_or_nan(e, DimensionKind::box);
    r.alpha = value_or_nan(e, DimensionKind::assouad);
    const double beta_f = value_or_nan(f, DimensionKind::box);
    const bool planar = e.ambient_dim == 2 && f.ambient_dim == 2;

    r.profile_hypothesis = planar && r.lambda == 0.0 && r.alpha == 2.0;
    if (std::isfinite(r.beta) && std::isfinite(beta_f) && r.beta > 0.0 && beta_f > 0.0) {
        r.box_residual = std::abs((1.0 / beta_f - 0.5) - (1.0 / r.beta - 0.5) / K);
        r.box_extremal = r.box_residual <= tol;
    } else {
        r.box_residual = kInf;
    }

    const bool have_theta = e.has(DimensionKind::intermediate) && f.has(DimensionKind::intermediate);
    if (have_theta && r.profile_hypothesis && std::isfinite(r.beta)) {
        const auto& pe = e.at(DimensionKind::intermediate);
        for (double t : thetas)
            r.banaji_rutar_residual =
                std::max(r.banaji_rutar_residual,
                         std::abs(pe(t) - banaji_rutar_lower(r.lambda, r.beta, r.alpha, t)));
        r.banaji_rutar_extremal = r.banaji_rutar_residual <= tol;
    } else {
        r.banaji_rutar_residual = kInf;
    }

    if (!r.profile_hypothesis)
        r.failed = "profile: need planar data with lower dimension 0 and Assouad dimension 2";
    else if (!r.box_extremal)
        r.failed = "(i) box-counting distortion bound is not attained";
    else if (!r.banaji_rutar_extremal)
        r.failed = "(ii) intermediate lower bound is not attained";

    if (have_theta) {
        const auto& pe = e.at(DimensionKind::intermediate);
        const auto& pf = f.at(DimensionKind::intermediate);
        for (double t : thetas) {
            const double lhs = 1.0 / pf(t) - 0.5;
            const double rhs = (1.0 / pe(t) - 0.5) / K;
            r.conclusion_residual =
                std::max(r.conclusion_residual, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        }
        r.conclusion_holds = r.conclusion_residual <= tol;
    } else {
        r.conclusion_residual = kInf;
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {
nlohmann::json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
}
}  // namespace

nlohmann::json to_json(const DimensionInterval& iv) {
    return {{"lo", num(iv.lo)},
            {"hi", num(iv.hi)},
            {"lo_tag", to_string(iv.lo_tag)},
            {"hi_tag", to_string(iv.hi_tag)},
            {"hoelder_clamped", iv.hoelder_clamped},
            {"clamped", iv.clamped}};
}

nlohmann::json to_json(const SpectrumQcBounds& b) {
    return {{"t", b.t},
            {"theta_image", b.theta_image},
            {"theta_lower", b.theta_lower},
            {"theta_upper", b.theta_upper},
            {"phi_lower", num(b.phi_lower)},
            {"phi_upper", num(b.phi_upper)},
            {"dim_lo", b.dim_lo},
            {"dim_hi", b.dim_hi},
            {"assumptions", b.assumptions}};
}

nlohmann::json to_json(const ClassificationCertificate& c) {
    nlohmann::json ws = nlohmann::json::array();
    for (const Witness& w : c.witnesses)
        ws.push_back({{"theta", w.theta},
                      {"rule", w.rule},
                      {"direction", w.direction},
                      {"dim_e", w.dim_e},
                      {"dim_f", w.dim_f},
                      {"k", num(w.k)}});
    return {{"k_lower", num(c.k_lower)},
            {"direction", c.direction},
            {"rule", c.rule},
            {"theta_star", c.theta_star},
            {"inputs", c.inputs},
            {"assumptions", c.assumptions},
            {"witnesses", std::move(ws)},
            {"verdict", c.verdict}};
}

nlohmann::json to_json(const RadialStretchSharpness& r) {
    nlohmann::json j = {{"s", r.s},
                        {"alpha", r.alpha},
                        {"K", r.K},
                        {"beta", r.beta},
                        {"thetas", r.thetas},
                        {"dim_alpha", r.dim_alpha},
                        {"dim_beta", r.dim_beta},
                        {"max_residual", r.max_residual}};
    if (r.empirical) {
        const auto& e = *r.empirical;
        j["empirical"] = {{"theta", e.theta},
                          {"m_max", e.m_max},
                          {"estimate_alpha", e.estimate_alpha},
                          {"estimate_beta", e.estimate_beta},
                          {"predicted_alpha", e.predicted_alpha},
                          {"predicted_beta", e.predicted_beta},
                          {"tolerance", e.tolerance},
                          {"agrees", e.agrees}};
    }
    return j;
}

nlohmann::json to_json(const ExtremalityTransfer& r) {
    return {{"K", r.K},
            {"lambda", num(r.lambda)},
            {"beta", num(r.beta)},
            {"alpha", num(r.alpha)},
            {"profile_hypothesis", r.profile_hypothesis},
            {"box_extremal", r.box_extremal},
            {"box_residual", num(r.box_residual)},
            {"banaji_rutar_extremal", r.banaji_rutar_extremal},
            {"banaji_rutar_residual", num(r.banaji_rutar_residual)},
            {"conclusion_residual", num(r.conclusion_residual)},
            {"conclusion_holds", r.conclusion_holds},
            {"failed", r.failed}};
}

}  // namespace dimlab
