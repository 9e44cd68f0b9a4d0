#include "dimlab/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::pair<DimensionKind, std::string_view> kKindNames[] = {
    {DimensionKind::hausdorff, "hausdorff"},
    {DimensionKind::intermediate, "intermediate"},
    {DimensionKind::box, "box"},
    {DimensionKind::assouad_spectrum, "assouad_spectrum"},
    {DimensionKind::quasi_assouad, "quasi_assouad"},
    {DimensionKind::assouad, "assouad"},
    {DimensionKind::lower, "lower"},
    {DimensionKind::quasi_hausdorff, "quasi_hausdorff"},
};
}  // namespace

std::string_view to_string(DimensionKind k) {
    for (auto [kind, name] : kKindNames)
        if (kind == k) return name;
    return "unknown";
}

DimensionKind parse_kind(std::string_view s) {
    for (auto [kind, name] : kKindNames)
        if (name == s) return kind;
    throw ParameterError("unknown dimension kind '" + std::string(s) + "'");
}

bool theta_dependent(DimensionKind k) {
    return k == DimensionKind::intermediate || k == DimensionKind::assouad_spectrum;
}

std::string_view to_string(BoundTag t) {
    switch (t) {
        case BoundTag::exact: return "exact";
        case BoundTag::upper: return "upper";
        case BoundTag::lower: return "lower";
        case BoundTag::conjectural: return "conjectural";
    }
    return "exact";
}

std::string_view to_string(ExponentTag t) {
    switch (t) {
        case ExponentTag::exact: return "exact";
        case ExponentTag::conjectural: return "conjectural";
        case ExponentTag::lower_bound: return "lower_bound";
    }
    return "exact";
}

// ---------------------------------------------------------------------------

DimensionProfile DimensionProfile::closed_form(DimensionKind kind, std::size_t n,
                                               std::string family, nlohmann::json params,
                                               Eval eval, BoundTag tag) {
    DimensionProfile p;
    p.kind_ = kind;
    p.n_ = n;
    p.family_ = std::move(family);
    p.params_ = std::move(params);
    p.tag_ = tag;
    p.eval_ = std::move(eval);
    return p;
}

DimensionProfile DimensionProfile::constant(DimensionKind kind, std::size_t n, std::string family,
                                            nlohmann::json params, double value, BoundTag tag) {
    return closed_form(kind, n, std::move(family), std::move(params),
                       [value](double) { return value; }, tag);
}

DimensionProfile DimensionProfile::sampled(DimensionKind kind, std::size_t n, std::string family,
                                           nlohmann::json params, std::vector<double> thetas,
                                           std::vector<double> values, BoundTag tag) {
    detail::require(!thetas.empty() && thetas.size() == values.size(),
                    "sampled profile: need matching non-empty theta and value tables");
    for (std::size_t i = 1; i < thetas.size(); ++i)
        detail::require(thetas[i] > thetas[i - 1], "sampled profile: thetas must increase");
    auto eval = [t = std::move(thetas), v = std::move(values)](double theta) {
        if (theta <= t.front()) return v.front();
        if (theta >= t.back()) return v.back();
        const auto hi = std::upper_bound(t.begin(), t.end(), theta) - t.begin();
        const auto lo = hi - 1;
        const double w = (theta - t[lo]) / (t[hi] - t[lo]);
        return v[lo] + w * (v[hi] - v[lo]);
    };
    return closed_form(kind, n, std::move(family), std::move(params), std::move(eval), tag);
}

double DimensionProfile::operator()(double theta) const {
    if (kind_ == DimensionKind::intermediate)
        detail::require(theta > 0.0 && theta <= 1.0, "intermediate profile: theta must lie in (0,1]");
    if (kind_ == DimensionKind::assouad_spectrum)
        detail::require(theta > 0.0 && theta < 1.0,
                        "assouad spectrum profile: theta must lie in (0,1)");
    return eval_(theta);
}

const DimensionProfile& ProfileBundle::at(DimensionKind k) const {
    const auto it = profiles.find(k);
    if (it == profiles.end())
        throw ParameterError("bundle '" + family + "' has no " + std::string(to_string(k)) +
                             " profile");
    return it->second;
}

void ProfileBundle::add(DimensionProfile p) {
    const auto k = p.kind();
    profiles.insert_or_assign(k, std::move(p));
}

nlohmann::json profile_to_json(const DimensionProfile& p, const std::vector<double>& thetas) {
    nlohmann::json samples = nlohmann::json::array();
    const std::string tag(to_string(p.tag()));
    if (theta_dependent(p.kind())) {
        for (double t : thetas) samples.push_back({{"theta", t}, {"value", p(t)}, {"tag", tag}});
    } else {
        samples.push_back({{"theta", nullptr}, {"value", p(1.0)}, {"tag", tag}});
    }
    return {{"kind", to_string(p.kind())},
            {"family", p.family()},
            {"params", p.params()},
            {"n", p.ambient_dim()},
            {"samples", std::move(samples)}};
}

// ---------------------------------------------------------------------------

double tau(double s, int n, double p) {
    detail::require(n >= 1, "tau: n must be >= 1");
    detail::require(p > n, "tau: p must exceed n");
    detail::require(s >= 0.0 && s <= n, "tau: s must lie in [0,n]");
    if (std::isinf(p)) return s;
    return p * s / (p - n + s);
}

double phi(double s, int n) {
    detail::require(n >= 1, "phi: n must be >= 1");
    detail::require(s > 0.0, "phi: s must be positive");
    return (n - s) / (n * s);
}

double phi_inverse(double y, int n) {
    detail::require(n >= 1, "phi_inverse: n must be >= 1");
    detail::require(y > -1.0 / n, "phi_inverse: value below -1/n has no preimage");
    if (std::isinf(y)) return 0.0;
    return 1.0 / (y + 1.0 / n);
}

double alpha_hoelder(double p, int n) {
    detail::require(n >= 1, "alpha: n must be >= 1");
    detail::require(p > n, "alpha: p must exceed n");
    if (std::isinf(p)) return 1.0;
    return 1.0 - n / p;
}

std::string SobolevExponentModel::name() const {
    switch (mode) {
        case Mode::exact_2d: return "exact_2d";
        case Mode::conjectured: return "conjectured";
        case Mode::iwaniec_martin_lower: {
            std::ostringstream os;
            os << "iwaniec_martin(" << lambda << ")";
            return os.str();
        }
    }
    return "conjectured";
}

SobolevExponent p_sob(int n, double K, const SobolevExponentModel& model) {
    detail::require(n >= 1, "p_sob: n must be >= 1");
    detail::require(K >= 1.0 && std::isfinite(K), "p_sob: K must be >= 1");
    using Mode = SobolevExponentModel::Mode;
    if (model.mode == Mode::exact_2d && n != 2)
        throw ModelError("p_sob: the exact planar exponent requires n = 2 (got n = " +
                         std::to_string(n) + ")");
    if (model.mode == Mode::iwaniec_martin_lower)
        detail::require(model.lambda >= 1.0, "p_sob: lambda must be >= 1");
    if (K == 1.0) return {kInf, ExponentTag::exact};
    switch (model.mode) {
        case Mode::exact_2d: return {2.0 * K / (K - 1.0), ExponentTag::exact};
        case Mode::conjectured:
            return {n * K / (K - 1.0), n == 2 ? ExponentTag::exact : ExponentTag::conjectural};
        case Mode::iwaniec_martin_lower: {
            const double lk = model.lambda * K;
            return {n * lk / (lk - 1.0), ExponentTag::lower_bound};
        }
    }
    return {kInf, ExponentTag::exact};
}

// ---------------------------------------------------------------------------
// Sequence sets {m^-s} u {0}

ProfileBundle seq_bundle(double s, std::size_t ambient_dim) {
    detail::require(std::isfinite(s) && s > 0.0, "seq_profile: s must be positive");
    detail::require(ambient_dim >= 1, "seq_profile: ambient dimension must be >= 1");
    const nlohmann::json params = {{"s", s}};
    const std::string fam = "seq";
    const std::size_t n = ambient_dim;
    ProfileBundle b;
    b.ambient_dim = n;
    b.family = fam;
    b.add(DimensionProfile::constant(DimensionKind::hausdorff, n, fam, params, 0.0));
    b.add(DimensionProfile::constant(DimensionKind::quasi_hausdorff, n, fam, params, 0.0));
    b.add(DimensionProfile::constant(DimensionKind::lower, n, fam, params, 0.0));
    b.add(DimensionProfile::closed_form(DimensionKind::intermediate, n, fam, params,
                                        [s](double t) { return t / (t + s); }));
    b.add(DimensionProfile::constant(DimensionKind::box, n, fam, params, 1.0 / (1.0 + s)));
    b.add(DimensionProfile::closed_form(
        DimensionKind::assouad_spectrum, n, fam, params,
        [s](double t) { return std::min(1.0, 1.0 / ((1.0 + s) * (1.0 - t))); }));
    b.add(DimensionProfile::constant(DimensionKind::quasi_assouad, n, fam, params, 1.0));
    b.add(DimensionProfile::constant(DimensionKind::assouad, n, fam, params, 1.0));
    return b;
}

DimensionProfile seq_profile(double s, DimensionKind kind) { return seq_bundle(s).at(kind); }

// ---------------------------------------------------------------------------
// Bedford-McMullen carpets

namespace {

struct CarpetLogs {
    double lm, ln, lM, lN, lmax, gamma;
    int count_max;
    // Distinct log N_i with multiplicities; carpets rarely have many distinct column counts.
    std::vector<double> log_ni, mult;
};

CarpetLogs carpet_logs(const CarpetSpec& c) {
    CarpetLogs L;
    L.lm = std::log(double(c.base_x()));
    L.ln = std::log(double(c.base_y()));
    L.lM = std::log(double(c.occupied_columns()));
    L.lN = std::log(double(c.digit_count()));
    L.lmax = std::log(double(c.max_column_count()));
    L.gamma = L.ln / L.lm;
    L.count_max = 0;
    std::map<int, int> hist;
    for (int ni : c.column_counts()) ++hist[ni];
    for (auto [ni, k] : hist) {
        L.log_ni.push_back(std::log(double(ni)));
        L.mult.push_back(k);
    }
    L.count_max = hist.rbegin()->second;
    return L;
}

double carpet_hausdorff(const CarpetSpec& c) {
    const double g = c.gamma();
    double sum = 0.0;
    for (int ni : c.column_counts()) sum += std::pow(double(ni), 1.0 / g);
    return std::log(sum) / std::log(double(c.base_x()));
}

double carpet_box(const CarpetLogs& L) { return L.lM / L.lm + (L.lN - L.lM) / L.ln; }
double carpet_assouad(const CarpetLogs& L) { return L.lM / L.lm + L.lmax / L.ln; }

double carpet_lower(const CarpetSpec& c, const CarpetLogs& L) {
    return L.lM / L.lm + std::log(double(c.min_column_count())) / L.ln;
}

double carpet_spectrum(const CarpetLogs& L, double theta) {
    if (theta >= 1.0 / L.gamma) return carpet_assouad(L);
    const double box = carpet_box(L);
    return (box - theta * ((L.lN - L.lmax) / L.lm + L.lmax / L.ln)) / (1.0 - theta);
}

// log(M^-1 sum N_i^lambda), evaluated relative to the largest column.
double log_moment(const CarpetLogs& L, double lambda) {
    double acc = 0.0;
    for (std::size_t i = 0; i < L.log_ni.size(); ++i)
        acc += L.mult[i] * std::exp(lambda * (L.log_ni[i] - L.lmax));
    return lambda * L.lmax + std::log(acc) - L.lM;
}

double log_moment_slope(const CarpetLogs& L, double lambda) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < L.log_ni.size(); ++i) {
        const double w = L.mult[i] * std::exp(lambda * (L.log_ni[i] - L.lmax));
        num += w * L.log_ni[i];
        den += w;
    }
    return num / den;
}

double rate_function(const CarpetLogs& L, double t) {
    // The objective lambda t - log_moment is concave with slope t - mean(log N_i) at 0.
    if (t <= log_moment_slope(L, 0.0)) return 0.0;
    if (t > L.lmax) return kInf;
    if (t == L.lmax) return L.lM - std::log(double(L.count_max));
    double hi = 1.0;
    while (t - log_moment_slope(L, hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e12) return hi * t - log_moment(L, hi);
    }
    auto g = [&](double lam) { return lam * t - log_moment(L, lam); };
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > 1e-10) {
        if (gc >= gd) {  // ties toward smaller lambda
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    return std::max({g(a), g(b), g(0.5 * (a + b)), 0.0});
}

}  // namespace

double bm_rate_function(const CarpetSpec& spec, double t) { return rate_function(carpet_logs(spec), t); }

double bm_intermediate(const CarpetSpec& spec, double theta) {
    detail::require(theta > 0.0 && theta <= 1.0, "bm_intermediate: theta must lie in (0,1]");
    const CarpetLogs L = carpet_logs(spec);
    const double box = carpet_box(L);
    if (theta == 1.0) return box;
    const double hausdorff = carpet_hausdorff(spec);
    if (box - hausdorff < 1e-12) return box;

    const double g = L.gamma;
    const int level = static_cast<int>(std::floor(-std::log(theta) / std::log(g))) + 1;
    const double gl_theta = std::pow(g, level) * theta;        // gamma^L theta  > 1
    const double tail = 1.0 - std::pow(g, level - 1) * theta;  // 1 - gamma^(L-1) theta >= 0

    auto t_level = [&](double s) {
        const double shift = (s - L.lM / L.lm) * L.ln;
        double t = shift;
        for (int l = 1; l < level && std::isfinite(t); ++l) t = shift + g * rate_function(L, t);
        return t;
    };
    auto F = [&](double s) {
        const double t = t_level(s);
        if (!std::isfinite(t)) return -kInf;
        const double I = rate_function(L, t);
        if (!std::isfinite(I)) return -kInf;
        return gl_theta * L.lN - (gl_theta - 1.0) * t + g * tail * (L.lM - I) - s * L.ln;
    };

    double lo = hausdorff - 1e-12, hi = box + 1e-12;
    double flo = F(lo), fhi = F(hi);
    if (!(flo >= 0.0 && fhi <= 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "bm_intermediate: root not bracketed at theta=" << theta << " (L=" << level
           << "): F(" << lo << ")=" << flo << ", F(" << hi << ")=" << fhi;
        throw ConsistencyError(os.str());
    }
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ProfileBundle bm_bundle(const CarpetSpec& spec) {
    const CarpetLogs L = carpet_logs(spec);
    const nlohmann::json params = {{"m", spec.base_x()},
                                   {"n", spec.base_y()},
                                   {"M", spec.occupied_columns()},
                                   {"N", spec.digit_count()},
                                   {"N_i", spec.column_counts()}};
    const std::string fam = "bm";
    const double hausdorff = carpet_hausdorff(spec);
    ProfileBundle b;
    b.ambient_dim = 2;
    b.family = fam;
    b.add(DimensionProfile::constant(DimensionKind::hausdorff, 2, fam, params, hausdorff));
    b.add(DimensionProfile::constant(DimensionKind::quasi_hausdorff, 2, fam, params, hausdorff));
    b.add(DimensionProfile::constant(DimensionKind::box, 2, fam, params, carpet_box(L)));
    b.add(DimensionProfile::constant(DimensionKind::assouad, 2, fam, params, carpet_assouad(L)));
    b.add(DimensionProfile::constant(DimensionKind::quasi_assouad, 2, fam, params,
                                     carpet_assouad(L)));
    b.add(DimensionProfile::constant(DimensionKind::lower, 2, fam, params, carpet_lower(spec, L)));
    b.add(DimensionProfile::closed_form(DimensionKind::assouad_spectrum, 2, fam, params,
                                        [L](double t) { return carpet_spectrum(L, t); }));
    b.add(DimensionProfile::closed_form(DimensionKind::intermediate, 2, fam, params,
                                        [spec](double t) { return bm_intermediate(spec, t); }));
    return b;
}

DimensionProfile bm_profile(const CarpetSpec& spec, DimensionKind kind) {
    return bm_bundle(spec).at(kind);
}

// ---------------------------------------------------------------------------

double banaji_rutar_lower(double lambda, double beta, double alpha, double theta) {
    detail::require(std::isfinite(alpha), "banaji_rutar_lower: alpha must be finite");
    detail::require(0.0 <= lambda && lambda <= beta && beta <= alpha,
                    "banaji_rutar_lower: need 0 <= lambda <= beta <= alpha");
    detail::require(theta > 0.0 && theta <= 1.0, "banaji_rutar_lower: theta must lie in (0,1]");
    const double den = (beta - lambda) * theta + (alpha - beta);
    if (den == 0.0) return beta;
    return (alpha * (beta - lambda) * theta + (alpha - beta) * lambda) / den;
}

double banaji_rutar_doubling(double beta, double theta) {
    detail::require(beta >= 0.0, "banaji_rutar_doubling: beta must be nonnegative");
    detail::require(theta > 0.0 && theta <= 1.0, "banaji_rutar_doubling: theta must lie in (0,1]");
    return theta * beta;
}

// ---------------------------------------------------------------------------
// Radially stretched grids f_alpha({1^s..m^s}^n)

ProfileBundle g_set_bundle(double s, int n, double alpha) {
    detail::require(std::isfinite(s) && s > 0.0, "g_set_profile: s must be positive");
    detail::require(n >= 1, "g_set_profile: n must be >= 1");
    detail::require(alpha > 0.0 && alpha <= 1.0, "g_set_profile: alpha must lie in (0,1]");
    const nlohmann::json params = {{"s", s}, {"n", n}, {"alpha", alpha}};
    const std::string fam = "gset";
    const std::size_t nn = static_cast<std::size_t>(n);
    const double nd = n, sa = s * alpha;
    ProfileBundle b;
    b.ambient_dim = nn;
    b.family = fam;
    b.add(DimensionProfile::constant(DimensionKind::hausdorff, nn, fam, params, 0.0));
    b.add(DimensionProfile::constant(DimensionKind::quasi_hausdorff, nn, fam, params, 0.0));
    b.add(DimensionProfile::constant(DimensionKind::lower, nn, fam, params, 0.0));
    b.add(DimensionProfile::closed_form(DimensionKind::intermediate, nn, fam, params,
                                        [nd, sa](double t) { return nd * t / (t + sa); }));
    b.add(DimensionProfile::constant(DimensionKind::box, nn, fam, params, nd / (1.0 + sa)));
    b.add(DimensionProfile::constant(DimensionKind::assouad, nn, fam, params, nd));
    return b;
}

DimensionProfile g_set_profile(double s, int n, double alpha, DimensionKind kind) {
    return g_set_bundle(s, n, alpha).at(kind);
}

// ---------------------------------------------------------------------------

ProfileBundle percolation_bundle(int n, int M, double p) {
    detail::require(n >= 1, "percolation_profile: n must be >= 1");
    detail::require(M >= 2, "percolation_profile: M must be >= 2");
    detail::require(p > 0.0 && p < 1.0, "percolation_profile: p must lie in (0,1)");
    ProfileBundle b;
    b.ambient_dim = static_cast<std::size_t>(n);
    b.family = "perc";
    if (p <= std::pow(double(M), -n) * (1.0 + 1e-12)) return b;  // extinct: no profiles
    const nlohmann::json params = {{"n", n}, {"M", M}, {"p", p}};
    const double d = n - std::log(1.0 / p) / std::log(double(M));
    const std::size_t nn = b.ambient_dim;
    for (auto k : {DimensionKind::hausdorff, DimensionKind::quasi_hausdorff,
                   DimensionKind::intermediate, DimensionKind::box,
                   DimensionKind::assouad_spectrum})
        b.add(DimensionProfile::constant(k, nn, "perc", params, d));
    b.add(DimensionProfile::constant(DimensionKind::assouad, nn, "perc", params, double(n)));
    return b;
}

PercolationProfile percolation_profile(int n, int M, double p, DimensionKind kind) {
    const ProfileBundle b = percolation_bundle(n, M, p);
    PercolationProfile out;
    if (b.profiles.empty()) {
        out.extinct = true;
        return out;
    }
    out.profile = b.at(kind);
    return out;
}

// ---------------------------------------------------------------------------

ProductBounds product_bounds(const ProfileBundle& a, const ProfileBundle& b) {
    detail::require(a.ambient_dim >= 1 && b.ambient_dim >= 1,
                    "product_bounds: ambient dimensions must be declared");
    const auto& ia = a.at(DimensionKind::intermediate);
    const auto& ib = b.at(DimensionKind::intermediate);
    const std::size_t n = a.ambient_dim + b.ambient_dim;
    ProductBounds out{
        a.at(DimensionKind::box)(1.0) + b.at(DimensionKind::box)(1.0),
        BoundTag::exact,
        DimensionProfile::closed_form(
            DimensionKind::intermediate, n, "product(" + a.family + "," + b.family + ")",
            {{"a", a.family}, {"b", b.family}}, [ia, ib](double t) { return ia(t) + ib(t); },
            BoundTag::upper),
        std::nullopt};
    if (a.has(DimensionKind::quasi_hausdorff) && b.has(DimensionKind::quasi_hausdorff))
        out.quasi_hausdorff_upper = a.at(DimensionKind::quasi_hausdorff)(1.0) +
                                    b.at(DimensionKind::quasi_hausdorff)(1.0);
    return out;
}

double spectrum_general_bound(double box, double qa, double theta) {
    detail::require(theta >= 0.0 && theta < 1.0, "spectrum_general_bound: theta must lie in [0,1)");
    detail::require(box >= 0.0 && qa >= 0.0, "spectrum_general_bound: dimensions must be >= 0");
    return std::min(box / (1.0 - theta), qa);
}

}  // namespace dimlab
