#include "dimlab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "dimlab/error.hpp"
#include "dimlab/estimate.hpp"

namespace dimlab {

void KernelParams::validate() const {
    detail::require(r > 0.0 && r < 1.0, "kernel: r must lie in (0,1)");
    detail::require(theta > 0.0 && theta <= 1.0, "kernel: theta must lie in (0,1]");
    detail::require(m >= 1, "kernel: m must be >= 1");
    detail::require(s > 0.0 && s <= double(m), "kernel: s must lie in (0,m]");
}

namespace {

struct Kernel {
    double log_r;
    double s;
    double m;
    double third;  // theta(m-s)+s
    double r;

    explicit Kernel(const KernelParams& k)
        : log_r(std::log(k.r)), s(k.s), m(k.m), third(k.theta * (k.m - k.s) + k.s), r(k.r) {}

    double operator()(double u) const {
        if (u <= r) return 1.0;
        const double lu = std::log(u);
        const double a = s * (log_r - lu);
        const double b = third * log_r - m * lu;
        return std::exp(std::min({0.0, a, b}));
    }
};

double distance(const PointSet& x, std::size_t i, std::size_t j) {
    double acc = 0.0;
    for (std::size_t a = 0; a < x.ambient_dim(); ++a) {
        const double d = x.coord(i, a) - x.coord(j, a);
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace

double kernel_phi(double u, const KernelParams& k) {
    k.validate();
    detail::require(u >= 0.0, "kernel_phi: u must be nonnegative");
    return Kernel(k)(u);
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> weights) : w_(std::move(weights)) {
    detail::require(!w_.empty(), "DiscreteMeasure: no weights");
    double total = 0.0;
    for (double v : w_) {
        detail::require(v >= 0.0 && std::isfinite(v), "DiscreteMeasure: negative weight");
        total += v;
    }
    detail::require(std::abs(total - 1.0) <= 1e-12, "DiscreteMeasure: weights must sum to 1");
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t n) {
    std::vector<double> w(n, 1.0 / double(n));
    return DiscreteMeasure(std::move(w));
}

DiscreteMeasure DiscreteMeasure::point_mass(std::size_t n, std::size_t at) {
    std::vector<double> w(n, 0.0);
    w.at(at) = 1.0;
    return DiscreteMeasure(std::move(w));
}

std::vector<double> potential(const DiscreteMeasure& mu, const PointSet& x, const KernelParams& k) {
    k.validate();
    detail::require(mu.size() == x.size(), "potential: measure and point set sizes differ");
    const Kernel phi(k);
    std::vector<double> p(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (mu.weights()[j] > 0.0) acc += mu.weights()[j] * phi(distance(x, i, j));
        p[i] = acc;
    }
    return p;
}

double energy(const DiscreteMeasure& mu, const PointSet& x, const KernelParams& k) {
    const auto p = potential(mu, x, k);
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) e += mu.weights()[i] * p[i];
    return e;
}

// ---------------------------------------------------------------------------
// Pairwise Frank-Wolfe on the simplex with exact line search. When it stalls,
// a corrective solve of K_SS v = 1 on the current support is tried.

CapacityResult capacity(const PointSet& x, const KernelParams& k, const CapacitySolverConfig& cfg) {
    k.validate();
    const std::size_t n = x.size();
    if (n > cfg.max_points)
        throw CapacityError("capacity: " + std::to_string(n) + " points exceeds the solver cap of " +
                            std::to_string(cfg.max_points));
    const Kernel phi(k);
    Eigen::MatrixXd K(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        K(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) K(i, j) = K(j, i) = phi(distance(x, i, j));
    }

    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / double(n));
    Eigen::VectorXd P = K * w;
    auto energy_of = [&](const Eigen::VectorXd& v) { return v.dot(K * v); };

    auto corrective = [&]() -> bool {
        std::vector<Eigen::Index> S;
        for (Eigen::Index i = 0; i < Eigen::Index(n); ++i)
            if (w[i] > 0.0) S.push_back(i);
        if (S.size() > cfg.corrective_limit) return false;
        const Eigen::Index m = Eigen::Index(S.size());
        Eigen::MatrixXd Ks(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) Ks(a, b) = K(S[a], S[b]);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
        const Eigen::VectorXd v = Ks.completeOrthogonalDecomposition().solve(ones);
        if (!v.allFinite() || (Ks * v - ones).norm() > 1e-9 * std::sqrt(double(m))) return false;
        const double total = v.sum();
        if (!(total > 0.0)) return false;
        Eigen::VectorXd target = Eigen::VectorXd::Zero(n);
        for (Eigen::Index a = 0; a < m; ++a) target[S[a]] = v[a] / total;
        // Move toward the face optimum until a weight would go negative.
        double t = 1.0;
        for (Eigen::Index a = 0; a < m; ++a) {
            const Eigen::Index i = S[a];
            if (target[i] < 0.0) t = std::min(t, w[i] / (w[i] - target[i]));
        }
        Eigen::VectorXd cand = w + t * (target - w);
        for (Eigen::Index i = 0; i < Eigen::Index(n); ++i)
            if (cand[i] <= 1e-15 || w[i] == 0.0) cand[i] = 0.0;
        cand /= cand.sum();
        const double before = w.dot(P);
        const double after = energy_of(cand);
        if (!(after <= before + 1e-15 * std::max(1.0, before))) return false;
        w = cand;
        P = K * w;
        return true;
    };

    CapacityResult res;
    std::size_t it = 0;
    std::size_t since_corrective = 0;
    for (; it < cfg.max_iterations; ++it) {
        const double E = w.dot(P);
        Eigen::Index fw = 0, aw = -1;
        P.minCoeff(&fw);
        for (Eigen::Index i = 0; i < Eigen::Index(n); ++i)
            if (w[i] > 0.0 && (aw < 0 || P[i] > P[aw])) aw = i;
        res.duality_gap = 2.0 * (E - P[fw]);
        res.away_gap = 2.0 * (P[aw] - E);
        if (res.duality_gap <= cfg.gap_tolerance && res.away_gap <= cfg.gap_tolerance) {
            res.converged = true;
            break;
        }
        // Face solves only help once the support has settled; use them when progress stalls.
        if (++since_corrective >= 512) {
            since_corrective = 0;
            if (corrective()) continue;
        }
        // Pairwise step along e_fw - e_aw.
        const double slope = P[fw] - P[aw];
        const double curv = K(fw, fw) + K(aw, aw) - 2.0 * K(fw, aw);
        const double gmax = w[aw];
        double g = curv > 0.0 ? std::min(gmax, -slope / curv) : gmax;
        if (!(g > 0.0)) g = gmax;
        w[fw] += g;
        w[aw] -= g;
        if (g == gmax) w[aw] = 0.0;
        P += g * (K.col(fw) - K.col(aw));
        if (it % 64 == 63) P = K * w;
    }
    res.iterations = it;
    P = K * w;
    res.energy = w.dot(P);
    res.value = 1.0 / res.energy;
    double dev = 0.0, pmin = P.minCoeff(), pmax = -1.0;
    std::size_t support = 0;
    for (Eigen::Index i = 0; i < Eigen::Index(n); ++i) {
        if (w[i] > 0.0) {
            ++support;
            dev = std::max(dev, std::abs(P[i] - res.energy));
            pmax = std::max(pmax, P[i]);
        }
    }
    res.duality_gap = std::max(0.0, 2.0 * (res.energy - pmin));
    res.away_gap = std::max(0.0, 2.0 * (pmax - res.energy));
    res.converged = res.duality_gap <= cfg.gap_tolerance && res.away_gap <= cfg.gap_tolerance;
    res.equilibrium_deviation = dev;
    res.support = support;
    std::vector<double> weights(w.data(), w.data() + n);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& v : weights) v /= total;
    res.measure = DiscreteMeasure(std::move(weights));
    return res;
}

SandwichReport capacity_cover_sandwich_check(const PointSet& x, double r, double theta, double s,
                                             double constant_bound,
                                             const CapacitySolverConfig& cfg) {
    detail::require(s > 0.0 && s <= double(x.ambient_dim()), "sandwich: s must lie in (0,n]");
    SandwichReport rep;
    rep.r = r;
    rep.theta = theta;
    rep.s = s;
    rep.constant_bound = constant_bound;
    const KernelParams k{r, theta, s, static_cast<int>(x.ambient_dim())};
    const auto cap = capacity(x, k, cfg);
    rep.capacity = cap.value;
    rep.duality_gap = cap.duality_gap;
    rep.scaled_capacity = std::pow(r, s) * cap.value;
    rep.covering_sum = intermediate_cover_cost(x, theta, std::pow(r, theta), s).cost;
    const double diam = x.bbox().diagonal();
    rep.log_factor = diam > 0.0 ? std::max(1.0, std::log(diam / r)) : 1.0;
    rep.empirical_constant = rep.covering_sum / (rep.log_factor * rep.scaled_capacity);
    rep.lower_holds = rep.scaled_capacity <= rep.covering_sum * (1.0 + 1e-12);
    rep.upper_holds = rep.empirical_constant <= constant_bound;
    return rep;
}

SymmetrizationCheck symmetrization_monte_carlo(int n, double a, const std::vector<double>& y,
                                               const KernelParams& k, std::size_t samples,
                                               std::uint64_t seed) {
    k.validate();
    detail::require(n >= 1 && y.size() == std::size_t(n), "symmetrization: y must have n entries");
    detail::require(a > 0.0, "symmetrization: a must be positive");
    detail::require(samples >= 2, "symmetrization: need at least 2 samples");
    const Kernel phi(k);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    const double vol = std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    double sum_shift = 0, sum_center = 0, sum_d = 0, sum_d2 = 0;
    std::vector<double> p(n);
    for (std::size_t t = 0; t < samples; ++t) {
        // Uniform point in the unit ball: random direction, radius U^(1/n).
        double norm = 0;
        for (auto& v : p) {
            v = normal(gen);
            norm += v * v;
        }
        const double rad = std::pow(unif(gen), 1.0 / n) / std::sqrt(norm);
        double d_shift = 0, d_center = 0;
        for (int i = 0; i < n; ++i) {
            const double xi = p[i] * rad;
            d_shift += (a * xi - y[i]) * (a * xi - y[i]);
            d_center += (a * xi) * (a * xi);
        }
        const double f1 = phi(std::sqrt(d_shift)), f0 = phi(std::sqrt(d_center));
        sum_shift += f1;
        sum_center += f0;
        sum_d += f1 - f0;
        sum_d2 += (f1 - f0) * (f1 - f0);
    }
    const double N = double(samples);
    SymmetrizationCheck out;
    out.shifted = vol * sum_shift / N;
    out.centered = vol * sum_center / N;
    out.difference = vol * sum_d / N;
    const double var = std::max(0.0, (sum_d2 / N - (sum_d / N) * (sum_d / N)) * N / (N - 1));
    out.standard_error = vol * std::sqrt(var / N);
    out.holds = out.difference <= 3.0 * out.standard_error;
    return out;
}

nlohmann::json to_json(const CapacityResult& c) {
    return {{"capacity", c.value},
            {"energy", c.energy},
            {"duality_gap", c.duality_gap},
            {"away_gap", c.away_gap},
            {"equilibrium_deviation", c.equilibrium_deviation},
            {"iterations", c.iterations},
            {"support", c.support},
            {"converged", c.converged},
            {"weights", c.measure.weights()}};
}

nlohmann::json to_json(const SandwichReport& s) {
    return {{"r", s.r},
            {"theta", s.theta},
            {"s", s.s},
            {"capacity", s.capacity},
            {"scaled_capacity", s.scaled_capacity},
            {"covering_sum", s.covering_sum},
            {"log_factor", s.log_factor},
            {"empirical_constant", s.empirical_constant},
            {"constant_bound", s.constant_bound},
            {"duality_gap", s.duality_gap},
            {"lower_holds", s.lower_holds},
            {"upper_holds", s.upper_holds}};
}

}  // namespace dimlab
