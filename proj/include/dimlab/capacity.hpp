#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "dimlab/sets.hpp"

namespace dimlab {

struct KernelParams {
    double r = 0.5;
    double theta = 1.0;
    double s = 1.0;
    int m = 1;

    void validate() const;  // 0 < r < 1, 0 < theta <= 1, 0 < s <= m
};

// min{1, (r/u)^s, r^(theta(m-s)+s) / u^m}, equal to 1 at u = 0.
double kernel_phi(double u, const KernelParams& k);

class DiscreteMeasure {
public:
    explicit DiscreteMeasure(std::vector<double> weights);
    static DiscreteMeasure uniform(std::size_t n);
    static DiscreteMeasure point_mass(std::size_t n, std::size_t at);

    const std::vector<double>& weights() const { return w_; }
    std::size_t size() const { return w_.size(); }

private:
    std::vector<double> w_;
};

double energy(const DiscreteMeasure& mu, const PointSet& x, const KernelParams& k);
// Potential of mu at every point: sum_j w_j phi(|x_i - x_j|).
std::vector<double> potential(const DiscreteMeasure& mu, const PointSet& x, const KernelParams& k);

struct CapacitySolverConfig {
    double gap_tolerance = 1e-8;
    std::size_t max_iterations = 10'000;
    std::size_t max_points = 4096;
    // Supports up to this size get an exact solve on the active face.
    std::size_t corrective_limit = 2048;
};

struct CapacityResult {
    double value = 0.0;     // 1 / energy
    double energy = 0.0;
    DiscreteMeasure measure{std::vector<double>{1.0}};
    double duality_gap = 0.0;  // Frank-Wolfe gap 2(E - min potential)
    double away_gap = 0.0;     // 2(max potential on support - E)
    double equilibrium_deviation = 0.0;  // max |potential - E| on the support
    std::size_t iterations = 0;
    std::size_t support = 0;
    bool converged = false;
};

CapacityResult capacity(const PointSet& x, const KernelParams& k,
                        const CapacitySolverConfig& cfg = {});

struct SandwichReport {
    double r = 0.0, theta = 1.0, s = 0.0;
    double capacity = 0.0;
    double scaled_capacity = 0.0;  // r^s C
    double covering_sum = 0.0;     // S^s_{r,theta} over dyadic cubes
    double log_factor = 1.0;       // max(1, log(diam / r))
    double empirical_constant = 0.0;  // S / (log_factor * r^s C)
    double duality_gap = 0.0;
    bool lower_holds = false;
    bool upper_holds = false;
    double constant_bound = 0.0;
};

// constant_bound is the C(n) the upper inequality is tested against.
SandwichReport capacity_cover_sandwich_check(const PointSet& x, double r, double theta, double s,
                                             double constant_bound,
                                             const CapacitySolverConfig& cfg = {});

struct SymmetrizationCheck {
    double shifted = 0.0;   // mean of phi(|a x - y|) over x uniform in the ball, times volume
    double centered = 0.0;  // mean of phi(|a x|)
    double difference = 0.0;
    double standard_error = 0.0;
    bool holds = false;  // difference <= 3 standard errors
};

// Paired Monte-Carlo estimate of both ball integrals with a shared sample.
SymmetrizationCheck symmetrization_monte_carlo(int n, double a, const std::vector<double>& y,
                                               const KernelParams& k, std::size_t samples,
                                               std::uint64_t seed);

nlohmann::json to_json(const CapacityResult& c);
nlohmann::json to_json(const SandwichReport& s);

}  // namespace dimlab
