#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimlab/dyadic.hpp"
#include "dimlab/sets.hpp"

namespace dimlab {

class ScaleGrid {
public:
    // Scales strictly decreasing in (0,1); fit window is [begin, end).
    ScaleGrid(std::vector<double> scales, std::size_t window_begin, std::size_t window_end);
    // Same, with the default window: drop two scales at each end when at least
    // two remain, otherwise fit everything.
    explicit ScaleGrid(std::vector<double> scales);

    // sqrt(n) * 2^-k for k = k_min..k_max.
    static ScaleGrid dyadic(std::size_t n, int k_min, int k_max);
    // Dyadic grid for x: coarsest k with scale < 1, finest k with
    // scale^(1/theta) >= resolution.
    static ScaleGrid dyadic_for(const PointSet& x, double theta = 1.0, int k_min = -1);

    const std::vector<double>& scales() const { return scales_; }
    std::size_t window_begin() const { return begin_; }
    std::size_t window_end() const { return end_; }
    std::size_t size() const { return scales_.size(); }

    ScaleGrid with_window(std::size_t begin, std::size_t end) const;

private:
    std::vector<double> scales_;
    std::size_t begin_;
    std::size_t end_;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of the regression residuals
    std::size_t window_begin = 0;
    std::size_t window_end = 0;
};

// Ordinary least squares of y on x over [begin, end).
LinearFit least_squares(std::span<const double> x, std::span<const double> y, std::size_t begin,
                        std::size_t end);

struct BoxEstimate {
    double value = 0.0;
    LinearFit fit;
    std::vector<double> scales;
    std::vector<std::size_t> counts;
    std::vector<double> exponents;  // log N / log(1/r) per scale
    double max_exponent = 0.0;
    std::vector<std::string> warnings;
};

struct CoverCost {
    double cost = 0.0;
    DyadicCover cover;
    int level_lo = 0;
    int level_hi = 0;
};

struct IntermediateEstimate {
    double value = 0.0;
    double theta = 1.0;
    LinearFit fit;  // log S vs log(1/delta) at s = value
    std::vector<double> scales;
    std::vector<double> critical_exponents;  // per scale: S(delta, s) = 1
    double max_exponent = 0.0;
    std::vector<std::string> warnings;
};

struct SpectrumWitness {
    std::vector<double> center;
    double R = 0.0;
    double r = 0.0;
    std::size_t count = 0;
    double ratio = 0.0;  // log count / log(R/r)
};

struct AssouadSpectrumEstimate {
    double value = 0.0;
    double theta = 0.5;
    LinearFit fit;  // log max N vs log(R/r)
    std::vector<double> scales;  // R
    std::vector<std::size_t> counts;  // max over centers
    std::vector<double> ratios;  // per-scale log max N / log(R/r)
    SpectrumWitness witness;  // maximizes the per-scale ratio
    std::size_t centers = 0;
    std::vector<std::string> warnings;
};

struct EstimateOptions {
    std::size_t max_centers = 4096;
    double bisection_tol = 1e-4;
};

std::size_t covering_number(const PointSet& x, double r);
BoxEstimate box_dim_estimate(const PointSet& x, const ScaleGrid& g);

CoverCost intermediate_cover_cost(const PointSet& x, double theta, double delta, double s);
IntermediateEstimate intermediate_dim_estimate(const PointSet& x, double theta, const ScaleGrid& g,
                                               const EstimateOptions& opt = {});

std::size_t ball_covering_number(const PointSet& x, std::span<const double> center, double R,
                                 double r);
AssouadSpectrumEstimate assouad_spectrum_estimate(const PointSet& x, double theta,
                                                  const ScaleGrid& g,
                                                  const EstimateOptions& opt = {});

// Up to `limit` points, one per occupied dyadic cell at the coarsest level
// holding at least `limit` cells, thinned evenly in Z-order.
std::vector<std::size_t> stratified_centers(const PointSet& x, std::size_t limit);

nlohmann::json to_json(const BoxEstimate& e);
nlohmann::json to_json(const IntermediateEstimate& e);
nlohmann::json to_json(const AssouadSpectrumEstimate& e);
nlohmann::json to_json(const DyadicCover& c);

}  // namespace dimlab
