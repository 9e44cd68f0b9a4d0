#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimlab/formulas.hpp"

namespace dimlab {

struct DistortionContext {
    int n = 2;
    double K = 1.0;
    SobolevExponentModel p_model = SobolevExponentModel::exact_2d();
    // Reverse Holder exponents at K and at K^(n-1). Unset means: take the p_model value,
    // which is an assumption outside the plane.
    std::optional<double> p_rh;
    std::optional<double> p_rh_inverse;

    static DistortionContext planar(double K) { return {2, K, SobolevExponentModel::exact_2d(), {}, {}}; }
    static DistortionContext with_default_model(int n, double K) {
        return {n, K, SobolevExponentModel::default_for(n), {}, {}};
    }
    void validate() const;
};

double hoelder_upper(double dim_theta, double alpha, std::optional<int> ambient_dim = std::nullopt);
double sobolev_upper(double dim_theta, int n, double p);

struct DimensionInterval {
    double lo = 0.0, hi = 0.0;
    ExponentTag lo_tag = ExponentTag::exact;  // tag of the exponent used at K^(n-1)
    ExponentTag hi_tag = ExponentTag::exact;  // tag of the exponent used at K
    bool hoelder_clamped = false;              // hi lowered to K * dim
    bool clamped = false;                      // an endpoint was pulled back into [0, n]
};

// Possible dimensions of the image f(E) of a set with (intermediate, box or Hausdorff)
// dimension d under a K-quasiconformal map.
DimensionInterval qc_interval(double d, const DistortionContext& ctx);
// Same inequality read as the Hausdorff dimension statement.
DimensionInterval hausdorff_distortion_bounds(double s, const DistortionContext& ctx);

struct SpectrumQcBounds {
    double t = 0.0;
    double theta_image = 0.0;   // 1/(1+t)
    double theta_lower = 0.0;   // K/(K+t), source parameter in the lower Phi bound
    double theta_upper = 0.0;   // 1/(1+Kt), source parameter in the upper Phi bound
    double phi_lower = 0.0;     // alpha(p_rh(K)) Phi(dim_A^{K/(K+t)} E)
    double phi_upper = 0.0;     // alpha(p_rh(K^{n-1}))^-1 Phi(dim_A^{1/(1+Kt)} E)
    double dim_lo = 0.0;        // image spectrum range at theta_image
    double dim_hi = 0.0;
    std::vector<std::string> assumptions;
};

SpectrumQcBounds assouad_spectrum_qc_bounds(const DimensionProfile& spectrum,
                                            const DistortionContext& ctx, double t);

// Smallest K in [1, k_max] consistent with the spectrum bound at parameter t for a map
// sending E to F. Returns k_max when nothing in range is consistent.
double assouad_spectrum_implied_k(const DimensionProfile& e_spectrum,
                                  const DimensionProfile& f_spectrum,
                                  const DistortionContext& ctx_template, double t,
                                  double k_max = 1e3);

struct Witness {
    double theta = 0.0;  // 0 marks an extrapolated value
    std::string rule;
    std::string direction;  // forward: f(E) = F used through f; inverse: through f^-1
    double dim_e = 0.0, dim_f = 0.0;
    double k = 1.0;
};

struct ClassificationCertificate {
    double k_lower = 1.0;
    std::string direction;
    std::string rule;
    double theta_star = 1.0;
    std::vector<Witness> witnesses;
    std::vector<std::string> assumptions;
    nlohmann::json inputs;
    std::string verdict;
};

struct MinDilatationConfig {
    std::vector<double> thetas;  // empty: 512 log-spaced points in [1e-6, 1]
    SobolevExponentModel model = SobolevExponentModel::exact_2d();
    bool use_hoelder = true;
    bool use_sobolev = true;
    bool refine = true;        // golden-section polish around the best grid point
    bool extrapolate = true;   // linear extrapolation to theta -> 0 from the two smallest thetas
    bool include_assouad_spectrum = false;
    std::vector<double> t_grid;  // for the spectrum rule; empty: 0.1..10 log-spaced, 41 points

    static std::vector<double> default_thetas(std::size_t count = 512, double min_theta = 1e-6);
};

// Lower bound for the dilatation of any quasiconformal map of R^n sending E onto F.
ClassificationCertificate min_dilatation(const ProfileBundle& e, const ProfileBundle& f,
                                         const MinDilatationConfig& cfg = {});

// Implied K from the planar intermediate bound: max of the two Phi ratios.
double planar_rule(double d, double d_image);

struct RadialStretchSharpness {
    double s = 0.0, alpha = 0.0, K = 1.0, beta = 0.0;
    std::vector<double> thetas;
    std::vector<double> dim_alpha, dim_beta;
    double max_residual = 0.0;
    struct Empirical {
        double theta = 0.5;
        std::size_t m_max = 0;
        double estimate_alpha = 0.0, estimate_beta = 0.0;
        double predicted_alpha = 0.0, predicted_beta = 0.0;
        double tolerance = 0.07;
        bool agrees = false;
    };
    std::optional<Empirical> empirical;
    bool holds(double tol = 1e-12) const {
        return max_residual <= tol && (!empirical || empirical->agrees);
    }
};

struct EmpiricalSharpnessConfig {
    double theta = 0.5;
    std::size_t m_max = 700;
    double tolerance = 0.07;
};

// Checks that the stretch G_{s,2}^alpha -> G_{s,2}^{alpha/K} meets the planar bound with equality.
RadialStretchSharpness radial_stretch_sharpness_check(
    double s, double alpha, double K, const std::vector<double>& thetas,
    const std::optional<EmpiricalSharpnessConfig>& empirical = std::nullopt);

struct ExtremalityTransfer {
    double K = 1.0;
    double lambda = 0.0, beta = 0.0, alpha = 0.0;
    bool profile_hypothesis = false;  // lambda = 0 and alpha = 2
    bool box_extremal = false;        // (i)
    double box_residual = 0.0;
    bool banaji_rutar_extremal = false;  // (ii)
    double banaji_rutar_residual = 0.0;
    double conclusion_residual = 0.0;
    bool conclusion_holds = false;
    std::string failed;  // first failed hypothesis, empty if none
};

ExtremalityTransfer extremality_transfer_check(const ProfileBundle& e, const ProfileBundle& f,
                                               double K, const std::vector<double>& thetas,
                                               double tol = 1e-10);

nlohmann::json to_json(const DimensionInterval& iv);
nlohmann::json to_json(const SpectrumQcBounds& b);
nlohmann::json to_json(const ClassificationCertificate& c);
nlohmann::json to_json(const RadialStretchSharpness& r);
nlohmann::json to_json(const ExtremalityTransfer& r);

}  // namespace dimlab
