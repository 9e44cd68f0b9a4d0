#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dimlab/sets.hpp"

namespace dimlab {

enum class DimensionKind {
    hausdorff,
    intermediate,
    box,
    assouad_spectrum,
    quasi_assouad,
    assouad,
    lower,
    quasi_hausdorff
};

std::string_view to_string(DimensionKind k);
DimensionKind parse_kind(std::string_view s);
// Kinds whose value depends on theta.
bool theta_dependent(DimensionKind k);

enum class BoundTag { exact, upper, lower, conjectural };
std::string_view to_string(BoundTag t);

class DimensionProfile {
public:
    using Eval = std::function<double(double)>;

    static DimensionProfile closed_form(DimensionKind kind, std::size_t n, std::string family,
                                        nlohmann::json params, Eval eval,
                                        BoundTag tag = BoundTag::exact);
    static DimensionProfile constant(DimensionKind kind, std::size_t n, std::string family,
                                     nlohmann::json params, double value,
                                     BoundTag tag = BoundTag::exact);
    // Piecewise linear through (thetas[i], values[i]); thetas strictly increasing.
    static DimensionProfile sampled(DimensionKind kind, std::size_t n, std::string family,
                                    nlohmann::json params, std::vector<double> thetas,
                                    std::vector<double> values, BoundTag tag = BoundTag::exact);

    // theta in (0,1] for intermediate, (0,1) for assouad_spectrum; ignored otherwise.
    double operator()(double theta) const;
    double at(double theta) const { return (*this)(theta); }

    DimensionKind kind() const { return kind_; }
    std::size_t ambient_dim() const { return n_; }
    const std::string& family() const { return family_; }
    const nlohmann::json& params() const { return params_; }
    BoundTag tag() const { return tag_; }

private:
    DimensionProfile() = default;

    DimensionKind kind_ = DimensionKind::box;
    std::size_t n_ = 1;
    std::string family_;
    nlohmann::json params_;
    BoundTag tag_ = BoundTag::exact;
    Eval eval_;
};

// The profiles known for one set, keyed by kind.
struct ProfileBundle {
    std::size_t ambient_dim = 1;
    std::string family;
    std::map<DimensionKind, DimensionProfile> profiles;

    bool has(DimensionKind k) const { return profiles.count(k) != 0; }
    const DimensionProfile& at(DimensionKind k) const;
    void add(DimensionProfile p);
};

nlohmann::json profile_to_json(const DimensionProfile& p, const std::vector<double>& thetas);

// ---------------------------------------------------------------------------
// Distortion calculus primitives

double tau(double s, int n, double p);
double phi(double s, int n);
double phi_inverse(double y, int n);
double alpha_hoelder(double p, int n);

struct SobolevExponentModel {
    enum class Mode { exact_2d, conjectured, iwaniec_martin_lower };
    Mode mode = Mode::conjectured;
    double lambda = 1.0;

    static SobolevExponentModel exact_2d() { return {Mode::exact_2d, 1.0}; }
    static SobolevExponentModel conjectured() { return {Mode::conjectured, 1.0}; }
    static SobolevExponentModel iwaniec_martin(double lambda) {
        return {Mode::iwaniec_martin_lower, lambda};
    }
    // Exact planar value when n = 2, the conjectured value otherwise.
    static SobolevExponentModel default_for(int n) { return n == 2 ? exact_2d() : conjectured(); }

    std::string name() const;
};

enum class ExponentTag { exact, conjectural, lower_bound };
std::string_view to_string(ExponentTag t);

struct SobolevExponent {
    double value = 0.0;  // +inf at K = 1
    ExponentTag tag = ExponentTag::exact;
};

SobolevExponent p_sob(int n, double K, const SobolevExponentModel& model);

// ---------------------------------------------------------------------------
// Families

DimensionProfile seq_profile(double s, DimensionKind kind);
ProfileBundle seq_bundle(double s, std::size_t ambient_dim = 1);

DimensionProfile bm_profile(const CarpetSpec& spec, DimensionKind kind);
ProfileBundle bm_bundle(const CarpetSpec& spec);
double bm_intermediate(const CarpetSpec& spec, double theta);
// Legendre transform of lambda -> log(M^-1 sum N_i^lambda), lambda >= 0.
double bm_rate_function(const CarpetSpec& spec, double t);

double banaji_rutar_lower(double lambda, double beta, double alpha, double theta);
// Weaker form for doubling spaces: lambda -> 0 and alpha -> infinity give theta * beta.
double banaji_rutar_doubling(double beta, double theta);

DimensionProfile g_set_profile(double s, int n, double alpha, DimensionKind kind);
ProfileBundle g_set_bundle(double s, int n, double alpha);

struct PercolationProfile {
    std::optional<DimensionProfile> profile;
    bool extinct = false;
};
PercolationProfile percolation_profile(int n, int M, double p, DimensionKind kind);
ProfileBundle percolation_bundle(int n, int M, double p);

struct ProductBounds {
    double box = 0.0;
    BoundTag box_tag = BoundTag::exact;
    DimensionProfile intermediate_upper;
    std::optional<double> quasi_hausdorff_upper;
};
ProductBounds product_bounds(const ProfileBundle& a, const ProfileBundle& b);

double spectrum_general_bound(double box, double qa, double theta);

}  // namespace dimlab
