#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dimlab {

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    bool contains(std::span<const double> p) const;
    double diagonal() const;
};

// Immutable finite point cloud in R^n. Copies share the coordinate buffer.
class PointSet {
public:
    // Skips the O(N log N) distinctness check. Generators use it when
    // distinctness holds by construction.
    struct Unchecked {};

    PointSet(std::size_t ambient_dim, std::vector<double> coords, double resolution,
             std::string provenance);
    PointSet(Unchecked, std::size_t ambient_dim, std::vector<double> coords, double resolution,
             std::string provenance);

    std::size_t ambient_dim() const { return dim_; }
    std::size_t size() const { return coords_->size() / dim_; }
    std::span<const double> point(std::size_t i) const {
        return {coords_->data() + i * dim_, dim_};
    }
    double coord(std::size_t i, std::size_t axis) const { return (*coords_)[i * dim_ + axis]; }
    std::span<const double> coords() const { return *coords_; }
    double resolution() const { return resolution_; }
    const Box& bbox() const { return bbox_; }
    const std::string& provenance() const { return provenance_; }

    // Same points, different metadata. Used by loaders and by tests.
    PointSet with_resolution(double resolution) const;

private:
    void validate_basic() const;
    void validate_distinct() const;

    std::size_t dim_;
    std::shared_ptr<const std::vector<double>> coords_;
    double resolution_;
    Box bbox_;
    std::string provenance_;
};

// Bedford-McMullen digit data on an m x n grid, digits are 1-based (column, row).
class CarpetSpec {
public:
    CarpetSpec(int base_x, int base_y, std::vector<std::pair<int, int>> digits);

    int base_x() const { return m_; }
    int base_y() const { return n_; }
    const std::vector<std::pair<int, int>>& digits() const { return digits_; }

    int occupied_columns() const { return static_cast<int>(column_counts_.size()); }  // M
    int digit_count() const { return static_cast<int>(digits_.size()); }               // N
    // N_i for the occupied columns only, ordered by column.
    const std::vector<int>& column_counts() const { return column_counts_; }
    int max_column_count() const;
    int min_column_count() const;
    double gamma() const;

private:
    int m_;
    int n_;
    std::vector<std::pair<int, int>> digits_;
    std::vector<int> column_counts_;
};

CarpetSpec example_carpet_e();
CarpetSpec example_carpet_e_prime();

struct PercolationSpec {
    int ambient_dim = 2;
    int base = 3;
    double p = 0.5;
    int depth = 1;
    std::uint64_t seed = 0;

    // p = 1 is accepted as a degenerate case (nothing removed).
    void validate() const;
};

struct GeneratorLimits {
    std::size_t max_points = 100'000'000;
};

struct PercolationSample {
    std::optional<PointSet> points;  // empty when extinct
    std::vector<std::size_t> survivors_per_level;  // index 0 is the root

    bool extinct() const { return !points.has_value(); }
};

PointSet gen_sequence_set(double s, std::int64_t m_max);
PointSet gen_product(const PointSet& a, const PointSet& b, const GeneratorLimits& limits = {});
PointSet gen_bm_carpet(const CarpetSpec& spec, int level, const GeneratorLimits& limits = {});
PercolationSample gen_percolation(const PercolationSpec& spec, const GeneratorLimits& limits = {});
PointSet gen_radial_stretch_grid(double s, int n, double alpha, std::int64_t m_max,
                                 const GeneratorLimits& limits = {});
PointSet apply_power_map(const PointSet& x, double beta);

// Regular grid of (k+1/2)/side in [0,1]^n, used by tests and the CLI's "cube" family.
PointSet gen_uniform_grid(int n, std::int64_t side, const GeneratorLimits& limits = {});

// Smallest distance between two distinct points. Expected linear time.
double min_pairwise_gap(const PointSet& x);
double min_pairwise_gap(std::size_t dim, std::span<const double> coords);

}  // namespace dimlab
