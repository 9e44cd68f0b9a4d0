#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dimlab/sets.hpp"

namespace dimlab {

// One dyadic cube: side 2^-level, lower corner index * 2^-level per axis.
struct DyadicCube {
    int level = 0;
    std::vector<std::int64_t> index;

    friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
    friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

struct DyadicCover {
    std::vector<DyadicCube> cubes;
    double theta = 1.0;
    double delta = 1.0;
    double s = 0.0;
    std::size_t ambient_dim = 1;

    double cost() const;
};

// Levels m with log2(1/delta) <= m - log2(n)/2 <= log2(1/delta)/theta, i.e. cube
// diameters in [delta^(1/theta), delta]. Returns false when the band is empty.
bool allowed_levels(std::size_t n, double theta, double delta, int& m_lo, int& m_hi);

// True when every point of x lies in some cube of the cover (closed cubes).
bool covers(const DyadicCover& cover, const PointSet& x);
// True when every cube respects the level band of its delta/theta.
bool admissible(const DyadicCover& cover);

// Points sorted in Z-order at a fixed finest level. Coarser cells are
// contiguous runs of this order, so one sort serves every level <= base.
class DyadicIndex {
public:
    DyadicIndex(const PointSet& x, int base_level);

    int base_level() const { return base_; }
    std::size_t ambient_dim() const { return dim_; }
    std::size_t size() const { return order_.size(); }

    // Occupied cubes at `level` (0 <= level <= base).
    std::size_t occupied(int level) const;
    // Level (1-based) at which sorted points i-1 and i first fall in different
    // cubes; base+1 when they share the finest cube. Entry 0 is unused.
    const std::vector<std::uint8_t>& split_levels() const { return split_; }
    const std::vector<std::size_t>& order() const { return order_; }
    // Integer coordinate of sorted point i at the base level, relative to origin.
    std::uint64_t coord(std::size_t i, std::size_t axis) const { return coords_[i * dim_ + axis]; }
    const std::vector<std::int64_t>& origin() const { return origin_; }

private:
    std::size_t dim_;
    int base_;
    std::vector<std::int64_t> origin_;
    std::vector<std::size_t> order_;
    std::vector<std::uint64_t> coords_;  // sorted, row-major
    std::vector<std::uint8_t> split_;
    std::vector<std::size_t> split_hist_;
};

// Tree of occupied cubes between two levels, built from a DyadicIndex.
// Evaluates min over admissible covers of sum diam^s by dynamic programming.
class CoverTree {
public:
    CoverTree(const DyadicIndex& idx, int level_lo, int level_hi);

    int level_lo() const { return lo_; }
    int level_hi() const { return hi_; }
    std::size_t node_count(int level) const { return starts_[level - lo_].size(); }

    double cost(double s) const;
    DyadicCover solve(double s, double theta, double delta) const;

private:
    double run(double s, std::vector<std::vector<std::uint8_t>>* keep) const;

    const DyadicIndex* idx_;
    int lo_;
    int hi_;
    // starts_[l][k]: first sorted point of node k at level lo + l.
    std::vector<std::vector<std::uint32_t>> starts_;
};

}  // namespace dimlab
