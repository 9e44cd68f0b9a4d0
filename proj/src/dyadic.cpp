#include "dimlab/dyadic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "dimlab/error.hpp"

namespace dimlab {

double DyadicCover::cost() const {
    double total = 0.0;
    const double root_n = std::sqrt(double(ambient_dim));
    for (const auto& q : cubes) total += std::pow(root_n * std::ldexp(1.0, -q.level), s);
    return total;
}

bool allowed_levels(std::size_t n, double theta, double delta, int& m_lo, int& m_hi) {
    constexpr double slack = 1e-9;
    const double half_log_n = 0.5 * std::log2(double(n));
    const double inv = std::log2(1.0 / delta);
    m_lo = static_cast<int>(std::ceil(inv + half_log_n - slack));
    m_hi = static_cast<int>(std::floor(inv / theta + half_log_n + slack));
    m_lo = std::max(m_lo, 0);
    return m_lo <= m_hi;
}

bool covers(const DyadicCover& cover, const PointSet& x) {
    const std::size_t n = x.ambient_dim();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        bool hit = false;
        for (const auto& q : cover.cubes) {
            bool inside = q.index.size() == n;
            for (std::size_t a = 0; inside && a < n; ++a) {
                const double lo = std::ldexp(double(q.index[a]), -q.level);
                const double hi = std::ldexp(double(q.index[a] + 1), -q.level);
                inside = p[a] >= lo && p[a] <= hi;
            }
            if (inside) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

bool admissible(const DyadicCover& cover) {
    int lo = 0, hi = 0;
    if (!allowed_levels(cover.ambient_dim, cover.theta, cover.delta, lo, hi)) return false;
    std::vector<DyadicCube> sorted = cover.cubes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    return std::all_of(sorted.begin(), sorted.end(),
                       [&](const DyadicCube& q) { return q.level >= lo && q.level <= hi; });
}

// ---------------------------------------------------------------------------

namespace {

bool less_msb(std::uint64_t a, std::uint64_t b) { return a < b && a < (a ^ b); }

}  // namespace

DyadicIndex::DyadicIndex(const PointSet& x, int base_level)
    : dim_(x.ambient_dim()), base_(base_level) {
    if (base_level < 0 || base_level > 60)
        detail::fail_param("DyadicIndex: level " + std::to_string(base_level) +
                           " outside [0, 60]");
    const std::size_t count = x.size();
    origin_.resize(dim_);
    for (std::size_t a = 0; a < dim_; ++a) {
        origin_[a] = static_cast<std::int64_t>(std::floor(x.bbox().lo[a]));
        const double span = std::ldexp(x.bbox().hi[a] - double(origin_[a]), base_);
        if (!(span < 0x1.0p62))
            detail::fail_param("DyadicIndex: extent too large for level " +
                               std::to_string(base_level));
    }

    std::vector<std::uint64_t> raw(count * dim_);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t a = 0; a < dim_; ++a)
            raw[i * dim_ + a] = static_cast<std::uint64_t>(
                std::floor(std::ldexp(x.coord(i, a) - double(origin_[a]), base_)));

    order_.resize(count);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    const std::size_t d = dim_;
    if (d == 1) {
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
    } else {
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            std::size_t best = 0;
            std::uint64_t best_x = 0;
            for (std::size_t k = 0; k < d; ++k) {
                const std::uint64_t v = raw[a * d + k] ^ raw[b * d + k];
                if (less_msb(best_x, v)) {
                    best = k;
                    best_x = v;
                }
            }
            return raw[a * d + best] < raw[b * d + best];
        });
    }

    coords_.resize(count * dim_);
    for (std::size_t i = 0; i < count; ++i)
        std::copy_n(&raw[order_[i] * d], d, &coords_[i * d]);

    split_.assign(count, 0);
    split_hist_.assign(static_cast<std::size_t>(base_) + 2, 0);
    for (std::size_t i = 1; i < count; ++i) {
        std::uint64_t v = 0;
        for (std::size_t k = 0; k < d; ++k) v = std::max(v, coords_[i * d + k] ^ coords_[(i - 1) * d + k]);
        const int h = std::bit_width(v);
        const int lvl = h == 0 ? base_ + 1 : std::max(base_ - h + 1, 0);
        split_[i] = static_cast<std::uint8_t>(lvl);
        ++split_hist_[lvl];
    }
}

std::size_t DyadicIndex::occupied(int level) const {
    if (level < 0 || level > base_)
        detail::fail_param("DyadicIndex::occupied: level outside [0, base]");
    std::size_t total = 1;
    for (int v = 0; v <= level; ++v) total += split_hist_[v];
    return total;
}

// ---------------------------------------------------------------------------

CoverTree::CoverTree(const DyadicIndex& idx, int level_lo, int level_hi)
    : idx_(&idx), lo_(level_lo), hi_(level_hi) {
    if (level_lo < 0 || level_lo > level_hi || level_hi > idx.base_level())
        detail::fail_param("CoverTree: invalid level band");
    if (idx.size() >= (std::size_t{1} << 32)) throw CapacityError("CoverTree: too many points");
    starts_.resize(static_cast<std::size_t>(hi_ - lo_ + 1));
    for (auto& s : starts_) s.push_back(0);
    const auto& split = idx.split_levels();
    for (std::size_t i = 1; i < split.size(); ++i) {
        const int v = split[i];
        if (v > hi_) continue;
        for (int l = std::max(v, lo_); l <= hi_; ++l)
            starts_[l - lo_].push_back(static_cast<std::uint32_t>(i));
    }
}

double CoverTree::run(double s, std::vector<std::vector<std::uint8_t>>* keep) const {
    const double root_n = std::sqrt(double(idx_->ambient_dim()));
    const std::size_t levels = starts_.size();
    std::vector<double> below(starts_.back().size(), std::pow(root_n * std::ldexp(1.0, -hi_), s));
    std::vector<double> here;
    if (keep) {
        keep->assign(levels, {});
        keep->back().assign(below.size(), 1);
    }
    for (std::size_t l = levels - 1; l-- > 0;) {
        const auto& st = starts_[l];
        const auto& child = starts_[l + 1];
        const double own = std::pow(root_n * std::ldexp(1.0, -(lo_ + int(l))), s);
        here.assign(st.size(), 0.0);
        if (keep) (*keep)[l].assign(st.size(), 0);
        std::size_t j = 0;
        for (std::size_t k = 0; k < st.size(); ++k) {
            const std::uint32_t end =
                k + 1 < st.size() ? st[k + 1] : static_cast<std::uint32_t>(idx_->size());
            double sum = 0.0;
            while (j < child.size() && child[j] < end) sum += below[j++];
            if (own <= sum) {
                here[k] = own;
                if (keep) (*keep)[l][k] = 1;
            } else {
                here[k] = sum;
            }
        }
        below.swap(here);
    }
    double total = 0.0;
    for (double c : below) total += c;
    return total;
}

double CoverTree::cost(double s) const { return run(s, nullptr); }

DyadicCover CoverTree::solve(double s, double theta, double delta) const {
    std::vector<std::vector<std::uint8_t>> keep;
    run(s, &keep);
    DyadicCover cover;
    cover.theta = theta;
    cover.delta = delta;
    cover.s = s;
    cover.ambient_dim = idx_->ambient_dim();

    const std::size_t d = idx_->ambient_dim();
    auto emit = [&](int level, std::uint32_t first) {
        DyadicCube q;
        q.level = level;
        q.index.resize(d);
        const int shift = idx_->base_level() - level;
        for (std::size_t a = 0; a < d; ++a)
            q.index[a] = static_cast<std::int64_t>(idx_->coord(first, a) >> shift) +
                         idx_->origin()[a] * (std::int64_t{1} << level);
        cover.cubes.push_back(std::move(q));
    };

    std::vector<std::uint8_t> active(starts_[0].size(), 1), next;
    for (std::size_t l = 0; l < starts_.size(); ++l) {
        const auto& st = starts_[l];
        const bool last = l + 1 == starts_.size();
        if (!last) next.assign(starts_[l + 1].size(), 0);
        std::size_t j = 0;
        for (std::size_t k = 0; k < st.size(); ++k) {
            const std::uint32_t end =
                k + 1 < st.size() ? st[k + 1] : static_cast<std::uint32_t>(idx_->size());
            const bool open = active[k] && !keep[l][k];
            if (active[k] && keep[l][k]) emit(lo_ + int(l), st[k]);
            if (last) continue;
            const auto& child = starts_[l + 1];
            while (j < child.size() && child[j] < end) next[j++] = open ? 1 : 0;
        }
        if (!last) active.swap(next);
    }
    return cover;
}

}  // namespace dimlab
