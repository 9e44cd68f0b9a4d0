#include "dimlab/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "dimlab/error.hpp"
#include "dimlab/parallel.hpp"

namespace dimlab {

// ---------------------------------------------------------------------------
// Scale grids and regression

ScaleGrid::ScaleGrid(std::vector<double> scales, std::size_t window_begin, std::size_t window_end)
    : scales_(std::move(scales)), begin_(window_begin), end_(window_end) {
    detail::require(!scales_.empty(), "ScaleGrid: no scales");
    for (std::size_t k = 0; k < scales_.size(); ++k) {
        detail::require(scales_[k] > 0.0 && scales_[k] < 1.0, "ScaleGrid: scales must lie in (0,1)");
        if (k > 0) detail::require(scales_[k] < scales_[k - 1], "ScaleGrid: scales must decrease");
    }
    detail::require(begin_ < end_ && end_ <= scales_.size(), "ScaleGrid: empty fit window");
}

namespace {
std::pair<std::size_t, std::size_t> default_window(std::size_t n) {
    if (n >= 6) return {2, n - 2};
    return {0, n};
}
}  // namespace

ScaleGrid::ScaleGrid(std::vector<double> scales)
    : ScaleGrid(scales, default_window(scales.size()).first, default_window(scales.size()).second) {}

ScaleGrid ScaleGrid::dyadic(std::size_t n, int k_min, int k_max) {
    detail::require(k_min <= k_max, "ScaleGrid::dyadic: k_min > k_max");
    std::vector<double> s;
    for (int k = k_min; k <= k_max; ++k) s.push_back(std::sqrt(double(n)) * std::ldexp(1.0, -k));
    return ScaleGrid(std::move(s));
}

ScaleGrid ScaleGrid::dyadic_for(const PointSet& x, double theta, int k_min) {
    detail::require(theta > 0.0 && theta <= 1.0, "ScaleGrid::dyadic_for: theta must lie in (0,1]");
    const double half = 0.5 * std::log2(double(x.ambient_dim()));
    if (k_min < 0) k_min = static_cast<int>(std::floor(half)) + 1;
    // (sqrt(n) 2^-k)^(1/theta) >= resolution  <=>  k <= half - theta*log2(resolution)
    const int k_max = static_cast<int>(std::floor(half - theta * std::log2(x.resolution()) + 1e-9));
    if (k_max < k_min + 1)
        detail::fail_param("ScaleGrid::dyadic_for: resolution too coarse for any scale");
    return dyadic(x.ambient_dim(), k_min, k_max);
}

ScaleGrid ScaleGrid::with_window(std::size_t begin, std::size_t end) const {
    return ScaleGrid(scales_, begin, end);
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y, std::size_t begin,
                        std::size_t end) {
    if (end > x.size() || end > y.size() || end < begin + 2)
        detail::fail_param("least_squares: fewer than 2 scales in the fit window");
    const double k = double(end - begin);
    double mx = 0, my = 0;
    for (std::size_t i = begin; i < end; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = begin; i < end; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) detail::fail_param("least_squares: degenerate abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = begin; i < end; ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / k);
    f.window_begin = begin;
    f.window_end = end;
    return f;
}

// ---------------------------------------------------------------------------
// Covering numbers

namespace {

std::vector<std::int64_t> cell_keys(const PointSet& x, double h) {
    const std::size_t d = x.ambient_dim();
    std::vector<std::int64_t> cells(x.size() * d);
    for (std::size_t a = 0; a < d; ++a) {
        const double o = std::floor(x.bbox().lo[a]);
        if (!((x.bbox().hi[a] - o) / h < 0x1.0p62))
            detail::fail_param("covering_number: scale too small for the extent");
    }
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t a = 0; a < d; ++a) {
            const double o = std::floor(x.bbox().lo[a]);
            cells[i * d + a] = static_cast<std::int64_t>(std::floor((x.coord(i, a) - o) / h));
        }
    return cells;
}

bool is_power_of_two(double v, int& exponent) {
    int e = 0;
    const double m = std::frexp(v, &e);
    exponent = e - 1;
    return m == 0.5;
}

}  // namespace

std::size_t covering_number(const PointSet& x, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) detail::fail_param("covering_number: r must be positive");
    const std::size_t d = x.ambient_dim();
    const auto cells = cell_keys(x, r / std::sqrt(double(d)));
    if (d == 1) {
        if (std::is_sorted(cells.begin(), cells.end())) {
            return std::size_t(1) + std::inner_product(cells.begin() + 1, cells.end(), cells.begin(),
                                                       std::size_t{0}, std::plus<>(),
                                                       std::not_equal_to<>());
        }
        auto sorted = cells;
        std::sort(sorted.begin(), sorted.end());
        return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    }
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::int64_t* c = cells.data();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(c + a * d, c + a * d + d, c + b * d, c + b * d + d);
    });
    std::size_t count = 1;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (!std::equal(c + order[i] * d, c + order[i] * d + d, c + order[i - 1] * d)) ++count;
    return count;
}

BoxEstimate box_dim_estimate(const PointSet& x, const ScaleGrid& g) {
    detail::require(g.size() >= 2, "box_dim_estimate: fewer than 2 scales");
    BoxEstimate e;
    e.scales = g.scales();
    const double root_n = std::sqrt(double(x.ambient_dim()));

    bool dyadic = true;
    int k_max = 0;
    std::vector<int> ks;
    for (double r : e.scales) {
        int k = 0;
        dyadic = dyadic && is_power_of_two(r / root_n, k) && k <= 0 && -k <= 60;
        ks.push_back(-k);
        k_max = std::max(k_max, -k);
    }
    std::unique_ptr<DyadicIndex> idx;
    if (dyadic) {
        try {
            idx = std::make_unique<DyadicIndex>(x, k_max);
        } catch (const ParameterError&) {
            idx.reset();
        }
    }
    for (std::size_t k = 0; k < e.scales.size(); ++k) {
        const double r = e.scales[k];
        if (r < x.resolution()) {
            std::ostringstream os;
            os << "scale " << r << " is below the resolution " << x.resolution();
            e.warnings.push_back(os.str());
        }
        e.counts.push_back(idx ? idx->occupied(ks[k]) : covering_number(x, r));
    }

    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < e.scales.size(); ++k) {
        lx.push_back(std::log(1.0 / e.scales[k]));
        ly.push_back(std::log(double(e.counts[k])));
        e.exponents.push_back(ly.back() / lx.back());
    }
    e.fit = least_squares(lx, ly, g.window_begin(), g.window_end());
    e.value = e.fit.slope;
    e.max_exponent = *std::max_element(e.exponents.begin() + g.window_begin(),
                                       e.exponents.begin() + g.window_end());
    return e;
}

// ---------------------------------------------------------------------------
// Intermediate covers

namespace {

void check_intermediate(const PointSet& x, double theta, double delta, double s) {
    detail::require(theta > 0.0 && theta <= 1.0, "intermediate: theta must lie in (0,1]");
    detail::require(delta > 0.0 && delta < 1.0, "intermediate: delta must lie in (0,1)");
    detail::require(s >= 0.0 && s <= double(x.ambient_dim()), "intermediate: s must lie in [0,n]");
}

void levels_or_throw(std::size_t n, double theta, double delta, int& lo, int& hi) {
    if (!allowed_levels(n, theta, delta, lo, hi)) {
        std::ostringstream os;
        os << "no dyadic level fits the band for theta=" << theta << ", delta=" << delta
           << ", n=" << n;
        throw ParameterError(os.str());
    }
}

// Bisection for a decreasing function crossing zero on [lo, hi].
template <class F>
double bisect_decreasing(F f, double lo, double hi, double tol) {
    if (f(lo) <= 0.0) return lo;
    if (f(hi) >= 0.0) return hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CoverCost intermediate_cover_cost(const PointSet& x, double theta, double delta, double s) {
    check_intermediate(x, theta, delta, s);
    int lo = 0, hi = 0;
    levels_or_throw(x.ambient_dim(), theta, delta, lo, hi);
    const DyadicIndex idx(x, hi);
    const CoverTree tree(idx, lo, hi);
    CoverCost out;
    out.cover = tree.solve(s, theta, delta);
    out.cost = tree.cost(s);
    out.level_lo = lo;
    out.level_hi = hi;
    return out;
}

IntermediateEstimate intermediate_dim_estimate(const PointSet& x, double theta, const ScaleGrid& g,
                                               const EstimateOptions& opt) {
    check_intermediate(x, theta, g.scales().front(), 0.0);
    IntermediateEstimate e;
    e.theta = theta;
    e.scales = g.scales();
    const std::size_t n = x.ambient_dim();
    std::vector<int> lo(g.size()), hi(g.size());
    int top = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        levels_or_throw(n, theta, g.scales()[k], lo[k], hi[k]);
        top = std::max(top, hi[k]);
        const double inner = std::pow(g.scales()[k], 1.0 / theta);
        if (inner < x.resolution()) {
            std::ostringstream os;
            os << "inner scale " << inner << " is below the resolution " << x.resolution();
            e.warnings.push_back(os.str());
        }
    }
    const DyadicIndex idx(x, top);
    std::vector<std::unique_ptr<CoverTree>> trees(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        trees[k] = std::make_unique<CoverTree>(idx, lo[k], hi[k]);

    const double n_d = double(n);
    e.critical_exponents.resize(g.size());
    parallel_for(g.size(), [&](std::size_t k) {
        e.critical_exponents[k] = bisect_decreasing(
            [&](double s) { return std::log(trees[k]->cost(s)); }, 0.0, n_d, opt.bisection_tol);
    });
    e.max_exponent = *std::max_element(e.critical_exponents.begin() + g.window_begin(),
                                       e.critical_exponents.begin() + g.window_end());

    std::vector<double> lx;
    for (double d : g.scales()) lx.push_back(std::log(1.0 / d));
    std::vector<double> ly(g.size());
    auto fit_at = [&](double s) {
        parallel_for(g.size(), [&](std::size_t k) { ly[k] = std::log(trees[k]->cost(s)); });
        return least_squares(lx, ly, g.window_begin(), g.window_end());
    };
    e.value = bisect_decreasing([&](double s) { return fit_at(s).slope; }, 0.0, n_d,
                                opt.bisection_tol);
    e.fit = fit_at(e.value);
    return e;
}

// ---------------------------------------------------------------------------
// Assouad spectrum

namespace {

// Occupied cells of mesh h, points grouped by cell, with per-cell point bboxes.
struct CellTable {
    std::size_t dim = 1;
    double h = 1.0;
    std::vector<double> origin;
    std::vector<std::int64_t> keys;      // per cell, row-major
    std::vector<std::size_t> first;      // per cell, into `order`; size cells+1
    std::vector<std::size_t> order;      // point indices grouped by cell
    std::vector<double> lo, hi;          // per cell point bbox

    std::size_t cells() const { return first.size() - 1; }
};

CellTable build_cells(const PointSet& x, double h) {
    CellTable t;
    t.dim = x.ambient_dim();
    t.h = h;
    const std::size_t d = t.dim;
    for (std::size_t a = 0; a < d; ++a) t.origin.push_back(std::floor(x.bbox().lo[a]));
    const auto raw = cell_keys(x, h);
    t.order.resize(x.size());
    std::iota(t.order.begin(), t.order.end(), std::size_t{0});
    const std::int64_t* c = raw.data();
    std::stable_sort(t.order.begin(), t.order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(c + a * d, c + a * d + d, c + b * d, c + b * d + d);
    });
    for (std::size_t i = 0; i < t.order.size(); ++i) {
        const std::int64_t* k = c + t.order[i] * d;
        const bool fresh =
            i == 0 || !std::equal(k, k + d, c + t.order[i - 1] * d);
        if (fresh) {
            t.first.push_back(i);
            t.keys.insert(t.keys.end(), k, k + d);
            for (std::size_t a = 0; a < d; ++a) {
                t.lo.push_back(x.coord(t.order[i], a));
                t.hi.push_back(x.coord(t.order[i], a));
            }
        } else {
            const std::size_t cell = t.first.size() - 1;
            for (std::size_t a = 0; a < d; ++a) {
                t.lo[cell * d + a] = std::min(t.lo[cell * d + a], x.coord(t.order[i], a));
                t.hi[cell * d + a] = std::max(t.hi[cell * d + a], x.coord(t.order[i], a));
            }
        }
    }
    t.first.push_back(t.order.size());
    return t;
}

std::size_t count_ball(const CellTable& t, const PointSet& x, std::span<const double> c, double R) {
    const std::size_t d = t.dim;
    const double R2 = R * R;
    std::vector<std::int64_t> qlo(d), qhi(d);
    for (std::size_t a = 0; a < d; ++a) {
        qlo[a] = static_cast<std::int64_t>(std::floor((c[a] - R - t.origin[a]) / t.h));
        qhi[a] = static_cast<std::int64_t>(std::floor((c[a] + R - t.origin[a]) / t.h));
    }
    auto key = [&](std::size_t cell, std::size_t a) { return t.keys[cell * d + a]; };

    auto test_cell = [&](std::size_t cell) -> bool {
        double near = 0, far = 0;
        for (std::size_t a = 0; a < d; ++a) {
            const double l = t.lo[cell * d + a], u = t.hi[cell * d + a];
            const double dn = c[a] < l ? l - c[a] : (c[a] > u ? c[a] - u : 0.0);
            const double df = std::max(std::abs(c[a] - l), std::abs(c[a] - u));
            near += dn * dn;
            far += df * df;
        }
        if (near > R2) return false;
        if (far <= R2) return true;
        for (std::size_t i = t.first[cell]; i < t.first[cell + 1]; ++i) {
            double acc = 0;
            const auto p = x.point(t.order[i]);
            for (std::size_t a = 0; a < d; ++a) acc += (p[a] - c[a]) * (p[a] - c[a]);
            if (acc <= R2) return true;
        }
        return false;
    };

    // Walk the lexicographic cell list axis by axis inside the query box.
    std::size_t total = 0;
    auto descend = [&](auto&& self, std::size_t begin, std::size_t end, std::size_t a) -> void {
        auto lower = [&](std::int64_t v) {
            std::size_t lo = begin, hi = end;
            while (lo < hi) {
                const std::size_t mid = (lo + hi) / 2;
                (key(mid, a) < v ? lo = mid + 1 : hi = mid);
            }
            return lo;
        };
        std::size_t i = lower(qlo[a]);
        const std::size_t stop = lower(qhi[a] + 1);
        if (a + 1 == d) {
            for (; i < stop; ++i) total += test_cell(i) ? 1 : 0;
            return;
        }
        while (i < stop) {
            const std::int64_t v = key(i, a);
            std::size_t j = i, step = 1;
            while (j + step < stop && key(j + step, a) == v) {
                j += step;
                step *= 2;
            }
            std::size_t lo = j + 1, hi = std::min(j + step, stop);
            while (lo < hi) {
                const std::size_t mid = (lo + hi) / 2;
                (key(mid, a) == v ? lo = mid + 1 : hi = mid);
            }
            self(self, i, lo, a + 1);
            i = lo;
        }
    };
    descend(descend, 0, t.cells(), 0);
    return total;
}

}  // namespace

std::size_t ball_covering_number(const PointSet& x, std::span<const double> center, double R,
                                 double r) {
    detail::require(R > 0.0 && r > 0.0, "ball_covering_number: radii must be positive");
    detail::require(center.size() == x.ambient_dim(), "ball_covering_number: center dimension");
    const CellTable t = build_cells(x, r / std::sqrt(double(x.ambient_dim())));
    return count_ball(t, x, center, R);
}

std::vector<std::size_t> stratified_centers(const PointSet& x, std::size_t limit) {
    std::vector<std::size_t> all(x.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (x.size() <= limit) return all;
    const double root_n = std::sqrt(double(x.ambient_dim()));
    int base = static_cast<int>(std::ceil(std::log2(root_n / x.resolution()))) + 1;
    base = std::clamp(base, 1, 60);
    std::unique_ptr<DyadicIndex> idx;
    while (!idx) {
        try {
            idx = std::make_unique<DyadicIndex>(x, base);
        } catch (const ParameterError&) {
            if (--base < 1) throw;
        }
    }
    int level = base;
    for (int l = 0; l <= base; ++l)
        if (idx->occupied(l) >= limit) {
            level = l;
            break;
        }
    std::vector<std::size_t> firsts{idx->order()[0]};
    const auto& split = idx->split_levels();
    for (std::size_t i = 1; i < split.size(); ++i)
        if (split[i] <= level) firsts.push_back(idx->order()[i]);
    if (firsts.size() <= limit) return firsts;
    std::vector<std::size_t> out;
    out.reserve(limit);
    for (std::size_t k = 0; k < limit; ++k) out.push_back(firsts[k * firsts.size() / limit]);
    return out;
}

AssouadSpectrumEstimate assouad_spectrum_estimate(const PointSet& x, double theta,
                                                  const ScaleGrid& g,
                                                  const EstimateOptions& opt) {
    detail::require(theta > 0.0 && theta < 1.0, "assouad_spectrum_estimate: theta must lie in (0,1)");
    AssouadSpectrumEstimate e;
    e.theta = theta;
    const auto centers = stratified_centers(x, opt.max_centers);
    e.centers = centers.size();
    const std::size_t d = x.ambient_dim();
    const double root_n = std::sqrt(double(d));

    // In one dimension the points are sorted once and balls are index ranges.
    std::vector<double> line;
    if (d == 1) {
        line.assign(x.coords().begin(), x.coords().end());
        std::sort(line.begin(), line.end());
    }

    e.witness.ratio = -1.0;
    for (double R : g.scales()) {
        const double r = std::pow(R, 1.0 / theta);
        if (r < x.resolution()) {
            std::ostringstream os;
            os << "skipped R=" << R << ": r=" << r << " is below the resolution";
            e.warnings.push_back(os.str());
            continue;
        }
        std::vector<std::size_t> counts(centers.size());
        if (d == 1) {
            const double h = r;
            const double o = std::floor(line.front());
            std::vector<std::size_t> rank(line.size());
            std::int64_t prev = 0;
            for (std::size_t i = 0; i < line.size(); ++i) {
                const auto cell = static_cast<std::int64_t>(std::floor((line[i] - o) / h));
                rank[i] = i == 0 ? 0 : rank[i - 1] + (cell != prev ? 1 : 0);
                prev = cell;
            }
            parallel_for(centers.size(), [&](std::size_t k) {
                const double c = x.coord(centers[k], 0);
                const auto a = std::lower_bound(line.begin(), line.end(), c - R) - line.begin();
                const auto b = std::upper_bound(line.begin(), line.end(), c + R) - line.begin();
                counts[k] = b > a ? rank[b - 1] - rank[a] + 1 : 0;
            });
        } else {
            const CellTable t = build_cells(x, r / root_n);
            parallel_for(centers.size(), [&](std::size_t k) {
                counts[k] = count_ball(t, x, x.point(centers[k]), R);
            });
        }
        const auto best = std::max_element(counts.begin(), counts.end()) - counts.begin();
        const double ratio = std::log(double(counts[best])) / std::log(R / r);
        e.scales.push_back(R);
        e.counts.push_back(counts[best]);
        e.ratios.push_back(ratio);
        if (ratio > e.witness.ratio) {
            const auto p = x.point(centers[best]);
            e.witness = {std::vector<double>(p.begin(), p.end()), R, r, counts[best], ratio};
        }
    }
    if (e.scales.size() < 2)
        detail::fail_param("assouad_spectrum_estimate: fewer than 2 admissible (R, r) pairs");

    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < e.scales.size(); ++k) {
        lx.push_back(std::log(e.scales[k] / std::pow(e.scales[k], 1.0 / theta)));
        ly.push_back(std::log(double(e.counts[k])));
    }
    const auto [wb, we] = default_window(e.scales.size());
    // Keep the caller's window when every scale was admissible.
    const bool full = e.scales.size() == g.size();
    e.fit = least_squares(lx, ly, full ? g.window_begin() : wb, full ? g.window_end() : we);
    e.value = e.fit.slope;
    return e;
}

// ---------------------------------------------------------------------------
// Reports

namespace {
nlohmann::json fit_json(const LinearFit& f) {
    return {{"slope", f.slope},
            {"intercept", f.intercept},
            {"residual", f.residual},
            {"window", {f.window_begin, f.window_end}}};
}
}  // namespace

nlohmann::json to_json(const BoxEstimate& e) {
    return {{"kind", "box"},       {"value", e.value},       {"scales", e.scales},
            {"values", e.exponents}, {"counts", e.counts},   {"fit", fit_json(e.fit)},
            {"max_exponent", e.max_exponent}, {"warnings", e.warnings}};
}

nlohmann::json to_json(const IntermediateEstimate& e) {
    return {{"kind", "intermediate"}, {"theta", e.theta},
            {"value", e.value},       {"scales", e.scales},
            {"values", e.critical_exponents}, {"fit", fit_json(e.fit)},
            {"max_exponent", e.max_exponent}, {"warnings", e.warnings}};
}

nlohmann::json to_json(const AssouadSpectrumEstimate& e) {
    return {{"kind", "assouad_spectrum"},
            {"theta", e.theta},
            {"value", e.value},
            {"scales", e.scales},
            {"values", e.ratios},
            {"counts", e.counts},
            {"fit", fit_json(e.fit)},
            {"centers", e.centers},
            {"witness",
             {{"center", e.witness.center},
              {"R", e.witness.R},
              {"r", e.witness.r},
              {"count", e.witness.count},
              {"ratio", e.witness.ratio}}},
            {"warnings", e.warnings}};
}

nlohmann::json to_json(const DyadicCover& c) {
    nlohmann::json cubes = nlohmann::json::array();
    for (const auto& q : c.cubes) cubes.push_back({{"level", q.level}, {"index", q.index}});
    return {{"theta", c.theta}, {"delta", c.delta}, {"s", c.s}, {"n", c.ambient_dim},
            {"cost", c.cost()}, {"cubes", std::move(cubes)}};
}

}  // namespace dimlab
