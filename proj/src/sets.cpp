#include "dimlab/sets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "dimlab/error.hpp"
#include "rng.hpp"

namespace dimlab {

namespace {

Box compute_bbox(std::size_t dim, std::span<const double> coords) {
    Box b;
    b.lo.assign(dim, std::numeric_limits<double>::infinity());
    b.hi.assign(dim, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const std::size_t a = i % dim;
        b.lo[a] = std::min(b.lo[a], coords[i]);
        b.hi[a] = std::max(b.hi[a], coords[i]);
    }
    return b;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void check_cap(double count, const GeneratorLimits& limits, const char* what) {
    if (count > static_cast<double>(limits.max_points)) {
        std::ostringstream os;
        os << what << ": " << count << " points exceeds the cap of " << limits.max_points;
        throw CapacityError(os.str());
    }
}

}  // namespace

bool Box::contains(std::span<const double> p) const {
    for (std::size_t a = 0; a < p.size(); ++a)
        if (p[a] < lo[a] || p[a] > hi[a]) return false;
    return true;
}

double Box::diagonal() const {
    double acc = 0.0;
    for (std::size_t a = 0; a < lo.size(); ++a) acc += (hi[a] - lo[a]) * (hi[a] - lo[a]);
    return std::sqrt(acc);
}

PointSet::PointSet(std::size_t ambient_dim, std::vector<double> coords, double resolution,
                   std::string provenance)
    : PointSet(Unchecked{}, ambient_dim, std::move(coords), resolution, std::move(provenance)) {
    validate_distinct();
}

PointSet::PointSet(Unchecked, std::size_t ambient_dim, std::vector<double> coords,
                   double resolution, std::string provenance)
    : dim_(ambient_dim),
      coords_(std::make_shared<const std::vector<double>>(std::move(coords))),
      resolution_(resolution),
      provenance_(std::move(provenance)) {
    validate_basic();
    bbox_ = compute_bbox(dim_, *coords_);
}

void PointSet::validate_basic() const {
    detail::require(dim_ >= 1, "PointSet: ambient_dim must be >= 1");
    detail::require(!coords_->empty(), "PointSet: point list is empty");
    detail::require(coords_->size() % dim_ == 0,
                    "PointSet: coordinate count is not a multiple of ambient_dim");
    detail::require(std::isfinite(resolution_) && resolution_ > 0.0,
                    "PointSet: resolution must be positive and finite");
    for (double v : *coords_)
        detail::require(std::isfinite(v), "PointSet: non-finite coordinate");
}

void PointSet::validate_distinct() const {
    const std::size_t n = size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const double* c = coords_->data();
    const std::size_t d = dim_;
    auto less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(c + a * d, c + a * d + d, c + b * d, c + b * d + d);
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t i = 1; i < n; ++i) {
        if (std::equal(c + order[i - 1] * d, c + order[i - 1] * d + d, c + order[i] * d))
            detail::fail_param("PointSet: duplicate point at index " + std::to_string(order[i]));
    }
}

PointSet PointSet::with_resolution(double resolution) const {
    PointSet copy = *this;
    copy.resolution_ = resolution;
    copy.validate_basic();
    return copy;
}

// ---------------------------------------------------------------------------

CarpetSpec::CarpetSpec(int base_x, int base_y, std::vector<std::pair<int, int>> digits)
    : m_(base_x), n_(base_y), digits_(std::move(digits)) {
    detail::require(m_ >= 2, "CarpetSpec: base_x must be >= 2");
    detail::require(n_ > m_, "CarpetSpec: base_y must exceed base_x");
    detail::require(!digits_.empty(), "CarpetSpec: digit set is empty");
    std::sort(digits_.begin(), digits_.end());
    for (std::size_t k = 0; k < digits_.size(); ++k) {
        const auto [i, j] = digits_[k];
        if (i < 1 || i > m_ || j < 1 || j > n_) {
            std::ostringstream os;
            os << "CarpetSpec: digit (" << i << "," << j << ") outside the " << m_ << "x" << n_
               << " grid";
            throw ParameterError(os.str());
        }
        if (k > 0 && digits_[k - 1] == digits_[k])
            detail::fail_param("CarpetSpec: repeated digit (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
    }
    for (std::size_t k = 0; k < digits_.size(); ++k) {
        if (k == 0 || digits_[k].first != digits_[k - 1].first)
            column_counts_.push_back(1);
        else
            ++column_counts_.back();
    }
}

int CarpetSpec::max_column_count() const {
    return *std::max_element(column_counts_.begin(), column_counts_.end());
}

int CarpetSpec::min_column_count() const {
    return *std::min_element(column_counts_.begin(), column_counts_.end());
}

double CarpetSpec::gamma() const { return std::log(double(n_)) / std::log(double(m_)); }

namespace {

// Rows are spread evenly so that both carpets are totally disconnected.
CarpetSpec carpet_from_columns(const std::vector<std::pair<int, int>>& groups) {
    std::vector<std::pair<int, int>> digits;
    int column = 1;
    for (auto [columns, per_column] : groups) {
        const int stride = 243 / per_column;
        for (int c = 0; c < columns; ++c, ++column)
            for (int k = 0; k < per_column; ++k) digits.emplace_back(column, 1 + stride * k);
    }
    return CarpetSpec(32, 243, std::move(digits));
}

}  // namespace

CarpetSpec example_carpet_e() { return carpet_from_columns({{2, 27}, {11, 3}, {19, 1}}); }

CarpetSpec example_carpet_e_prime() { return carpet_from_columns({{1, 27}, {6, 9}, {25, 1}}); }

void PercolationSpec::validate() const {
    detail::require(ambient_dim >= 1, "percolation: ambient dimension must be >= 1");
    detail::require(base >= 2, "percolation: base M must be >= 2");
    detail::require(p > 0.0 && p <= 1.0, "percolation: p must lie in (0, 1]");
    detail::require(depth >= 1, "percolation: depth must be >= 1");
}

// ---------------------------------------------------------------------------

PointSet gen_sequence_set(double s, std::int64_t m_max) {
    detail::require(std::isfinite(s) && s > 0.0, "gen_sequence_set: s must be positive");
    detail::require(m_max >= 1, "gen_sequence_set: m_max must be >= 1");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(m_max) + 1);
    pts.push_back(0.0);
    for (std::int64_t m = m_max; m >= 1; --m) {
        const double v = std::pow(double(m), -s);
        if (!(v > pts.back()))
            detail::fail_param("gen_sequence_set: points collide in double precision; lower m_max");
        pts.push_back(v);
    }
    const double top = std::pow(double(m_max), -s);
    const double res = -top * std::expm1(-s * std::log1p(1.0 / double(m_max)));
    return PointSet(PointSet::Unchecked{}, 1, std::move(pts), res,
                    "seq s=" + fmt_double(s) + " m_max=" + std::to_string(m_max));
}

PointSet gen_product(const PointSet& a, const PointSet& b, const GeneratorLimits& limits) {
    check_cap(double(a.size()) * double(b.size()), limits, "gen_product");
    const std::size_t da = a.ambient_dim(), db = b.ambient_dim();
    std::vector<double> pts;
    pts.reserve(a.size() * b.size() * (da + db));
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto pa = a.point(i);
        for (std::size_t j = 0; j < b.size(); ++j) {
            pts.insert(pts.end(), pa.begin(), pa.end());
            const auto pb = b.point(j);
            pts.insert(pts.end(), pb.begin(), pb.end());
        }
    }
    return PointSet(PointSet::Unchecked{}, da + db, std::move(pts),
                    std::max(a.resolution(), b.resolution()),
                    "product(" + a.provenance() + ") x (" + b.provenance() + ")");
}

PointSet gen_bm_carpet(const CarpetSpec& spec, int level, const GeneratorLimits& limits) {
    detail::require(level >= 1, "gen_bm_carpet: level must be >= 1");
    const double count = std::pow(double(spec.digit_count()), level);
    check_cap(count, limits, "gen_bm_carpet");
    const double mx = std::pow(double(spec.base_x()), level);
    const double ny = std::pow(double(spec.base_y()), level);
    detail::require(ny < 9.0e15, "gen_bm_carpet: level too deep for exact coordinates");

    // Integer lower-left corners (X, Y) in units of m^-level and n^-level.
    std::vector<std::pair<std::int64_t, std::int64_t>> cur{{0, 0}}, next;
    for (int l = 0; l < level; ++l) {
        next.clear();
        next.reserve(cur.size() * spec.digits().size());
        for (auto [x, y] : cur)
            for (auto [i, j] : spec.digits())
                next.emplace_back(x * spec.base_x() + (i - 1), y * spec.base_y() + (j - 1));
        cur.swap(next);
    }
    std::vector<double> pts;
    pts.reserve(cur.size() * 2);
    for (auto [x, y] : cur) {
        pts.push_back(double(x) / mx);
        pts.push_back(double(y) / ny);
    }
    std::ostringstream prov;
    prov << "bm m=" << spec.base_x() << " n=" << spec.base_y() << " N=" << spec.digit_count()
         << " level=" << level;
    return PointSet(PointSet::Unchecked{}, 2, std::move(pts), 1.0 / ny, prov.str());
}

PercolationSample gen_percolation(const PercolationSpec& spec, const GeneratorLimits& limits) {
    spec.validate();
    const std::size_t n = static_cast<std::size_t>(spec.ambient_dim);
    const std::uint64_t M = static_cast<std::uint64_t>(spec.base);
    const double children_d = std::pow(double(M), double(n));
    check_cap(children_d, limits, "gen_percolation");
    const std::uint64_t children = static_cast<std::uint64_t>(children_d);

    // Positions are exact integer indices while M^level fits in a double
    // mantissa, then switch to fractional corners.
    constexpr double exact_limit = 9007199254740992.0;  // 2^53
    bool fractional = false;
    double scale = 1.0;  // M^level while integral, M^-level once fractional

    PercolationSample out;
    out.survivors_per_level.push_back(1);
    std::vector<std::uint64_t> keys{rng::mix(spec.seed)}, next_keys;
    std::vector<double> pos(n, 0.0), next_pos;

    for (int level = 1; level <= spec.depth; ++level) {
        if (!fractional && scale * double(M) > exact_limit) {
            for (double& v : pos) v /= scale;
            fractional = true;
            scale = 1.0 / scale;
        }
        next_keys.clear();
        next_pos.clear();
        const double step = fractional ? scale / double(M) : 0.0;
        for (std::size_t c = 0; c < keys.size(); ++c) {
            for (std::uint64_t local = 0; local < children; ++local) {
                const std::uint64_t key = rng::child_key(keys[c], local);
                if (!(rng::unit(key) < spec.p)) continue;
                next_keys.push_back(key);
                std::uint64_t rest = local;
                for (std::size_t a = 0; a < n; ++a) {
                    const double digit = double(rest % M);
                    rest /= M;
                    const double base = pos[c * n + a];
                    next_pos.push_back(fractional ? base + digit * step : base * double(M) + digit);
                }
            }
        }
        if (next_keys.size() > limits.max_points)
            throw CapacityError("gen_percolation: survivor count exceeds the point cap");
        keys.swap(next_keys);
        pos.swap(next_pos);
        scale = fractional ? scale / double(M) : scale * double(M);
        out.survivors_per_level.push_back(keys.size());
        if (keys.empty()) return out;
    }

    // Cube centers.
    const double side = fractional ? scale : 1.0 / scale;
    for (double& v : pos) v = fractional ? v + 0.5 * side : (v + 0.5) / scale;

    std::ostringstream prov;
    prov << "percolation n=" << n << " M=" << M << " p=" << fmt_double(spec.p)
         << " depth=" << spec.depth << " seed=" << spec.seed;
    if (fractional) {
        // Deep samples may round distinct centers together.
        std::vector<std::size_t> order(keys.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto less = [&](std::size_t a, std::size_t b) {
            return std::lexicographical_compare(&pos[a * n], &pos[a * n] + n, &pos[b * n],
                                                &pos[b * n] + n);
        };
        std::sort(order.begin(), order.end(), less);
        std::vector<double> uniq;
        for (std::size_t k = 0; k < order.size(); ++k) {
            const double* p = &pos[order[k] * n];
            if (k > 0 && std::equal(p, p + n, &pos[order[k - 1] * n])) continue;
            uniq.insert(uniq.end(), p, p + n);
        }
        pos.swap(uniq);
    }
    out.points.emplace(PointSet::Unchecked{}, n, std::move(pos), side, prov.str());
    return out;
}

PointSet gen_uniform_grid(int n, std::int64_t side, const GeneratorLimits& limits) {
    detail::require(n >= 1, "gen_uniform_grid: n must be >= 1");
    detail::require(side >= 1, "gen_uniform_grid: side must be >= 1");
    const double count = std::pow(double(side), n);
    check_cap(count, limits, "gen_uniform_grid");
    const std::size_t total = static_cast<std::size_t>(count);
    std::vector<double> pts;
    pts.reserve(total * static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rest = k;
        for (int a = 0; a < n; ++a) {
            pts.push_back((double(rest % side) + 0.5) / double(side));
            rest /= side;
        }
    }
    return PointSet(PointSet::Unchecked{}, static_cast<std::size_t>(n), std::move(pts),
                    1.0 / double(side),
                    "grid n=" + std::to_string(n) + " side=" + std::to_string(side));
}

PointSet gen_radial_stretch_grid(double s, int n, double alpha, std::int64_t m_max,
                                 const GeneratorLimits& limits) {
    detail::require(std::isfinite(s) && s > 0.0, "gen_radial_stretch_grid: s must be positive");
    detail::require(n >= 1, "gen_radial_stretch_grid: n must be >= 1");
    detail::require(alpha > 0.0 && alpha <= 1.0,
                    "gen_radial_stretch_grid: alpha must lie in (0, 1]");
    detail::require(m_max >= 1, "gen_radial_stretch_grid: m_max must be >= 1");
    const double count = std::pow(double(m_max), n);
    check_cap(count, limits, "gen_radial_stretch_grid");
    const std::size_t total = static_cast<std::size_t>(count);
    const std::size_t dim = static_cast<std::size_t>(n);

    std::vector<double> base(static_cast<std::size_t>(m_max));
    for (std::int64_t k = 1; k <= m_max; ++k) base[k - 1] = std::pow(double(k), s);

    std::vector<double> pts(total * dim);
    std::vector<std::size_t> digit(dim, 0);
    for (std::size_t k = 0; k < total; ++k) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < dim; ++a) r2 += base[digit[a]] * base[digit[a]];
        const double factor = std::pow(r2, -0.5 * (1.0 + alpha));
        for (std::size_t a = 0; a < dim; ++a) pts[k * dim + a] = base[digit[a]] * factor;
        for (std::size_t a = 0; a < dim; ++a) {
            if (++digit[a] < base.size()) break;
            digit[a] = 0;
        }
    }
    double gap = min_pairwise_gap(dim, pts);
    if (gap == 0.0)
        detail::fail_param("gen_radial_stretch_grid: points collide in double precision");
    if (!std::isfinite(gap)) gap = 1.0;  // singleton
    std::ostringstream prov;
    prov << "gstretch s=" << fmt_double(s) << " n=" << n << " alpha=" << fmt_double(alpha)
         << " m_max=" << m_max;
    return PointSet(PointSet::Unchecked{}, dim, std::move(pts), gap, prov.str());
}

PointSet apply_power_map(const PointSet& x, double beta) {
    detail::require(std::isfinite(beta) && beta > 0.0, "apply_power_map: beta must be positive");
    const std::size_t dim = x.ambient_dim();
    std::vector<double> pts(x.coords().begin(), x.coords().end());
    if (beta != 1.0) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            double* p = &pts[i * dim];
            double r2 = 0.0;
            for (std::size_t a = 0; a < dim; ++a) r2 += p[a] * p[a];
            if (r2 == 0.0) continue;
            const double factor = std::pow(r2, 0.5 * (beta - 1.0));
            for (std::size_t a = 0; a < dim; ++a) p[a] *= factor;
        }
    }
    double gap = min_pairwise_gap(dim, pts);
    if (gap == 0.0) detail::fail_param("apply_power_map: image points collide in double precision");
    if (!std::isfinite(gap)) gap = x.resolution();
    return PointSet(PointSet::Unchecked{}, dim, std::move(pts), gap,
                    "power(" + fmt_double(beta) + ") of " + x.provenance());
}

// ---------------------------------------------------------------------------
// Closest pair by randomized incremental insertion into a grid whose cell
// side equals the current best distance. Each improvement rebuilds the grid.

double min_pairwise_gap(std::size_t dim, std::span<const double> coords) {
    const std::size_t n = coords.size() / dim;
    if (n < 2) return std::numeric_limits<double>::infinity();

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::mt19937_64 gen(0x5eedULL);
    std::shuffle(order.begin(), order.end(), gen);

    auto dist2 = [&](std::uint32_t a, std::uint32_t b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double d = coords[a * dim + k] - coords[b * dim + k];
            acc += d * d;
        }
        return acc;
    };

    double best2 = dist2(order[0], order[1]);
    if (best2 == 0.0) return 0.0;
    double cell = 0.0;

    std::unordered_map<std::uint64_t, std::uint32_t> head;
    std::vector<std::uint32_t> next(n);
    constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::int64_t> c(dim), probe(dim);

    auto cell_of = [&](std::uint32_t idx, std::vector<std::int64_t>& out) {
        for (std::size_t k = 0; k < dim; ++k)
            out[k] = static_cast<std::int64_t>(std::floor(coords[idx * dim + k] / cell));
    };
    auto hash = [&](const std::vector<std::int64_t>& v) {
        std::uint64_t h = 0x243f6a8885a308d3ULL;
        for (auto x : v) h = rng::mix(h ^ static_cast<std::uint64_t>(x));
        return h;
    };
    auto insert = [&](std::uint32_t idx) {
        cell_of(idx, c);
        auto [it, fresh] = head.try_emplace(hash(c), idx);
        next[idx] = fresh ? none : it->second;
        if (!fresh) it->second = idx;
    };
    auto rebuild = [&](std::size_t upto) {
        cell = std::sqrt(best2);
        head.clear();
        for (std::size_t k = 0; k < upto; ++k) insert(order[k]);
    };

    rebuild(2);
    std::size_t neighbours = 1;
    for (std::size_t k = 0; k < dim; ++k) neighbours *= 3;
    for (std::size_t k = 2; k < n; ++k) {
        const std::uint32_t idx = order[k];
        cell_of(idx, c);
        double found = best2;
        for (std::size_t code = 0; code < neighbours; ++code) {
            std::size_t rest = code;
            for (std::size_t a = 0; a < dim; ++a) {
                probe[a] = c[a] + static_cast<std::int64_t>(rest % 3) - 1;
                rest /= 3;
            }
            auto it = head.find(hash(probe));
            if (it == head.end()) continue;
            for (std::uint32_t j = it->second; j != none; j = next[j])
                found = std::min(found, dist2(idx, j));
        }
        if (found == 0.0) return 0.0;
        if (found < best2) {
            best2 = found;
            rebuild(k + 1);
        } else {
            insert(idx);
        }
    }
    return std::sqrt(best2);
}

double min_pairwise_gap(const PointSet& x) { return min_pairwise_gap(x.ambient_dim(), x.coords()); }

}  // namespace dimlab
