#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dimlab/distort.hpp"
#include "dimlab/error.hpp"
#include "dimlab/estimate.hpp"
#include "dimlab/formulas.hpp"
#include "dimlab/serialize.hpp"
#include "dimlab/sets.hpp"
#include "dimlab/verify.hpp"
#include "svg.hpp"

namespace dimlab::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ParameterError(what + ": expected a number, got '" + s + "'");
    return v;
}

long long parse_int(const std::string& s, const std::string& what) {
    long long v = 0;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ParameterError(what + ": expected an integer, got '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

template <class T>
const T& need(const std::optional<T>& v, const std::string& context, const std::string& flag) {
    if (!v) throw ParameterError(context + ": " + flag + " is required");
    return *v;
}

// "N": midpoints (i - 1/2)/N; "log:N[:min]": log-spaced in [min, 1]; "a:b:N": linear,
// inclusive; otherwise a comma list.
std::vector<double> parse_theta_grid(const std::string& spec) {
    const std::string flag = "--theta-grid";
    std::vector<double> out;
    if (spec.empty()) throw ParameterError(flag + ": empty grid");
    if (spec.rfind("log:", 0) == 0) {
        auto parts = split(spec.substr(4), ':');
        if (parts.empty() || parts.size() > 2) throw ParameterError(flag + ": expected log:N[:min]");
        const long long count = parse_int(parts[0], flag);
        const double lo = parts.size() == 2 ? parse_double(parts[1], flag) : 1e-6;
        if (count < 2 || !(lo > 0.0 && lo < 1.0))
            throw ParameterError(flag + ": log grid needs N >= 2 and 0 < min < 1");
        out = MinDilatationConfig::default_thetas(static_cast<std::size_t>(count), lo);
    } else if (spec.find(':') != std::string::npos) {
        auto parts = split(spec, ':');
        if (parts.size() != 3) throw ParameterError(flag + ": expected a:b:N");
        const double a = parse_double(parts[0], flag), b = parse_double(parts[1], flag);
        const long long count = parse_int(parts[2], flag);
        if (count < 1) throw ParameterError(flag + ": N must be positive");
        for (long long i = 0; i < count; ++i)
            out.push_back(count == 1 ? a : a + (b - a) * double(i) / double(count - 1));
    } else if (spec.find_first_of(".,eE") == std::string::npos) {
        const long long count = parse_int(spec, flag);
        if (count < 1) throw ParameterError(flag + ": N must be positive");
        for (long long i = 1; i <= count; ++i) out.push_back((double(i) - 0.5) / double(count));
    } else {
        for (const auto& p : split(spec, ',')) out.push_back(parse_double(p, flag));
    }
    for (double t : out)
        if (!(t > 0.0 && t <= 1.0)) throw ParameterError(flag + ": theta " + num(t) + " outside (0,1]");
    return out;
}

// "auto", "dyadic:kmin:kmax" or "list:r1,r2,...".
ScaleGrid parse_scales(const std::string& spec, const PointSet& x, double theta) {
    const std::string flag = "--scales";
    if (spec == "auto") return ScaleGrid::dyadic_for(x, theta);
    if (spec.rfind("dyadic:", 0) == 0) {
        auto parts = split(spec.substr(7), ':');
        if (parts.size() != 2) throw ParameterError(flag + ": expected dyadic:kmin:kmax");
        return ScaleGrid::dyadic(x.ambient_dim(), static_cast<int>(parse_int(parts[0], flag)),
                                 static_cast<int>(parse_int(parts[1], flag)));
    }
    if (spec.rfind("list:", 0) == 0) {
        std::vector<double> r;
        for (const auto& p : split(spec.substr(5), ',')) r.push_back(parse_double(p, flag));
        return ScaleGrid(std::move(r));
    }
    throw ParameterError(flag + ": unknown scale spec '" + spec + "'");
}

SobolevExponentModel parse_model(const std::optional<std::string>& spec, int n) {
    if (!spec) return SobolevExponentModel::default_for(n);
    if (*spec == "exact_2d") return SobolevExponentModel::exact_2d();
    if (*spec == "conjectured") return SobolevExponentModel::conjectured();
    if (spec->rfind("im:", 0) == 0)
        return SobolevExponentModel::iwaniec_martin(parse_double(spec->substr(3), "--model"));
    throw ParameterError("--model: expected exact_2d, conjectured or im:<lambda>, got '" + *spec + "'");
}

CarpetSpec resolve_carpet(const std::string& spec) {
    if (spec == "E") return example_carpet_e();
    if (spec == "E_prime") return example_carpet_e_prime();
    return load_carpet_spec(spec);
}

std::vector<double> comma_numbers(const std::string& s, std::size_t count, const std::string& what) {
    auto parts = split(s, ',');
    if (parts.size() != count)
        throw ParameterError(what + ": expected " + std::to_string(count) + " comma-separated values");
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_double(p, what));
    return out;
}

int as_int(double v, const std::string& what) {
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ParameterError(what + ": expected an integer");
    return static_cast<int>(v);
}

// seq:<s>, bm:<file|E|E_prime>, gset:s,n,alpha, perc:n,M,p. `n` sets the ambient
// dimension of sequence sets and must match the others when given.
ProfileBundle parse_bundle(const std::string& spec, const std::string& flag, std::optional<int> n) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ParameterError(flag + ": expected <family>:<params>, got '" + spec + "'");
    const std::string fam = spec.substr(0, colon), rest = spec.substr(colon + 1);
    ProfileBundle b;
    if (fam == "seq") {
        const int dim = n.value_or(1);
        if (dim < 1) throw ParameterError("--n: must be positive");
        b = seq_bundle(parse_double(rest, flag), static_cast<std::size_t>(dim));
    } else if (fam == "bm") {
        b = bm_bundle(resolve_carpet(rest));
    } else if (fam == "gset") {
        auto v = comma_numbers(rest, 3, flag);
        b = g_set_bundle(v[0], as_int(v[1], flag), v[2]);
    } else if (fam == "perc") {
        auto v = comma_numbers(rest, 3, flag);
        b = percolation_bundle(as_int(v[0], flag), as_int(v[1], flag), v[2]);
        if (b.profiles.empty()) throw ParameterError(flag + ": percolation parameters give extinction a.s.");
    } else {
        throw ParameterError(flag + ": unknown family '" + fam + "'");
    }
    if (n && static_cast<int>(b.ambient_dim) != *n)
        throw ParameterError(flag + ": family lives in R^" + std::to_string(b.ambient_dim) +
                             " but --n is " + std::to_string(*n));
    return b;
}

void emit(const std::string& text, const std::optional<std::string>& path, std::ostream& out) {
    if (!path) {
        out << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw ParameterError("--output: cannot open '" + *path + "' for writing");
    f << text;
    if (!f) throw ParameterError("--output: write to '" + *path + "' failed");
}

struct Row {
    double theta;
    double value;
    std::optional<double> residual;
};

std::string csv(const std::vector<Row>& rows) {
    std::string s = "theta,value,residual\n";
    for (const auto& r : rows)
        s += num(r.theta) + "," + num(r.value) + "," + (r.residual ? num(*r.residual) : "") + "\n";
    return s;
}

std::string format_choice(const std::string& f) {
    if (f != "json" && f != "csv" && f != "svg")
        throw ParameterError("--format: expected json, csv or svg, got '" + f + "'");
    return f;
}

// ---------------------------------------------------------------------------

struct GenArgs {
    std::string family;
    std::optional<double> s, p, alpha;
    std::optional<std::int64_t> mmax, side;
    std::optional<int> n, M, depth, level;
    std::optional<std::string> spec, a, b, output;
    std::uint64_t seed = 0;
    std::string format = "json";
};

int cmd_gen(const GenArgs& g, std::ostream& out) {
    const std::string ctx = "gen " + g.family;
    PointFormat fmt;
    if (g.format == "json") fmt = PointFormat::json;
    else if (g.format == "binary") fmt = PointFormat::binary;
    else throw ParameterError("--format: expected json or binary, got '" + g.format + "'");

    std::optional<PointSet> x;
    if (g.family == "seq") {
        x = gen_sequence_set(need(g.s, ctx, "--s"), need(g.mmax, ctx, "--mmax"));
    } else if (g.family == "product") {
        x = gen_product(load_point_set(need(g.a, ctx, "--a")), load_point_set(need(g.b, ctx, "--b")));
    } else if (g.family == "bm") {
        x = gen_bm_carpet(resolve_carpet(need(g.spec, ctx, "--spec")), need(g.level, ctx, "--level"));
    } else if (g.family == "percolation") {
        PercolationSpec ps{need(g.n, ctx, "--n"), need(g.M, ctx, "--M"), need(g.p, ctx, "--p"),
                           need(g.depth, ctx, "--depth"), g.seed};
        auto smp = gen_percolation(ps);
        if (smp.extinct()) {
            out << "extinct\n";
            return 0;
        }
        x = *smp.points;
    } else if (g.family == "gstretch") {
        x = gen_radial_stretch_grid(need(g.s, ctx, "--s"), need(g.n, ctx, "--n"),
                                    need(g.alpha, ctx, "--alpha"), need(g.mmax, ctx, "--mmax"));
    } else if (g.family == "cube") {
        x = gen_uniform_grid(need(g.n, ctx, "--n"), need(g.side, ctx, "--side"));
    } else {
        throw ParameterError("gen: unknown family '" + g.family +
                             "' (seq, product, bm, percolation, gstretch, cube)");
    }
    if (g.output) save_point_set(*g.output, *x, fmt);
    json summary = {{"count", x->size()},
                    {"ambient_dim", x->ambient_dim()},
                    {"bbox", {{"lo", x->bbox().lo}, {"hi", x->bbox().hi}}},
                    {"resolution", x->resolution()},
                    {"provenance", x->provenance()}};
    if (g.output) summary["output"] = *g.output;
    out << summary.dump(2) << "\n";
    return 0;
}

struct EstimateArgs {
    std::string input, kind, scales = "auto", format = "json";
    std::optional<double> theta;
    std::optional<std::string> theta_grid, family, output;
    std::size_t max_centers = 4096;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
    const std::string fmt = format_choice(a.format);
    const DimensionKind kind = parse_kind(a.kind);
    if (kind != DimensionKind::box && kind != DimensionKind::intermediate &&
        kind != DimensionKind::assouad_spectrum)
        throw ParameterError("--kind: estimate supports box, intermediate and assouad_spectrum");
    if (a.theta && a.theta_grid) throw ParameterError("--theta and --theta-grid are exclusive");

    std::vector<double> thetas;
    if (kind == DimensionKind::box) {
        if (a.theta || a.theta_grid) throw ParameterError("--theta: not used with --kind box");
        thetas = {1.0};
    } else if (a.theta_grid) {
        thetas = parse_theta_grid(*a.theta_grid);
    } else {
        thetas = {a.theta.value_or(0.5)};
    }

    const PointSet x = load_point_set(a.input);
    EstimateOptions opt;
    opt.max_centers = a.max_centers;
    std::vector<json> reports;
    std::vector<Row> rows;
    for (double t : thetas) {
        const ScaleGrid g = parse_scales(a.scales, x, t);
        if (kind == DimensionKind::box) {
            auto e = box_dim_estimate(x, g);
            rows.push_back({1.0, e.value, e.fit.residual});
            reports.push_back(to_json(e));
        } else if (kind == DimensionKind::intermediate) {
            auto e = intermediate_dim_estimate(x, t, g, opt);
            rows.push_back({t, e.value, e.fit.residual});
            reports.push_back(to_json(e));
        } else {
            auto e = assouad_spectrum_estimate(x, t, g, opt);
            rows.push_back({t, e.value, e.fit.residual});
            reports.push_back(to_json(e));
        }
    }

    std::string text;
    if (fmt == "json") {
        text = (reports.size() == 1 ? reports.front() : json(reports)).dump(2) + "\n";
    } else if (fmt == "csv") {
        text = csv(rows);
    } else {
        std::vector<Series> series;
        Series est{"estimate", {}, {}, true};
        for (const auto& r : rows) est.x.push_back(r.theta), est.y.push_back(r.value);
        series.push_back(est);
        if (a.family) {
            const ProfileBundle b = parse_bundle(*a.family, "--family", std::nullopt);
            const DimensionProfile& p = b.at(kind);
            Series cf{"closed form (" + b.family + ")", {}, {}, false};
            const double lo = thetas.front(), hi = thetas.back();
            const int steps = thetas.size() > 1 ? 200 : 1;
            for (int i = 0; i <= steps; ++i) {
                double t = steps == 1 ? lo : lo + (hi - lo) * i / steps;
                if (kind == DimensionKind::assouad_spectrum && t >= 1.0) continue;
                cf.x.push_back(t);
                cf.y.push_back(p(t));
            }
            series.push_back(cf);
        }
        text = svg_plot(std::string(to_string(kind)) + " estimate", "theta", "dimension", series);
    }
    emit(text, a.output, out);
    return 0;
}

struct FormulaArgs {
    std::string family, kind, format = "json";
    std::optional<double> s, alpha, p, theta;
    std::optional<int> n, M;
    std::optional<std::string> spec, theta_grid, output;
};

std::string family_spec(const std::string& name, const std::optional<double>& s,
                        const std::optional<int>& n, const std::optional<int>& M,
                        const std::optional<double>& p, const std::optional<double>& alpha,
                        const std::optional<std::string>& carpet, const std::string& ctx) {
    if (name.find(':') != std::string::npos) return name;
    if (name == "seq") return "seq:" + num(need(s, ctx, "--s"));
    if (name == "bm") return "bm:" + need(carpet, ctx, "--spec");
    if (name == "gset")
        return "gset:" + num(need(s, ctx, "--s")) + "," + std::to_string(need(n, ctx, "--n")) + "," +
               num(need(alpha, ctx, "--alpha"));
    if (name == "perc" || name == "percolation")
        return "perc:" + std::to_string(need(n, ctx, "--n")) + "," + std::to_string(need(M, ctx, "--M")) +
               "," + num(need(p, ctx, "--p"));
    throw ParameterError(ctx + ": unknown family '" + name + "' (seq, bm, gset, perc)");
}

int cmd_formula(const FormulaArgs& a, std::ostream& out) {
    const std::string fmt = format_choice(a.format);
    const std::string ctx = "formula " + a.family;
    const std::string spec = family_spec(a.family, a.s, a.n, a.M, a.p, a.alpha, a.spec, ctx);
    // Only sequence sets take their ambient dimension from --n.
    const ProfileBundle b =
        a.family == "seq" && a.n ? parse_bundle(spec, "formula", *a.n) : parse_bundle(spec, "formula", {});
    const DimensionKind kind = parse_kind(a.kind);
    const DimensionProfile& prof = b.at(kind);
    if (a.theta && a.theta_grid) throw ParameterError("--theta and --theta-grid are exclusive");
    std::vector<double> thetas;
    if (a.theta_grid) thetas = parse_theta_grid(*a.theta_grid);
    else if (a.theta) thetas = {*a.theta};
    else thetas = {kind == DimensionKind::assouad_spectrum ? 0.5 : 1.0};

    std::string text;
    if (fmt == "json") {
        text = profile_to_json(prof, thetas).dump(2) + "\n";
    } else {
        std::vector<Row> rows;
        for (double t : thetas) rows.push_back({t, prof(t), std::nullopt});
        if (fmt == "csv") {
            text = csv(rows);
        } else {
            Series cf{b.family, {}, {}, false};
            for (const auto& r : rows) cf.x.push_back(r.theta), cf.y.push_back(r.value);
            text = svg_plot(std::string(to_string(kind)) + " of " + b.family, "theta", "dimension", {cf});
        }
    }
    emit(text, a.output, out);
    return 0;
}

struct BoundArgs {
    std::string op;
    std::optional<double> dim, K, alpha, p, s, t, p_rh, p_rh_inverse, tol;
    std::optional<int> n;
    std::optional<std::string> model, e, f, theta_grid, output;
    bool empirical = false;
};

DistortionContext make_context(const BoundArgs& a, const std::string& ctx) {
    DistortionContext c;
    c.n = need(a.n, ctx, "--n");
    c.K = need(a.K, ctx, "--K");
    c.p_model = parse_model(a.model, c.n);
    c.p_rh = a.p_rh;
    c.p_rh_inverse = a.p_rh_inverse;
    c.validate();
    return c;
}

int cmd_bound(const BoundArgs& a, std::ostream& out) {
    const std::string ctx = "bound " + a.op;
    json r;
    if (a.op == "qc") {
        r = to_json(qc_interval(need(a.dim, ctx, "--dim"), make_context(a, ctx)));
    } else if (a.op == "hausdorff") {
        r = to_json(hausdorff_distortion_bounds(need(a.dim, ctx, "--dim"), make_context(a, ctx)));
    } else if (a.op == "hoelder") {
        r = {{"value", hoelder_upper(need(a.dim, ctx, "--dim"), need(a.alpha, ctx, "--alpha"), a.n)}};
    } else if (a.op == "sobolev") {
        r = {{"value",
              sobolev_upper(need(a.dim, ctx, "--dim"), need(a.n, ctx, "--n"), need(a.p, ctx, "--p"))}};
    } else if (a.op == "psob") {
        const int n = need(a.n, ctx, "--n");
        const auto model = parse_model(a.model, n);
        const auto ps = p_sob(n, need(a.K, ctx, "--K"), model);
        r = {{"value", std::isfinite(ps.value) ? json(ps.value) : json("inf")},
             {"tag", to_string(ps.tag)},
             {"model", model.name()}};
    } else if (a.op == "tau") {
        r = {{"value", tau(need(a.s, ctx, "--s"), need(a.n, ctx, "--n"), need(a.p, ctx, "--p"))}};
    } else if (a.op == "phi") {
        r = {{"value", phi(need(a.s, ctx, "--s"), need(a.n, ctx, "--n"))}};
    } else if (a.op == "spectrum") {
        const DistortionContext c = make_context(a, ctx);
        const ProfileBundle b = parse_bundle(need(a.e, ctx, "--e"), "--e", c.n);
        r = to_json(assouad_spectrum_qc_bounds(b.at(DimensionKind::assouad_spectrum), c,
                                               need(a.t, ctx, "--t")));
    } else if (a.op == "sharpness") {
        const std::vector<double> thetas = parse_theta_grid(a.theta_grid.value_or("99"));
        std::optional<EmpiricalSharpnessConfig> emp;
        if (a.empirical) emp = EmpiricalSharpnessConfig{};
        r = to_json(radial_stretch_sharpness_check(need(a.s, ctx, "--s"), need(a.alpha, ctx, "--alpha"),
                                                   need(a.K, ctx, "--K"), thetas, emp));
    } else if (a.op == "extremality") {
        const std::vector<double> thetas = parse_theta_grid(a.theta_grid.value_or("99"));
        const ProfileBundle e = parse_bundle(need(a.e, ctx, "--e"), "--e", a.n);
        const ProfileBundle f = parse_bundle(need(a.f, ctx, "--f"), "--f", a.n);
        r = to_json(extremality_transfer_check(e, f, need(a.K, ctx, "--K"), thetas, a.tol.value_or(1e-10)));
    } else {
        throw ParameterError("bound: unknown operation '" + a.op +
                             "' (qc, hausdorff, hoelder, sobolev, psob, tau, phi, spectrum, "
                             "sharpness, extremality)");
    }
    emit(r.dump(2) + "\n", a.output, out);
    return 0;
}

struct ClassifyArgs {
    std::string e, f;
    std::optional<int> n;
    std::optional<std::string> model, theta_grid, t_grid, output;
    bool no_hoelder = false, no_sobolev = false, no_refine = false, no_extrapolate = false;
    bool assouad_spectrum = false;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
    const ProfileBundle e = parse_bundle(a.e, "--e", a.n);
    const ProfileBundle f = parse_bundle(a.f, "--f", a.n);
    MinDilatationConfig cfg;
    cfg.model = parse_model(a.model, static_cast<int>(e.ambient_dim));
    if (a.theta_grid) cfg.thetas = parse_theta_grid(*a.theta_grid);
    if (a.t_grid) {
        for (const auto& p : split(*a.t_grid, ',')) {
            const double t = parse_double(p, "--t-grid");
            if (!(t > 0.0)) throw ParameterError("--t-grid: values must be positive");
            cfg.t_grid.push_back(t);
        }
    }
    cfg.use_hoelder = !a.no_hoelder;
    cfg.use_sobolev = !a.no_sobolev;
    cfg.refine = !a.no_refine;
    cfg.extrapolate = !a.no_extrapolate;
    cfg.include_assouad_spectrum = a.assouad_spectrum;
    if (!cfg.use_hoelder && !cfg.use_sobolev && !cfg.include_assouad_spectrum)
        throw ParameterError("--no-hoelder/--no-sobolev: every rule is disabled");
    emit(to_json(min_dilatation(e, f, cfg)).dump(2) + "\n", a.output, out);
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& format, std::ostream& out) {
    if (format != "table" && format != "json")
        throw ParameterError("--format: expected table or json, got '" + format + "'");
    const auto results = verify::run(suite);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed();
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : results) arr.push_back(verify::to_json(r));
        out << arr.dump(2) << "\n";
        return ok ? 0 : 1;
    }
    std::size_t width = 0;
    for (const auto& r : results)
        for (const auto& c : r.checks) width = std::max(width, c.name.size());
    std::size_t failed = 0, total = 0;
    for (const auto& r : results) {
        out << "[" << r.suite << "]\n";
        for (const auto& c : r.checks) {
            ++total;
            if (!c.passed) ++failed;
            out << "  " << (c.passed ? "PASS" : "FAIL") << "  " << c.name
                << std::string(width - c.name.size() + 2, ' ') << c.detail << "\n";
        }
    }
    out << (total - failed) << "/" << total << " checks passed\n";
    return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractal dimension estimation and quasiconformal distortion bounds", "dimlab"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a point set and write it to a file");
    g->add_option("family", gen.family, "seq, product, bm, percolation, gstretch or cube")->required();
    g->add_option("--s", gen.s, "Sequence exponent s");
    g->add_option("--mmax", gen.mmax, "Largest index m");
    g->add_option("--a", gen.a, "First factor (point set file)");
    g->add_option("--b", gen.b, "Second factor (point set file)");
    g->add_option("--spec", gen.spec, "Carpet spec JSON, or E / E_prime");
    g->add_option("--level", gen.level, "Carpet level");
    g->add_option("--n", gen.n, "Ambient dimension");
    g->add_option("--M", gen.M, "Percolation base");
    g->add_option("--p", gen.p, "Retention probability");
    g->add_option("--depth", gen.depth, "Percolation depth");
    g->add_option("--alpha", gen.alpha, "Stretch exponent");
    g->add_option("--side", gen.side, "Grid side length (cube)");
    g->add_option("--seed", gen.seed, "RNG seed");
    g->add_option("-o,--output", gen.output, "Output path");
    g->add_option("--format", gen.format, "json or binary");

    EstimateArgs est;
    auto* e = app.add_subcommand("estimate", "Estimate a dimension of a point set");
    e->add_option("input", est.input, "Point set file")->required();
    e->add_option("--kind", est.kind, "box, intermediate or assouad_spectrum")->required();
    e->add_option("--theta", est.theta, "Single theta");
    e->add_option("--theta-grid", est.theta_grid, "N, log:N[:min], a:b:N or a comma list");
    e->add_option("--scales", est.scales, "auto, dyadic:kmin:kmax or list:r1,r2,...");
    e->add_option("--max-centers", est.max_centers, "Center budget for the spectrum scan");
    e->add_option("--family", est.family, "Closed-form overlay for SVG output, e.g. seq:1");
    e->add_option("--format", est.format, "json, csv or svg");
    e->add_option("-o,--output", est.output, "Output path (default stdout)");

    FormulaArgs fo;
    auto* f = app.add_subcommand("formula", "Evaluate a closed-form dimension profile");
    f->add_option("family", fo.family, "seq, bm, gset, perc, or a full spec like seq:1")->required();
    f->add_option("--kind", fo.kind, "Dimension kind")->required();
    f->add_option("--s", fo.s, "Exponent s");
    f->add_option("--n", fo.n, "Ambient dimension");
    f->add_option("--M", fo.M, "Percolation base");
    f->add_option("--p", fo.p, "Retention probability");
    f->add_option("--alpha", fo.alpha, "Stretch exponent");
    f->add_option("--spec", fo.spec, "Carpet spec JSON, or E / E_prime");
    f->add_option("--theta", fo.theta, "Single theta");
    f->add_option("--theta-grid", fo.theta_grid, "N, log:N[:min], a:b:N or a comma list");
    f->add_option("--format", fo.format, "json, csv or svg");
    f->add_option("-o,--output", fo.output, "Output path (default stdout)");

    BoundArgs bo;
    auto* b = app.add_subcommand("bound", "Evaluate a distortion bound");
    b->add_option("op", bo.op,
                  "qc, hausdorff, hoelder, sobolev, psob, tau, phi, spectrum, sharpness, extremality")
        ->required();
    b->add_option("--dim", bo.dim, "Dimension of the source set");
    b->add_option("--n", bo.n, "Ambient dimension");
    b->add_option("--K", bo.K, "Dilatation");
    b->add_option("--alpha", bo.alpha, "Hoelder or stretch exponent");
    b->add_option("--p", bo.p, "Sobolev exponent");
    b->add_option("--s", bo.s, "Dimension argument s");
    b->add_option("--t", bo.t, "Spectrum parameter t");
    b->add_option("--model", bo.model, "exact_2d, conjectured or im:<lambda>");
    b->add_option("--p-rh", bo.p_rh, "Reverse Hoelder exponent at K");
    b->add_option("--p-rh-inverse", bo.p_rh_inverse, "Reverse Hoelder exponent at K^(n-1)");
    b->add_option("--e", bo.e, "Source family, e.g. seq:1");
    b->add_option("--f", bo.f, "Image family");
    b->add_option("--theta-grid", bo.theta_grid, "N, log:N[:min], a:b:N or a comma list");
    b->add_option("--tol", bo.tol, "Tolerance for the extremality check");
    b->add_flag("--empirical", bo.empirical, "Also run the point-cloud variant of the sharpness check");
    b->add_option("-o,--output", bo.output, "Output path (default stdout)");

    ClassifyArgs cl;
    auto* c = app.add_subcommand("classify", "Lower bound on the dilatation of maps sending E onto F");
    c->add_option("--e", cl.e, "Source family")->required();
    c->add_option("--f", cl.f, "Image family")->required();
    c->add_option("--n", cl.n, "Ambient dimension");
    c->add_option("--model", cl.model, "exact_2d, conjectured or im:<lambda>");
    c->add_option("--theta-grid", cl.theta_grid, "N, log:N[:min], a:b:N or a comma list");
    c->add_option("--t-grid", cl.t_grid, "Comma list of spectrum parameters t");
    c->add_flag("--no-hoelder", cl.no_hoelder, "Drop the Hoelder rule");
    c->add_flag("--no-sobolev", cl.no_sobolev, "Drop the Sobolev rules");
    c->add_flag("--no-refine", cl.no_refine, "Skip the golden-section polish");
    c->add_flag("--no-extrapolate", cl.no_extrapolate, "Skip extrapolation to theta -> 0");
    c->add_flag("--assouad-spectrum", cl.assouad_spectrum, "Include the Assouad spectrum rule");
    c->add_option("-o,--output", cl.output, "Output path (default stdout)");

    std::string suite, vformat = "table";
    auto* v = app.add_subcommand("verify", "Run a verification suite");
    v->add_option("suite", suite, "Suite name or all")->required();
    v->add_option("--format", vformat, "table or json");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    if (!argv.empty()) argv.pop_back();  // program name
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*g) return cmd_gen(gen, out);
        if (*e) return cmd_estimate(est, out);
        if (*f) return cmd_formula(fo, out);
        if (*b) return cmd_bound(bo, out);
        if (*c) return cmd_classify(cl, out);
        if (*v) return cmd_verify(suite, vformat, out);
    } catch (const ConsistencyError& ex) {
        err << "internal consistency error: " << ex.what() << "\n";
        return 1;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    } catch (const json::exception& ex) {
        err << "error: malformed JSON input: " << ex.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        err << "unexpected failure: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace dimlab::cli
