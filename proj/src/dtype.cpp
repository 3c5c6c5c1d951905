#include "pencil/dtype.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>

namespace pencil {

namespace {

struct SampleOutcome
{
    bool ok = false;
    DTypeSample sample;
};

struct NormalAtCurve
{
    FrenetApparatus frenet;
    MarchingValues marching;
    Vec3 n;
};

NormalAtCurve normal_at_curve(const SurfacePencil& p, double s)
{
    NormalAtCurve out;
    out.frenet = frenet_at(p.curve, s);
    out.marching = marching_values(p.marching, s, p.marching.t0);
    const CurveFrame frame{s, Vec3::Zero(), out.frenet};
    out.n = surface_normal(surface_partials(frame, out.marching));
    return out;
}

SampleOutcome evaluate_sample(const SurfacePencil& p, double s)
{
    SampleOutcome out;
    try {
        const auto at = normal_at_curve(p, s);
        out.sample.s = s;
        out.sample.inner = at.n.dot(at.frenet.W0);
        out.sample.phi2 = at.n.dot(at.frenet.N);
        out.sample.phi3 = at.n.dot(at.frenet.B);
        out.sample.theta = std::atan2(out.sample.phi3, out.sample.phi2);
        out.sample.kappa = at.frenet.kappa;
        out.sample.tau = at.frenet.tau;
        out.ok = true;
    } catch (const InflectionPoint&) {
    } catch (const Irregular&) {
    } catch (const DegenerateNormal&) {
    } catch (const DomainError&) {
    } catch (const InfeasibleConstant&) {
    }
    return out;
}

std::vector<double> sample_parameters(const SurfacePencil& p, const VerifyOptions& options)
{
    if (options.sample_count < 16) throw NotEnoughSamples("verification needs at least 16 samples");
    const Interval range = options.range.value_or(p.curve.domain);
    std::vector<double> params;
    params.reserve(options.sample_count);
    for (std::size_t i = 0; i < options.sample_count; ++i) {
        const double s = range.sample(i, options.sample_count);
        const bool dropped = std::any_of(options.excluded.begin(), options.excluded.end(), [s](const Interval& e) {
            return e.contains(s);
        });
        if (!dropped) params.push_back(s);
    }
    return params;
}

DTypeReport assemble(const std::vector<double>& params, const std::vector<SampleOutcome>& outcomes, const VerifyOptions& options)
{
    DTypeReport report;
    report.tolerance = options.tolerance;
    report.excluded = options.excluded;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (outcomes[i].ok) {
            report.samples.push_back(outcomes[i].sample);
        } else {
            report.skipped.push_back(params[i]);
        }
    }
    if (report.samples.size() < 2) throw NotEnoughSamples("fewer than 2 usable verification samples");

    double sum = 0.0;
    for (const auto& s : report.samples) sum += s.inner;
    report.c_estimate = sum / static_cast<double>(report.samples.size());

    bool unit_phi3 = true;
    bool torsion_free = true;
    for (const auto& s : report.samples) {
        report.max_deviation = std::max(report.max_deviation, std::abs(s.inner - report.c_estimate));
        unit_phi3 = unit_phi3 && std::abs(std::abs(s.phi3) - 1.0) <= options.tolerance;
        torsion_free = torsion_free && std::abs(s.tau) <= options.tolerance;
    }
    report.verdict = report.max_deviation <= options.tolerance;
    report.geodesic = report.verdict && std::abs(report.c_estimate) <= options.tolerance;
    report.asymptotic_planar = report.verdict && unit_phi3 && torsion_free;
    return report;
}

std::string format_number(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::vector<Interval> complement(const Interval& domain, const std::vector<Interval>& parts)
{
    std::vector<Interval> out;
    double cursor = domain.lo;
    for (const auto& part : parts) {
        if (part.lo > cursor) out.push_back({cursor, part.lo});
        cursor = std::max(cursor, part.hi);
    }
    if (cursor < domain.hi) out.push_back({cursor, domain.hi});
    return out;
}

} // namespace

PhiComponents phi_components(const SurfacePencil& p, double s)
{
    const auto at = normal_at_curve(p, s);
    return {at.n.dot(at.frenet.T), at.n.dot(at.frenet.N), at.n.dot(at.frenet.B)};
}

DTypeReport verify_dtype(const SurfacePencil& p, const VerifyOptions& options)
{
    const auto params = sample_parameters(p, options);
    std::vector<SampleOutcome> outcomes(params.size());
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(params.size());

#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            outcomes[static_cast<std::size_t>(i)] = evaluate_sample(p, params[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical(pencil_verify_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return assemble(params, outcomes, options);
}

DTypeReport verify_dtype(const SurfacePencil& p, std::size_t sample_count, double tolerance)
{
    VerifyOptions options;
    options.sample_count = sample_count;
    options.tolerance = tolerance;
    return verify_dtype(p, options);
}

DTypeReport verify_dtype_serial(const SurfacePencil& p, const VerifyOptions& options)
{
    const auto params = sample_parameters(p, options);
    std::vector<SampleOutcome> outcomes;
    outcomes.reserve(params.size());
    for (double s : params) outcomes.push_back(evaluate_sample(p, s));
    return assemble(params, outcomes, options);
}

std::string_view to_string(CorollaryBranch branch)
{
    switch (branch) {
    case CorollaryBranch::None: return "none";
    case CorollaryBranch::Isogeodesic: return "isogeodesic";
    case CorollaryBranch::AsymptoticPlanar: return "asymptotic_planar";
    case CorollaryBranch::Planar: return "planar";
    case CorollaryBranch::GeneralHelix: return "general_helix";
    case CorollaryBranch::Salkowski: return "salkowski";
    case CorollaryBranch::AntiSalkowski: return "anti_salkowski";
    }
    return "none";
}

double feasibility_radicand(const FrenetApparatus& app, double c)
{
    const double ratio = (app.kappa * app.kappa + app.tau * app.tau) / (app.kappa * app.kappa);
    return 1.0 - c * c * ratio;
}

TheoremCheck check_theorem_conditions(
    const SurfacePencil& p,
    double c,
    int sign,
    std::size_t sample_count,
    double tol)
{
    if (sample_count < 16) throw NotEnoughSamples("theorem check needs at least 16 samples");
    const double branch = sign < 0 ? -1.0 : 1.0;

    double iso = 0.0, phi1 = 0.0, phi2 = 0.0, phi3 = 0.0;
    TheoremCheck out;
    for (std::size_t i = 0; i < sample_count; ++i) {
        const double s = p.curve.domain.sample(i, sample_count);
        NormalAtCurve at;
        try {
            at = normal_at_curve(p, s);
        } catch (const InflectionPoint&) {
            ++out.skipped;
            continue;
        } catch (const Irregular&) {
            ++out.skipped;
            continue;
        } catch (const DegenerateNormal&) {
            ++out.skipped;
            continue;
        } catch (const DomainError&) {
            ++out.skipped;
            continue;
        }
        ++out.used;
        const auto& f = at.frenet;
        const double radicand = feasibility_radicand(f, c);
        if (radicand < -tol) {
            throw InfeasibleConstant(
                "c = " + std::to_string(c) + " needs c^2(k^2+t^2)/k^2 <= 1 but the radicand is "
                + std::to_string(radicand) + " at " + p.curve.param + " = " + std::to_string(s));
        }
        const auto& mv = at.marching;
        iso = std::max({iso, std::abs(mv.u), std::abs(mv.v), std::abs(mv.w)});
        phi1 = std::max(phi1, std::abs(at.n.dot(f.T)));
        const double expected3 = c * std::hypot(f.kappa, f.tau) / f.kappa;
        const double expected2 = branch * std::sqrt(std::max(0.0, radicand));
        phi3 = std::max(phi3, std::abs(at.n.dot(f.B) - expected3));
        phi2 = std::max(phi2, std::abs(at.n.dot(f.N) - expected2));
    }
    if (out.used < 2) throw NotEnoughSamples("fewer than 2 usable samples for the theorem check");

    out.conditions = {
        {"isoparametric", iso <= tol, iso},
        {"phi1_zero", phi1 <= tol, phi1},
        {"phi2_branch", phi2 <= tol, phi2},
        {"phi3_value", phi3 <= tol, phi3},
    };
    out.all_pass = std::all_of(out.conditions.begin(), out.conditions.end(), [](const auto& r) { return r.pass; });

    out.curve_class = classify_curve(p.curve, sample_count, std::max(tol, 1e-12));
    const auto& cls = out.curve_class;
    out.special_name = cls.constant_name;
    out.special_value = cls.constant;
    if (std::abs(c) <= tol) {
        out.branch = CorollaryBranch::Isogeodesic;
        out.special_phi3 = 0.0;
        return out;
    }
    switch (cls.kind) {
    case CurveKind::Planar:
        if (std::abs(std::abs(c) - 1.0) <= tol) {
            out.branch = CorollaryBranch::AsymptoticPlanar;
            out.special_phi3 = c;
        } else {
            out.branch = CorollaryBranch::Planar;
            out.special_phi3 = c;
        }
        break;
    case CurveKind::GeneralHelix:
        out.branch = CorollaryBranch::GeneralHelix;
        out.special_phi3 = c * std::sqrt(1.0 + cls.constant * cls.constant);
        break;
    case CurveKind::Salkowski: out.branch = CorollaryBranch::Salkowski; break;
    case CurveKind::AntiSalkowski: out.branch = CorollaryBranch::AntiSalkowski; break;
    case CurveKind::Generic: out.branch = CorollaryBranch::None; break;
    }
    return out;
}

std::vector<Interval> feasible_domain(const CurveSpec& curve, double c, std::size_t sample_count, double min_radicand)
{
    if (sample_count < 64) sample_count = 64;
    auto good = [&](double q) {
        try {
            return feasibility_radicand(frenet_at(curve, q), c) > min_radicand;
        } catch (const InflectionPoint&) {
            return false;
        } catch (const Irregular&) {
            return false;
        }
    };
    // Returns the good-side end of the transition between a bad and a good parameter.
    auto refine = [&](double bad, double ok) {
        while (std::abs(ok - bad) > 1e-9) {
            const double mid = 0.5 * (bad + ok);
            if (good(mid)) {
                ok = mid;
            } else {
                bad = mid;
            }
        }
        return ok;
    };

    std::vector<double> q(sample_count);
    std::vector<char> flag(sample_count);
    for (std::size_t i = 0; i < sample_count; ++i) {
        q[i] = curve.domain.sample(i, sample_count);
        flag[i] = good(q[i]) ? 1 : 0;
    }

    std::vector<Interval> out;
    std::size_t i = 0;
    while (i < sample_count) {
        if (!flag[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < sample_count && flag[j + 1]) ++j;
        const double lo = i == 0 ? curve.domain.lo : refine(q[i - 1], q[i]);
        const double hi = j + 1 == sample_count ? curve.domain.hi : refine(q[j + 1], q[j]);
        out.push_back({lo, hi});
        i = j + 1;
    }
    return out;
}

double feasibility_bound(const CurveSpec& curve, std::size_t sample_count)
{
    double bound = 1.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < sample_count; ++i) {
        try {
            const auto f = frenet_at(curve, curve.domain.sample(i, sample_count));
            bound = std::min(bound, f.kappa / std::hypot(f.kappa, f.tau));
            ++used;
        } catch (const InflectionPoint&) {
        } catch (const Irregular&) {
        }
    }
    if (used == 0) throw NotEnoughSamples("no sample with a defined frame");
    return bound;
}

namespace {

constexpr double kSynthesisRadicandFloor = 1e-12;
constexpr double kTableTolerance = 1e-9;
constexpr std::size_t kTableMinNodes = 129;
constexpr std::size_t kTableMaxNodes = 65537;
constexpr double kSlopeStep = 1e-4;

struct Coefficients
{
    double v = 0.0;
    double w = 0.0;
};

Coefficients synthesized_coefficients(const SynthesisRequest& req, double q)
{
    const auto f = frenet_at(req.curve, q);
    const double radicand = feasibility_radicand(f, req.c);
    if (!(radicand > kSynthesisRadicandFloor)) throw InfeasibleConstant("radicand not positive");
    const double phi3 = req.c * std::hypot(f.kappa, f.tau) / f.kappa;
    const double sign = req.sign < 0 ? -1.0 : 1.0;
    return {phi3 / f.rho, sign * std::sqrt(radicand) / f.rho};
}

using TableNode = CoefficientTable::Node;
using NodeState = CoefficientTable::NodeState;

std::pair<TableNode, TableNode> table_nodes_at(const SynthesisRequest& req, double q)
{
    std::pair<TableNode, TableNode> out;
    auto mark = [&](NodeState state) {
        out.first.state = state;
        out.second.state = state;
    };
    try {
        const Coefficients c0 = synthesized_coefficients(req, q);
        const double h = kSlopeStep;
        const Coefficients p1 = synthesized_coefficients(req, q + h);
        const Coefficients m1 = synthesized_coefficients(req, q - h);
        const Coefficients p2 = synthesized_coefficients(req, q + 2 * h);
        const Coefficients m2 = synthesized_coefficients(req, q - 2 * h);
        out.first.value = c0.v;
        out.second.value = c0.w;
        out.first.slope = (8.0 * (p1.v - m1.v) - (p2.v - m2.v)) / (12.0 * h);
        out.second.slope = (8.0 * (p1.w - m1.w) - (p2.w - m2.w)) / (12.0 * h);
    } catch (const InfeasibleConstant&) {
        mark(NodeState::Infeasible);
    } catch (const InflectionPoint&) {
        mark(NodeState::Undefined);
    } catch (const Irregular&) {
        mark(NodeState::Undefined);
    }
    return out;
}

std::pair<CoefficientTable, CoefficientTable> build_tables(const SynthesisRequest& req, std::size_t n)
{
    std::vector<TableNode> v(n), w(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        std::tie(v[k], w[k]) = table_nodes_at(req, req.curve.domain.sample(k, n));
    }
    return {CoefficientTable(req.curve.domain, std::move(v)), CoefficientTable(req.curve.domain, std::move(w))};
}

/// Largest midpoint interpolation error, relative to max(1, |exact|).
double table_error(const SynthesisRequest& req, const CoefficientTable& v, const CoefficientTable& w)
{
    const auto& nodes = v.nodes();
    const auto cells = static_cast<std::ptrdiff_t>(nodes.size() - 1);
    std::vector<double> err(nodes.size() - 1, 0.0);
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t i = 0; i < cells; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (nodes[k].state != NodeState::Ok || nodes[k + 1].state != NodeState::Ok) continue;
        const double q = v.span().lo + (static_cast<double>(k) + 0.5) * v.spacing();
        try {
            const Coefficients exact = synthesized_coefficients(req, q);
            const double ev = std::abs(v.evaluate(q).first - exact.v) / std::max(1.0, std::abs(exact.v));
            const double ew = std::abs(w.evaluate(q).first - exact.w) / std::max(1.0, std::abs(exact.w));
            err[k] = std::max(ev, ew);
        } catch (const Error&) {
        }
    }
    return *std::max_element(err.begin(), err.end());
}

std::string linear_in_t(double coefficient, const SynthesisRequest& req)
{
    const std::string factor = req.t0 == 0.0 ? req.t_name : "(" + req.t_name + " - " + format_number(req.t0) + ")";
    if (coefficient == 1.0) return factor;
    return format_number(coefficient) + "*" + factor;
}

} // namespace

Synthesis synthesize_marching_scale(const SynthesisRequest& req)
{
    const std::array<std::string, 1> tvars{req.t_name};
    const Expression profile = Expression::parse(req.u_profile, tvars);
    if (std::abs(profile.evaluate({{req.t_name, req.t0}})) > 1e-12) {
        throw ConfigError("u profile must vanish at t0");
    }

    Synthesis out;
    out.feasible = feasible_domain(req.curve, req.c, req.feasibility_samples, kSynthesisRadicandFloor);
    if (out.feasible.empty()) {
        throw InfeasibleConstant(
            "c = " + format_number(req.c) + " is infeasible everywhere on the curve (needs c^2(k^2+t^2) <= k^2)");
    }
    out.excluded = complement(req.curve.domain, out.feasible);

    // Constant curvature and torsion on a unit-speed curve give constant coefficients.
    bool constant = req.curve.declared_unit_speed && out.excluded.empty();
    double kappa = 0.0, tau = 0.0;
    if (constant) {
        const std::size_t n = req.feasibility_samples;
        double kmin = INFINITY, kmax = -INFINITY, tmin = INFINITY, tmax = -INFINITY;
        for (std::size_t i = 0; i < n && constant; ++i) {
            try {
                const auto f = frenet_at(req.curve, req.curve.domain.sample(i, n));
                kmin = std::min(kmin, f.kappa);
                kmax = std::max(kmax, f.kappa);
                tmin = std::min(tmin, f.tau);
                tmax = std::max(tmax, f.tau);
            } catch (const Error&) {
                constant = false;
            }
        }
        kappa = 0.5 * (kmin + kmax);
        tau = 0.5 * (tmin + tmax);
        constant = constant && kmax - kmin <= 1e-12 * (1.0 + kappa) && tmax - tmin <= 1e-12 * (1.0 + std::abs(tau));
    }

    const std::string& s_name = req.curve.param;
    if (constant) {
        const double radicand = 1.0 - req.c * req.c * (kappa * kappa + tau * tau) / (kappa * kappa);
        out.v_coefficient = req.c * std::hypot(kappa, tau) / kappa;
        out.w_coefficient = (req.sign < 0 ? -1.0 : 1.0) * std::sqrt(std::max(0.0, radicand));
        out.closed_form = true;
        out.marching = MarchingScale::product(
            "1",
            "1",
            "1",
            req.u_profile,
            linear_in_t(out.v_coefficient, req),
            linear_in_t(out.w_coefficient, req),
            s_name,
            req.t_name);
    } else {
        std::size_t n = kTableMinNodes;
        auto tables = build_tables(req, n);
        while (n < kTableMaxNodes && table_error(req, tables.first, tables.second) > kTableTolerance) {
            n = 2 * n - 1;
            tables = build_tables(req, n);
        }
        out.table_nodes = n;
        ProductForm form{
            Expression::parse("1", std::array<std::string, 1>{s_name}),
            std::move(tables.first),
            std::move(tables.second),
            profile,
            Expression::parse(linear_in_t(1.0, req), tvars),
            Expression::parse(linear_in_t(1.0, req), tvars),
        };
        out.marching.form = std::move(form);
        out.marching.s_name = s_name;
        out.marching.t_name = req.t_name;
    }
    out.marching.t0 = req.t0;
    return out;
}

} // namespace pencil
