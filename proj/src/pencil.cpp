#include "pencil/pencil.hpp"

#include <algorithm>
#include <cmath>

namespace pencil {

CoefficientTable::CoefficientTable(Interval span, std::vector<Node> nodes)
    : span_(span)
    , nodes_(std::move(nodes))
{
    if (nodes_.size() < 2 || !(span_.lo < span_.hi)) {
        throw ConfigError("coefficient table needs at least two nodes over a non-empty span");
    }
    h_ = span_.length() / static_cast<double>(nodes_.size() - 1);
}

std::pair<double, double> CoefficientTable::evaluate(double s) const
{
    const auto last_cell = static_cast<std::ptrdiff_t>(nodes_.size()) - 2;
    auto k = static_cast<std::ptrdiff_t>(std::floor((s - span_.lo) / h_));
    k = std::clamp<std::ptrdiff_t>(k, 0, last_cell);

    const Node& a = nodes_[static_cast<std::size_t>(k)];
    const Node& b = nodes_[static_cast<std::size_t>(k + 1)];
    if (a.state == NodeState::Infeasible || b.state == NodeState::Infeasible) {
        throw InfeasibleConstant("coefficient table excludes s = " + std::to_string(s) + " (infeasible constant)");
    }
    if (a.state == NodeState::Undefined || b.state == NodeState::Undefined) {
        throw InflectionPoint("coefficient table excludes s = " + std::to_string(s) + " (frame undefined)");
    }

    const double x = (s - (span_.lo + static_cast<double>(k) * h_)) / h_;
    const double x2 = x * x, x3 = x2 * x;
    const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x;
    const double h01 = -2 * x3 + 3 * x2, h11 = x3 - x2;
    const double d00 = 6 * x2 - 6 * x, d10 = 3 * x2 - 4 * x + 1;
    const double d01 = -6 * x2 + 6 * x, d11 = 3 * x2 - 2 * x;

    const double value = h00 * a.value + h10 * h_ * a.slope + h01 * b.value + h11 * h_ * b.slope;
    const double slope = (d00 * a.value + d01 * b.value) / h_ + d10 * a.slope + d11 * b.slope;
    return {value, slope};
}

MarchingScale MarchingScale::product(
    std::string_view l,
    std::string_view m,
    std::string_view n,
    std::string_view U,
    std::string_view V,
    std::string_view W,
    std::string s_name,
    std::string t_name)
{
    const std::array<std::string, 1> svars{s_name};
    const std::array<std::string, 1> tvars{t_name};
    MarchingScale ms;
    ms.form = ProductForm{
        Expression::parse(l, svars),
        Expression::parse(m, svars),
        Expression::parse(n, svars),
        Expression::parse(U, tvars),
        Expression::parse(V, tvars),
        Expression::parse(W, tvars),
    };
    ms.s_name = std::move(s_name);
    ms.t_name = std::move(t_name);
    return ms;
}

MarchingScale MarchingScale::general(
    std::string_view u,
    std::string_view v,
    std::string_view w,
    std::string s_name,
    std::string t_name)
{
    const std::array<std::string, 2> vars{s_name, t_name};
    MarchingScale ms;
    ms.form = GeneralForm{
        Expression::parse(u, vars),
        Expression::parse(v, vars),
        Expression::parse(w, vars),
    };
    ms.s_name = std::move(s_name);
    ms.t_name = std::move(t_name);
    return ms;
}

namespace {

std::pair<double, double> value_and_slope(const Coefficient& c, const std::string& name, double at)
{
    if (const auto* e = std::get_if<Expression>(&c)) {
        const Jet3 j = e->evaluate_jet3(name, at);
        return {j.v0, j.v1};
    }
    return std::get<CoefficientTable>(c).evaluate(at);
}

std::pair<double, double> value_and_slope(const Expression& e, const std::string& name, double at)
{
    const Jet3 j = e.evaluate_jet3(name, at);
    return {j.v0, j.v1};
}

} // namespace

MarchingValues marching_values(const MarchingScale& ms, double s, double t)
{
    MarchingValues mv;
    if (const auto* pf = std::get_if<ProductForm>(&ms.form)) {
        auto component = [&](const Coefficient& a, const Expression& b, double ctl, double& f, double& fs, double& ft) {
            const auto [av, as] = value_and_slope(a, ms.s_name, s);
            const auto [bv, bt] = value_and_slope(b, ms.t_name, t);
            f = ctl * av * bv;
            fs = ctl * as * bv;
            ft = ctl * av * bt;
        };
        component(pf->l, pf->U, ms.x, mv.u, mv.u_s, mv.u_t);
        component(pf->m, pf->V, ms.y, mv.v, mv.v_s, mv.v_t);
        component(pf->n, pf->W, ms.z, mv.w, mv.w_s, mv.w_t);
    } else {
        const auto& gf = std::get<GeneralForm>(ms.form);
        auto component = [&](const Expression& e, double ctl, double& f, double& fs, double& ft) {
            const Jet3 js = e.evaluate_jet3(ms.s_name, s, {{ms.t_name, t}});
            const Jet3 jt = e.evaluate_jet3(ms.t_name, t, {{ms.s_name, s}});
            f = ctl * js.v0;
            fs = ctl * js.v1;
            ft = ctl * jt.v1;
        };
        component(gf.u, ms.x, mv.u, mv.u_s, mv.u_t);
        component(gf.v, ms.y, mv.v, mv.v_s, mv.v_t);
        component(gf.w, ms.z, mv.w, mv.w_s, mv.w_t);
    }
    return mv;
}

SurfacePencil make_pencil(CurveSpec curve, MarchingScale marching, Interval t_range, std::size_t check_samples)
{
    if (!(t_range.lo <= t_range.hi)) throw ConfigError("t range must satisfy min <= max");
    if (!t_range.contains(marching.t0)) throw ConfigError("t0 must lie inside the t range");
    for (std::size_t i = 0; i < check_samples; ++i) {
        const double s = curve.domain.sample(i, check_samples);
        MarchingValues mv;
        try {
            mv = marching_values(marching, s, marching.t0);
        } catch (const Error&) {
            continue;
        }
        const double worst = std::max({std::abs(mv.u), std::abs(mv.v), std::abs(mv.w)});
        if (worst > 1e-12) {
            throw ConfigError(
                "marching-scale functions do not vanish at t0 (|u|,|v|,|w| up to " + std::to_string(worst)
                + " at " + marching.s_name + " = " + std::to_string(s) + ")");
        }
    }
    return SurfacePencil{std::move(curve), std::move(marching), t_range};
}

CurveFrame curve_frame(const CurveSpec& curve, double s)
{
    return CurveFrame{s, curve_point(curve, s), frenet_at(curve, s)};
}

Vec3 surface_point(const CurveFrame& frame, const MarchingValues& mv)
{
    const auto& f = frame.frenet;
    return frame.r + mv.u * f.T + mv.v * f.N + mv.w * f.B;
}

Partials surface_partials(const CurveFrame& frame, const MarchingValues& mv)
{
    const auto& f = frame.frenet;
    const double rho = f.rho, k = f.kappa, tau = f.tau;
    Partials p;
    p.ds = (rho - rho * k * mv.v + mv.u_s) * f.T + (rho * k * mv.u - rho * tau * mv.w + mv.v_s) * f.N
           + (rho * tau * mv.v + mv.w_s) * f.B;
    p.dt = mv.u_t * f.T + mv.v_t * f.N + mv.w_t * f.B;
    return p;
}

Vec3 surface_normal(const Partials& partials)
{
    const Vec3 c = partials.ds.cross(partials.dt);
    const double cn = c.norm();
    if (!(cn > kRegularityEps * (partials.ds.norm() * partials.dt.norm() + kRegularityEps))) {
        throw DegenerateNormal("surface partials are parallel");
    }
    return c / cn;
}

Vec3 surface_point(const SurfacePencil& p, double s, double t)
{
    return surface_point(curve_frame(p.curve, s), marching_values(p.marching, s, t));
}

Partials surface_partials(const SurfacePencil& p, double s, double t)
{
    return surface_partials(curve_frame(p.curve, s), marching_values(p.marching, s, t));
}

Vec3 surface_normal(const SurfacePencil& p, double s, double t)
{
    return surface_normal(surface_partials(p, s, t));
}

} // namespace pencil
