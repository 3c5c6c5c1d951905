#include "pencil/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace pencil {

CurveSpec CurveSpec::parse(
    std::string_view x,
    std::string_view y,
    std::string_view z,
    std::string param,
    Interval domain,
    bool unit_speed)
{
    if (!(domain.lo < domain.hi)) throw ConfigError("curve domain must satisfy min < max");
    const std::array<std::string, 1> vars{param};
    CurveSpec c;
    c.x = Expression::parse(x, vars);
    c.y = Expression::parse(y, vars);
    c.z = Expression::parse(z, vars);
    c.param = std::move(param);
    c.domain = domain;
    c.declared_unit_speed = unit_speed;
    return c;
}

std::array<Jet3, 3> curve_point_jets(const CurveSpec& curve, double q)
{
    return {
        curve.x.evaluate_jet3(curve.param, q),
        curve.y.evaluate_jet3(curve.param, q),
        curve.z.evaluate_jet3(curve.param, q),
    };
}

Vec3 curve_point(const CurveSpec& curve, double q)
{
    const Bindings b{{curve.param, q}};
    return {curve.x.evaluate(b), curve.y.evaluate(b), curve.z.evaluate(b)};
}

FrenetApparatus frenet_at(const CurveSpec& curve, double q)
{
    const auto j = curve_point_jets(curve, q);
    const Vec3 d1(j[0].v1, j[1].v1, j[2].v1);
    const Vec3 d2(j[0].v2, j[1].v2, j[2].v2);
    const Vec3 d3(j[0].v3, j[1].v3, j[2].v3);

    FrenetApparatus app;
    app.rho = d1.norm();
    if (!(app.rho > kRegularityEps)) {
        throw Irregular("curve is not regular at " + curve.param + " = " + std::to_string(q));
    }
    if (curve.declared_unit_speed && std::abs(app.rho - 1.0) > kUnitSpeedTol) {
        throw Irregular(
            "curve declared unit speed but |r'| = " + std::to_string(app.rho) + " at " + curve.param
            + " = " + std::to_string(q));
    }

    const Vec3 c = d1.cross(d2);
    const double cn = c.norm();
    app.kappa = cn / (app.rho * app.rho * app.rho);
    if (!(app.kappa > kInflectionEps * (1.0 + app.rho))) {
        throw InflectionPoint("Frenet frame undefined at " + curve.param + " = " + std::to_string(q));
    }
    app.tau = c.dot(d3) / (cn * cn);
    app.T = d1 / app.rho;
    app.B = c / cn;
    app.N = app.B.cross(app.T);
    app.W0 = darboux_unit(app);
    return app;
}

Vec3 darboux_unit(const FrenetApparatus& app)
{
    const double h = std::hypot(app.kappa, app.tau);
    return (app.tau * app.T + app.kappa * app.B) / h;
}

std::string_view to_string(CurveKind kind)
{
    switch (kind) {
    case CurveKind::Planar: return "Planar";
    case CurveKind::GeneralHelix: return "GeneralHelix";
    case CurveKind::Salkowski: return "Salkowski";
    case CurveKind::AntiSalkowski: return "AntiSalkowski";
    case CurveKind::Generic: return "Generic";
    }
    return "Generic";
}

namespace {

struct Stats
{
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    double mean = 0.0;

    explicit Stats(const std::vector<double>& xs)
    {
        double sum = 0.0;
        for (double v : xs) {
            min = std::min(min, v);
            max = std::max(max, v);
            sum += v;
        }
        mean = sum / static_cast<double>(xs.size());
    }

    bool constant(double tol) const { return max - min <= tol * (1.0 + std::abs(mean)); }
    double deviation() const { return std::max(max - mean, mean - min); }
};

} // namespace

CurveClass classify_curve(const CurveSpec& curve, std::size_t sample_count, double tol)
{
    if (sample_count < 8) throw NotEnoughSamples("classification needs at least 8 samples");

    std::vector<double> kappa, tau, ratio;
    CurveClass out;
    for (std::size_t i = 0; i < sample_count; ++i) {
        const double q = curve.domain.sample(i, sample_count);
        try {
            const auto app = frenet_at(curve, q);
            kappa.push_back(app.kappa);
            tau.push_back(app.tau);
            ratio.push_back(app.tau / app.kappa);
        } catch (const InflectionPoint&) {
            ++out.skipped;
        } catch (const Irregular&) {
            ++out.skipped;
        }
    }
    out.used = kappa.size();
    if (out.used == 0) throw NotEnoughSamples("every classification sample hit an undefined frame");

    const Stats k(kappa), t(tau), d(ratio);
    auto set = [&](CurveKind kind, const char* name, const Stats& s) {
        out.kind = kind;
        out.constant_name = name;
        out.constant = s.mean;
        out.deviation = s.deviation();
    };
    if (t.constant(tol) && std::abs(t.mean) <= tol) {
        set(CurveKind::Planar, "tau", t);
    } else if (d.constant(tol)) {
        set(CurveKind::GeneralHelix, "d", d);
    } else if (k.constant(tol)) {
        set(CurveKind::Salkowski, "a", k);
    } else if (t.constant(tol)) {
        set(CurveKind::AntiSalkowski, "b", t);
    } else {
        out.kind = CurveKind::Generic;
    }
    return out;
}

} // namespace pencil
