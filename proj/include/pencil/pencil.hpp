#pragma once

#include "pencil/frenet.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace pencil {

/// Tabulated coefficient function of the curve parameter, evaluated by cubic
/// Hermite interpolation between uniformly spaced nodes.
///
/// Nodes can be marked undefined (Frenet frame missing) or infeasible
/// (target constant unreachable); evaluating inside a cell that touches such
/// a node throws InflectionPoint or InfeasibleConstant respectively.
class CoefficientTable
{
public:
    enum class NodeState : std::uint8_t { Ok, Undefined, Infeasible };

    struct Node
    {
        double value = 0.0;
        double slope = 0.0;
        NodeState state = NodeState::Ok;
    };

    CoefficientTable(Interval span, std::vector<Node> nodes);

    /// Value and first derivative at s.
    std::pair<double, double> evaluate(double s) const;

    const Interval& span() const { return span_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    double spacing() const { return h_; }

private:
    Interval span_;
    std::vector<Node> nodes_;
    double h_ = 0.0;
};

using Coefficient = std::variant<Expression, CoefficientTable>;

/// u = x·l(s)·U(t), v = y·m(s)·V(t), w = z·n(s)·W(t)
struct ProductForm
{
    Coefficient l;
    Coefficient m;
    Coefficient n;
    Expression U;
    Expression V;
    Expression W;
};

/// u = x·u(s,t), v = y·v(s,t), w = z·w(s,t)
struct GeneralForm
{
    Expression u;
    Expression v;
    Expression w;
};

/// Marching-scale functions of a surface pencil together with the control
/// coefficients x, y, z and the isoparametric value t0.
struct MarchingScale
{
    std::variant<ProductForm, GeneralForm> form;
    double x = 1.0;
    double y = 1.0;
    double z = 1.0;
    double t0 = 0.0;
    std::string s_name = "s";
    std::string t_name = "t";

    static MarchingScale product(
        std::string_view l,
        std::string_view m,
        std::string_view n,
        std::string_view U,
        std::string_view V,
        std::string_view W,
        std::string s_name = "s",
        std::string t_name = "t");

    static MarchingScale general(
        std::string_view u,
        std::string_view v,
        std::string_view w,
        std::string s_name = "s",
        std::string t_name = "t");

    MarchingScale& with_controls(double cx, double cy, double cz)
    {
        x = cx;
        y = cy;
        z = cz;
        return *this;
    }
};

struct MarchingValues
{
    double u = 0.0, v = 0.0, w = 0.0;
    double u_s = 0.0, v_s = 0.0, w_s = 0.0;
    double u_t = 0.0, v_t = 0.0, w_t = 0.0;
};

MarchingValues marching_values(const MarchingScale& ms, double s, double t);

/// P(s,t) = r(s) + u·T + v·N + w·B
struct SurfacePencil
{
    CurveSpec curve;
    MarchingScale marching;
    Interval t_range{0.0, 1.0};
};

/// Builds a pencil after checking t0 ∈ t_range and u = v = w = 0 at t0 on
/// `check_samples` points of the curve domain (to 1e-12). Throws ConfigError.
SurfacePencil make_pencil(CurveSpec curve, MarchingScale marching, Interval t_range, std::size_t check_samples = 64);

/// Curve point and Frenet apparatus at one parameter value; shared by every
/// surface evaluation along the same s.
struct CurveFrame
{
    double s = 0.0;
    Vec3 r;
    FrenetApparatus frenet;
};

CurveFrame curve_frame(const CurveSpec& curve, double s);

struct Partials
{
    Vec3 ds;
    Vec3 dt;
};

Vec3 surface_point(const SurfacePencil& p, double s, double t);
Partials surface_partials(const SurfacePencil& p, double s, double t);
Vec3 surface_normal(const SurfacePencil& p, double s, double t);

Vec3 surface_point(const CurveFrame& frame, const MarchingValues& mv);
Partials surface_partials(const CurveFrame& frame, const MarchingValues& mv);
/// Throws DegenerateNormal when ‖ds×dt‖ ≤ ε(‖ds‖‖dt‖ + ε).
Vec3 surface_normal(const Partials& partials);

} // namespace pencil
