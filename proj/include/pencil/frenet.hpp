#pragma once

#include "pencil/expr.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace pencil {

using Vec3 = Eigen::Vector3d;

/// Regularity threshold on the speed ‖r′‖.
inline constexpr double kRegularityEps = 1e-9;
/// Inflection threshold on κ, scaled by (1 + ρ).
inline constexpr double kInflectionEps = 1e-9;
/// Allowed |ρ − 1| for curves declared unit speed.
inline constexpr double kUnitSpeedTol = 1e-9;

struct Interval
{
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double v) const { return lo <= v && v <= hi; }
    /// i-th of n uniformly spaced points, endpoints included.
    double sample(std::size_t i, std::size_t n) const
    {
        if (n < 2) return lo;
        if (i + 1 == n) return hi;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Analytic space curve r(q) = (x(q), y(q), z(q)) over a closed domain.
struct CurveSpec
{
    Expression x;
    Expression y;
    Expression z;
    std::string param = "s";
    Interval domain;
    bool declared_unit_speed = false;

    /// Parses the three coordinate expressions in `param`. Throws ConfigError
    /// on an empty or reversed domain.
    static CurveSpec parse(
        std::string_view x,
        std::string_view y,
        std::string_view z,
        std::string param,
        Interval domain,
        bool unit_speed = false);
};

struct FrenetApparatus
{
    Vec3 T;
    Vec3 N;
    Vec3 B;
    double kappa = 0.0;
    double tau = 0.0;
    double rho = 0.0;
    Vec3 W0;
};

std::array<Jet3, 3> curve_point_jets(const CurveSpec& curve, double q);

Vec3 curve_point(const CurveSpec& curve, double q);

/// Frenet apparatus for an arbitrary-speed parametrization:
/// κ = ‖r′×r″‖/ρ³, τ = det(r′,r″,r‴)/‖r′×r″‖², T = r′/ρ,
/// B = (r′×r″)/‖r′×r″‖, N = B×T.
///
/// Throws Irregular when ρ ≤ kRegularityEps and InflectionPoint when
/// κ ≤ kInflectionEps·(1+ρ).
FrenetApparatus frenet_at(const CurveSpec& curve, double q);

/// (τT + κB)/√(κ²+τ²)
Vec3 darboux_unit(const FrenetApparatus& app);

enum class CurveKind { Planar, GeneralHelix, Salkowski, AntiSalkowski, Generic };

std::string_view to_string(CurveKind kind);

struct CurveClass
{
    CurveKind kind = CurveKind::Generic;
    /// "tau" for planar, "d" (= τ/κ) for helices, "a" (= κ) for Salkowski,
    /// "b" (= τ) for anti-Salkowski, empty for generic curves.
    std::string constant_name;
    double constant = 0.0;
    /// max |sample − constant| over the used samples.
    double deviation = 0.0;
    std::size_t used = 0;
    std::size_t skipped = 0;
};

/// Classifies by sampling κ and τ. A quantity counts as constant when
/// max − min ≤ tol·(1 + |mean|). Planar beats helix beats Salkowski beats
/// anti-Salkowski. Samples at inflection points are skipped.
CurveClass classify_curve(const CurveSpec& curve, std::size_t sample_count, double tol);

} // namespace pencil
