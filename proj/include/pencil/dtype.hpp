#pragma once

#include "pencil/pencil.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pencil {

/// Frenet-basis components of the surface normal along the curve,
/// n(s,t0) = φ₁T + φ₂N + φ₃B.
struct PhiComponents
{
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi3 = 0.0;
};

PhiComponents phi_components(const SurfacePencil& p, double s);

struct DTypeSample
{
    double s = 0.0;
    /// ⟨n(s,t0), W₀(s)⟩
    double inner = 0.0;
    double phi2 = 0.0;
    double phi3 = 0.0;
    /// atan2(φ₃, φ₂), so n = cos θ·N + sin θ·B
    double theta = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
};

struct DTypeReport
{
    std::vector<DTypeSample> samples;
    double c_estimate = 0.0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    /// Parameters where the frame, the normal or the marching scale was undefined.
    std::vector<double> skipped;
    /// Sub-intervals removed from sampling by the caller.
    std::vector<Interval> excluded;
    bool verdict = false;
    /// c ≈ 0: n is parallel to N and the curve is a geodesic of the surface.
    bool geodesic = false;
    /// |φ₃| ≈ 1 with τ ≡ 0: the curve is planar and asymptotic on the surface.
    bool asymptotic_planar = false;
};

struct VerifyOptions
{
    std::size_t sample_count = 1000;
    double tolerance = 1e-8;
    /// Sampling range; defaults to the curve domain.
    std::optional<Interval> range;
    /// Samples falling inside any of these are dropped before evaluation.
    std::vector<Interval> excluded;
};

/// Samples ⟨n, W₀⟩ uniformly along the common curve. Runs samples in
/// parallel when built with OpenMP; results are identical to
/// verify_dtype_serial bit for bit.
DTypeReport verify_dtype(const SurfacePencil& p, const VerifyOptions& options);
DTypeReport verify_dtype(const SurfacePencil& p, std::size_t sample_count, double tolerance);

/// Single-threaded reference for verify_dtype.
DTypeReport verify_dtype_serial(const SurfacePencil& p, const VerifyOptions& options);

enum class CorollaryBranch { None, Isogeodesic, AsymptoticPlanar, Planar, GeneralHelix, Salkowski, AntiSalkowski };

std::string_view to_string(CorollaryBranch branch);

struct ConditionResult
{
    std::string name;
    bool pass = false;
    double max_error = 0.0;
};

struct TheoremCheck
{
    std::vector<ConditionResult> conditions;
    bool all_pass = false;
    CurveClass curve_class;
    CorollaryBranch branch = CorollaryBranch::None;
    /// Constant named by the matching special case ("a", "b", "d" or "tau").
    std::string special_name;
    double special_value = 0.0;
    /// φ₃ predicted by the special case when it is constant along the curve.
    std::optional<double> special_phi3;
    std::size_t used = 0;
    std::size_t skipped = 0;
};

/// Checks u = v = w = 0, φ₁ = 0, φ₃ = c√(κ²+τ²)/κ and
/// φ₂ = sign·√(1 − c²(κ²+τ²)/κ²) at each sample, and identifies the special
/// curve case that applies. `sign` selects the branch of φ₂.
///
/// Throws InfeasibleConstant when the radicand drops below −tol.
TheoremCheck check_theorem_conditions(
    const SurfacePencil& p,
    double c,
    int sign,
    std::size_t sample_count,
    double tol);

/// 1 − c²(κ²+τ²)/κ²
double feasibility_radicand(const FrenetApparatus& app, double c);

/// Sub-intervals of the curve domain where the frame is defined and the
/// radicand exceeds `min_radicand`, with boundaries refined by bisection to
/// 1e-9 in the parameter.
std::vector<Interval> feasible_domain(
    const CurveSpec& curve,
    double c,
    std::size_t sample_count,
    double min_radicand = 1e-12);

/// min over samples of κ/√(κ²+τ²): the largest |c| feasible everywhere.
double feasibility_bound(const CurveSpec& curve, std::size_t sample_count);

struct SynthesisRequest
{
    CurveSpec curve;
    double c = 0.0;
    /// Sign of the binormal coefficient w. +1 reproduces the orientation of
    /// the worked examples and gives φ₂ = −√(…).
    int sign = 1;
    /// Tangential profile u(t); must vanish at t0.
    std::string u_profile = "t";
    double t0 = 0.0;
    std::string t_name = "t";
    std::size_t feasibility_samples = 256;
};

struct Synthesis
{
    MarchingScale marching;
    /// True when v and w are constant multiples of (t − t0).
    bool closed_form = false;
    double v_coefficient = 0.0;
    double w_coefficient = 0.0;
    std::vector<Interval> feasible;
    /// Parts of the curve domain outside `feasible`.
    std::vector<Interval> excluded;
    /// Node count of the sampled coefficient tables (0 for closed forms).
    std::size_t table_nodes = 0;
};

/// Builds u = u_profile(t), v = c√(κ²+τ²)/(κρ)·(t−t0), w = sign·√(1 − c²(κ²+τ²)/κ²)/ρ·(t−t0).
/// Unit-speed curves with constant κ, τ get closed-form coefficients;
/// otherwise the s-dependent factors are tabulated.
///
/// Throws InfeasibleConstant when no part of the domain is feasible.
Synthesis synthesize_marching_scale(const SynthesisRequest& request);

} // namespace pencil
