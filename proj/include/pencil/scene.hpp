#pragma once

#include "pencil/dtype.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pencil {

/// Closed interval whose ends are constant expressions such as "2*pi".
struct RangeText
{
    std::string lo;
    std::string hi;

    Interval evaluate() const;
};

/// Declarative description of a pencil: curve, marching scale, grid, outputs.
/// Serialized as JSON; see docs/scene-format.md.
struct SceneConfig
{
    std::string name = "scene";

    struct Curve
    {
        std::string x, y, z;
        std::string param = "s";
        RangeText range;
        bool unit_speed = false;
    } curve;

    struct Marching
    {
        /// "explicit" or "synthesized"
        std::string mode = "explicit";
        /// Explicit product parts (l, m, n in the curve parameter; U, V, W in t).
        std::optional<std::array<std::string, 6>> product;
        /// Explicit bivariate u, v, w in (param, t).
        std::optional<std::array<std::string, 3>> general;
        double x = 1.0, y = 1.0, z = 1.0;
        /// Target constant: synthesized mode builds for it, explicit mode reports against it.
        std::optional<double> c;
        int sign = 1;
        std::string u_profile = "t";
    } marching;

    struct Grid
    {
        std::size_t ns = 200;
        std::size_t nt = 50;
        RangeText t_range{"0", "1"};
    } grid;

    double t0 = 0.0;

    struct Verify
    {
        std::vector<RangeText> exclude;
        /// Restrict verification to where 1 − c²(κ²+τ²)/κ² ≥ min_radicand (uses marching.c).
        bool feasible_only = false;
        double min_radicand = 1e-6;
    } verify;

    struct Outputs
    {
        std::string obj_path;
        std::string csv_path;
    } outputs;

    std::string note;
};

/// Throws ConfigError on missing or ill-typed fields.
SceneConfig scene_from_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const SceneConfig& config);
SceneConfig load_scene(const std::filesystem::path& path);

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
SceneConfig preset(std::string_view name);

/// Everything needed to run commands on a scene.
struct Scene
{
    SceneConfig config;
    SurfacePencil pencil;
    std::optional<Synthesis> synthesis;
    VerifyOptions verify;
};

/// Parses expressions, synthesizes the marching scale when requested and
/// resolves verification ranges. Parse errors and ConfigError propagate;
/// InfeasibleConstant propagates from synthesis.
Scene build_scene(const SceneConfig& config);

} // namespace pencil
