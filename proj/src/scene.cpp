#include "pencil/scene.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pencil {

using nlohmann::json;

namespace {

double constant_expression(const std::string& text, const std::string& what)
{
    try {
        return Expression::parse(text, {}).evaluate({});
    } catch (const SyntaxError& e) {
        throw ConfigError(what + ": " + e.what());
    } catch (const UnknownVariable& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

std::string number_text(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

const json& require(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field '" + where + key + "'");
    return j.at(key);
}

std::string text_field(const json& j, const char* key, const std::string& where)
{
    const json& v = require(j, key, where);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return number_text(v.get<double>());
    throw ConfigError("field '" + where + key + "' must be a string");
}

/// Number or constant expression string.
double number_field(const json& v, const std::string& what)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return constant_expression(v.get<std::string>(), what);
    throw ConfigError(what + " must be a number or a constant expression");
}

RangeText range_field(const json& v, const std::string& what)
{
    if (!v.is_array() || v.size() != 2) throw ConfigError(what + " must be a [min, max] pair");
    auto end = [&](const json& e) -> std::string {
        if (e.is_number()) return number_text(e.get<double>());
        if (e.is_string()) return e.get<std::string>();
        throw ConfigError(what + " entries must be numbers or constant expressions");
    };
    return {end(v[0]), end(v[1])};
}

json range_json(const RangeText& r)
{
    return json::array({r.lo, r.hi});
}

std::size_t count_field(const json& j, const char* key, std::size_t fallback, const std::string& where)
{
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 2) {
        throw ConfigError("field '" + where + key + "' must be an integer >= 2");
    }
    return static_cast<std::size_t>(v.get<long long>());
}

} // namespace

Interval RangeText::evaluate() const
{
    return {constant_expression(lo, "range minimum"), constant_expression(hi, "range maximum")};
}

SceneConfig scene_from_json(const json& j)
{
    if (!j.is_object()) throw ConfigError("scene config must be a JSON object");
    SceneConfig c;
    if (j.contains("name")) c.name = j.at("name").get<std::string>();
    if (j.contains("note")) c.note = j.at("note").get<std::string>();

    const json& curve = require(j, "curve", "");
    c.curve.x = text_field(curve, "x", "curve.");
    c.curve.y = text_field(curve, "y", "curve.");
    c.curve.z = text_field(curve, "z", "curve.");
    if (curve.contains("param")) c.curve.param = curve.at("param").get<std::string>();
    c.curve.range = range_field(require(curve, "range", "curve."), "curve.range");
    if (curve.contains("unit_speed")) c.curve.unit_speed = curve.at("unit_speed").get<bool>();

    const json& m = require(j, "marching", "");
    if (m.contains("mode")) c.marching.mode = m.at("mode").get<std::string>();
    if (c.marching.mode != "explicit" && c.marching.mode != "synthesized") {
        throw ConfigError("marching.mode must be \"explicit\" or \"synthesized\"");
    }
    if (m.contains("product")) {
        const json& p = m.at("product");
        c.marching.product = std::array<std::string, 6>{
            text_field(p, "l", "marching.product."),
            text_field(p, "m", "marching.product."),
            text_field(p, "n", "marching.product."),
            text_field(p, "U", "marching.product."),
            text_field(p, "V", "marching.product."),
            text_field(p, "W", "marching.product."),
        };
    }
    if (m.contains("general")) {
        const json& g = m.at("general");
        c.marching.general = std::array<std::string, 3>{
            text_field(g, "u", "marching.general."),
            text_field(g, "v", "marching.general."),
            text_field(g, "w", "marching.general."),
        };
    }
    if (c.marching.mode == "explicit" && c.marching.product.has_value() == c.marching.general.has_value()) {
        throw ConfigError("explicit marching needs exactly one of 'product' or 'general'");
    }
    if (m.contains("controls")) {
        const json& k = m.at("controls");
        if (k.contains("x")) c.marching.x = number_field(k.at("x"), "marching.controls.x");
        if (k.contains("y")) c.marching.y = number_field(k.at("y"), "marching.controls.y");
        if (k.contains("z")) c.marching.z = number_field(k.at("z"), "marching.controls.z");
    }
    if (m.contains("c")) c.marching.c = number_field(m.at("c"), "marching.c");
    if (m.contains("sign")) {
        const int sign = m.at("sign").get<int>();
        if (sign != 1 && sign != -1) throw ConfigError("marching.sign must be +1 or -1");
        c.marching.sign = sign;
    }
    if (m.contains("u_profile")) c.marching.u_profile = m.at("u_profile").get<std::string>();
    if (c.marching.mode == "synthesized" && !c.marching.c) throw ConfigError("synthesized marching needs 'c'");

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        c.grid.ns = count_field(g, "ns", c.grid.ns, "grid.");
        c.grid.nt = count_field(g, "nt", c.grid.nt, "grid.");
        if (g.contains("t_range")) c.grid.t_range = range_field(g.at("t_range"), "grid.t_range");
    }
    if (j.contains("t0")) c.t0 = number_field(j.at("t0"), "t0");

    if (j.contains("verify")) {
        const json& v = j.at("verify");
        if (v.contains("exclude")) {
            for (const auto& e : v.at("exclude")) c.verify.exclude.push_back(range_field(e, "verify.exclude"));
        }
        if (v.contains("feasible_only")) c.verify.feasible_only = v.at("feasible_only").get<bool>();
        if (v.contains("min_radicand")) c.verify.min_radicand = number_field(v.at("min_radicand"), "verify.min_radicand");
    }
    if (c.verify.feasible_only && !c.marching.c) throw ConfigError("verify.feasible_only needs marching.c");

    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        if (o.contains("obj_path")) c.outputs.obj_path = o.at("obj_path").get<std::string>();
        if (o.contains("csv_path")) c.outputs.csv_path = o.at("csv_path").get<std::string>();
    }
    return c;
}

json scene_to_json(const SceneConfig& c)
{
    json j;
    j["name"] = c.name;
    if (!c.note.empty()) j["note"] = c.note;
    j["curve"] = {
        {"x", c.curve.x},
        {"y", c.curve.y},
        {"z", c.curve.z},
        {"param", c.curve.param},
        {"range", range_json(c.curve.range)},
        {"unit_speed", c.curve.unit_speed},
    };
    json m;
    m["mode"] = c.marching.mode;
    if (c.marching.product) {
        const auto& p = *c.marching.product;
        m["product"] = {{"l", p[0]}, {"m", p[1]}, {"n", p[2]}, {"U", p[3]}, {"V", p[4]}, {"W", p[5]}};
    }
    if (c.marching.general) {
        const auto& g = *c.marching.general;
        m["general"] = {{"u", g[0]}, {"v", g[1]}, {"w", g[2]}};
    }
    m["controls"] = {{"x", c.marching.x}, {"y", c.marching.y}, {"z", c.marching.z}};
    if (c.marching.c) m["c"] = *c.marching.c;
    m["sign"] = c.marching.sign;
    m["u_profile"] = c.marching.u_profile;
    j["marching"] = m;
    j["grid"] = {{"ns", c.grid.ns}, {"nt", c.grid.nt}, {"t_range", range_json(c.grid.t_range)}};
    j["t0"] = c.t0;
    json ex = json::array();
    for (const auto& e : c.verify.exclude) ex.push_back(range_json(e));
    j["verify"] = {{"exclude", ex}, {"feasible_only", c.verify.feasible_only}, {"min_radicand", c.verify.min_radicand}};
    j["outputs"] = {{"obj_path", c.outputs.obj_path}, {"csv_path", c.outputs.csv_path}};
    return j;
}

SceneConfig load_scene(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
    }
    try {
        return scene_from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError("invalid config '" + path.string() + "': " + e.what());
    }
}

// Presets ---------------------------------------------------------------------

namespace {

SceneConfig circle_base()
{
    SceneConfig c;
    c.name = "example1";
    c.curve = {"cos(s)", "sin(s)", "0", "s", {"-2*pi", "2*pi"}, true};
    c.marching.product = std::array<std::string, 6>{"1", "1", "1", "t", "sqrt(3)/2*t", "t/2"};
    c.marching.c = std::sqrt(3.0) / 2.0;
    c.grid.t_range = {"0", "5"};
    return c;
}

SceneConfig helix_base()
{
    SceneConfig c;
    c.name = "example2";
    c.curve = {"cos(s/sqrt(2))", "sin(s/sqrt(2))", "s/sqrt(2)", "s", {"-2*pi", "2*pi"}, true};
    c.marching.product = std::array<std::string, 6>{"1", "1", "1", "t", "sqrt(2)/2*t", "sqrt(2)/2*t"};
    c.marching.c = 0.5;
    c.grid.t_range = {"0", "1/4"};
    return c;
}

SceneConfig eight_base()
{
    SceneConfig c;
    c.name = "example3";
    c.curve = {"sin(q)", "sin(q)*cos(q)", "0", "q", {"0", "2*pi"}, false};
    c.marching.general = std::array<std::string, 3>{
        "t",
        "sqrt(3)/2*t/sqrt(4*cos(q)^4 - 3*cos(q)^2 + 1)",
        "1/2*t/sqrt(4*cos(q)^4 - 3*cos(q)^2 + 1)",
    };
    c.marching.c = std::sqrt(3.0) / 2.0;
    c.grid.t_range = {"0", "1"};
    c.verify.exclude = {{"-0.05", "0.05"}, {"pi - 0.05", "pi + 0.05"}, {"2*pi - 0.05", "2*pi + 0.05"}};
    return c;
}

// Salkowski curve with m = 1/5. The y component carries +1/2 cos q; with
// -1/2 cos q the curvature is not constant and the V, W below do not match.
SceneConfig salkowski_base()
{
    SceneConfig c;
    c.name = "example4";
    c.curve = {
        "5/sqrt(26)*((sqrt(26) - 26)/(104 + 8*sqrt(26))*sin((1 + sqrt(26)/13)*q)"
        " + (sqrt(26) + 26)/(-104 + 8*sqrt(26))*sin((1 - sqrt(26)/13)*q) - 1/2*sin(q))",
        "5/sqrt(26)*((26 - sqrt(26))/(104 + 8*sqrt(26))*cos((1 + sqrt(26)/13)*q)"
        " - (sqrt(26) + 26)/(-104 + 8*sqrt(26))*cos((1 - sqrt(26)/13)*q) + 1/2*cos(q))",
        "25/(4*sqrt(26))*cos(sqrt(26)/13*q)",
        "q",
        {"0", "2*pi"},
        false,
    };
    c.marching.general = std::array<std::string, 3>{
        "t",
        "sqrt(78)/(10*cos(sqrt(26)/26*q)^2)*t",
        "sqrt(26)/10*sqrt(1 - 3*tan(sqrt(26)/26*q)^2)/cos(sqrt(26)/26*q)*t",
    };
    c.marching.c = std::sqrt(3.0) / 2.0;
    c.grid.t_range = {"0", "1"};
    c.verify.feasible_only = true;
    c.verify.min_radicand = 1e-6;
    c.note = "verification restricted to the sub-domain where the target constant is feasible";
    return c;
}

SceneConfig with_controls(SceneConfig c, std::string name, double x, double y, double z)
{
    c.name = std::move(name);
    c.marching.x = x;
    c.marching.y = y;
    c.marching.z = z;
    c.marching.c.reset();
    return c;
}

} // namespace

std::vector<std::string> preset_names()
{
    return {
        "example1",
        "example1b",
        "example1_perturbed",
        "example2",
        "example2b",
        "example3",
        "example3b",
        "example4",
        "example4b",
        "example4b_caption",
    };
}

SceneConfig preset(std::string_view name)
{
    if (name == "example1") return circle_base();
    if (name == "example1b") {
        auto c = with_controls(circle_base(), "example1b", 1.0 / 5.0, 1.0 / 3.0, 1.0);
        c.marching.c = 0.5;
        return c;
    }
    if (name == "example1_perturbed") {
        auto c = circle_base();
        c.name = "example1_perturbed";
        (*c.marching.product)[2] = "1 + 0.1*cos(s)";
        c.note = "binormal coefficient perturbed by 10%; not a D-type pencil";
        return c;
    }
    if (name == "example2") return helix_base();
    if (name == "example2b") return with_controls(helix_base(), "example2b", 1.0, 15.0, 5.0);
    if (name == "example3") return eight_base();
    if (name == "example3b") return with_controls(eight_base(), "example3b", 10.0, 1.0 / 5.0, 1.0);
    if (name == "example4") return salkowski_base();
    if (name == "example4b" || name == "example4b_caption") {
        const double z = name == "example4b" ? 1.0 : -1.0;
        auto c = with_controls(salkowski_base(), std::string(name), -1.0 / 10.0, -1.0 / 10.0, z);
        c.marching.c = std::sqrt(3.0) / 2.0; // feasibility window only
        c.grid.t_range = {"-4", "4"};
        c.note = std::string(name == "example4b" ? "controls x = y = -1/10, z = 1"
                                                 : "controls x = y = -1/10, z = -1 (opposite binormal sign)")
                 + "; y and z rescale v and w unequally along a curve with varying torsion,"
                   " so the inner product is not expected to stay constant";
        return c;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

Scene build_scene(const SceneConfig& config)
{
    Scene scene;
    scene.config = config;
    CurveSpec curve = CurveSpec::parse(
        config.curve.x,
        config.curve.y,
        config.curve.z,
        config.curve.param,
        config.curve.range.evaluate(),
        config.curve.unit_speed);
    const Interval t_range = config.grid.t_range.evaluate();

    MarchingScale ms;
    if (config.marching.mode == "synthesized") {
        SynthesisRequest req;
        req.curve = curve;
        req.c = *config.marching.c;
        req.sign = config.marching.sign;
        req.u_profile = config.marching.u_profile;
        req.t0 = config.t0;
        scene.synthesis = synthesize_marching_scale(req);
        ms = scene.synthesis->marching;
        scene.verify.excluded = scene.synthesis->excluded;
    } else if (config.marching.product) {
        const auto& p = *config.marching.product;
        ms = MarchingScale::product(p[0], p[1], p[2], p[3], p[4], p[5], config.curve.param, "t");
    } else {
        const auto& g = *config.marching.general;
        ms = MarchingScale::general(g[0], g[1], g[2], config.curve.param, "t");
    }
    ms.with_controls(config.marching.x, config.marching.y, config.marching.z);
    ms.t0 = config.t0;

    for (const auto& e : config.verify.exclude) scene.verify.excluded.push_back(e.evaluate());
    if (config.verify.feasible_only) {
        const auto feasible = feasible_domain(curve, *config.marching.c, 1024, config.verify.min_radicand);
        double cursor = curve.domain.lo;
        for (const auto& f : feasible) {
            if (f.lo > cursor) scene.verify.excluded.push_back({cursor, f.lo});
            cursor = std::max(cursor, f.hi);
        }
        if (cursor < curve.domain.hi) scene.verify.excluded.push_back({cursor, curve.domain.hi});
    }
    auto& ex = scene.verify.excluded;
    std::sort(ex.begin(), ex.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& e : ex) {
        if (!merged.empty() && e.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, e.hi);
        } else {
            merged.push_back(e);
        }
    }
    ex = std::move(merged);

    scene.verify.tolerance = curve.declared_unit_speed ? 1e-8 : 1e-6;
    scene.pencil = make_pencil(std::move(curve), std::move(ms), t_range);
    return scene;
}

} // namespace pencil
