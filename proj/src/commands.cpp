#include "pencil/commands.hpp"

#include "pencil/meshio.hpp"
#include "pencil/scene.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

namespace pencil {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

SceneConfig load_config(const CommandOptions& options)
{
    if (options.preset.has_value() == options.config_path.has_value()) {
        throw ConfigError("exactly one of --preset or --config is required");
    }
    SceneConfig config = options.preset ? preset(*options.preset) : load_scene(*options.config_path);
    if (options.c) {
        config.marching.mode = "synthesized";
        config.marching.c = *options.c;
    }
    if (options.sign) {
        if (*options.sign != 1 && *options.sign != -1) throw ConfigError("--sign must be +1 or -1");
        config.marching.sign = *options.sign;
    }
    return config;
}

fs::path output_path(const CommandOptions& options, const std::string& configured, const std::string& fallback)
{
    const fs::path dir = options.out_dir.value_or(".");
    fs::create_directories(dir);
    const fs::path file = configured.empty() ? fs::path(fallback) : fs::path(configured);
    return file.is_absolute() ? file : dir / file;
}

json intervals_json(const std::vector<Interval>& xs)
{
    json a = json::array();
    for (const auto& x : xs) a.push_back({x.lo, x.hi});
    return a;
}

VerifyOptions verify_options(const Scene& scene, const CommandOptions& options)
{
    VerifyOptions v = scene.verify;
    v.sample_count = options.samples.value_or(1000);
    if (options.tol) v.tolerance = *options.tol;
    return v;
}

json report_summary(const Scene& scene, const DTypeReport& report)
{
    json s;
    s["scene"] = scene.config.name;
    s["c_estimate"] = report.c_estimate;
    s["max_deviation"] = report.max_deviation;
    s["tolerance"] = report.tolerance;
    s["verdict"] = report.verdict;
    s["samples"] = report.samples.size();
    s["skipped"] = report.skipped.size();
    s["geodesic"] = report.geodesic;
    s["asymptotic_planar"] = report.asymptotic_planar;
    if (scene.config.marching.c) s["target_c"] = *scene.config.marching.c;
    if (!report.excluded.empty()) s["excluded"] = intervals_json(report.excluded);
    if (!scene.config.note.empty()) s["note"] = scene.config.note;
    return s;
}

void write_csv(const fs::path& path, const DTypeReport& report)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
    write_report_csv(report, f);
}

int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const InfeasibleConstant& e) {
        err << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const SyntaxError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const UnknownVariable& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const UnknownFunction& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}

} // namespace

int cmd_build(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const Scene scene = build_scene(load_config(options));
        const auto& cfg = scene.config;
        const SurfaceMesh mesh = sample_grid(
            scene.pencil, cfg.grid.ns, cfg.grid.nt, scene.pencil.curve.domain, scene.pencil.t_range);
        const DTypeReport report = verify_dtype(scene.pencil, verify_options(scene, options));

        const fs::path obj = output_path(options, cfg.outputs.obj_path, cfg.name + ".obj");
        const fs::path csv = output_path(options, cfg.outputs.csv_path, cfg.name + ".csv");
        {
            std::ofstream f(obj, std::ios::binary);
            if (!f) throw std::ios_base::failure("cannot open '" + obj.string() + "' for writing");
            write_obj(mesh, f);
        }
        write_csv(csv, report);

        json s{{"command", "build"}};
        s.update(report_summary(scene, report));
        s["vertices"] = mesh.positions.size();
        s["faces"] = mesh.faces.size();
        s["defects"] = mesh.defects.size();
        s["obj"] = obj.string();
        s["csv"] = csv.string();
        out << s.dump() << '\n';
        return kExitOk;
    });
}

int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const Scene scene = build_scene(load_config(options));
        const DTypeReport report = verify_dtype(scene.pencil, verify_options(scene, options));
        const fs::path csv = output_path(options, scene.config.outputs.csv_path, scene.config.name + ".csv");
        write_csv(csv, report);

        json s{{"command", "verify"}};
        s.update(report_summary(scene, report));
        s["csv"] = csv.string();
        out << s.dump() << '\n';
        if (!report.verdict) {
            err << "not a D-type pencil: max deviation " << report.max_deviation << " exceeds tolerance "
                << report.tolerance << '\n';
            return kExitNotDType;
        }
        return kExitOk;
    });
}

int cmd_classify(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const SceneConfig cfg = load_config(options);
        const CurveSpec curve = CurveSpec::parse(
            cfg.curve.x, cfg.curve.y, cfg.curve.z, cfg.curve.param, cfg.curve.range.evaluate(), cfg.curve.unit_speed);
        const CurveClass cls = classify_curve(curve, options.samples.value_or(1000), options.tol.value_or(1e-6));
        if (cls.skipped > 0) err << "warning: skipped " << cls.skipped << " samples with undefined Frenet frame\n";
        json s{
            {"command", "classify"},
            {"scene", cfg.name},
            {"kind", std::string(to_string(cls.kind))},
            {"used", cls.used},
            {"skipped", cls.skipped},
        };
        if (!cls.constant_name.empty()) {
            s["constant_name"] = cls.constant_name;
            s["constant"] = cls.constant;
            s["deviation"] = cls.deviation;
        }
        out << s.dump() << '\n';
        return kExitOk;
    });
}

int cmd_synthesize(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        SceneConfig cfg = load_config(options);
        if (!cfg.marching.c) throw ConfigError("synthesis needs a target constant (marching.c or --c)");
        cfg.marching.mode = "synthesized";
        const Scene scene = build_scene(cfg);
        const Synthesis& syn = *scene.synthesis;

        SceneConfig done = cfg;
        if (syn.closed_form) {
            const auto& form = std::get<ProductForm>(syn.marching.form);
            done.marching.mode = "explicit";
            done.marching.product = std::array<std::string, 6>{
                "1", "1", "1", form.U.to_string(), form.V.to_string(), form.W.to_string()};
            done.marching.general.reset();
        }
        for (const auto& e : syn.excluded) {
            char lo[32], hi[32];
            std::snprintf(lo, sizeof lo, "%.17g", e.lo);
            std::snprintf(hi, sizeof hi, "%.17g", e.hi);
            done.verify.exclude.push_back({lo, hi});
        }

        json j = scene_to_json(done);
        if (!syn.closed_form) {
            j["marching"]["coefficients"] = "sampled";
            j["marching"]["table_nodes"] = syn.table_nodes;
        }
        if (!syn.excluded.empty()) {
            j["feasible_domain"] = intervals_json(syn.feasible);
            err << "note: c is feasible only on part of the curve domain\n";
        }
        out << j.dump(2) << '\n';
        return kExitOk;
    });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Surface pencils with a common D-type curve", "pencil"};
    app.require_subcommand(1);

    CommandOptions options;
    std::string preset_name, config_path, out_dir;
    double tol = 0.0, c = 0.0;
    std::size_t samples = 0;
    int sign = 1;

    std::vector<CLI::App*> subs;
    for (const char* name : {"build", "verify", "classify", "synthesize"}) {
        CLI::App* sub = app.add_subcommand(name);
        auto* p = sub->add_option("--preset", preset_name, "Built-in scene (example1 ... example4b_caption)");
        auto* k = sub->add_option("--config", config_path, "Scene config JSON file");
        p->excludes(k);
        sub->add_option("--tol", tol, "Tolerance");
        sub->add_option("--samples", samples, "Sample count")->check(CLI::PositiveNumber);
        sub->add_option("-o,--out", out_dir, "Output directory");
        sub->add_option("--c", c, "Target D-type constant (switches to synthesized mode)");
        sub->add_option("--sign", sign, "Branch sign of the binormal coefficient (+1 or -1)");
        subs.push_back(sub);
    }

    std::vector<const char*> argv{"pencil"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen->count("--preset")) options.preset = preset_name;
    if (chosen->count("--config")) options.config_path = config_path;
    if (chosen->count("--tol")) options.tol = tol;
    if (chosen->count("--samples")) options.samples = samples;
    if (chosen->count("--out")) options.out_dir = out_dir;
    if (chosen->count("--c")) options.c = c;
    if (chosen->count("--sign")) options.sign = sign;

    const std::string name = chosen->get_name();
    if (name == "build") return cmd_build(options, out, err);
    if (name == "verify") return cmd_verify(options, out, err);
    if (name == "classify") return cmd_classify(options, out, err);
    return cmd_synthesize(options, out, err);
}

} // namespace pencil
