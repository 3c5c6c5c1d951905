#include "pencil/meshio.hpp"

#include <cstdio>
#include <exception>
#include <optional>

namespace pencil {

namespace {

std::string format(const char* spec, double v)
{
    if (v == 0.0) v = 0.0;
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, spec, v);
    return std::string(buf, static_cast<std::size_t>(n));
}

void check(const std::ostream& sink)
{
    if (!sink) throw std::ios_base::failure("write failed");
}

/// Frame used for positions at s. Where the Frenet frame is undefined the
/// nearest defined one-sided frame is borrowed so the vertex stays finite.
struct RowFrame
{
    std::optional<CurveFrame> exact;
    std::optional<CurveFrame> borrowed;
    std::string reason;
};

RowFrame row_frame(const CurveSpec& curve, double s, double span)
{
    RowFrame rf;
    try {
        rf.exact = curve_frame(curve, s);
        return rf;
    } catch (const Error& e) {
        rf.reason = e.what();
    }
    const double delta = 1e-7 * (span > 0.0 ? span : 1.0);
    for (double offset : {delta, -delta}) {
        try {
            CurveFrame f = curve_frame(curve, s + offset);
            f.s = s;
            f.r = curve_point(curve, s);
            rf.borrowed = f;
            break;
        } catch (const Error&) {
        }
    }
    return rf;
}

void sample_row(const SurfacePencil& p, SurfaceMesh& mesh, std::size_t i, const Interval& s_range, const Interval& t_range, std::vector<MeshDefect>& defects)
{
    const double s = s_range.sample(i, mesh.ns);
    const RowFrame rf = row_frame(p.curve, s, s_range.length());
    for (std::size_t j = 0; j < mesh.nt; ++j) {
        const double t = t_range.sample(j, mesh.nt);
        const std::size_t k = mesh.index(i, j);
        mesh.normals[k] = Vec3::Zero();
        try {
            const MarchingValues mv = marching_values(p.marching, s, t);
            if (rf.exact) {
                mesh.positions[k] = surface_point(*rf.exact, mv);
                try {
                    mesh.normals[k] = surface_normal(surface_partials(*rf.exact, mv));
                } catch (const DegenerateNormal& e) {
                    defects.push_back({i, j, s, t, e.what()});
                }
            } else {
                mesh.positions[k] = rf.borrowed ? surface_point(*rf.borrowed, mv) : curve_point(p.curve, s);
                defects.push_back({i, j, s, t, rf.reason});
            }
        } catch (const Error& e) {
            mesh.positions[k] = rf.exact ? rf.exact->r : curve_point(p.curve, s);
            defects.push_back({i, j, s, t, e.what()});
        }
    }
}

SurfaceMesh prepare(std::size_t ns, std::size_t nt)
{
    if (ns < 2 || nt < 2) throw ConfigError("grid needs ns >= 2 and nt >= 2");
    SurfaceMesh mesh;
    mesh.ns = ns;
    mesh.nt = nt;
    mesh.positions.resize(ns * nt);
    mesh.normals.resize(ns * nt);
    mesh.faces.reserve((ns - 1) * (nt - 1));
    for (std::size_t i = 0; i + 1 < ns; ++i) {
        for (std::size_t j = 0; j + 1 < nt; ++j) {
            mesh.faces.push_back({
                static_cast<std::uint32_t>(mesh.index(i, j)),
                static_cast<std::uint32_t>(mesh.index(i + 1, j)),
                static_cast<std::uint32_t>(mesh.index(i + 1, j + 1)),
                static_cast<std::uint32_t>(mesh.index(i, j + 1)),
            });
        }
    }
    return mesh;
}

} // namespace

std::string format_fixed_digits(double v, int digits)
{
    const std::string spec = "%#." + std::to_string(digits) + "g";
    return format(spec.c_str(), v);
}

std::string format_general(double v, int digits)
{
    const std::string spec = "%." + std::to_string(digits) + "g";
    return format(spec.c_str(), v);
}

SurfaceMesh sample_grid(const SurfacePencil& p, std::size_t ns, std::size_t nt, Interval s_range, Interval t_range)
{
    SurfaceMesh mesh = prepare(ns, nt);
    std::vector<std::vector<MeshDefect>> row_defects(ns);
    std::exception_ptr failure;
    const auto rows = static_cast<std::ptrdiff_t>(ns);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        try {
            sample_row(p, mesh, static_cast<std::size_t>(i), s_range, t_range, row_defects[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical(pencil_grid_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    for (auto& row : row_defects) {
        mesh.defects.insert(mesh.defects.end(), row.begin(), row.end());
    }
    return mesh;
}

SurfaceMesh sample_grid_serial(const SurfacePencil& p, std::size_t ns, std::size_t nt, Interval s_range, Interval t_range)
{
    SurfaceMesh mesh = prepare(ns, nt);
    for (std::size_t i = 0; i < ns; ++i) sample_row(p, mesh, i, s_range, t_range, mesh.defects);
    return mesh;
}

void write_obj(const SurfaceMesh& mesh, std::ostream& sink)
{
    std::string line;
    for (const auto& v : mesh.positions) {
        line = "v " + format_fixed_digits(v.x(), 9) + ' ' + format_fixed_digits(v.y(), 9) + ' '
               + format_fixed_digits(v.z(), 9) + '\n';
        sink << line;
    }
    for (const auto& n : mesh.normals) {
        line = "vn " + format_fixed_digits(n.x(), 9) + ' ' + format_fixed_digits(n.y(), 9) + ' '
               + format_fixed_digits(n.z(), 9) + '\n';
        sink << line;
    }
    for (const auto& f : mesh.faces) {
        line = "f";
        for (std::uint32_t idx : f) {
            const std::string k = std::to_string(idx + 1);
            line += ' ' + k + "//" + k;
        }
        line += '\n';
        sink << line;
    }
    sink.flush();
    check(sink);
}

void write_report_csv(const DTypeReport& report, std::ostream& sink)
{
    for (const auto& e : report.excluded) {
        sink << "# excluded " << format_general(e.lo, 12) << ' ' << format_general(e.hi, 12) << '\n';
    }
    sink << "s,inner,phi2,phi3,theta\n";
    for (const auto& s : report.samples) {
        sink << format_general(s.s, 12) << ',' << format_general(s.inner, 12) << ',' << format_general(s.phi2, 12)
             << ',' << format_general(s.phi3, 12) << ',' << format_general(s.theta, 12) << '\n';
    }
    sink << "c_estimate," << format_general(report.c_estimate, 12) << '\n';
    sink << "max_deviation," << format_general(report.max_deviation, 12) << '\n';
    sink.flush();
    check(sink);
}

} // namespace pencil
