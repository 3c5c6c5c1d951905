#pragma once

#include "pencil/dtype.hpp"

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pencil {

struct MeshDefect
{
    std::size_t i = 0; ///< s index
    std::size_t j = 0; ///< t index
    double s = 0.0;
    double t = 0.0;
    std::string reason;
};

/// Quad mesh of a pencil member sampled on a uniform (s,t) grid.
///
/// Vertex (i, j) sits at index i·nt + j. Quads are wound counterclockwise
/// about ∂P/∂s × ∂P/∂t. Defective vertices keep a position but carry a zero
/// normal.
struct SurfaceMesh
{
    std::size_t ns = 0;
    std::size_t nt = 0;
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;
    std::vector<std::array<std::uint32_t, 4>> faces;
    std::vector<MeshDefect> defects;

    std::size_t index(std::size_t i, std::size_t j) const { return i * nt + j; }
};

/// Samples positions and normals on an ns × nt grid, one Frenet evaluation
/// per s row. Rows run in parallel under OpenMP.
SurfaceMesh sample_grid(const SurfacePencil& p, std::size_t ns, std::size_t nt, Interval s_range, Interval t_range);

/// Single-threaded reference for sample_grid.
SurfaceMesh sample_grid_serial(const SurfacePencil& p, std::size_t ns, std::size_t nt, Interval s_range, Interval t_range);

/// Wavefront OBJ with v, vn and "f a//a b//b c//c d//d" lines, 9 significant digits.
void write_obj(const SurfaceMesh& mesh, std::ostream& sink);

/// "s,inner,phi2,phi3,theta" rows at 12 significant digits followed by
/// c_estimate and max_deviation rows. Excluded ranges, when present, are
/// listed on '#' lines before the header.
void write_report_csv(const DTypeReport& report, std::ostream& sink);

/// printf-style "%#.{digits}g" with negative zero folded to zero.
std::string format_fixed_digits(double v, int digits);
/// printf-style "%.{digits}g" with negative zero folded to zero.
std::string format_general(double v, int digits);

} // namespace pencil
