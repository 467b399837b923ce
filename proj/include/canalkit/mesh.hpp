#pragma once

#include "canalkit/loc.hpp"
#include "canalkit/surface.hpp"

#include <array>
#include <string>
#include <vector>

namespace canalkit {

/// Indexed quad mesh over the (s, theta) parameter grid, s-major. Wrapped
/// directions reuse row/column 0 instead of duplicating the seam, so the
/// vertex count is always n_s * n_theta. Singular vertices stay in the
/// arrays (zero normal, NaN Gaussian) and the faces touching them are
/// flagged degenerate rather than dropped, which keeps indices stable across
/// parameter tweaks.
struct QuadMesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::array<int, 4>> faces;
    std::vector<unsigned char> face_singular;

    std::vector<double> s;
    std::vector<double> theta;
    std::vector<unsigned char> regular;
    std::vector<double> gaussian;

    int n_s = 0;
    int n_theta = 0;
    bool wrap_s = false;
    bool wrap_theta = true;

    int vertex_index(int i, int j) const { return i * n_theta + j; }

    /// Sum of face areas, each quad split into two triangles.
    double area() const;
    /// V - E + F with undirected edges deduplicated.
    int euler_characteristic() const;
    /// True when every edge is shared by exactly two faces.
    bool watertight() const;
};

/// Evaluates the surface on an n_s x n_theta grid. theta spans a full turn:
/// step 2 pi / n_theta when wrapped, inclusive endpoints otherwise; s covers
/// the surface domain the same way. Wrapping s stitches the ends together
/// and is only geometrically sound when the spine itself closes up (it is
/// not checked). Singularities are flagged, never fatal. Grid evaluation
/// fans out over `threads` workers (0 = resolved from the environment) with
/// every vertex written to its own slot, so the result is deterministic.
QuadMesh tessellate(const ParametricSurface& surf, int n_s, int n_theta,
                    bool wrap_theta = true, bool wrap_s = false,
                    int threads = 0);

/// Wavefront OBJ with v/vn/f records, 1-based indices, quads kept as quads.
/// Degenerate faces are preceded by a `# singular` comment line. Written
/// atomically; byte-identical for identical meshes.
void export_obj(const QuadMesh& mesh, const std::string& path);

/// Trace polyline as CSV: step, s, theta, x, y, z, k_n.
void export_polyline_csv(const CurvatureLineTrace& trace,
                         const std::string& path);

/// Minimal OBJ reader for round-trip checks: v/vn/f records only, everything
/// else skipped. Face indices are returned 0-based.
struct ObjData {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::vector<int>> faces;
};

ObjData parse_obj(const std::string& path);

}  // namespace canalkit
