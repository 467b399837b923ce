#include "canalkit/mesh.hpp"

#include "canalkit/errors.hpp"
#include "canalkit/forms.hpp"
#include "canalkit/io.hpp"
#include "canalkit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <utility>

namespace canalkit {

namespace {

std::vector<std::pair<int, int>> undirected_edges(const QuadMesh& mesh) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces)
        for (int k = 0; k < 4; ++k) {
            const int a = f[k];
            const int b = f[(k + 1) % 4];
            edges.emplace_back(std::min(a, b), std::max(a, b));
        }
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace

double QuadMesh::area() const {
    double total = 0.0;
    for (const auto& f : faces) {
        const Vec3& a = vertices[f[0]];
        const Vec3& b = vertices[f[1]];
        const Vec3& c = vertices[f[2]];
        const Vec3& d = vertices[f[3]];
        total += 0.5 * ((b - a).cross(c - a).norm() +
                        (c - a).cross(d - a).norm());
    }
    return total;
}

int QuadMesh::euler_characteristic() const {
    auto edges = undirected_edges(*this);
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return static_cast<int>(vertices.size()) -
           static_cast<int>(edges.size()) + static_cast<int>(faces.size());
}

bool QuadMesh::watertight() const {
    const auto edges = undirected_edges(*this);
    for (std::size_t i = 0; i < edges.size();) {
        std::size_t j = i;
        while (j < edges.size() && edges[j] == edges[i]) ++j;
        if (j - i != 2) return false;
        i = j;
    }
    return !edges.empty();
}

QuadMesh tessellate(const ParametricSurface& surf, int n_s, int n_theta,
                    bool wrap_theta, bool wrap_s, int threads) {
    if (n_s < 2) throw InvalidParameter("tessellate: n_s must be >= 2");
    if (n_theta < 3) throw InvalidParameter("tessellate: n_theta must be >= 3");

    const Interval dom = surf.s_domain();
    const auto* canal = dynamic_cast<const CanalSurface*>(&surf);
    const auto* gt = dynamic_cast<const GeneralizedTube*>(&surf);

    QuadMesh mesh;
    mesh.n_s = n_s;
    mesh.n_theta = n_theta;
    mesh.wrap_s = wrap_s;
    mesh.wrap_theta = wrap_theta;

    const std::size_t nv = static_cast<std::size_t>(n_s) * n_theta;
    mesh.vertices.resize(nv);
    mesh.normals.resize(nv);
    mesh.s.resize(nv);
    mesh.theta.resize(nv);
    mesh.regular.resize(nv);
    mesh.gaussian.resize(nv);

    const double ds = dom.length() / (wrap_s ? n_s : n_s - 1);
    const double dt = 2.0 * kPi / (wrap_theta ? n_theta : n_theta - 1);

    // difference stencils cannot step past the spine domain, so curvature
    // attributes at boundary vertices use a center pulled just inside
    const double fd_step = 1e-3;
    const double halo = 2.0 * fd_step;
    auto stencil_center = [&](double sv) {
        if (dom.length() <= 2.0 * halo) return dom.lerp(0.5);
        return std::min(std::max(sv, dom.lo + halo), dom.hi - halo);
    };

    parallel_for(nv, resolve_threads(threads), [&](std::size_t lo,
                                                   std::size_t hi) {
        for (std::size_t v = lo; v < hi; ++v) {
            const int i = static_cast<int>(v) / n_theta;
            const int j = static_cast<int>(v) % n_theta;
            const double sv = dom.lo + ds * i;
            const double tv = dt * j;

            mesh.s[v] = sv;
            mesh.theta[v] = tv;
            mesh.vertices[v] = surf.point(sv, tv);

            const SurfaceJets jets =
                numeric_jets(surf, stencil_center(sv), tv, fd_step);
            bool reg;
            Vec3 nrm = Vec3::Zero();
            if (canal) {
                reg = canal->is_regular_at(sv, tv).regular;
                if (reg) {
                    try {
                        nrm = unit_normal_closed(*canal, sv, tv);
                    } catch (const RegularityError&) {
                        reg = false;
                    }
                }
            } else if (gt) {
                // closed normal is theta x s oriented; faces wind s x theta
                nrm = -gt_unit_normal_closed(*gt, sv, tv);
                reg = nrm.allFinite() &&
                      std::abs(nrm.norm() - 1.0) <= 1e-6;
                if (!reg) nrm = Vec3::Zero();
            } else {
                const Vec3 cross = jets.Ks.cross(jets.Kt);
                const double scale = jets.Ks.norm() * jets.Kt.norm();
                reg = cross.norm() > 1e-9 * std::max(1.0, scale);
                if (reg) nrm = cross.normalized();
            }

            double K = std::numeric_limits<double>::quiet_NaN();
            if (reg) {
                try {
                    const auto [I, II] = forms_from_jets(jets);
                    K = shape_operator(I, II).gaussian;
                } catch (const Error&) {
                    K = std::numeric_limits<double>::quiet_NaN();
                }
            }
            mesh.normals[v] = nrm;
            mesh.regular[v] = reg ? 1 : 0;
            mesh.gaussian[v] = K;
        }
    });

    const int nfs = wrap_s ? n_s : n_s - 1;
    const int nft = wrap_theta ? n_theta : n_theta - 1;
    mesh.faces.reserve(static_cast<std::size_t>(nfs) * nft);
    mesh.face_singular.reserve(static_cast<std::size_t>(nfs) * nft);
    for (int i = 0; i < nfs; ++i)
        for (int j = 0; j < nft; ++j) {
            const int i2 = (i + 1) % n_s;
            const int j2 = (j + 1) % n_theta;
            const std::array<int, 4> f = {
                mesh.vertex_index(i, j), mesh.vertex_index(i2, j),
                mesh.vertex_index(i2, j2), mesh.vertex_index(i, j2)};
            mesh.faces.push_back(f);
            mesh.face_singular.push_back(!(mesh.regular[f[0]] &&
                                           mesh.regular[f[1]] &&
                                           mesh.regular[f[2]] &&
                                           mesh.regular[f[3]]));
        }
    return mesh;
}

void export_obj(const QuadMesh& mesh, const std::string& path) {
    std::ostringstream out;
    out << "# canalkit quad mesh: " << mesh.vertices.size() << " vertices, "
        << mesh.faces.size() << " faces\n";
    for (const Vec3& v : mesh.vertices)
        out << "v " << format_g9(v.x()) << ' ' << format_g9(v.y()) << ' '
            << format_g9(v.z()) << '\n';
    for (const Vec3& n : mesh.normals)
        out << "vn " << format_g9(n.x()) << ' ' << format_g9(n.y()) << ' '
            << format_g9(n.z()) << '\n';
    for (std::size_t k = 0; k < mesh.faces.size(); ++k) {
        if (mesh.face_singular[k]) out << "# singular\n";
        const auto& f = mesh.faces[k];
        out << 'f';
        for (int idx : f) out << ' ' << idx + 1 << "//" << idx + 1;
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

void export_polyline_csv(const CurvatureLineTrace& trace,
                         const std::string& path) {
    std::ostringstream out;
    out << "step,s,theta,x,y,z,k_n\n";
    for (std::size_t k = 0; k < trace.s.size(); ++k) {
        const Vec3& p = trace.points[k];
        out << k << ',' << format_g9(trace.s[k]) << ','
            << format_g9(trace.theta[k]) << ',' << format_g9(p.x()) << ','
            << format_g9(p.y()) << ',' << format_g9(p.z()) << ','
            << format_g9(trace.k_n[k]) << '\n';
    }
    write_text_atomic(path, out.str());
}

ObjData parse_obj(const std::string& path) {
    ObjData data;
    std::istringstream in(read_text_file(path));
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "#") continue;
        if (tag == "v" || tag == "vn") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z()))
                throw IoError("malformed " + tag + " record in " + path);
            (tag == "v" ? data.vertices : data.normals).push_back(p);
        } else if (tag == "f") {
            std::vector<int> face;
            std::string tok;
            while (ls >> tok) face.push_back(std::atoi(tok.c_str()) - 1);
            if (face.size() < 3)
                throw IoError("malformed f record in " + path);
            data.faces.push_back(std::move(face));
        }
    }
    return data;
}

}  // namespace canalkit
