#include "canalkit/mesh.hpp"

#include "canalkit/forms.hpp"
#include "canalkit/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace canalkit;

namespace {

std::string artifact(const std::string& name) {
    std::filesystem::create_directories("test_artifacts");
    return "test_artifacts/" + name;
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
    int n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) ++n;
    return n;
}

CanalSurface unit_torus() {
    return CanalSurface(SpineCurve::circle(0.5), RadiusFunction::constant(0.12));
}

CanalSurface big_torus() {
    return CanalSurface(SpineCurve::circle(2.0), RadiusFunction::constant(0.5));
}

}  // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("grid layout and exact vertex placement") {
    CanalSurface torus = big_torus();
    const QuadMesh mesh = tessellate(torus, 4, 5, false, false);
    CHECK(mesh.vertices.size() == 20);
    CHECK(mesh.faces.size() == 12);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        const Vec3 p = torus.point(mesh.s[v], mesh.theta[v]);
        CHECK(mesh.vertices[v].x() == p.x());
        CHECK(mesh.vertices[v].y() == p.y());
        CHECK(mesh.vertices[v].z() == p.z());
    }
    for (const auto& f : mesh.faces)
        for (int idx : f) {
            CHECK(idx >= 0);
            CHECK(idx < static_cast<int>(mesh.vertices.size()));
        }
    // open grid endpoints land on the domain and full-turn boundaries
    CHECK(mesh.s.front() == doctest::Approx(torus.s_domain().lo));
    CHECK(mesh.s.back() == doctest::Approx(torus.s_domain().hi));
    CHECK(mesh.theta[4] == doctest::Approx(2.0 * kPi));

    CHECK_THROWS_AS(tessellate(torus, 1, 8), InvalidParameter);
    CHECK_THROWS_AS(tessellate(torus, 4, 2), InvalidParameter);
}

TEST_CASE("torus topology and normals") {
    CanalSurface torus = big_torus();
    const QuadMesh mesh = tessellate(torus, 64, 64, true, true);
    CHECK(mesh.vertices.size() == 64 * 64);
    CHECK(mesh.faces.size() == 64 * 64);
    CHECK(mesh.euler_characteristic() == 0);
    CHECK(mesh.watertight());

    // regular vertices carry unit normals matching the numeric cross
    for (int probe : {130, 517, 2048, 4030}) {
        REQUIRE(mesh.regular[probe]);
        CHECK(std::abs(mesh.normals[probe].norm() - 1.0) <= 1e-8);
        const SurfaceJets jets =
            numeric_jets(torus, mesh.s[probe], mesh.theta[probe]);
        Vec3 numeric = jets.Ks.cross(jets.Kt).normalized();
        if (numeric.dot(mesh.normals[probe]) < 0.0) numeric = -numeric;
        CHECK((numeric - mesh.normals[probe]).norm() <= 1e-6);
    }

    // Gaussian curvature attribute: elliptic outer equator of the torus
    const int outer = mesh.vertex_index(3, 0);
    CHECK(mesh.gaussian[outer] == doctest::Approx(0.8).epsilon(1e-6));

    const QuadMesh open_grid = tessellate(torus, 4, 5, false, false);
    CHECK(open_grid.euler_characteristic() == 1);
    CHECK_FALSE(open_grid.watertight());
}

TEST_CASE("discrete torus area converges to the closed form") {
    CanalSurface torus = big_torus();
    const double exact = 4.0 * kPi * kPi * 2.0 * 0.5;
    const double a32 = tessellate(torus, 32, 32, true, true).area();
    const double a64 = tessellate(torus, 64, 64, true, true).area();
    const double a128 = tessellate(torus, 128, 128, true, true).area();
    CHECK(std::abs(a128 - exact) / exact <= 0.01);
    // refinement gains less than what is left to gain
    CHECK(std::abs(a64 - a32) < std::abs(exact - a32));
    CHECK(std::abs(a128 - a64) < std::abs(exact - a64));
}

TEST_CASE("tessellation is deterministic across thread counts") {
    CanalSurface canal(SpineCurve::circular_helix(3.0, 4.0, {0.0, 2.0}),
                       RadiusFunction::linear(0.2, 0.3));
    const QuadMesh one = tessellate(canal, 9, 7, true, false, 1);
    const QuadMesh many = tessellate(canal, 9, 7, true, false, 4);
    REQUIRE(one.vertices.size() == many.vertices.size());
    for (std::size_t v = 0; v < one.vertices.size(); ++v) {
        CHECK(one.vertices[v] == many.vertices[v]);
        CHECK(one.normals[v] == many.normals[v]);
        CHECK(one.gaussian[v] == many.gaussian[v]);
    }
}

TEST_CASE("canal normals follow the closed form on both branches") {
    SpineCurve helix = SpineCurve::circular_helix(3.0, 4.0, {0.0, 2.0});
    for (SignBranch b : {SignBranch::minus, SignBranch::plus}) {
        CanalSurface canal(helix, RadiusFunction::linear(0.2, 0.3), b);
        const QuadMesh mesh = tessellate(canal, 6, 6);
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            REQUIRE(mesh.regular[v]);
            const Vec3 closed =
                unit_normal_closed(canal, mesh.s[v], mesh.theta[v]);
            CHECK((mesh.normals[v] - closed).norm() <= 1e-12);
        }
    }
}

TEST_CASE("generalized tube tessellation") {
    GeneralizedTube gt(SpineCurve::circular_helix(3.0, 4.0, {0.0, 3.0}),
                       Profile::cosine(2.0, 0.3));
    const QuadMesh mesh = tessellate(gt, 8, 8);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        CHECK(mesh.regular[v]);
        CHECK(std::abs(mesh.normals[v].norm() - 1.0) <= 1e-8);
        CHECK(std::isfinite(mesh.gaussian[v]));
    }
}

TEST_CASE("obj export: counts, determinism, round trip") {
    CanalSurface torus = unit_torus();
    const QuadMesh mesh = tessellate(torus, 2, 3, false, false);
    const std::string path = artifact("grid2x3.obj");
    export_obj(mesh, path);
    const std::string text = read_text_file(path);
    CHECK(count_lines_starting(text, "v ") == 6);
    CHECK(count_lines_starting(text, "vn ") == 6);
    CHECK(count_lines_starting(text, "f ") == 2);

    export_obj(mesh, path);
    CHECK(read_text_file(path) == text);
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

    const ObjData parsed = parse_obj(path);
    REQUIRE(parsed.vertices.size() == mesh.vertices.size());
    REQUIRE(parsed.normals.size() == mesh.normals.size());
    REQUIRE(parsed.faces.size() == mesh.faces.size());
    double dev = 0.0;
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        dev = std::max(dev, (parsed.vertices[v] - mesh.vertices[v]).norm());
    CHECK(dev <= 1e-9);  // formatting quantum at this coordinate scale
    for (std::size_t k = 0; k < mesh.faces.size(); ++k)
        for (int c = 0; c < 4; ++c)
            CHECK(parsed.faces[k][c] == mesh.faces[k][c]);

    // coordinates of order 2.5 quantize at 5e-9 per component
    const std::string big_path = artifact("torus.obj");
    const QuadMesh big = tessellate(big_torus(), 16, 16, true, true);
    export_obj(big, big_path);
    const ObjData big_parsed = parse_obj(big_path);
    double big_dev = 0.0;
    for (std::size_t v = 0; v < big.vertices.size(); ++v)
        big_dev =
            std::max(big_dev, (big_parsed.vertices[v] - big.vertices[v]).norm());
    CHECK(big_dev <= 1e-8);
}

TEST_CASE("singular vertices are flagged and faces kept") {
    // plus branch over the unit circle with r = 1 pinches along theta = 0
    CanalSurface pinched(SpineCurve::circle(1.0), RadiusFunction::constant(1.0),
                         SignBranch::plus);
    const QuadMesh mesh = tessellate(pinched, 8, 8, true, true);
    int singular_vertices = 0;
    for (unsigned char r : mesh.regular) singular_vertices += r ? 0 : 1;
    CHECK(singular_vertices == 8);  // the theta = 0 column
    int degenerate = 0;
    for (unsigned char d : mesh.face_singular) degenerate += d ? 1 : 0;
    CHECK(degenerate == 16);  // both face columns touching theta = 0
    CHECK(mesh.faces.size() == 64);  // kept, not dropped

    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        if (!mesh.regular[v]) {
            CHECK(mesh.normals[v].norm() == 0.0);
            CHECK(std::isnan(mesh.gaussian[v]));
        }

    const std::string path = artifact("pinched.obj");
    export_obj(mesh, path);
    CHECK(count_lines_starting(read_text_file(path), "# singular") == 16);
}

TEST_CASE("trace polyline export") {
    CurvatureLineTrace trace;
    trace.s = {0.0, 0.25, 0.5};
    trace.theta = {1.0, 1.0, 1.0};
    trace.points = {Vec3(1.0, 2.0, 3.0), Vec3(1.5, 2.5, 3.5),
                    Vec3(-0.0, 0.1, 1e-12)};
    trace.k_n = {2.0, 2.0, 2.0};
    const std::string path = artifact("trace.csv");
    export_polyline_csv(trace, path);
    const std::string text = read_text_file(path);
    CHECK(count_lines_starting(text, "step,s,theta,x,y,z,k_n") == 1);
    CHECK(count_lines_starting(text, "0,") == 1);
    CHECK(count_lines_starting(text, "2,") == 1);
    CHECK(text.find("-0,") == std::string::npos);  // negative zero flushed
    export_polyline_csv(trace, path);
    CHECK(read_text_file(path) == text);
}

TEST_SUITE_END();
