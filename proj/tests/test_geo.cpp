#include <doctest.h>

#include <fstream>
#include <set>

#include "folds/geo/raster.hpp"
#include "helpers.hpp"

using namespace folds;
using testing::TempDir;

TEST_CASE("obj round trip and degenerate dropping") {
    TempDir tmp("mesh");
    geo::TriMesh mesh = geo::make_sphere(10.0, 12, 8);
    geo::save_obj(mesh, tmp.str("s.obj"));
    geo::TriMesh back = geo::load_mesh(tmp.str("s.obj"));
    CHECK(back.vertex_count() == mesh.vertex_count());
    CHECK(back.face_count() == mesh.face_count());
    for (int i = 0; i < mesh.vertex_count(); ++i)
        CHECK((back.vertices[size_t(i)] - mesh.vertices[size_t(i)]).norm() < 1e-4);

    std::ofstream(tmp.str("deg.obj")) << "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
                                         "f 1 2 3\nf 1 1 2\nf 1 2 2\n";
    geo::LoadReport report;
    geo::TriMesh deg = geo::load_mesh(tmp.str("deg.obj"), &report);
    CHECK(deg.face_count() == 1);
    CHECK(report.dropped_degenerate == 2);

    std::ofstream(tmp.str("neg.obj")) << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n";
    CHECK(geo::load_mesh(tmp.str("neg.obj")).face_count() == 1);

    std::ofstream(tmp.str("empty.obj")) << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 1 1\n";
    CHECK_THROWS(geo::load_mesh(tmp.str("empty.obj")));
    CHECK_THROWS(geo::load_mesh(tmp.str("nonexistent.obj")));
}

TEST_CASE("binary ply loads") {
    TempDir tmp("ply");
    // unit right triangle, one face, float32 vertices + uchar-count face list
    std::ofstream f(tmp.str("t.ply"), std::ios::binary);
    f << "ply\nformat binary_little_endian 1.0\n"
         "element vertex 3\nproperty float x\nproperty float y\nproperty float z\n"
         "element face 1\nproperty list uchar int vertex_indices\nend_header\n";
    const float verts[9] = {0, 0, 0, 1, 0, 0, 0, 1, 0};
    f.write(reinterpret_cast<const char*>(verts), sizeof(verts));
    const uint8_t count = 3;
    const int32_t idx[3] = {0, 1, 2};
    f.write(reinterpret_cast<const char*>(&count), 1);
    f.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    f.close();

    geo::TriMesh mesh = geo::load_mesh(tmp.str("t.ply"));
    CHECK(mesh.vertex_count() == 3);
    CHECK(mesh.face_count() == 1);
    CHECK(mesh.vertices[1].x() == doctest::Approx(1.0));
}

TEST_CASE("primitive normals point outward") {
    geo::TriMesh cyl = geo::make_cylinder(10.0, 50.0, 24, 24);
    std::vector<geo::Vec3> normals = geo::vertex_normals(cyl);
    for (int i = 0; i < cyl.vertex_count(); ++i) {
        geo::Vec3 radial(cyl.vertices[size_t(i)].x(), cyl.vertices[size_t(i)].y(), 0.0);
        if (radial.norm() < 1e-9) continue;
        CHECK(normals[size_t(i)].dot(radial.normalized()) > 0.5);
    }
    geo::TriMesh sph = geo::make_sphere(10.0, 24, 16);
    normals = geo::vertex_normals(sph);
    for (int i = 0; i < sph.vertex_count(); ++i)
        CHECK(normals[size_t(i)].dot(sph.vertices[size_t(i)].normalized()) > 0.5);
}

TEST_CASE("curvature oracle: cylinder") {
    const double r = 10.0;
    geo::TriMesh mesh = geo::make_cylinder(r, 80.0, 48, 48);
    geo::CurvatureField field = geo::estimate_curvature(mesh);
    int checked = 0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        const double z = mesh.vertices[size_t(i)].z();
        if (z < 15.0 || z > 65.0 || field.unreliable[size_t(i)]) continue;
        CHECK(field.kappa1[size_t(i)] == doctest::Approx(1.0 / r).epsilon(0.05));
        CHECK(std::abs(field.kappa2[size_t(i)]) < 0.1 / r);
        // kappa1 direction is circumferential (no z component)
        CHECK(std::abs(field.dir1[size_t(i)].z()) < 0.2);
        ++checked;
    }
    CHECK(checked > 500);
}

TEST_CASE("curvature oracle: sphere umbilics") {
    const double r = 20.0;
    geo::TriMesh mesh = geo::make_sphere(r, 64, 48);
    geo::CurvatureField field = geo::estimate_curvature(mesh);
    int interior = 0, umbilic = 0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (field.unreliable[size_t(i)]) continue;
        if (std::abs(mesh.vertices[size_t(i)].z()) > 0.95 * r) continue;  // pole fans
        ++interior;
        if (field.umbilic[size_t(i)]) ++umbilic;
        CHECK(field.kappa1[size_t(i)] == doctest::Approx(1.0 / r).epsilon(0.1));
    }
    CHECK(interior > 1000);
    CHECK(double(umbilic) / double(interior) >= 0.99);
}

TEST_CASE("curvature oracle: torus outer equator") {
    const double R = 40.0, r = 10.0;
    geo::TriMesh mesh = geo::make_torus(R, r, 96, 48);
    geo::CurvatureField field = geo::estimate_curvature(mesh);
    int checked = 0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        const geo::Vec3& v = mesh.vertices[size_t(i)];
        const double axial_dist = std::hypot(v.x(), v.y());
        // outer equator: farthest ring from the axis
        if (axial_dist < R + r - 0.05 || field.unreliable[size_t(i)]) continue;
        CHECK(field.kappa1[size_t(i)] == doctest::Approx(1.0 / r).epsilon(0.1));
        CHECK(field.kappa2[size_t(i)] == doctest::Approx(1.0 / (R + r)).epsilon(0.1));
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("fold detection finds the five crests") {
    geo::TriMesh mesh = geo::make_bumpy_cylinder(20.0, 100.0, 48, 96, 5, 4.0);
    geo::CurvatureField field = geo::estimate_curvature(mesh);
    geo::FoldLabeling labels = geo::detect_folds(mesh, field);
    CHECK(labels.instance_count == 5);

    // ids contiguous 1..K and consistent with is_fold
    std::set<int> seen;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        CHECK((labels.instance[size_t(i)] > 0) == (labels.is_fold[size_t(i)] != 0));
        if (labels.instance[size_t(i)] > 0) seen.insert(labels.instance[size_t(i)]);
    }
    CHECK(static_cast<int>(seen.size()) == labels.instance_count);
    CHECK(*seen.begin() == 1);
    CHECK(*seen.rbegin() == labels.instance_count);

    // each instance sits on one crest: its vertices' z mod period is tight
    for (int id = 1; id <= 5; ++id) {
        double zmin = 1e9, zmax = -1e9;
        for (int i = 0; i < mesh.vertex_count(); ++i)
            if (labels.instance[size_t(i)] == id) {
                zmin = std::min(zmin, mesh.vertices[size_t(i)].z());
                zmax = std::max(zmax, mesh.vertices[size_t(i)].z());
            }
        CHECK(zmax - zmin < 20.0);  // one 20mm period
    }
}

TEST_CASE("fold labels are rotation equivariant") {
    geo::TriMesh mesh = geo::make_bumpy_cylinder(20.0, 100.0, 32, 64, 4, 4.0);
    geo::FoldLabeling a = geo::detect_folds(mesh, geo::estimate_curvature(mesh));

    Eigen::Matrix3d rot =
        Eigen::AngleAxisd(0.83, geo::Vec3(1, 2, 3).normalized()).toRotationMatrix();
    geo::TriMesh rotated = mesh;
    for (auto& v : rotated.vertices) v = rot * v + geo::Vec3(5, -7, 11);
    geo::FoldLabeling b = geo::detect_folds(rotated, geo::estimate_curvature(rotated));

    CHECK(a.instance_count == b.instance_count);
    int diff = 0;
    for (size_t i = 0; i < a.is_fold.size(); ++i) diff += a.is_fold[i] != b.is_fold[i];
    CHECK(diff < mesh.vertex_count() / 100);
}

TEST_CASE("small components are dropped") {
    geo::TriMesh mesh = geo::make_bumpy_cylinder(20.0, 100.0, 48, 96, 5, 4.0);
    geo::CurvatureField field = geo::estimate_curvature(mesh);
    geo::FoldParams fp;
    fp.min_component = 100000;  // larger than any component
    CHECK(geo::detect_folds(mesh, field, fp).instance_count == 0);
}

TEST_CASE("trajectory json round trip and defaults") {
    TempDir tmp("traj");
    geo::Trajectory traj;
    traj.fps = 30.0;
    geo::CameraPose p;
    p.position = geo::Vec3(1, 2, 3);
    p.fx = 32;
    p.fy = 32;
    p.cx = 32;
    p.cy = 32;
    traj.poses = {p, p};
    geo::save_trajectory(traj, tmp.str("t.json"));
    geo::Trajectory back = geo::load_trajectory(tmp.str("t.json"));
    CHECK(back.fps == 30.0);
    CHECK(back.poses.size() == 2);
    CHECK(back.poses[0].position.y() == doctest::Approx(2.0));

    std::ofstream(tmp.str("center.json"))
        << R"({"fps": 50, "frames": 8, "centerline": [[0,0,0],[0,0,100]]})";
    geo::Trajectory center = geo::load_trajectory(tmp.str("center.json"));
    CHECK(center.poses.size() == 8);
    // camera forward is +z along this centerline
    const geo::Vec3 fwd = center.poses[3].orientation.rotate(geo::Vec3(0, 0, 1));
    CHECK(fwd.z() == doctest::Approx(1.0).epsilon(1e-6));

    geo::apply_default_intrinsics(center, 64, 48);
    CHECK(center.poses[0].fx == doctest::Approx(32.0));  // 90-degree horizontal fov
    CHECK(center.poses[0].cx == doctest::Approx(32.0));
    CHECK(center.poses[0].cy == doctest::Approx(24.0));
}

TEST_CASE("raster: slanted plane depth within 1 percent") {
    // plane z = 100 + 0.2 x (camera space == world space, identity pose)
    geo::TriMesh mesh;
    auto at = [](double x, double y) { return geo::Vec3(x, y, 100.0 + 0.2 * x); };
    mesh.vertices = {at(-200, -200), at(200, -200), at(200, 200), at(-200, 200)};
    mesh.faces = {{0, 1, 2}, {0, 2, 3}};
    geo::FoldLabeling labels;
    labels.is_fold.assign(4, 0);
    labels.instance.assign(4, 0);

    const int w = 33, h = 33;
    geo::CameraPose pose;
    pose.fx = pose.fy = w / 2.0;
    pose.cx = w / 2.0;
    pose.cy = h / 2.0;
    geo::LabelFrame frame = geo::render_frame(mesh, labels, pose, w, h);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double dx = (x + 0.5 - pose.cx) / pose.fx;
            // ray (dx*t, dy*t, t) hits z = 100 + 0.2 x at t = 100 / (1 - 0.2 dx)
            const double expected = 100.0 / (1.0 - 0.2 * dx);
            const float got = frame.depth.at(x, y);
            REQUIRE(got != geo::kDepthSentinel);
            CHECK(std::abs(got - expected) / expected < 0.01);
        }
    }
}

TEST_CASE("raster: sentinel, label consistency and headlight shading") {
    geo::TriMesh mesh = geo::make_bumpy_cylinder(20.0, 100.0, 32, 64, 5, 4.0);
    geo::FoldLabeling labels = geo::detect_folds(mesh, geo::estimate_curvature(mesh));
    geo::CameraPose pose;
    pose.position = geo::Vec3(0, 0, 20.0);
    pose.fx = pose.fy = 32;
    pose.cx = pose.cy = 32;
    geo::LabelFrame frame = geo::render_frame(mesh, labels, pose, 64, 64);

    float dmin = 1e30f;
    int hits = 0, fold_pixels = 0;
    for (float d : frame.depth.pixels)
        if (d > 0.0f) {
            ++hits;
            dmin = std::min(dmin, d);
        }
    CHECK(hits > 64 * 64 / 2);  // camera is inside the tube

    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const float d = frame.depth.at(x, y);
            const uint16_t inst = frame.instance.at(x, y);
            CHECK((frame.binary.at(x, y) == 1) == (inst > 0));
            fold_pixels += inst > 0;
            if (d == geo::kDepthSentinel) {
                CHECK(inst == 0);
                CHECK(frame.rgb.at(x, y, 0) == 0.0f);
            } else {
                // luminance inverts to depth
                const float lum = frame.rgb.at(x, y, 0);
                CHECK(dmin / std::sqrt(lum) == doctest::Approx(d).epsilon(1e-4));
            }
        }
    }
    CHECK(fold_pixels > 0);

    // all-background pose: camera facing away from the mesh
    geo::CameraPose away;
    away.position = geo::Vec3(0, 0, -500.0);
    away.orientation = geo::Quat::from_axes(geo::Vec3(1, 0, 0), geo::Vec3(0, -1, 0),
                                            geo::Vec3(0, 0, -1));
    away.fx = away.fy = 32;
    away.cx = away.cy = 32;
    geo::LabelFrame empty = geo::render_frame(mesh, labels, away, 64, 64);
    for (float d : empty.depth.pixels) CHECK(d == geo::kDepthSentinel);
}

TEST_CASE("dataset generation writes a consistent corpus") {
    TempDir tmp("gen");
    data::DatasetManifest m = testing::make_toy_dataset(tmp.str(), "sim", 4, 32);
    CHECK(m.frames.size() == 4);
    CHECK(m.has_fold_labels);
    CHECK(m.has_depth);

    data::DatasetManifest loaded = data::load_manifest(tmp.str("manifest.json"));
    CHECK(loaded.name == "sim");
    CHECK(loaded.frames.size() == 4);
    for (const data::FrameRecord& f : loaded.frames) {
        ImageU8 mask = io::read_png(loaded.resolve(f.mask));
        ImageU16 inst = io::read_png16(loaded.resolve(f.instance));
        ImageF depth = io::read_pfm(loaded.resolve(f.depth));
        for (size_t i = 0; i < mask.size(); ++i) {
            CHECK((mask.pixels[i] == 255) == (inst.pixels[i] > 0));
            if (inst.pixels[i] > 0) CHECK(depth.pixels[i] > 0.0f);
        }
    }

    // same inputs render bitwise identically
    TempDir tmp2("gen2");
    data::DatasetManifest m2 = testing::make_toy_dataset(tmp2.str(), "sim", 4, 32);
    for (size_t k = 0; k < m.frames.size(); ++k) {
        ImageU8 a = io::read_png(m.resolve(m.frames[k].rgb));
        ImageU8 b = io::read_png(m2.resolve(m2.frames[k].rgb));
        CHECK(a.pixels == b.pixels);
    }
}
