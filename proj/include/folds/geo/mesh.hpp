#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace folds::geo {

using Vec3 = Eigen::Vector3d;

// Triangle mesh in millimeters.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<Vec3> normals;  // optional per-vertex unit normals

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
    bool has_normals() const { return !normals.empty(); }
};

struct LoadReport {
    int dropped_degenerate = 0;  // zero-area or index-repeating faces removed
};

// OBJ (v/vn/f) or binary little-endian PLY. Degenerate faces are dropped.
// Throws std::runtime_error for unreadable files, unsupported formats or a
// mesh with no valid faces.
TriMesh load_mesh(const std::string& path, LoadReport* report = nullptr);

void save_obj(const TriMesh& mesh, const std::string& path);

// Area-weighted per-vertex normals (computed; ignores mesh.normals).
std::vector<Vec3> vertex_normals(const TriMesh& mesh);

// Vertex -> sorted unique neighbor vertices.
std::vector<std::vector<int>> vertex_adjacency(const TriMesh& mesh);

double face_area(const TriMesh& mesh, int face);

// --- analytic primitives (tests, toy pipeline) ---

// Tube along +z, z in [0, length], radius profile r(z); rings x segments
// quads, each split in two. Outward normals.
TriMesh make_cylinder(double radius, double length, int segments, int rings);
// radius(z) = radius + bump_amp * sin(2*pi*bumps*z/length)
TriMesh make_bumpy_cylinder(double radius, double length, int segments, int rings, int bumps,
                            double bump_amp);
TriMesh make_sphere(double radius, int slices, int stacks);
// Major radius R in the xy-plane, tube radius r.
TriMesh make_torus(double major_radius, double minor_radius, int major_segments,
                   int minor_segments);

}  // namespace folds::geo
