#include <CLI11.hpp>

#include "folds/geo/camera.hpp"
#include "folds/geo/mesh.hpp"

using namespace folds;

int main(int argc, char** argv) {
    CLI::App app{"Generate analytic test meshes and matching fly-through trajectories"};
    std::string kind = "bumpy-cylinder", out_path, traj_path;
    double radius = 20.0, length = 100.0, bump_amp = 3.0, major_radius = 40.0;
    int segments = 48, rings = 96, bumps = 5, frames = 32;
    double fps = 50.0;
    app.add_option("--kind", kind, "bumpy-cylinder | cylinder | sphere | torus");
    app.add_option("--out", out_path, "output OBJ path")->required();
    app.add_option("--trajectory-out", traj_path, "optional trajectory JSON path");
    app.add_option("--radius", radius, "tube/sphere radius (mm)");
    app.add_option("--length", length, "cylinder length (mm)");
    app.add_option("--segments", segments, "circumferential segments");
    app.add_option("--rings", rings, "axial rings / stacks");
    app.add_option("--bumps", bumps, "sinusoidal bump count");
    app.add_option("--bump-amp", bump_amp, "bump amplitude (mm)");
    app.add_option("--major-radius", major_radius, "torus major radius (mm)");
    app.add_option("--frames", frames, "trajectory frame count");
    app.add_option("--fps", fps, "trajectory fps");
    CLI11_PARSE(app, argc, argv);

    try {
        geo::TriMesh mesh;
        if (kind == "bumpy-cylinder")
            mesh = geo::make_bumpy_cylinder(radius, length, segments, rings, bumps, bump_amp);
        else if (kind == "cylinder")
            mesh = geo::make_cylinder(radius, length, segments, rings);
        else if (kind == "sphere")
            mesh = geo::make_sphere(radius, segments, rings);
        else if (kind == "torus")
            mesh = geo::make_torus(major_radius, radius, segments, rings);
        else
            throw std::runtime_error("unknown mesh kind '" + kind + "'");
        geo::save_obj(mesh, out_path);
        std::printf("wrote %d vertices, %d faces to %s\n", mesh.vertex_count(),
                    mesh.face_count(), out_path.c_str());

        if (!traj_path.empty()) {
            std::vector<geo::Vec3> centerline;
            if (kind == "bumpy-cylinder" || kind == "cylinder") {
                const double margin = length * 0.1;
                centerline = {geo::Vec3(0, 0, margin), geo::Vec3(0, 0, length - margin)};
            } else {
                const double r = kind == "torus" ? major_radius + 3 * radius : 3 * radius;
                centerline = {geo::Vec3(0, 0, -r), geo::Vec3(0, 0, -1.2 * radius)};
            }
            geo::Trajectory traj;
            traj.fps = fps;
            traj.poses = geo::poses_from_centerline(centerline, frames);
            geo::save_trajectory(traj, traj_path);
            std::printf("wrote %d poses to %s\n", frames, traj_path.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
