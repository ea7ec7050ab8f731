#include <CLI11.hpp>

#include "folds/geo/curvature.hpp"
#include "folds/geo/dataset.hpp"
#include "folds/geo/folds.hpp"

using namespace folds;

int main(int argc, char** argv) {
    CLI::App app{"Render a labeled fold dataset from a mesh and a camera trajectory"};
    std::string mesh_path, traj_path, out_dir, name = "sim", role = "train";
    int width = 256, height = 256;
    double fps = 50.0;
    geo::FoldParams fp;
    app.add_option("--mesh", mesh_path, "OBJ or binary PLY mesh (mm)")->required();
    app.add_option("--trajectory", traj_path, "trajectory JSON")->required();
    app.add_option("--out", out_dir, "output dataset directory")->required();
    app.add_option("--width", width, "frame width");
    app.add_option("--height", height, "frame height");
    app.add_option("--fps", fps, "frames per second recorded in the manifest");
    app.add_option("--name", name, "split name");
    app.add_option("--role", role, "train or test");
    app.add_option("--theta-dir", fp.theta_dir, "direction-change fold threshold");
    app.add_option("--theta-curv", fp.theta_curv, "max-curvature fold threshold (1/mm)");
    app.add_option("--min-component", fp.min_component, "minimum fold component size (vertices)");
    CLI11_PARSE(app, argc, argv);

    try {
        geo::LoadReport report;
        geo::TriMesh mesh = geo::load_mesh(mesh_path, &report);
        if (report.dropped_degenerate > 0)
            std::fprintf(stderr, "warning: dropped %d degenerate faces\n",
                         report.dropped_degenerate);
        geo::CurvatureField field = geo::estimate_curvature(mesh);
        geo::FoldLabeling labels = geo::detect_folds(mesh, field, fp);
        geo::Trajectory traj = geo::load_trajectory(traj_path);
        traj.fps = fps;
        geo::apply_default_intrinsics(traj, width, height);
        geo::GenerateParams gp;
        gp.width = width;
        gp.height = height;
        gp.split_name = name;
        gp.role = role;
        data::DatasetManifest m = geo::generate_dataset(mesh, labels, traj, gp, out_dir);
        std::printf("wrote %zu frames (%d fold instances) to %s\n", m.frames.size(),
                    labels.instance_count, out_dir.c_str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
