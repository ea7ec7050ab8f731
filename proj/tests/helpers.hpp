#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "folds/core/tensor.hpp"
#include "folds/data/manifest.hpp"
#include "folds/geo/curvature.hpp"
#include "folds/geo/dataset.hpp"
#include "folds/geo/folds.hpp"

namespace folds::testing {

// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("folds-" + tag + "-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string str(const std::string& rel = "") const {
        return rel.empty() ? path.string() : (path / rel).string();
    }
};

// Central-difference check of an analytic gradient. Returns the worst
// relative error over all coordinates (relative to max(|num|, |ana|, floor)).
inline double gradcheck(const std::function<double(const Tensor&)>& f, const Tensor& x,
                        const Tensor& analytic, double eps = 1e-3, double floor = 1e-4) {
    Tensor probe = x;
    double worst = 0.0;
    for (int64_t i = 0; i < x.numel(); ++i) {
        const float orig = probe[i];
        probe[i] = orig + static_cast<float>(eps);
        const double fp = f(probe);
        probe[i] = orig - static_cast<float>(eps);
        const double fm = f(probe);
        probe[i] = orig;
        const double num = (fp - fm) / (2.0 * eps);
        const double ana = analytic[i];
        const double rel =
            std::abs(num - ana) / std::max({std::abs(num), std::abs(ana), floor});
        worst = std::max(worst, rel);
    }
    return worst;
}

// Renders a small labeled dataset from a bumpy-cylinder fly-through.
// `bumps`/`bump_amp` vary the geometry so different datasets have different
// content; resolution `size` x `size`.
inline data::DatasetManifest make_toy_dataset(const std::string& dir, const std::string& name,
                                              int frames, int size, int bumps = 5,
                                              double bump_amp = 4.0, double radius = 20.0,
                                              const std::string& role = "train") {
    const double length = 100.0;
    geo::TriMesh mesh = geo::make_bumpy_cylinder(radius, length, 32, 64, bumps, bump_amp);
    geo::CurvatureField field = geo::estimate_curvature(mesh);
    geo::FoldLabeling labels = geo::detect_folds(mesh, field);
    geo::Trajectory traj;
    traj.poses = geo::poses_from_centerline(
        {geo::Vec3(0, 0, length * 0.1), geo::Vec3(0, 0, length * 0.9)}, frames);
    geo::apply_default_intrinsics(traj, size, size);
    geo::GenerateParams gp;
    gp.width = size;
    gp.height = size;
    gp.split_name = name;
    gp.role = role;
    return geo::generate_dataset(mesh, labels, traj, gp, dir);
}

}  // namespace folds::testing
