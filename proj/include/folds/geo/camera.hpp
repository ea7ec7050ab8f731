#pragma once

#include <string>
#include <vector>

#include "folds/geo/mesh.hpp"

namespace folds::geo {

struct Quat {
    double w = 1, x = 0, y = 0, z = 0;

    double norm() const;
    Quat normalized() const;
    Vec3 rotate(const Vec3& v) const;
    Quat conjugate() const { return {w, -x, -y, -z}; }
    static Quat from_axes(const Vec3& right, const Vec3& down, const Vec3& forward);
};

// Pinhole camera: x right, y down, z forward (the optical axis).
// Quaternion maps camera coordinates into world coordinates.
struct CameraPose {
    Vec3 position = Vec3::Zero();  // mm
    Quat orientation;
    double fx = 0, fy = 0;  // pixels
    double cx = 0, cy = 0;

    Vec3 world_to_camera(const Vec3& p) const;
};

struct Trajectory {
    std::vector<CameraPose> poses;
    double fps = 50.0;
};

// JSON trajectory file. Either an explicit pose list:
//   {"fps":50, "intrinsics":{"fx":..,"fy":..,"cx":..,"cy":..},
//    "poses":[{"position":[x,y,z], "quaternion":[w,x,y,z]}, ...]}
// or a centerline polyline with look-ahead orientation:
//   {"fps":50, "frames":N, "intrinsics":{...}, "centerline":[[x,y,z],...]}
// Intrinsics may be omitted; they then default to a 90-degree horizontal
// field of view at render resolution.
Trajectory load_trajectory(const std::string& path);

void save_trajectory(const Trajectory& traj, const std::string& path);

// Fill in zero intrinsics with the 90-degree-fov default for a W x H target.
void apply_default_intrinsics(Trajectory& traj, int width, int height);

// Sampled centerline poses (also used by the loader).
std::vector<CameraPose> poses_from_centerline(const std::vector<Vec3>& polyline, int frames);

}  // namespace folds::geo
