#include "folds/geo/camera.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

using nlohmann::json;

namespace folds::geo {

double Quat::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quat Quat::normalized() const {
    const double n = norm();
    if (n < 1e-12) throw std::runtime_error("zero quaternion");
    return {w / n, x / n, y / n, z / n};
}

Vec3 Quat::rotate(const Vec3& v) const {
    const Vec3 q(x, y, z);
    const Vec3 t = 2.0 * q.cross(v);
    return v + w * t + q.cross(t);
}

Quat Quat::from_axes(const Vec3& right, const Vec3& down, const Vec3& forward) {
    Eigen::Matrix3d m;
    m.col(0) = right;
    m.col(1) = down;
    m.col(2) = forward;
    const Eigen::Quaterniond q(m);
    return Quat{q.w(), q.x(), q.y(), q.z()}.normalized();
}

Vec3 CameraPose::world_to_camera(const Vec3& p) const {
    return orientation.conjugate().rotate(p - position);
}

std::vector<CameraPose> poses_from_centerline(const std::vector<Vec3>& polyline, int frames) {
    if (polyline.size() < 2) throw std::runtime_error("centerline needs at least 2 points");
    if (frames < 1) throw std::runtime_error("centerline frame count must be positive");

    // arc-length table
    std::vector<double> cum{0.0};
    for (size_t i = 1; i < polyline.size(); ++i)
        cum.push_back(cum.back() + (polyline[i] - polyline[i - 1]).norm());
    const double total = cum.back();
    if (total < 1e-9) throw std::runtime_error("degenerate centerline");

    auto sample = [&](double s) -> Vec3 {
        size_t i = 1;
        while (i + 1 < cum.size() && cum[i] < s) ++i;
        const double seg = cum[i] - cum[i - 1];
        const double t = seg > 1e-12 ? (s - cum[i - 1]) / seg : 0.0;
        return polyline[i - 1] + t * (polyline[i] - polyline[i - 1]);
    };

    std::vector<CameraPose> poses;
    Vec3 up_hint(0, 0, 1);
    for (int f = 0; f < frames; ++f) {
        const double s = frames == 1 ? 0.0 : total * f / (frames - 1);
        const Vec3 p = sample(s);
        // look-ahead direction
        const double ds = std::max(total * 0.01, 1e-6);
        Vec3 fwd = sample(std::min(s + ds, total)) - sample(std::max(s - ds, 0.0));
        if (fwd.norm() < 1e-9) fwd = sample(total) - sample(0.0);
        fwd.normalize();
        // propagate the up hint to avoid frame flips along the tube
        Vec3 down = fwd.cross(up_hint);
        if (down.norm() < 1e-6) down = fwd.cross(Vec3(0, 1, 0));
        down.normalize();
        const Vec3 right = down.cross(fwd).normalized();
        up_hint = -right.cross(fwd);  // carried to next sample

        CameraPose pose;
        pose.position = p;
        pose.orientation = Quat::from_axes(right, down, fwd);
        poses.push_back(pose);
    }
    return poses;
}

Trajectory load_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trajectory: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("trajectory parse error in " + path + ": " + e.what());
    }

    Trajectory traj;
    traj.fps = j.value("fps", 50.0);
    if (traj.fps <= 0) throw std::runtime_error("trajectory fps must be positive");

    double fx = 0, fy = 0, cx = 0, cy = 0;
    if (j.contains("intrinsics")) {
        const auto& K = j["intrinsics"];
        fx = K.value("fx", 0.0);
        fy = K.value("fy", 0.0);
        cx = K.value("cx", 0.0);
        cy = K.value("cy", 0.0);
    }

    if (j.contains("poses")) {
        for (const auto& e : j["poses"]) {
            CameraPose pose;
            const auto p = e.at("position").get<std::vector<double>>();
            const auto q = e.at("quaternion").get<std::vector<double>>();
            if (p.size() != 3 || q.size() != 4)
                throw std::runtime_error("bad pose record in " + path);
            pose.position = Vec3(p[0], p[1], p[2]);
            pose.orientation = Quat{q[0], q[1], q[2], q[3]}.normalized();
            pose.fx = fx;
            pose.fy = fy;
            pose.cx = cx;
            pose.cy = cy;
            traj.poses.push_back(pose);
        }
    } else if (j.contains("centerline")) {
        std::vector<Vec3> line;
        for (const auto& e : j["centerline"]) {
            const auto p = e.get<std::vector<double>>();
            if (p.size() != 3) throw std::runtime_error("bad centerline point in " + path);
            line.emplace_back(p[0], p[1], p[2]);
        }
        const int frames = j.value("frames", 0);
        traj.poses = poses_from_centerline(line, frames);
        for (auto& pose : traj.poses) {
            pose.fx = fx;
            pose.fy = fy;
            pose.cx = cx;
            pose.cy = cy;
        }
    } else {
        throw std::runtime_error("trajectory file needs \"poses\" or \"centerline\": " + path);
    }
    if (traj.poses.empty()) throw std::runtime_error("empty trajectory: " + path);
    return traj;
}

void save_trajectory(const Trajectory& traj, const std::string& path) {
    json j;
    j["fps"] = traj.fps;
    auto& poses = j["poses"] = json::array();
    for (const auto& p : traj.poses) {
        poses.push_back({{"position", {p.position.x(), p.position.y(), p.position.z()}},
                         {"quaternion", {p.orientation.w, p.orientation.x, p.orientation.y,
                                         p.orientation.z}}});
    }
    if (!traj.poses.empty() && traj.poses.front().fx > 0) {
        const auto& p = traj.poses.front();
        j["intrinsics"] = {{"fx", p.fx}, {"fy", p.fy}, {"cx", p.cx}, {"cy", p.cy}};
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trajectory: " + path);
    out << j.dump(1) << "\n";
}

void apply_default_intrinsics(Trajectory& traj, int width, int height) {
    for (auto& p : traj.poses) {
        if (p.fx <= 0) p.fx = width / 2.0;  // 90-degree horizontal fov
        if (p.fy <= 0) p.fy = p.fx;
        if (p.cx <= 0) p.cx = width / 2.0;
        if (p.cy <= 0) p.cy = height / 2.0;
    }
}

}  // namespace folds::geo
