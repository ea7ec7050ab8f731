#include "folds/geo/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace folds::geo {
namespace {

constexpr double kNear = 0.05;  // mm

struct ClipVert {
    Vec3 cam;       // camera-space position
    Vec3 bary;      // barycentrics w.r.t. the original face
};

// Sutherland-Hodgman against the z >= near plane.
int clip_near(const ClipVert in[3], ClipVert out[4]) {
    int n = 0;
    for (int i = 0; i < 3; ++i) {
        const ClipVert& a = in[i];
        const ClipVert& b = in[(i + 1) % 3];
        const bool ain = a.cam.z() >= kNear;
        const bool bin = b.cam.z() >= kNear;
        if (ain) out[n++] = a;
        if (ain != bin) {
            const double t = (kNear - a.cam.z()) / (b.cam.z() - a.cam.z());
            out[n++] = {a.cam + t * (b.cam - a.cam), a.bary + t * (b.bary - a.bary)};
        }
    }
    return n;
}

}  // namespace

LabelFrame render_frame(const TriMesh& mesh, const FoldLabeling& labels, const CameraPose& pose,
                        int width, int height) {
    if (width <= 0 || height <= 0) throw std::runtime_error("render_frame: bad resolution");
    if (static_cast<int>(labels.instance.size()) != mesh.vertex_count())
        throw std::runtime_error("render_frame: labels not defined on this mesh");

    LabelFrame frame;
    frame.pose = pose;
    frame.rgb = ImageF(width, height, 3);
    frame.binary = ImageU8(width, height, 1);
    frame.instance = ImageU16(width, height, 1);
    frame.depth = ImageF(width, height, 1);

    std::vector<float> zbuf(static_cast<size_t>(width) * height,
                            std::numeric_limits<float>::infinity());

    auto raster_tri = [&](const ClipVert& v0, const ClipVert& v1, const ClipVert& v2,
                          const std::array<int, 3>& face) {
        // project
        double sx[3], sy[3], iz[3];
        const ClipVert* vs[3] = {&v0, &v1, &v2};
        for (int k = 0; k < 3; ++k) {
            const Vec3& c = vs[k]->cam;
            sx[k] = pose.fx * c.x() / c.z() + pose.cx;
            sy[k] = pose.fy * c.y() / c.z() + pose.cy;
            iz[k] = 1.0 / c.z();
        }
        const double area = (sx[1] - sx[0]) * (sy[2] - sy[0]) - (sx[2] - sx[0]) * (sy[1] - sy[0]);
        if (std::abs(area) < 1e-12) return;

        int x0 = std::max(0, static_cast<int>(std::floor(std::min({sx[0], sx[1], sx[2]}))));
        int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max({sx[0], sx[1], sx[2]}))));
        int y0 = std::max(0, static_cast<int>(std::floor(std::min({sy[0], sy[1], sy[2]}))));
        int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max({sy[0], sy[1], sy[2]}))));
        if (x0 > x1 || y0 > y1) return;

        const double inv_area = 1.0 / area;
        for (int py = y0; py <= y1; ++py) {
            for (int px = x0; px <= x1; ++px) {
                const double qx = px + 0.5, qy = py + 0.5;
                double l0 = ((sx[1] - qx) * (sy[2] - qy) - (sx[2] - qx) * (sy[1] - qy)) * inv_area;
                double l1 = ((sx[2] - qx) * (sy[0] - qy) - (sx[0] - qx) * (sy[2] - qy)) * inv_area;
                double l2 = 1.0 - l0 - l1;
                if (l0 < 0 || l1 < 0 || l2 < 0) continue;
                // perspective-correct interpolation
                const double izp = l0 * iz[0] + l1 * iz[1] + l2 * iz[2];
                const double z = 1.0 / izp;
                const size_t pix = static_cast<size_t>(py) * width + px;
                if (z >= zbuf[pix]) continue;
                zbuf[pix] = static_cast<float>(z);

                const double w0 = l0 * iz[0] / izp, w1 = l1 * iz[1] / izp, w2 = l2 * iz[2] / izp;
                const Vec3 bary = w0 * v0.bary + w1 * v1.bary + w2 * v2.bary;

                // majority vertex label of the original face
                const int ids[3] = {labels.instance[static_cast<size_t>(face[0])],
                                    labels.instance[static_cast<size_t>(face[1])],
                                    labels.instance[static_cast<size_t>(face[2])]};
                int label;
                if (ids[0] == ids[1] || ids[0] == ids[2]) label = ids[0];
                else if (ids[1] == ids[2]) label = ids[1];
                else {
                    // all distinct: nearest vertex by barycentric weight
                    int best = 0;
                    if (bary[1] > bary[best]) best = 1;
                    if (bary[2] > bary[best]) best = 2;
                    label = ids[best];
                }
                frame.depth.pixels[pix] = static_cast<float>(z);
                frame.instance.pixels[pix] = static_cast<uint16_t>(label);
                frame.binary.pixels[pix] = label > 0 ? 1 : 0;
            }
        }
    };

    for (const auto& face : mesh.faces) {
        ClipVert in[3], out[4];
        bool any_front = false;
        for (int k = 0; k < 3; ++k) {
            in[k].cam = pose.world_to_camera(mesh.vertices[static_cast<size_t>(face[k])]);
            in[k].bary = Vec3::Zero();
            in[k].bary[k] = 1.0;
            if (in[k].cam.z() >= kNear) any_front = true;
        }
        if (!any_front) continue;
        const int n = clip_near(in, out);
        for (int k = 2; k < n; ++k) raster_tri(out[0], out[k - 1], out[k], face);
    }

    // headlight shading: intensity = (d_min / d)^2, gray in all channels
    float dmin = std::numeric_limits<float>::infinity();
    for (float d : frame.depth.pixels)
        if (d > 0.0f && d < dmin) dmin = d;
    if (std::isfinite(dmin)) {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const float d = frame.depth.at(x, y);
                const float v = d > 0.0f ? (dmin / d) * (dmin / d) : 0.0f;
                frame.rgb.at(x, y, 0) = v;
                frame.rgb.at(x, y, 1) = v;
                frame.rgb.at(x, y, 2) = v;
            }
        }
    }
    return frame;
}

}  // namespace folds::geo
