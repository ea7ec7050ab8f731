#include "folds/geo/curvature.hpp"

#include <cmath>
#include <queue>

#include <Eigen/Dense>

namespace folds::geo {
namespace {

// Ring neighborhood by BFS over the vertex graph, excluding the seed.
std::vector<int> ring_neighbors(const std::vector<std::vector<int>>& adj, int seed, int depth) {
    std::vector<int> out;
    std::vector<std::pair<int, int>> frontier{{seed, 0}};
    std::vector<int> seen{seed};
    size_t head = 0;
    while (head < frontier.size()) {
        auto [v, d] = frontier[head++];
        if (d == depth) continue;
        for (int u : adj[static_cast<size_t>(v)]) {
            bool is_new = true;
            for (int s : seen)
                if (s == u) {
                    is_new = false;
                    break;
                }
            if (!is_new) continue;
            seen.push_back(u);
            out.push_back(u);
            frontier.emplace_back(u, d + 1);
        }
    }
    return out;
}

void tangent_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
    // deterministic choice: start from the axis least aligned with n
    Vec3 a = std::abs(n.x()) <= std::abs(n.y()) && std::abs(n.x()) <= std::abs(n.z())
                 ? Vec3(1, 0, 0)
                 : (std::abs(n.y()) <= std::abs(n.z()) ? Vec3(0, 1, 0) : Vec3(0, 0, 1));
    t1 = (a - a.dot(n) * n).normalized();
    t2 = n.cross(t1);
}

}  // namespace

CurvatureField estimate_curvature(const TriMesh& mesh, const CurvatureParams& params) {
    const int nv = mesh.vertex_count();
    CurvatureField field;
    field.kappa1.assign(static_cast<size_t>(nv), 0.0);
    field.kappa2.assign(static_cast<size_t>(nv), 0.0);
    field.dir1.assign(static_cast<size_t>(nv), Vec3::Zero());
    field.dir2.assign(static_cast<size_t>(nv), Vec3::Zero());
    field.umbilic.assign(static_cast<size_t>(nv), 0);
    field.unreliable.assign(static_cast<size_t>(nv), 0);
    field.normal = mesh.has_normals() ? mesh.normals : vertex_normals(mesh);

    const auto adj = vertex_adjacency(mesh);

    for (int v = 0; v < nv; ++v) {
        const Vec3& n = field.normal[static_cast<size_t>(v)];
        Vec3 t1, t2;
        tangent_basis(n, t1, t2);

        if (adj[static_cast<size_t>(v)].size() < 3) {
            field.unreliable[static_cast<size_t>(v)] = 1;
            field.dir1[static_cast<size_t>(v)] = t1;
            field.dir2[static_cast<size_t>(v)] = t2;
            continue;
        }

        const std::vector<int> nbrs = ring_neighbors(adj, v, params.ring);
        // h(u,w) = a u^2 + b u w + c w^2 + d u + e w + f
        if (nbrs.size() < 6) {
            field.unreliable[static_cast<size_t>(v)] = 1;
            field.dir1[static_cast<size_t>(v)] = t1;
            field.dir2[static_cast<size_t>(v)] = t2;
            continue;
        }

        Eigen::MatrixXd A(nbrs.size(), 6);
        Eigen::VectorXd h(nbrs.size());
        const Vec3& p0 = mesh.vertices[static_cast<size_t>(v)];
        for (size_t k = 0; k < nbrs.size(); ++k) {
            const Vec3 d = mesh.vertices[static_cast<size_t>(nbrs[k])] - p0;
            const double u = d.dot(t1);
            const double w = d.dot(t2);
            A(static_cast<Eigen::Index>(k), 0) = u * u;
            A(static_cast<Eigen::Index>(k), 1) = u * w;
            A(static_cast<Eigen::Index>(k), 2) = w * w;
            A(static_cast<Eigen::Index>(k), 3) = u;
            A(static_cast<Eigen::Index>(k), 4) = w;
            A(static_cast<Eigen::Index>(k), 5) = 1.0;
            h(static_cast<Eigen::Index>(k)) = d.dot(n);
        }
        const Eigen::VectorXd coef =
            (A.transpose() * A).ldlt().solve(A.transpose() * h);
        const double a = coef(0), b = coef(1), c = coef(2), du = coef(3), dw = coef(4);

        // first/second fundamental forms of the fitted height surface at the origin
        const double s = std::sqrt(1.0 + du * du + dw * dw);
        Eigen::Matrix2d I;
        I << 1.0 + du * du, du * dw, du * dw, 1.0 + dw * dw;
        Eigen::Matrix2d II;
        II << 2.0 * a / s, b / s, b / s, 2.0 * c / s;
        // outward-convex positive: neighbors of a bulge sit below the tangent
        // plane (h < 0), so flip the shape operator to make a sphere with
        // outward normals report +1/R
        Eigen::Matrix2d S = -(I.inverse() * II);
        const Eigen::Matrix2d Ssym = 0.5 * (S + S.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Ssym);
        double k_small = es.eigenvalues()(0);
        double k_large = es.eigenvalues()(1);
        Eigen::Vector2d v_small = es.eigenvectors().col(0);
        Eigen::Vector2d v_large = es.eigenvectors().col(1);

        field.kappa1[static_cast<size_t>(v)] = k_large;
        field.kappa2[static_cast<size_t>(v)] = k_small;
        Vec3 e1 = (v_large(0) * t1 + v_large(1) * t2).normalized();
        // exact orthogonality of the reported frame
        Vec3 e2 = n.cross(e1).normalized();
        (void)v_small;
        field.dir1[static_cast<size_t>(v)] = e1;
        field.dir2[static_cast<size_t>(v)] = e2;

        const double diff = std::abs(k_large - k_small);
        if (diff <= params.umbilic_abs +
                        params.umbilic_rel * (std::abs(k_large) + std::abs(k_small)))
            field.umbilic[static_cast<size_t>(v)] = 1;
    }
    return field;
}

}  // namespace folds::geo
