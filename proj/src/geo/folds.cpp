#include "folds/geo/folds.hpp"

#include <cmath>
#include <numeric>
#include <queue>

namespace folds::geo {
namespace {

// Rotate t by the minimal rotation taking from -> to (both unit).
Vec3 transport(const Vec3& from, const Vec3& to, const Vec3& t) {
    const Vec3 axis = from.cross(to);
    const double s = axis.norm();
    const double c = from.dot(to);
    if (s < 1e-12) return c > 0 ? t : -t;  // parallel or opposite normals
    const Vec3 a = axis / s;
    // Rodrigues
    return t * c + a.cross(t) * s + a * a.dot(t) * (1.0 - c);
}

// Multi-source BFS: hop distance from the given source set, capped at
// limit + 1 (everything farther reports limit + 1).
std::vector<int> hop_distance(const std::vector<std::vector<int>>& adj,
                              const std::vector<uint8_t>& source, int limit) {
    const int nv = static_cast<int>(adj.size());
    std::vector<int> dist(static_cast<size_t>(nv), limit + 1);
    std::queue<int> q;
    for (int v = 0; v < nv; ++v)
        if (source[static_cast<size_t>(v)]) {
            dist[static_cast<size_t>(v)] = 0;
            q.push(v);
        }
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        if (dist[static_cast<size_t>(v)] >= limit) continue;
        for (int u : adj[static_cast<size_t>(v)])
            if (dist[static_cast<size_t>(u)] > dist[static_cast<size_t>(v)] + 1) {
                dist[static_cast<size_t>(u)] = dist[static_cast<size_t>(v)] + 1;
                q.push(u);
            }
    }
    return dist;
}

// Closing on the vertex graph: dilate by radius, erode by radius, and keep
// every original seed.
std::vector<uint8_t> close_region(const std::vector<std::vector<int>>& adj,
                                  const std::vector<uint8_t>& seeds, int radius) {
    if (radius <= 0) return seeds;
    const size_t nv = adj.size();
    const std::vector<int> to_seed = hop_distance(adj, seeds, radius);
    std::vector<uint8_t> dilated(nv), background(nv);
    for (size_t v = 0; v < nv; ++v) {
        dilated[v] = to_seed[v] <= radius;
        background[v] = !dilated[v];
    }
    const std::vector<int> to_bg = hop_distance(adj, background, radius);
    std::vector<uint8_t> closed(nv);
    for (size_t v = 0; v < nv; ++v) closed[v] = seeds[v] || (dilated[v] && to_bg[v] > radius);
    return closed;
}

}  // namespace

std::vector<double> direction_change_scores(const TriMesh& mesh, const CurvatureField& field) {
    const auto adj = vertex_adjacency(mesh);
    const int nv = mesh.vertex_count();
    std::vector<double> score(static_cast<size_t>(nv), 0.0);
    for (int v = 0; v < nv; ++v) {
        const auto& nbrs = adj[static_cast<size_t>(v)];
        if (nbrs.empty()) continue;
        const Vec3& nv_ = field.normal[static_cast<size_t>(v)];
        const Vec3& e1v = field.dir1[static_cast<size_t>(v)];
        double acc = 0.0;
        int used = 0;
        for (int u : nbrs) {
            if (field.unreliable[static_cast<size_t>(u)]) continue;
            Vec3 e1u = transport(field.normal[static_cast<size_t>(u)], nv_,
                                 field.dir1[static_cast<size_t>(u)]);
            // project into v's tangent plane
            e1u -= e1u.dot(nv_) * nv_;
            const double len = e1u.norm();
            if (len < 1e-9) continue;
            e1u /= len;
            acc += 1.0 - std::abs(e1v.dot(e1u));
            ++used;
        }
        if (used > 0) score[static_cast<size_t>(v)] = acc / used;
    }
    return score;
}

FoldLabeling detect_folds(const TriMesh& mesh, const CurvatureField& field,
                          const FoldParams& params) {
    const int nv = mesh.vertex_count();
    FoldLabeling out;
    out.is_fold.assign(static_cast<size_t>(nv), 0);
    out.instance.assign(static_cast<size_t>(nv), 0);

    const std::vector<double> score = direction_change_scores(mesh, field);
    for (int v = 0; v < nv; ++v) {
        if (field.unreliable[static_cast<size_t>(v)] || field.umbilic[static_cast<size_t>(v)])
            continue;
        if (score[static_cast<size_t>(v)] > params.theta_dir ||
            field.kappa1[static_cast<size_t>(v)] > params.theta_curv)
            out.is_fold[static_cast<size_t>(v)] = 1;
    }

    const auto adj = vertex_adjacency(mesh);
    out.is_fold = close_region(adj, out.is_fold, params.close_radius);

    // connected components on the fold subgraph, discovery order by vertex id
    std::vector<int> comp(static_cast<size_t>(nv), -1);
    std::vector<std::vector<int>> members;
    for (int seed = 0; seed < nv; ++seed) {
        if (!out.is_fold[static_cast<size_t>(seed)] || comp[static_cast<size_t>(seed)] >= 0)
            continue;
        const int id = static_cast<int>(members.size());
        members.emplace_back();
        std::queue<int> q;
        q.push(seed);
        comp[static_cast<size_t>(seed)] = id;
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            members[static_cast<size_t>(id)].push_back(v);
            for (int u : adj[static_cast<size_t>(v)]) {
                if (out.is_fold[static_cast<size_t>(u)] && comp[static_cast<size_t>(u)] < 0) {
                    comp[static_cast<size_t>(u)] = id;
                    q.push(u);
                }
            }
        }
    }

    // drop undersized components, renumber survivors contiguously
    int next_id = 0;
    for (auto& mem : members) {
        if (static_cast<int>(mem.size()) < params.min_component) {
            for (int v : mem) {
                out.is_fold[static_cast<size_t>(v)] = 0;
                out.instance[static_cast<size_t>(v)] = 0;
            }
        } else {
            ++next_id;
            for (int v : mem) out.instance[static_cast<size_t>(v)] = next_id;
        }
    }
    out.instance_count = next_id;
    return out;
}

}  // namespace folds::geo
