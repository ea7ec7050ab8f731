#include "folds/geo/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace folds::geo {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAreaEps = 1e-12;  // mm^2

[[noreturn]] void fail(const std::string& msg, const std::string& path) {
    throw std::runtime_error(msg + ": " + path);
}

bool face_valid(const TriMesh& m, const std::array<int, 3>& f) {
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) return false;
    const Vec3& a = m.vertices[static_cast<size_t>(f[0])];
    const Vec3& b = m.vertices[static_cast<size_t>(f[1])];
    const Vec3& c = m.vertices[static_cast<size_t>(f[2])];
    return 0.5 * (b - a).cross(c - a).norm() > kAreaEps;
}

void append_face(TriMesh& m, std::array<int, 3> f, int& dropped, const std::string& path) {
    for (int idx : f)
        if (idx < 0 || idx >= m.vertex_count()) fail("face index out of range", path);
    if (face_valid(m, f))
        m.faces.push_back(f);
    else
        ++dropped;
}

TriMesh load_obj(const std::string& path, int& dropped) {
    std::ifstream in(path);
    if (!in) fail("cannot open mesh", path);
    TriMesh m;
    std::vector<Vec3> file_normals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            double x, y, z;
            if (!(ss >> x >> y >> z)) fail("malformed vertex record", path);
            m.vertices.emplace_back(x, y, z);
        } else if (tag == "vn") {
            double x, y, z;
            if (!(ss >> x >> y >> z)) fail("malformed normal record", path);
            file_normals.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ss >> tok) {
                // forms: v, v/vt, v//vn, v/vt/vn
                const size_t slash = tok.find('/');
                int v = std::stoi(tok.substr(0, slash));
                if (v < 0) v = m.vertex_count() + v + 1;  // negative = relative
                idx.push_back(v - 1);
            }
            if (idx.size() < 3) fail("face with fewer than 3 vertices", path);
            for (size_t k = 2; k < idx.size(); ++k)  // fan triangulation
                append_face(m, {idx[0], idx[k - 1], idx[k]}, dropped, path);
        }
    }
    if (file_normals.size() == m.vertices.size()) {
        m.normals = std::move(file_normals);
        for (auto& n : m.normals) {
            const double len = n.norm();
            if (len > 1e-12) n /= len;
        }
    }
    return m;
}

struct PlyProperty {
    std::string type;
    std::string name;
};

size_t scalar_size(const std::string& type, const std::string& path) {
    if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
    if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
    if (type == "int" || type == "uint" || type == "int32" || type == "uint32" ||
        type == "float" || type == "float32")
        return 4;
    if (type == "double" || type == "float64") return 8;
    fail("unsupported PLY property type " + type, path);
}

double read_scalar(std::ifstream& in, const std::string& type, const std::string& path) {
    char buf[8];
    const size_t n = scalar_size(type, path);
    if (!in.read(buf, static_cast<std::streamsize>(n))) fail("truncated PLY data", path);
    if (type == "float" || type == "float32") {
        float v;
        std::memcpy(&v, buf, 4);
        return v;
    }
    if (type == "double" || type == "float64") {
        double v;
        std::memcpy(&v, buf, 8);
        return v;
    }
    if (type == "char" || type == "int8") return *reinterpret_cast<int8_t*>(buf);
    if (type == "uchar" || type == "uint8") return *reinterpret_cast<uint8_t*>(buf);
    if (type == "short" || type == "int16") {
        int16_t v;
        std::memcpy(&v, buf, 2);
        return v;
    }
    if (type == "ushort" || type == "uint16") {
        uint16_t v;
        std::memcpy(&v, buf, 2);
        return v;
    }
    if (type == "int" || type == "int32") {
        int32_t v;
        std::memcpy(&v, buf, 4);
        return v;
    }
    uint32_t v;
    std::memcpy(&v, buf, 4);
    return v;
}

TriMesh load_ply(const std::string& path, int& dropped) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open mesh", path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("ply", 0) != 0) fail("not a PLY file", path);

    size_t vertex_count = 0, face_count = 0;
    std::vector<PlyProperty> vertex_props;
    std::string list_count_type, list_index_type;
    std::string current_element;
    bool binary_le = false, header_done = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "comment") continue;
        if (tag == "format") {
            std::string fmt;
            ss >> fmt;
            binary_le = (fmt == "binary_little_endian");
            if (!binary_le) fail("only binary little-endian PLY is supported", path);
        } else if (tag == "element") {
            std::string name;
            size_t count;
            ss >> name >> count;
            current_element = name;
            if (name == "vertex") vertex_count = count;
            else if (name == "face") face_count = count;
        } else if (tag == "property") {
            std::string type;
            ss >> type;
            if (type == "list") {
                std::string ct, it, name;
                ss >> ct >> it >> name;
                if (current_element == "face") {
                    list_count_type = ct;
                    list_index_type = it;
                }
            } else {
                std::string name;
                ss >> name;
                if (current_element == "vertex") vertex_props.push_back({type, name});
            }
        } else if (tag == "end_header") {
            header_done = true;
            break;
        }
    }
    if (!header_done) fail("truncated PLY header", path);
    if (vertex_count == 0 || face_count == 0) fail("PLY without vertex/face elements", path);
    if (list_count_type.empty()) fail("PLY face element without index list", path);

    TriMesh m;
    m.vertices.reserve(vertex_count);
    bool has_normals = false;
    for (const auto& p : vertex_props)
        if (p.name == "nx") has_normals = true;
    if (has_normals) m.normals.reserve(vertex_count);

    for (size_t i = 0; i < vertex_count; ++i) {
        double x = 0, y = 0, z = 0, nx = 0, ny = 0, nz = 0;
        for (const auto& p : vertex_props) {
            const double v = read_scalar(in, p.type, path);
            if (p.name == "x") x = v;
            else if (p.name == "y") y = v;
            else if (p.name == "z") z = v;
            else if (p.name == "nx") nx = v;
            else if (p.name == "ny") ny = v;
            else if (p.name == "nz") nz = v;
        }
        m.vertices.emplace_back(x, y, z);
        if (has_normals) {
            Vec3 n(nx, ny, nz);
            const double len = n.norm();
            m.normals.push_back(len > 1e-12 ? Vec3(n / len) : Vec3(0, 0, 1));
        }
    }
    for (size_t i = 0; i < face_count; ++i) {
        const auto count = static_cast<size_t>(read_scalar(in, list_count_type, path));
        if (count < 3 || count > 255) fail("bad PLY face vertex count", path);
        std::vector<int> idx(count);
        for (size_t k = 0; k < count; ++k)
            idx[k] = static_cast<int>(read_scalar(in, list_index_type, path));
        for (size_t k = 2; k < count; ++k)
            append_face(m, {idx[0], idx[k - 1], idx[k]}, dropped, path);
    }
    return m;
}

}  // namespace

TriMesh load_mesh(const std::string& path, LoadReport* report) {
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    int dropped = 0;
    TriMesh m;
    if (ext == "obj" || ext == "OBJ")
        m = load_obj(path, dropped);
    else if (ext == "ply" || ext == "PLY")
        m = load_ply(path, dropped);
    else
        fail("unsupported mesh format (expect .obj or .ply)", path);
    if (m.faces.empty()) fail("mesh has no valid faces", path);
    if (report) report->dropped_degenerate = dropped;
    return m;
}

void save_obj(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("cannot write mesh", path);
    out.precision(10);
    for (const auto& v : mesh.vertices) out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& n : mesh.normals)
        out << "vn " << n.x() << " " << n.y() << " " << n.z() << "\n";
    for (const auto& f : mesh.faces)
        out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
    std::vector<Vec3> normals(mesh.vertices.size(), Vec3::Zero());
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[static_cast<size_t>(f[0])];
        const Vec3& b = mesh.vertices[static_cast<size_t>(f[1])];
        const Vec3& c = mesh.vertices[static_cast<size_t>(f[2])];
        const Vec3 fn = (b - a).cross(c - a);  // magnitude = 2*area (area weighting)
        for (int idx : f) normals[static_cast<size_t>(idx)] += fn;
    }
    for (auto& n : normals) {
        const double len = n.norm();
        if (len > 1e-12) n /= len;
    }
    return normals;
}

std::vector<std::vector<int>> vertex_adjacency(const TriMesh& mesh) {
    std::vector<std::set<int>> adj(mesh.vertices.size());
    for (const auto& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            adj[static_cast<size_t>(f[k])].insert(f[(k + 1) % 3]);
            adj[static_cast<size_t>(f[k])].insert(f[(k + 2) % 3]);
        }
    }
    std::vector<std::vector<int>> out(adj.size());
    for (size_t i = 0; i < adj.size(); ++i) out[i].assign(adj[i].begin(), adj[i].end());
    return out;
}

double face_area(const TriMesh& mesh, int face) {
    const auto& f = mesh.faces[static_cast<size_t>(face)];
    const Vec3& a = mesh.vertices[static_cast<size_t>(f[0])];
    const Vec3& b = mesh.vertices[static_cast<size_t>(f[1])];
    const Vec3& c = mesh.vertices[static_cast<size_t>(f[2])];
    return 0.5 * (b - a).cross(c - a).norm();
}

TriMesh make_bumpy_cylinder(double radius, double length, int segments, int rings, int bumps,
                            double bump_amp) {
    TriMesh m;
    for (int i = 0; i <= rings; ++i) {
        const double z = length * i / rings;
        const double r = radius + bump_amp * std::sin(2.0 * kPi * bumps * z / length);
        for (int j = 0; j < segments; ++j) {
            const double a = 2.0 * kPi * j / segments;
            m.vertices.emplace_back(r * std::cos(a), r * std::sin(a), z);
        }
    }
    auto vid = [&](int i, int j) { return i * segments + (j % segments); };
    for (int i = 0; i < rings; ++i) {
        for (int j = 0; j < segments; ++j) {
            m.faces.push_back({vid(i, j), vid(i, j + 1), vid(i + 1, j)});
            m.faces.push_back({vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j)});
        }
    }
    return m;
}

TriMesh make_cylinder(double radius, double length, int segments, int rings) {
    return make_bumpy_cylinder(radius, length, segments, rings, 1, 0.0);
}

TriMesh make_sphere(double radius, int slices, int stacks) {
    TriMesh m;
    m.vertices.emplace_back(0, 0, radius);  // north pole
    for (int i = 1; i < stacks; ++i) {
        const double phi = kPi * i / stacks;
        for (int j = 0; j < slices; ++j) {
            const double theta = 2.0 * kPi * j / slices;
            m.vertices.emplace_back(radius * std::sin(phi) * std::cos(theta),
                                    radius * std::sin(phi) * std::sin(theta),
                                    radius * std::cos(phi));
        }
    }
    m.vertices.emplace_back(0, 0, -radius);  // south pole
    const int south = m.vertex_count() - 1;
    auto vid = [&](int i, int j) { return 1 + (i - 1) * slices + (j % slices); };
    for (int j = 0; j < slices; ++j) m.faces.push_back({0, vid(1, j), vid(1, j + 1)});
    for (int i = 1; i < stacks - 1; ++i) {
        for (int j = 0; j < slices; ++j) {
            m.faces.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            m.faces.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    }
    for (int j = 0; j < slices; ++j)
        m.faces.push_back({south, vid(stacks - 1, j + 1), vid(stacks - 1, j)});
    return m;
}

TriMesh make_torus(double major_radius, double minor_radius, int major_segments,
                   int minor_segments) {
    TriMesh m;
    for (int i = 0; i < major_segments; ++i) {
        const double u = 2.0 * kPi * i / major_segments;
        for (int j = 0; j < minor_segments; ++j) {
            const double v = 2.0 * kPi * j / minor_segments;
            const double r = major_radius + minor_radius * std::cos(v);
            m.vertices.emplace_back(r * std::cos(u), r * std::sin(u),
                                    minor_radius * std::sin(v));
        }
    }
    auto vid = [&](int i, int j) {
        return (i % major_segments) * minor_segments + (j % minor_segments);
    };
    for (int i = 0; i < major_segments; ++i) {
        for (int j = 0; j < minor_segments; ++j) {
            m.faces.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            m.faces.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    }
    return m;
}

}  // namespace folds::geo
