#include "folds/data/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace folds::data {

std::string DatasetManifest::resolve(const std::string& rel) const {
    if (rel.empty()) return {};
    fs::path p(rel);
    if (p.is_absolute() || base_dir.empty()) return rel;
    return (fs::path(base_dir) / p).string();
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
    json j;
    j["name"] = m.name;
    j["role"] = m.role;
    j["fps"] = m.fps;
    j["annotations"] = {{"fold_labels", m.has_fold_labels},
                        {"depth", m.has_depth},
                        {"manual", m.has_manual_annotations}};
    j["provenance"] = m.provenance;
    if (!m.generation_params.empty())
        j["generation_params"] = json::parse(m.generation_params);
    auto& frames = j["frames"] = json::array();
    for (const auto& f : m.frames) {
        json e;
        e["id"] = f.id;
        e["rgb"] = f.rgb;
        if (!f.mask.empty()) e["mask"] = f.mask;
        if (!f.instance.empty()) e["instance"] = f.instance;
        if (!f.depth.empty()) e["depth"] = f.depth;
        e["pose"] = f.pose;
        e["intrinsics"] = f.intrinsics;
        if (!f.source_id.empty()) e["source_id"] = f.source_id;
        frames.push_back(std::move(e));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(1) << "\n";
}

DatasetManifest load_manifest(const std::string& path, bool check_files) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("manifest parse error in " + path + ": " + e.what());
    }

    DatasetManifest m;
    m.base_dir = fs::path(path).parent_path().string();
    try {
        m.name = j.at("name").get<std::string>();
        m.role = j.at("role").get<std::string>();
        m.fps = j.value("fps", 50.0);
        if (j.contains("annotations")) {
            const auto& a = j["annotations"];
            m.has_fold_labels = a.value("fold_labels", false);
            m.has_depth = a.value("depth", false);
            m.has_manual_annotations = a.value("manual", false);
        }
        m.provenance = j.value("provenance", std::string{});
        if (j.contains("generation_params")) m.generation_params = j["generation_params"].dump();
        for (const auto& e : j.at("frames")) {
            FrameRecord f;
            f.id = e.at("id").get<std::string>();
            f.rgb = e.at("rgb").get<std::string>();
            f.mask = e.value("mask", std::string{});
            f.instance = e.value("instance", std::string{});
            f.depth = e.value("depth", std::string{});
            if (e.contains("pose")) f.pose = e["pose"].get<std::array<double, 7>>();
            if (e.contains("intrinsics"))
                f.intrinsics = e["intrinsics"].get<std::array<double, 4>>();
            f.source_id = e.value("source_id", std::string{});
            m.frames.push_back(std::move(f));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error("manifest schema violation in " + path + ": " + e.what());
    }

    if (check_files) {
        std::string missing;
        int missing_count = 0;
        for (const auto& f : m.frames) {
            for (const std::string& rel : {f.rgb, f.mask, f.instance, f.depth}) {
                if (rel.empty()) continue;
                const std::string full = m.resolve(rel);
                if (!fs::exists(full)) {
                    ++missing_count;
                    if (missing_count <= 20) missing += "\n  " + full;
                }
            }
        }
        if (missing_count > 0)
            throw std::runtime_error("manifest " + path + ": " + std::to_string(missing_count) +
                                     " referenced file(s) missing:" + missing);
    }
    return m;
}

}  // namespace folds::data
