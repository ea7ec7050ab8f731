#include "folds/nn/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace folds::nn {
namespace {

constexpr char kMagic[8] = {'F', 'O', 'L', 'D', 'C', 'K', 'P', '1'};
constexpr uint32_t kVersion = 1;

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
    for (const auto& [n, t] : tensors)
        if (n == name) return &t;
    return nullptr;
}

const Tensor& Checkpoint::require(const std::string& name) const {
    const Tensor* t = find(name);
    if (!t) throw std::runtime_error("checkpoint: missing tensor " + name);
    return *t;
}

void Checkpoint::save(const std::string& path) const {
    nlohmann::json header = meta;
    header["format_version"] = kVersion;
    auto& list = header["tensors"] = nlohmann::json::array();
    for (const auto& [name, t] : tensors)
        list.push_back({{"name", name}, {"shape", t.shape()}});
    const std::string hdr = header.dump();

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("checkpoint: cannot write " + tmp);
        f.write(kMagic, sizeof(kMagic));
        uint32_t ver = kVersion;
        uint64_t hlen = hdr.size();
        f.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
        f.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
        f.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
        for (const auto& [name, t] : tensors)
            f.write(reinterpret_cast<const char*>(t.data()),
                    static_cast<std::streamsize>(t.numel() * sizeof(float)));
        if (!f) throw std::runtime_error("checkpoint: write failed " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("checkpoint: rename failed " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[8];
    uint32_t ver = 0;
    uint64_t hlen = 0;
    f.read(magic, sizeof(magic));
    f.read(reinterpret_cast<char*>(&ver), sizeof(ver));
    f.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    if (ver != kVersion) throw std::runtime_error("checkpoint: unsupported version in " + path);
    std::string hdr(hlen, '\0');
    f.read(hdr.data(), static_cast<std::streamsize>(hlen));
    nlohmann::json header = nlohmann::json::parse(hdr);

    Checkpoint ckpt;
    for (const auto& entry : header.at("tensors")) {
        std::vector<int> shape = entry.at("shape").get<std::vector<int>>();
        Tensor t(shape);
        f.read(reinterpret_cast<char*>(t.data()),
               static_cast<std::streamsize>(t.numel() * sizeof(float)));
        ckpt.tensors.emplace_back(entry.at("name").get<std::string>(), std::move(t));
    }
    if (!f) throw std::runtime_error("checkpoint: truncated file " + path);
    header.erase("tensors");
    ckpt.meta = std::move(header);
    return ckpt;
}

}  // namespace folds::nn
