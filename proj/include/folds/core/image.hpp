#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace folds {

// Interleaved raster, row-major, origin top-left.
template <typename T>
struct Raster {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<T> pixels;

    Raster() = default;
    Raster(int w, int h, int c) : width(w), height(h), channels(c) {
        pixels.assign(static_cast<size_t>(w) * h * c, T{});
    }

    T& at(int x, int y, int c = 0) {
        return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    T at(int x, int y, int c = 0) const {
        return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    size_t size() const { return pixels.size(); }
};

using ImageU8 = Raster<uint8_t>;    // 8-bit gray or RGB
using ImageU16 = Raster<uint16_t>;  // 16-bit single channel (instance ids)
using ImageF = Raster<float>;       // float gray (depth) or RGB

namespace io {

// PNG. 8-bit gray/RGB and 16-bit single channel.
void write_png(const std::string& path, const ImageU8& img);
void write_png16(const std::string& path, const ImageU16& img);
ImageU8 read_png(const std::string& path);    // throws on failure
ImageU16 read_png16(const std::string& path);

// PFM, 32-bit float, little-endian (scale -1.0). Single channel.
void write_pfm(const std::string& path, const ImageF& img);
ImageF read_pfm(const std::string& path);

}  // namespace io

}  // namespace folds
