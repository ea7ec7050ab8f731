#include "folds/core/image.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <stdexcept>

namespace folds::io {
namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

[[noreturn]] void fail(const std::string& what, const std::string& path) {
    throw std::runtime_error(what + ": " + path);
}

void write_png_impl(const std::string& path, int w, int h, int channels, int bit_depth,
                    const void* rows_base, size_t row_bytes) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail("cannot open for writing", path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info) fail("libpng init failed", path);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail("libpng write error", path);
    }
    png_init_io(png, fp.get());
    int color = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), bit_depth,
                 color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);  // buffers are little-endian in memory

    const auto* base = static_cast<const uint8_t*>(rows_base);
    for (int y = 0; y < h; ++y)
        png_write_row(png, const_cast<png_bytep>(base + static_cast<size_t>(y) * row_bytes));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png(const std::string& path, const ImageU8& img) {
    if (img.channels != 1 && img.channels != 3)
        throw std::runtime_error("write_png: unsupported channel count");
    write_png_impl(path, img.width, img.height, img.channels, 8, img.pixels.data(),
                   static_cast<size_t>(img.width) * img.channels);
}

void write_png16(const std::string& path, const ImageU16& img) {
    if (img.channels != 1) throw std::runtime_error("write_png16: single channel only");
    write_png_impl(path, img.width, img.height, 1, 16, img.pixels.data(),
                   static_cast<size_t>(img.width) * 2);
}

namespace {

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FilePtr fp;

    explicit PngReader(const std::string& path) : fp(std::fopen(path.c_str(), "rb")) {
        if (!fp) fail("cannot open", path);
        uint8_t sig[8];
        if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8))
            fail("not a PNG file", path);
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        info = png_create_info_struct(png);
        if (!png || !info) fail("libpng init failed", path);
        png_init_io(png, fp.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

}  // namespace

ImageU8 read_png(const std::string& path) {
    PngReader r(path);
    if (setjmp(png_jmpbuf(r.png))) fail("libpng read error", path);

    png_set_strip_16(r.png);
    png_set_palette_to_rgb(r.png);
    png_set_expand_gray_1_2_4_to_8(r.png);
    png_set_strip_alpha(r.png);
    png_read_update_info(r.png, r.info);

    int w = static_cast<int>(png_get_image_width(r.png, r.info));
    int h = static_cast<int>(png_get_image_height(r.png, r.info));
    int c = static_cast<int>(png_get_channels(r.png, r.info));
    if (c != 1 && c != 3) fail("unsupported PNG channel count", path);

    ImageU8 img(w, h, c);
    for (int y = 0; y < h; ++y)
        png_read_row(r.png, img.pixels.data() + static_cast<size_t>(y) * w * c, nullptr);
    return img;
}

ImageU16 read_png16(const std::string& path) {
    PngReader r(path);
    if (setjmp(png_jmpbuf(r.png))) fail("libpng read error", path);

    int depth = png_get_bit_depth(r.png, r.info);
    int color = png_get_color_type(r.png, r.info);
    if (depth != 16 || color != PNG_COLOR_TYPE_GRAY)
        fail("expected 16-bit grayscale PNG", path);
    png_set_swap(r.png);
    png_read_update_info(r.png, r.info);

    int w = static_cast<int>(png_get_image_width(r.png, r.info));
    int h = static_cast<int>(png_get_image_height(r.png, r.info));
    ImageU16 img(w, h, 1);
    for (int y = 0; y < h; ++y)
        png_read_row(r.png, reinterpret_cast<png_bytep>(img.pixels.data() + static_cast<size_t>(y) * w),
                     nullptr);
    return img;
}

void write_pfm(const std::string& path, const ImageF& img) {
    if (img.channels != 1) throw std::runtime_error("write_pfm: single channel only");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail("cannot open for writing", path);
    // Scale -1.0 marks little-endian. PFM rows run bottom-to-top.
    std::fprintf(fp.get(), "Pf\n%d %d\n-1.0\n", img.width, img.height);
    for (int y = img.height - 1; y >= 0; --y) {
        const float* row = img.pixels.data() + static_cast<size_t>(y) * img.width;
        if (std::fwrite(row, sizeof(float), static_cast<size_t>(img.width), fp.get()) !=
            static_cast<size_t>(img.width))
            fail("short write", path);
    }
}

ImageF read_pfm(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail("cannot open", path);
    char magic[3] = {};
    int w = 0, h = 0;
    double scale = 0.0;
    if (std::fscanf(fp.get(), "%2s %d %d %lf", magic, &w, &h, &scale) != 4 ||
        std::string(magic) != "Pf" || w <= 0 || h <= 0)
        fail("bad PFM header", path);
    if (scale >= 0) fail("big-endian PFM not supported", path);
    std::fgetc(fp.get());  // single whitespace after scale
    ImageF img(w, h, 1);
    for (int y = h - 1; y >= 0; --y) {
        float* row = img.pixels.data() + static_cast<size_t>(y) * w;
        if (std::fread(row, sizeof(float), static_cast<size_t>(w), fp.get()) !=
            static_cast<size_t>(w))
            fail("truncated PFM", path);
    }
    return img;
}

}  // namespace folds::io
