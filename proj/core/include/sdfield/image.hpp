#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace sdfield {

template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> pixels;   // row-major, top row first

    Image() = default;
    Image(int w, int h, T fill = T{}) : width(w), height(h), pixels(size_t(w) * size_t(h), fill) {}

    T& at(int x, int y) { return pixels[size_t(y) * size_t(width) + size_t(x)]; }
    const T& at(int x, int y) const { return pixels[size_t(y) * size_t(width) + size_t(x)]; }
};

using GrayImage = Image<float>;                     // values in [0, 1]
using ColorImage = Image<std::array<float, 3>>;     // linear RGB in [0, 1]

// 8-bit binary PGM (P5) / PPM (P6). Values are quantized as
// round(255 * clamp(v, 0, 1)).
void save_pgm(const std::filesystem::path& path, const GrayImage& image);
void save_ppm(const std::filesystem::path& path, const ColorImage& image);

// Readers accept only the 8-bit binary forms written above and return values
// mapped back to [0, 1]. Throw std::runtime_error on malformed input.
GrayImage load_pgm(const std::filesystem::path& path);
ColorImage load_ppm(const std::filesystem::path& path);

// Quantization used by the writers, exposed so metrics can be computed on
// exactly the values that land in files.
uint8_t quantize8(float v);

} // namespace sdfield
