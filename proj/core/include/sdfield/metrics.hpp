#pragma once

#include <filesystem>
#include <string>

#include "sdfield/image.hpp"

namespace sdfield {

// sqrt(mean((a - b)^2)) over all pixels. Throws on dimension mismatch.
float rmse(const GrayImage& a, const GrayImage& b);

// Pixels with tau < v < 1 - tau. Requires 0 < tau < 0.5.
int penumbra_area(const GrayImage& img, float tau);

struct Metrics {
    float rmse_value = 0.f;
    int penumbra_sdf = 0;
    int penumbra_ref = 0;
    int frames = 0;
    std::string config_hash;
};

// One JSON object: {"rmse": float, "penumbra_sdf": int, "penumbra_ref": int,
// "frames": int, "config_hash": string}.
void save_metrics(const std::filesystem::path& path, const Metrics& metrics);
Metrics load_metrics(const std::filesystem::path& path);

} // namespace sdfield
