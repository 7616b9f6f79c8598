#include "sdfield/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sdfield {

float rmse(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("rmse: image dimensions differ");
    }
    double sum = 0.0;
    for (size_t i = 0; i < a.pixels.size(); ++i) {
        double d = double(a.pixels[i]) - double(b.pixels[i]);
        sum += d * d;
    }
    return float(std::sqrt(sum / double(a.pixels.size())));
}

int penumbra_area(const GrayImage& img, float tau) {
    if (!(tau > 0.f && tau < 0.5f)) throw std::invalid_argument("tau must be in (0, 0.5)");
    int count = 0;
    for (float v : img.pixels) {
        if (v > tau && v < 1.f - tau) ++count;
    }
    return count;
}

void save_metrics(const std::filesystem::path& path, const Metrics& metrics) {
    nlohmann::ordered_json j;
    j["rmse"] = metrics.rmse_value;
    j["penumbra_sdf"] = metrics.penumbra_sdf;
    j["penumbra_ref"] = metrics.penumbra_ref;
    j["frames"] = metrics.frames;
    j["config_hash"] = metrics.config_hash;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write metrics: " + path.string());
    out << j.dump() << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Metrics load_metrics(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metrics: " + path.string());
    nlohmann::json j = nlohmann::json::parse(in);

    Metrics m;
    m.rmse_value = j.at("rmse").get<float>();
    m.penumbra_sdf = j.at("penumbra_sdf").get<int>();
    m.penumbra_ref = j.at("penumbra_ref").get<int>();
    m.frames = j.at("frames").get<int>();
    m.config_hash = j.at("config_hash").get<std::string>();
    return m;
}

} // namespace sdfield
