#include "sdfield/image.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace sdfield {

uint8_t quantize8(float v) {
    float c = v < 0.f ? 0.f : (v > 1.f ? 1.f : v);
    return uint8_t(std::lround(255.f * c));
}

namespace {

void write_header(std::ostream& out, const char* magic, int w, int h) {
    out << magic << '\n' << w << ' ' << h << '\n' << "255\n";
}

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(char(c));
    }
    return tok;
}

struct PnmHeader {
    int width, height;
};

PnmHeader read_header(std::istream& in, const char* expected_magic,
                      const std::filesystem::path& path) {
    std::string magic = next_token(in);
    if (magic != expected_magic) {
        throw std::runtime_error("expected " + std::string(expected_magic) + " in " +
                                 path.string());
    }
    std::string ws = next_token(in), hs = next_token(in), maxs = next_token(in);
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(ws);
        h = std::stoi(hs);
        maxval = std::stoi(maxs);
    } catch (const std::exception&) {
        throw std::runtime_error("malformed netpbm header in " + path.string());
    }
    if (w <= 0 || h <= 0 || maxval != 255) {
        throw std::runtime_error("unsupported netpbm header in " + path.string());
    }
    return {w, h};
}

} // namespace

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write pgm: " + path.string());
    write_header(out, "P5", image.width, image.height);
    std::vector<uint8_t> row(size_t(image.width));
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) row[size_t(x)] = quantize8(image.at(x, y));
        out.write(reinterpret_cast<const char*>(row.data()), image.width);
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_ppm(const std::filesystem::path& path, const ColorImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write ppm: " + path.string());
    write_header(out, "P6", image.width, image.height);
    std::vector<uint8_t> row(size_t(image.width) * 3);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const auto& px = image.at(x, y);
            row[size_t(x) * 3 + 0] = quantize8(px[0]);
            row[size_t(x) * 3 + 1] = quantize8(px[1]);
            row[size_t(x) * 3 + 2] = quantize8(px[2]);
        }
        out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size()));
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open pgm: " + path.string());
    PnmHeader hdr = read_header(in, "P5", path);

    GrayImage img(hdr.width, hdr.height);
    std::vector<uint8_t> row(size_t(hdr.width));
    for (int y = 0; y < hdr.height; ++y) {
        in.read(reinterpret_cast<char*>(row.data()), hdr.width);
        if (!in) throw std::runtime_error("truncated pgm: " + path.string());
        for (int x = 0; x < hdr.width; ++x) img.at(x, y) = float(row[size_t(x)]) / 255.f;
    }
    return img;
}

ColorImage load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open ppm: " + path.string());
    PnmHeader hdr = read_header(in, "P6", path);

    ColorImage img(hdr.width, hdr.height);
    std::vector<uint8_t> row(size_t(hdr.width) * 3);
    for (int y = 0; y < hdr.height; ++y) {
        in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size()));
        if (!in) throw std::runtime_error("truncated ppm: " + path.string());
        for (int x = 0; x < hdr.width; ++x) {
            img.at(x, y) = {float(row[size_t(x) * 3 + 0]) / 255.f,
                            float(row[size_t(x) * 3 + 1]) / 255.f,
                            float(row[size_t(x) * 3 + 2]) / 255.f};
        }
    }
    return img;
}

} // namespace sdfield
