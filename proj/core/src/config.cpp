#include "sdfield/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace sdfield {

namespace {

struct Value {
    enum Kind { str, number, boolean, num_array, str_array } kind = number;
    std::string text;
    double num = 0.0;
    bool flag = false;
    std::vector<double> nums;
    std::vector<std::string> strs;
    std::string raw;   // untouched token, for exact u64 parsing
    int line = 0;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& tok, int line) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + tok.size() || tok.empty()) fail(line, "expected a number, got '" + tok + "'");
    return v;
}

Value parse_value(const std::string& text, int line) {
    Value v;
    v.raw = text;
    v.line = line;
    if (text.empty()) fail(line, "missing value");

    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') fail(line, "unterminated string");
        v.kind = Value::str;
        v.text = text.substr(1, text.size() - 2);
        return v;
    }
    if (text.front() == '[') {
        if (text.back() != ']') fail(line, "unterminated array");
        std::string body = trim(text.substr(1, text.size() - 2));
        std::vector<std::string> items;
        if (!body.empty()) {
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ',')) items.push_back(trim(item));
        }
        bool strings = !items.empty() && items.front().size() >= 2 && items.front().front() == '"';
        v.kind = strings ? Value::str_array : Value::num_array;
        for (const std::string& item : items) {
            if (strings) {
                if (item.size() < 2 || item.front() != '"' || item.back() != '"') {
                    fail(line, "array mixes strings and numbers");
                }
                v.strs.push_back(item.substr(1, item.size() - 2));
            } else {
                v.nums.push_back(parse_number(item, line));
            }
        }
        return v;
    }
    if (text == "true" || text == "false") {
        v.kind = Value::boolean;
        v.flag = text == "true";
        return v;
    }
    v.kind = Value::number;
    v.num = parse_number(text, line);
    return v;
}

using ValueMap = std::map<std::string, Value>;

ValueMap parse_pairs(const std::string& text) {
    ValueMap map;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        std::string stripped = trim(strip_comment(line));
        if (stripped.empty()) continue;
        size_t eq = stripped.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        for (char c : key) {
            if (!std::isalnum(uint8_t(c)) && c != '_' && c != '.') {
                fail(line_no, "bad character in key '" + key + "'");
            }
        }
        if (map.count(key)) fail(line_no, "duplicate key '" + key + "'");
        map.emplace(key, parse_value(value, line_no));
    }
    return map;
}

// Typed extractors; each consumes the key when present.

std::optional<Value> take(ValueMap& map, const std::string& key) {
    auto it = map.find(key);
    if (it == map.end()) return std::nullopt;
    Value v = it->second;
    map.erase(it);
    return v;
}

void read_float(ValueMap& map, const std::string& key, float& out) {
    if (auto v = take(map, key)) {
        if (v->kind != Value::number) fail(v->line, key + " must be a number");
        out = float(v->num);
    }
}

void read_int(ValueMap& map, const std::string& key, int& out) {
    if (auto v = take(map, key)) {
        if (v->kind != Value::number || v->num != std::floor(v->num)) {
            fail(v->line, key + " must be an integer");
        }
        out = int(v->num);
    }
}

void read_bool(ValueMap& map, const std::string& key, bool& out) {
    if (auto v = take(map, key)) {
        if (v->kind != Value::boolean) fail(v->line, key + " must be true or false");
        out = v->flag;
    }
}

void read_string(ValueMap& map, const std::string& key, std::string& out) {
    if (auto v = take(map, key)) {
        if (v->kind != Value::str) fail(v->line, key + " must be a quoted string");
        out = v->text;
    }
}

void read_vec3(ValueMap& map, const std::string& key, Vec3& out) {
    if (auto v = take(map, key)) {
        if (v->kind != Value::num_array || v->nums.size() != 3) {
            fail(v->line, key + " must be [x, y, z]");
        }
        out = {float(v->nums[0]), float(v->nums[1]), float(v->nums[2])};
    }
}

void read_u64(ValueMap& map, const std::string& key, uint64_t& out) {
    if (auto v = take(map, key)) {
        if (v->kind != Value::number) fail(v->line, key + " must be an unsigned integer");
        const std::string& raw = v->raw;
        if (raw.find_first_not_of("0123456789") != std::string::npos) {
            fail(v->line, key + " must be an unsigned integer");
        }
        errno = 0;
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(raw.c_str(), &end, 10);
        if (errno != 0 || end != raw.c_str() + raw.size()) {
            fail(v->line, key + " is out of range");
        }
        out = parsed;
    }
}

} // namespace

void RenderConfig::validate() const {
    auto check = [](bool ok, const char* message) {
        if (!ok) throw ConfigError(message);
    };
    check(coarse_res >= 5, "coarse_res must be at least 5");
    check(fine_scale >= 1, "fine_scale must be >= 1");
    check(supersample >= 1, "supersample must be >= 1");
    check(beta_voxels >= 0.f && beta_voxels < std::sqrt(3.f),
          "beta_voxels must be in [0, sqrt(3))");
    check(refine_distance_voxels >= 1.f, "refine_distance_voxels must be >= 1");
    check(decay >= 0.f && decay <= 1.f, "decay must be in [0, 1]");
    check(rays_per_texel >= 1, "rays_per_texel must be >= 1");
    check(epsilon_voxels >= 1.f, "epsilon_voxels must be >= 1");
    check(max_steps >= 1, "max_steps must be >= 1");
    check(max_step_voxels >= epsilon_voxels, "max_step_voxels must be >= epsilon_voxels");
    check(jitter_voxels >= 0.f, "jitter_voxels must be >= 0");
    check(length_squared(light_dir) > 0.f, "light_dir must be nonzero");
    check(light_angle_deg > 0.f && light_angle_deg < 90.f,
          "light_angle_deg must be in (0, 90)");
    check(history_blend >= 0.f && history_blend < 1.f, "history_blend must be in [0, 1)");
    check(t_max_world > 0.f, "t_max_world must be positive");
    check(reference_samples >= 1, "reference_samples must be >= 1");
    check(camera_fov_deg > 0.f && camera_fov_deg < 180.f,
          "camera_fov_deg must be in (0, 180)");
    check(image_width >= 1 && image_height >= 1, "image dimensions must be >= 1");
    check(ambient >= 0.f && ambient <= 1.f, "ambient must be in [0, 1]");
    check(frames >= 1, "frames must be >= 1");
    check(threads >= 0, "threads must be >= 0");
    for (const ObjectConfig& obj : objects) {
        if (obj.path.empty()) throw ConfigError("scene object '" + obj.name + "' has no path");
    }
}

RenderConfig parse_config_text(const std::string& text) {
    ValueMap map = parse_pairs(text);
    RenderConfig config;

    // Scene objects first: their names define which dotted keys are legal.
    if (auto v = take(map, "scene")) {
        if (v->kind != Value::str_array && !(v->kind == Value::num_array && v->nums.empty())) {
            fail(v->line, "scene must be an array of object names");
        }
        for (const std::string& name : v->strs) {
            if (name.empty()) fail(v->line, "empty scene object name");
            config.objects.push_back(ObjectConfig{name, "", {}});
        }
    }
    for (ObjectConfig& obj : config.objects) {
        read_string(map, obj.name + ".path", obj.path);
        read_vec3(map, obj.name + ".translate_per_frame", obj.translate_per_frame);
    }

    read_int(map, "coarse_res", config.coarse_res);
    read_int(map, "fine_scale", config.fine_scale);
    read_int(map, "supersample", config.supersample);
    read_float(map, "beta_voxels", config.beta_voxels);
    read_float(map, "refine_distance_voxels", config.refine_distance_voxels);
    read_float(map, "decay", config.decay);
    read_int(map, "rays_per_texel", config.rays_per_texel);
    read_float(map, "epsilon_voxels", config.epsilon_voxels);
    read_int(map, "max_steps", config.max_steps);
    read_float(map, "max_step_voxels", config.max_step_voxels);
    read_float(map, "jitter_voxels", config.jitter_voxels);
    read_vec3(map, "light_dir", config.light_dir);
    read_float(map, "light_angle_deg", config.light_angle_deg);
    read_float(map, "history_blend", config.history_blend);
    read_float(map, "t_max_world", config.t_max_world);
    read_int(map, "reference_samples", config.reference_samples);
    read_bool(map, "render_reference", config.render_reference);
    read_vec3(map, "camera_pos", config.camera_pos);
    read_vec3(map, "camera_lookat", config.camera_lookat);
    read_float(map, "camera_fov_deg", config.camera_fov_deg);
    read_int(map, "image_width", config.image_width);
    read_int(map, "image_height", config.image_height);
    read_float(map, "ambient", config.ambient);
    read_int(map, "frames", config.frames);
    read_u64(map, "rng_seed", config.rng_seed);
    read_string(map, "output_dir", config.output_dir);
    read_int(map, "threads", config.threads);

    if (!map.empty()) {
        const auto& [key, value] = *map.begin();
        fail(value.line, "unknown key '" + key + "'");
    }

    if (length_squared(config.light_dir) > 0.f) {
        config.light_dir = normalize(config.light_dir);
    }
    config.validate();
    return config;
}

RenderConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string config_hash(const RenderConfig& config) {
    // Canonical text form of every value-affecting field. output_dir and
    // threads are deliberately absent: results must not change with either.
    std::string canon;
    canon.reserve(1024);
    char buf[64];
    auto put = [&](const char* key, const char* fmt, auto value) {
        std::snprintf(buf, sizeof buf, fmt, value);
        canon += key;
        canon += '=';
        canon += buf;
        canon += ';';
    };
    auto put_f = [&](const char* key, float v) { put(key, "%.9g", double(v)); };
    auto put_i = [&](const char* key, long long v) { put(key, "%lld", v); };
    auto put_v = [&](const char* key, const Vec3& v) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g", double(v.x), double(v.y), double(v.z));
        canon += key;
        canon += '=';
        canon += buf;
        canon += ';';
    };

    for (const ObjectConfig& obj : config.objects) {
        canon += "object=" + obj.name + ":" + obj.path + ";";
        put_v("translate_per_frame", obj.translate_per_frame);
    }
    put_i("coarse_res", config.coarse_res);
    put_i("fine_scale", config.fine_scale);
    put_i("supersample", config.supersample);
    put_f("beta_voxels", config.beta_voxels);
    put_f("refine_distance_voxels", config.refine_distance_voxels);
    put_f("decay", config.decay);
    put_i("rays_per_texel", config.rays_per_texel);
    put_f("epsilon_voxels", config.epsilon_voxels);
    put_i("max_steps", config.max_steps);
    put_f("max_step_voxels", config.max_step_voxels);
    put_f("jitter_voxels", config.jitter_voxels);
    put_v("light_dir", config.light_dir);
    put_f("light_angle_deg", config.light_angle_deg);
    put_f("history_blend", config.history_blend);
    put_f("t_max_world", config.t_max_world);
    put_i("reference_samples", config.reference_samples);
    put_i("render_reference", config.render_reference ? 1 : 0);
    put_v("camera_pos", config.camera_pos);
    put_v("camera_lookat", config.camera_lookat);
    put_f("camera_fov_deg", config.camera_fov_deg);
    put_i("image_width", config.image_width);
    put_i("image_height", config.image_height);
    put_f("ambient", config.ambient);
    put_i("frames", config.frames);
    put("rng_seed", "%llu", (unsigned long long)config.rng_seed);

    // FNV-1a 64.
    uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : canon) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)hash);
    return std::string(buf);
}

} // namespace sdfield
