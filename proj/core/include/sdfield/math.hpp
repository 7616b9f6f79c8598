#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace sdfield {

template <typename T>
struct Vec3T {
    T x{}, y{}, z{};

    Vec3T() = default;
    Vec3T(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

    T operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3T operator+(const Vec3T& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3T operator-(const Vec3T& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3T operator*(T s) const { return {x * s, y * s, z * s}; }
    Vec3T operator/(T s) const { return {x / s, y / s, z / s}; }
    Vec3T operator-() const { return {-x, -y, -z}; }
    Vec3T& operator+=(const Vec3T& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3T& operator-=(const Vec3T& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3T& operator*=(T s) { x *= s; y *= s; z *= s; return *this; }
    bool operator==(const Vec3T& o) const { return x == o.x && y == o.y && z == o.z; }

    template <typename U>
    Vec3T<U> cast() const { return {static_cast<U>(x), static_cast<U>(y), static_cast<U>(z)}; }
};

template <typename T> inline Vec3T<T> operator*(T s, const Vec3T<T>& v) { return v * s; }

template <typename T> inline T dot(const Vec3T<T>& a, const Vec3T<T>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename T> inline Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <typename T> inline T length_squared(const Vec3T<T>& v) { return dot(v, v); }
template <typename T> inline T length(const Vec3T<T>& v) { return std::sqrt(dot(v, v)); }

template <typename T> inline Vec3T<T> normalize(const Vec3T<T>& v) {
    T len = length(v);
    return len > T(0) ? v / len : Vec3T<T>{};
}

template <typename T> inline Vec3T<T> min(const Vec3T<T>& a, const Vec3T<T>& b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}

template <typename T> inline Vec3T<T> max(const Vec3T<T>& a, const Vec3T<T>& b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}

using Vec3 = Vec3T<float>;
using Vec3d = Vec3T<double>;

// Row-major 3x3 matrix, used for rigid rotations.
struct Mat3 {
    std::array<float, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return Mat3{}; }

    static Mat3 rotation_z(float radians) {
        float c = std::cos(radians), s = std::sin(radians);
        return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    bool is_orthonormal(float tol = 1e-5f) const {
        Vec3 r0{m[0], m[1], m[2]}, r1{m[3], m[4], m[5]}, r2{m[6], m[7], m[8]};
        return std::abs(length(r0) - 1.f) < tol && std::abs(length(r1) - 1.f) < tol &&
               std::abs(length(r2) - 1.f) < tol && std::abs(dot(r0, r1)) < tol &&
               std::abs(dot(r0, r2)) < tol && std::abs(dot(r1, r2)) < tol;
    }
};

struct Aabb {
    Vec3 min{std::numeric_limits<float>::max(), std::numeric_limits<float>::max(),
             std::numeric_limits<float>::max()};
    Vec3 max{std::numeric_limits<float>::lowest(), std::numeric_limits<float>::lowest(),
             std::numeric_limits<float>::lowest()};

    bool empty() const { return min.x > max.x; }

    void expand(const Vec3& p) {
        min = sdfield::min(min, p);
        max = sdfield::max(max, p);
    }

    void expand(const Aabb& b) {
        if (b.empty()) return;
        min = sdfield::min(min, b.min);
        max = sdfield::max(max, b.max);
    }

    bool contains(const Aabb& b) const {
        return min.x <= b.min.x && min.y <= b.min.y && min.z <= b.min.z &&
               max.x >= b.max.x && max.y >= b.max.y && max.z >= b.max.z;
    }

    Vec3 extent() const { return max - min; }
    Vec3 center() const { return (min + max) * 0.5f; }

    int longest_axis() const {
        Vec3 e = extent();
        if (e.x >= e.y && e.x >= e.z) return 0;
        return e.y >= e.z ? 1 : 2;
    }
};

inline constexpr float kInf = std::numeric_limits<float>::infinity();

template <typename T> inline T clamp(T v, T lo, T hi) { return std::min(std::max(v, lo), hi); }

inline float lerp(float a, float b, float t) { return a + (b - a) * t; }

} // namespace sdfield
