#pragma once

#include <cmath>

namespace parawork {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    static constexpr Vec3 zero() { return {0.0, 0.0, 0.0}; }
    static constexpr Vec3 unit_x() { return {1.0, 0.0, 0.0}; }
    static constexpr Vec3 unit_y() { return {0.0, 1.0, 0.0}; }
    static constexpr Vec3 unit_z() { return {0.0, 0.0, 1.0}; }

    constexpr Vec3 operator+(const Vec3& b) const { return {x + b.x, y + b.y, z + b.z}; }
    constexpr Vec3 operator-(const Vec3& b) const { return {x - b.x, y - b.y, z - b.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
    constexpr Vec3 operator/(double k) const { return {x / k, y / k, z / k}; }
    Vec3& operator+=(const Vec3& b) { x += b.x; y += b.y; z += b.z; return *this; }
    Vec3& operator-=(const Vec3& b) { x -= b.x; y -= b.y; z -= b.z; return *this; }

    constexpr double dot(const Vec3& b) const { return x * b.x + y * b.y + z * b.z; }
    constexpr Vec3 cross(const Vec3& b) const {
        return {y * b.z - z * b.y, z * b.x - x * b.z, x * b.y - y * b.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline constexpr Vec3 operator*(double k, const Vec3& v) { return v * k; }

// Scalar triple product a . (b x c).
inline constexpr double triple(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a.dot(b.cross(c));
}

} // namespace parawork
