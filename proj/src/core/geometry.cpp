#include "gazeplan/core/geometry.hpp"

#include "gazeplan/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gazeplan {
namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;
constexpr double kRad = std::numbers::pi / 180.0;

double dot(const Vec3& a, const Vec3& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 add(const Vec3& a, const Vec3& b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }

Direction direction_of_unit(const Vec3& v) noexcept {
    const double horizontal = std::hypot(v.x, v.z);
    return Direction{std::atan2(-v.x, v.z) * kDeg, std::atan2(v.y, horizontal) * kDeg};
}

}  // namespace

double norm(const Vec3& v) noexcept { return std::sqrt(dot(v, v)); }

Vec3 scale(const Vec3& v, double s) noexcept { return {v.x * s, v.y * s, v.z * s}; }

Vec3 lerp(const Vec3& a, const Vec3& b, double t) noexcept {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.z + (b.z - a.z) * t};
}

Direction direction_to(const Vec3& position) {
    if (!std::isfinite(position.x) || !std::isfinite(position.y) || !std::isfinite(position.z)) {
        throw DegeneratePositionError("position is not finite");
    }
    if (position.x == 0.0 && position.y == 0.0 && position.z == 0.0) {
        throw DegeneratePositionError("position coincides with the head origin");
    }
    return direction_of_unit(position);
}

Vec3 unit_vector(const Direction& dir) noexcept {
    const double yaw = dir.yaw * kRad;
    const double pitch = dir.pitch * kRad;
    return {-std::cos(pitch) * std::sin(yaw), std::sin(pitch), std::cos(pitch) * std::cos(yaw)};
}

double angular_distance(const Direction& a, const Direction& b) noexcept {
    const Vec3 u = unit_vector(a);
    const Vec3 v = unit_vector(b);
    // atan2 of |u x v| and u.v stays accurate for tiny and near-antipodal angles.
    const Vec3 cross{u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
    return std::atan2(norm(cross), dot(u, v)) * kDeg;
}

Direction slerp(const Direction& from, const Direction& to, double fraction) noexcept {
    if (fraction <= 0.0) return from;
    if (fraction >= 1.0) return to;
    const double omega = angular_distance(from, to) * kRad;
    if (omega < 1e-12) return from;
    const Vec3 u = unit_vector(from);
    const Vec3 v = unit_vector(to);
    const double s = std::sin(omega);
    const double a = std::sin((1.0 - fraction) * omega) / s;
    const double b = std::sin(fraction * omega) / s;
    return direction_of_unit(add(scale(u, a), scale(v, b)));
}

Direction rotate_toward(const Direction& from, const Direction& to, double max_deg) noexcept {
    const double distance = angular_distance(from, to);
    if (distance <= max_deg) return to;
    return slerp(from, to, max_deg / distance);
}

Direction midpoint(const Direction& a, const Direction& b) noexcept {
    const Vec3 sum = add(unit_vector(a), unit_vector(b));
    if (norm(sum) < 1e-9) {
        return Direction{wrap_degrees(a.yaw + 90.0), a.pitch};
    }
    return direction_of_unit(sum);
}

double wrap_degrees(double deg) noexcept {
    double wrapped = std::fmod(deg + 180.0, 360.0);
    if (wrapped < 0.0) wrapped += 360.0;
    return wrapped - 180.0;
}

Direction compose(const Direction& head, const Direction& eye_in_head) noexcept {
    return Direction{wrap_degrees(head.yaw + eye_in_head.yaw), head.pitch + eye_in_head.pitch};
}

Direction relative(const Direction& gaze, const Direction& head) noexcept {
    return Direction{wrap_degrees(gaze.yaw - head.yaw), gaze.pitch - head.pitch};
}

}  // namespace gazeplan
