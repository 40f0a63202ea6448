#pragma once

#include "gazeplan/core/types.hpp"

namespace gazeplan {

/// Azimuth/elevation of `position` seen from the head origin. Throws
/// DegeneratePositionError for the zero vector or non-finite input.
Direction direction_to(const Vec3& position);

/// Unit vector for a direction (inverse of direction_to up to scale).
Vec3 unit_vector(const Direction& dir) noexcept;

/// Great-circle angle between two directions, degrees in [0, 180].
double angular_distance(const Direction& a, const Direction& b) noexcept;

/// Point on the great circle from `from` toward `to`, `fraction` of the way
/// (0 = from, 1 = to).
Direction slerp(const Direction& from, const Direction& to, double fraction) noexcept;

/// Rotate `from` toward `to` by at most `max_deg` along the shortest arc.
Direction rotate_toward(const Direction& from, const Direction& to, double max_deg) noexcept;

/// Angular midpoint of two directions. For antipodal inputs the result is
/// `a` rotated 90 degrees in yaw.
Direction midpoint(const Direction& a, const Direction& b) noexcept;

/// Wrap an angle into [-180, 180).
double wrap_degrees(double deg) noexcept;

/// Component-wise composition used for the eye/head split:
/// gaze = head (+) eye_in_head, eye_in_head = gaze (-) head.
Direction compose(const Direction& head, const Direction& eye_in_head) noexcept;
Direction relative(const Direction& gaze, const Direction& head) noexcept;

double norm(const Vec3& v) noexcept;
Vec3 scale(const Vec3& v, double s) noexcept;
Vec3 lerp(const Vec3& a, const Vec3& b, double t) noexcept;

}  // namespace gazeplan
