#pragma once

#include <cmath>

namespace swarmsim {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2 operator-() const { return {-x, -y}; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }

  bool operator==(const Vec2& o) const = default;
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// unit vector at the given angle
inline Vec2 heading_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline Vec2 rotate(const Vec2& v, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// wraps into (-pi, pi]
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) {
    a += 2.0 * kPi;
  } else if (a > kPi) {
    a -= 2.0 * kPi;
  }
  return a;
}

struct Pose2D {
  Vec2 position;
  double theta = 0.0;  // kept in (-pi, pi]
};

// rigid motion p -> R(theta) p + t
struct RigidTransform2D {
  double theta = 0.0;
  Vec2 t;

  Vec2 apply(const Vec2& p) const { return rotate(p, theta) + t; }

  Pose2D apply(const Pose2D& p) const {
    return {apply(p.position), wrap_angle(p.theta + theta)};
  }

  RigidTransform2D inverse() const {
    return {wrap_angle(-theta), rotate(-t, -theta)};
  }
};

// second after first: (compose(b, a))(p) == b(a(p))
inline RigidTransform2D compose(const RigidTransform2D& second, const RigidTransform2D& first) {
  return {wrap_angle(first.theta + second.theta), second.apply(first.t)};
}

}  // namespace swarmsim
