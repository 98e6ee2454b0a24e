#pragma once

#include <cmath>
#include <numbers>

namespace qalpha {

// Hamilton quaternion q = a + ib + jc + kd with double components.
// Multiplication follows ij = -ji = k, jk = -kj = i, ki = -ik = j.
struct Quaternion {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

  static constexpr Quaternion unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion unit_j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion unit_k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    d += o.d;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    d -= o.d;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    return *this;
  }
  constexpr Quaternion operator-() const { return {-a, -b, -c, -d}; }
};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) {
  p += q;
  return p;
}
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) {
  p -= q;
  return p;
}
constexpr Quaternion operator*(Quaternion q, double s) {
  q *= s;
  return q;
}
constexpr Quaternion operator*(double s, Quaternion q) {
  q *= s;
  return q;
}
constexpr bool operator==(const Quaternion& p, const Quaternion& q) {
  return p.a == q.a && p.b == q.b && p.c == q.c && p.d == q.d;
}

// Hamilton product; bilinear, not commutative.
constexpr Quaternion qmul(const Quaternion& p, const Quaternion& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
          p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
          p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return qmul(p, q); }

constexpr Quaternion conj(const Quaternion& q) { return {q.a, -q.b, -q.c, -q.d}; }

// Squared length a^2 + b^2 + c^2 + d^2. The Euclidean length is modulus().
constexpr double norm(const Quaternion& q) { return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d; }

inline double modulus(const Quaternion& q) { return std::sqrt(norm(q)); }

constexpr bool is_pure(const Quaternion& q) { return q.a == 0.0; }

// Polar decomposition q = |q| (cos(phase) + axis sin(phase)) with a pure unit
// axis and phase in [0, pi]. A real quaternion has no axis: has_axis is false,
// the axis is zero and the phase is 0 (a >= 0) or pi (a < 0). Callers must
// check has_axis before using the axis.
struct QuaternionPolar {
  double modulus = 0.0;
  Quaternion axis{};
  double phase = 0.0;
  bool has_axis = false;
};

inline QuaternionPolar qpolar(const Quaternion& q) {
  QuaternionPolar p;
  p.modulus = modulus(q);
  const double v = std::sqrt(q.b * q.b + q.c * q.c + q.d * q.d);
  if (v == 0.0) {
    p.phase = (q.a >= 0.0) ? 0.0 : std::numbers::pi;
    return p;
  }
  p.axis = Quaternion(0.0, q.b / v, q.c / v, q.d / v);
  p.phase = std::atan2(v, q.a);
  p.has_axis = true;
  return p;
}

inline Quaternion from_polar(const QuaternionPolar& p) {
  Quaternion q(std::cos(p.phase), 0.0, 0.0, 0.0);
  if (p.has_axis) q += p.axis * std::sin(p.phase);
  q *= p.modulus;
  return q;
}

}  // namespace qalpha
