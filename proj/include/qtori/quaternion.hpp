#pragma once

#include <array>
#include <cmath>
#include <iosfwd>

#include "qtori/settings.hpp"

namespace qtori {

using Mat4 = std::array<std::array<double, 4>, 4>;

// q = x0 + x1 i + x2 j + x3 k
struct Quaternion {
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double real) : x0(real) {}  // NOLINT: reals embed implicitly
  constexpr Quaternion(double a, double b, double c, double d) : x0(a), x1(b), x2(c), x3(d) {}

  static constexpr Quaternion i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() { return {0, 0, 0, 1}; }

  constexpr double operator[](int idx) const {
    return idx == 0 ? x0 : idx == 1 ? x1 : idx == 2 ? x2 : x3;
  }
  constexpr std::array<double, 4> components() const { return {x0, x1, x2, x3}; }

  constexpr double real() const { return x0; }
  constexpr Quaternion imag() const { return {0, x1, x2, x3}; }

  constexpr Quaternion operator-() const { return {-x0, -x1, -x2, -x3}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    x0 += o.x0;
    x1 += o.x1;
    x2 += o.x2;
    x3 += o.x3;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) { return *this += -o; }
  constexpr Quaternion& operator*=(double s) {
    x0 *= s;
    x1 *= s;
    x2 *= s;
    x3 *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
constexpr Quaternion operator*(Quaternion p, double s) { return p *= s; }
constexpr Quaternion operator*(double s, Quaternion p) { return p *= s; }

// Hamilton product, ij = k.
constexpr Quaternion mul(const Quaternion& p, const Quaternion& q) {
  return {p.x0 * q.x0 - p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3,
          p.x0 * q.x1 + p.x1 * q.x0 + p.x2 * q.x3 - p.x3 * q.x2,
          p.x0 * q.x2 - p.x1 * q.x3 + p.x2 * q.x0 + p.x3 * q.x1,
          p.x0 * q.x3 + p.x1 * q.x2 - p.x2 * q.x1 + p.x3 * q.x0};
}
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return mul(p, q); }

constexpr Quaternion conj(const Quaternion& q) { return {q.x0, -q.x1, -q.x2, -q.x3}; }

// Euclidean scalar product of R^4.
constexpr double dot(const Quaternion& p, const Quaternion& q) {
  return p.x0 * q.x0 + p.x1 * q.x1 + p.x2 * q.x2 + p.x3 * q.x3;
}

constexpr double norm2(const Quaternion& q) { return dot(q, q); }
inline double norm(const Quaternion& q) { return std::hypot(std::hypot(q.x0, q.x1), std::hypot(q.x2, q.x3)); }

// Throws DivisionByZero for q == 0.
Quaternion inv(const Quaternion& q);

// Right division, p / q := p q^{-1}.
Quaternion operator/(const Quaternion& p, const Quaternion& q);

// e^q = e^{x0} (cos|v| + v/|v| sin|v|) for q = x0 + v. For q = aI with I a unit
// imaginary this is cos a + I sin a.
Quaternion quat_exp(const Quaternion& q);

// Unit quaternion I_q = Im(q)/|Im(q)|. Throws RealInput when |Im(q)| <= tol.
Quaternion imaginary_unit_of(const Quaternion& q, double tol = kDefaultTolerance);

// Is q a unit purely imaginary quaternion (q^2 = -1) within tol?
bool is_imaginary_unit(const Quaternion& q, double tol = kDefaultTolerance);

// Acts with A on the component column (x0, x1, x2, x3).
Quaternion apply_matrix(const Mat4& a, const Quaternion& p);

// Componentwise |p_l - q_l| <= tol.
bool approx_equal(const Quaternion& p, const Quaternion& q, double tol = kDefaultTolerance);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace qtori
