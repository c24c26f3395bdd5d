#include "qtori/quaternion.hpp"

#include <ostream>

#include "qtori/errors.hpp"

namespace qtori {

Quaternion inv(const Quaternion& q) {
  const double n2 = norm2(q);
  if (n2 == 0.0 || !std::isfinite(n2)) throw DivisionByZero();
  return conj(q) * (1.0 / n2);
}

Quaternion operator/(const Quaternion& p, const Quaternion& q) { return p * inv(q); }

Quaternion quat_exp(const Quaternion& q) {
  const double scale = std::exp(q.x0);
  const Quaternion v = q.imag();
  const double angle = norm(v);
  if (angle == 0.0) return Quaternion(scale);
  const double s = std::sin(angle) / angle;
  return Quaternion(std::cos(angle), v.x1 * s, v.x2 * s, v.x3 * s) * scale;
}

Quaternion imaginary_unit_of(const Quaternion& q, double tol) {
  const Quaternion v = q.imag();
  const double len = norm(v);
  if (len <= tol) throw RealInput();
  return v * (1.0 / len);
}

bool is_imaginary_unit(const Quaternion& q, double tol) {
  return std::abs(q.x0) <= tol && std::abs(norm(q) - 1.0) <= tol;
}

Quaternion apply_matrix(const Mat4& a, const Quaternion& p) {
  const auto x = p.components();
  std::array<double, 4> y{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) y[r] += a[r][c] * x[c];
  }
  return {y[0], y[1], y[2], y[3]};
}

bool approx_equal(const Quaternion& p, const Quaternion& q, double tol) {
  for (int l = 0; l < 4; ++l) {
    if (!(std::abs(p[l] - q[l]) <= tol)) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.x0 << ", " << q.x1 << ", " << q.x2 << ", " << q.x3 << ')';
}

}  // namespace qtori
