#include "qtori/moduli.hpp"

#include <algorithm>
#include <cmath>

#include "qtori/errors.hpp"

namespace qtori {
namespace {

using Vec3 = std::array<double, 3>;

Vec3 imag3(const Quaternion& q) { return {q.x1, q.x2, q.x3}; }

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double len3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

Vec3 minus(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Part of v orthogonal to the unit vector e.
Vec3 reject(const Vec3& v, const Vec3& e) { return minus(v, scaled(e, dot3(v, e))); }

Mat4 frame_rotation(const Vec3& e1, const Vec3& e2) {
  const Vec3 e3 = cross(e1, e2);
  Mat4 r{};
  r[0][0] = 1.0;
  for (std::size_t c = 0; c < 3; ++c) {
    r[1][c + 1] = e1[c];
    r[2][c + 1] = e2[c];
    r[3][c + 1] = e3[c];
  }
  return r;
}

Mat4 identity4() {
  Mat4 r{};
  for (std::size_t k = 0; k < 4; ++k) r[k][k] = 1.0;
  return r;
}

bool within(double x, double lo, double hi, double tol) {
  const double s = tol * std::max({1.0, std::abs(lo), std::abs(hi)});
  return x >= lo - s && x <= hi + s;
}

std::string name(int k) { return "v" + std::to_string(k + 2); }

}  // namespace

SpecialBasis special_basis(const Basis4& b, const Settings& settings) {
  const ReductionResult red = reduce(b, settings);
  const Quaternion u1 = red.basis[0];
  const Quaternion u1_inv = inv(u1);
  std::array<Quaternion, 4> s;
  s[0] = Quaternion(1.0);
  for (int k = 1; k < 4; ++k) s[static_cast<std::size_t>(k)] = red.basis[k] * u1_inv;
  return SpecialBasis{Basis4(s, settings.tol), u1_inv * (1.0 / norm(u1_inv)), 1.0 / norm(u1), u1, red.u};
}

Basis4 Modulus::basis(double tol) const { return Basis4({Quaternion(1.0), v[0], v[1], v[2]}, tol); }

Modulus modulus(const Basis4& b, const Settings& settings) {
  const SpecialBasis s = special_basis(b, settings);
  return Modulus{{s.basis[1], s.basis[2], s.basis[3]}};
}

std::vector<std::string> modulus_invariant_violations(const Modulus& m, double tol) {
  std::vector<std::string> out;
  const double n2 = norm2(m[0]), n3 = norm2(m[1]), n4 = norm2(m[2]);
  if (!within(n2, 1.0, n2, tol)) out.push_back("|v2|^2 < 1");
  if (!within(n2, n2, n3, tol)) out.push_back("|v2|^2 > |v3|^2");
  if (!within(n3, n3, n4, tol)) out.push_back("|v3|^2 > |v4|^2");
  for (int k = 0; k < 3; ++k) {
    if (!within(m[k].real(), -0.5, 0.5, tol)) out.push_back("|Re(" + name(k) + ")| > 1/2");
  }
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      if (k == l) continue;
      const double half = 0.5 * norm2(m[l]);
      if (!within(dot(m[k], m[l]), -half, half, tol)) {
        out.push_back("|<" + name(k) + ", " + name(l) + ">| > |" + name(l) + "|^2/2");
      }
    }
  return out;
}

SetMembership in_fundamental_set(const Modulus& m, const Settings& settings) {
  try {
    const Basis4 b = m.basis(settings.tol);
    const CheckReport r = check_reduced(b, settings);
    return {r.verdict, r.explanation};
  } catch (const InvalidBasis& e) {
    return {false, e.what()};
  }
}

SetMembership in_tame_set(const Modulus& m, const Settings& settings) {
  try {
    const Basis4 b = m.basis(settings.tol);
    const CheckReport r = check_reduced(b, settings);
    if (!r.verdict) return {false, "not reduced: " + r.explanation};
    const CheckReport t = check_tame(b, settings);
    return {t.verdict, t.explanation};
  } catch (const InvalidBasis& e) {
    return {false, e.what()};
  }
}

OrientedModulus normalize_orientation(const Modulus& m, double tol) {
  const Vec3 a = imag3(m[0]);
  const double la = len3(a);
  if (la <= tol) return {m, identity4(), true};
  const Vec3 e1 = scaled(a, 1.0 / la);
  bool degenerate = false;
  Vec3 p = reject(imag3(m[1]), e1);
  if (len3(p) <= tol) {
    degenerate = true;
    p = reject(imag3(m[2]), e1);
    if (len3(p) <= tol) {
      // any direction orthogonal to e1
      const std::size_t axis = std::abs(e1[0]) < 0.5 ? 0 : (std::abs(e1[1]) < 0.5 ? 1 : 2);
      Vec3 t{};
      t[axis] = 1.0;
      p = reject(t, e1);
    }
  }
  const Vec3 e2 = scaled(p, 1.0 / len3(p));
  const Mat4 r = frame_rotation(e1, e2);
  Modulus out;
  for (std::size_t k = 0; k < 3; ++k) out.v[k] = apply_matrix(r, m.v[k]);
  return {out, r, degenerate};
}

std::optional<EquivalenceWitness> equivalent(const Basis4& l1, const Basis4& l2, const Settings& settings) {
  const SpecialBasis s1 = special_basis(l1, settings);
  const SpecialBasis s2 = special_basis(l2, settings);
  const Lattice target(s2.basis, settings.tol);
  auto candidates = points_with_norm(target, 1.0, settings);
  const IntVec4 one{1, 0, 0, 0};
  std::stable_partition(candidates.begin(), candidates.end(), [&](const LatticePoint& p) { return p.coords == one; });
  for (const auto& c : candidates) {
    IntMat4 m{};
    bool inside = true;
    for (std::size_t k = 0; k < 4 && inside; ++k) {
      const auto row = membership(target, s1.basis[static_cast<int>(k)] * c.point, settings.tol);
      if (!row) {
        inside = false;
      } else {
        m[k] = *row;
      }
    }
    if (!inside) continue;
    const auto d = determinant(m);
    if (d != 1 && d != -1) continue;
    // s1 c = M s2  =>  M^-1 s1 = s2 c^-1
    const UnimodularMatrix mm(m);
    const Quaternion mult = inv(s1.first) * c.point * s2.first;
    return EquivalenceWitness{mm.inverse(), inv(c.point), mult, norm(s2.first) / norm(s1.first), s1.basis, s2.basis};
  }
  return std::nullopt;
}

}  // namespace qtori
