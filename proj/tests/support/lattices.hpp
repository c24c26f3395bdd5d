#pragma once

#include <cmath>
#include <numbers>

#include "qtori/lattice.hpp"

namespace fixtures {

using qtori::Basis4;
using qtori::Quaternion;

inline constexpr double kPi = std::numbers::pi;

inline Quaternion expi(double alpha, const Quaternion& unit) { return qtori::quat_exp(unit * alpha); }

inline Basis4 lipschitz() { return Basis4({1.0, Quaternion::i(), Quaternion::j(), Quaternion::k()}); }

// omega = (-1 + i + j + k) / 2
inline Quaternion omega() { return {-0.5, 0.5, 0.5, 0.5}; }

inline Basis4 hurwitz() {
  const Quaternion i = Quaternion::i();
  return Basis4({1.0, -omega(), -i, i * omega()});
}

// Satisfies the pairwise conditions but 1 - v1 + v2 is shorter than 1.
inline Basis4 non_normalized() {
  const Quaternion I = (Quaternion::i() + Quaternion::j()) * (1.0 / std::sqrt(2.0));
  const Quaternion J = Quaternion::i() * (1.0 / std::sqrt(3.0)) + Quaternion::j() * std::sqrt(2.0 / 3.0);
  return Basis4({1.0, expi(kPi / 3, I), expi(2 * kPi / 3, J), Quaternion::k()});
}

inline Basis4 tame() {
  return Basis4({1.0, Quaternion(0.1, 2, 0, 0), Quaternion(0.01, 0, 3, 0), Quaternion(0.001, 0, 0, 4)});
}

// {1, I, a, a I} with a = e^{2 pi J / 5}
inline Basis4 cyclic_dihedral() {
  const Quaternion a = expi(2 * kPi / 5, Quaternion::j());
  return Basis4({1.0, Quaternion::i(), a, a * Quaternion::i()});
}

// {1, I, 4J + 3K, 3J - 4K}
inline Basis4 sphere_five() {
  return Basis4({1.0, Quaternion::i(), Quaternion(0, 0, 4, 3), Quaternion(0, 0, 3, -4)});
}

// {1, e^{pi I/3}, a, a e^{pi I/3}} with a = e^{2 pi J / 5}
inline Basis4 cyclic() {
  const Quaternion w = expi(kPi / 3, Quaternion::i());
  const Quaternion a = expi(2 * kPi / 5, Quaternion::j());
  return Basis4({1.0, w, a, a * w});
}

// L cap S^3 = {+-1, +-i}, yet i is not an automorphism.
inline Basis4 trivial_group() {
  return Basis4({1.0, Quaternion::i(), Quaternion(0.1, 0, 3, 0), Quaternion(0.01, 0, 0, 4)});
}

}  // namespace fixtures
