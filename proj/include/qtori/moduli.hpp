#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qtori/reduction.hpp"

namespace qtori {

struct SpecialBasis {
  Basis4 basis;          // {1, u2 u1^-1, u3 u1^-1, u4 u1^-1}
  Quaternion rotation;   // u1^-1 / |u1^-1|
  double scale = 1.0;    // 1 / |u1|
  Quaternion first;      // u1, the shortest vector found by reduce
  UnimodularMatrix u;    // reduced basis = U (input column)
};

// Reduces b and right-multiplies by the inverse of the first reduced vector.
SpecialBasis special_basis(const Basis4& b, const Settings& settings = {});

// (v2, v3, v4) with {1, v2, v3, v4} a special basis.
struct Modulus {
  std::array<Quaternion, 3> v;

  const Quaternion& operator[](int k) const { return v[static_cast<std::size_t>(k)]; }

  // Throws SingularBasis when the four vectors are dependent.
  Basis4 basis(double tol = kDefaultTolerance) const;
};

Modulus modulus(const Basis4& b, const Settings& settings = {});

// Violations of 1 <= |v2|^2 <= |v3|^2 <= |v4|^2, |Re(v_k)| <= 1/2 and
// |<v_k, v_l>| <= <v_l, v_l>/2; empty when all hold within tol.
std::vector<std::string> modulus_invariant_violations(const Modulus& m, double tol = kDefaultTolerance);

struct SetMembership {
  bool member = false;
  std::string reason;
};

// Whether {1, v2, v3, v4} is reduced. Invalid triples give false with a
// reason; BoxTooLarge propagates.
SetMembership in_fundamental_set(const Modulus& m, const Settings& settings = {});

// Whether {1, v2, v3, v4} is reduced and tame.
SetMembership in_tame_set(const Modulus& m, const Settings& settings = {});

struct OrientedModulus {
  Modulus modulus;
  Mat4 rotation{};          // acts on components, fixes the real axis, det +1
  bool degenerate = false;  // frame could only be partly fixed
};

// Rotates imaginary parts so that Im(v2) lies on the +i axis and Im(v3) in the
// i-j half plane with nonnegative j component. The rotation is proper, so it
// is conjugation by a unit quaternion and preserves products as well as the
// Gram matrix.
OrientedModulus normalize_orientation(const Modulus& m, double tol = kDefaultTolerance);

struct EquivalenceWitness {
  // Relation between the special bases s1, s2 of the two lattices:
  // A (s1 column) = (s2 column) a, |a| = 1.
  UnimodularMatrix a_matrix;
  Quaternion a;
  // L1 m = L2 for the lattices as given.
  Quaternion multiplier;
  double scale_ratio = 1.0;  // |m| = |u1 of L2| / |u1 of L1|
  Basis4 special1;
  Basis4 special2;
};

// Tests F(q) = q a with |a| = 1 between the special bases. Candidates are the
// unit vectors of the second special lattice, 1 first and then lexicographic
// in coordinates.
std::optional<EquivalenceWitness> equivalent(const Basis4& l1, const Basis4& l2, const Settings& settings = {});

}  // namespace qtori
