#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qtori/moduli.hpp"

namespace qtori {

enum class AutGroupKind { C1, C2, C3, D4, D6, T };

// "2C1", "2C2", "2C3", "2D4", "2D6", "2T"
const char* to_string(AutGroupKind kind);
std::optional<AutGroupKind> parse_kind(std::string_view text);
int group_order(AutGroupKind kind);

struct AutGroup {
  std::vector<Quaternion> elements;  // descending by (x0, x1, x2, x3), so 1 comes first
  AutGroupKind kind = AutGroupKind::C1;
  Basis4 basis;                      // normalized basis the group was computed on
  bool renormalized = false;         // basis came from special_basis
};

// 1 is in L and no nonzero vector of L is shorter than 1.
bool is_normalized(const Lattice& lattice, const Settings& settings = {});

// Unit quaternions a with L a = L: unit vectors of L that map every basis
// vector into L through a unimodular integer matrix. Lattices that are not
// normalized are replaced by their special basis first.
AutGroup aut_group(const Basis4& b, const Settings& settings = {});

// Smallest n <= 12 with a^n = 1 within tol, 0 if there is none.
int element_order(const Quaternion& a, double tol = kDefaultTolerance);

// Classification by size and element orders. Throws UnclassifiableGroup when
// the set is not closed, lacks +-1, or matches no admissible kind.
AutGroupKind classify(const std::vector<Quaternion>& elements, double tol = kDefaultTolerance);

struct SymmetricTorusParameters {
  Quaternion axis;                   // I
  std::optional<Quaternion> second;  // J, orthogonal to I (2D4, 2D6, 2T)
  std::optional<Quaternion> alpha3;  // |alpha3| >= 1 (2C2, 2C3)
};

struct SymmetricTorus {
  Modulus modulus;
  AutGroup group;
};

// Characteristic modulus of a torus with the given symmetry:
//   2C2 (I, a3, a3 I), 2C3 (e^{pi I/3}, a3, a3 e^{pi I/3}), 2D4 (I, J, J I),
//   2D6 (e^{pi I/3}, J, J e^{pi I/3}), 2T (-w, -I, I w) with w = (-1 + I + J + IJ)/2.
// The reported group is the one computed for the resulting lattice, which may
// be larger than the requested kind. Throws InvalidParameters.
SymmetricTorus modulus_of_symmetric_torus(AutGroupKind kind, const SymmetricTorusParameters& params,
                                          const Settings& settings = {});

}  // namespace qtori
