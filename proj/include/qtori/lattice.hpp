#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qtori/quaternion.hpp"
#include "qtori/settings.hpp"

namespace qtori {

using IntVec4 = std::array<std::int64_t, 4>;
using IntMat4 = std::array<IntVec4, 4>;

// Ordered quadruple of R-linearly independent quaternions.
class Basis4 {
 public:
  // Throws SingularBasis when |det| of the component matrix is <= tol.
  explicit Basis4(const std::array<Quaternion, 4>& v, double tol = kDefaultTolerance);

  const Quaternion& operator[](int k) const { return v_[static_cast<std::size_t>(k)]; }
  const std::array<Quaternion, 4>& vectors() const { return v_; }

  // Rows are the components of v1..v4.
  Mat4 component_matrix() const;

  // n1 v1 + n2 v2 + n3 v3 + n4 v4
  Quaternion combine(const IntVec4& n) const;

  static bool independent(const std::array<Quaternion, 4>& v, double tol = kDefaultTolerance);

 private:
  std::array<Quaternion, 4> v_;
};

// r_{k,l} = <v_k, v_l>
struct GramMatrix {
  Mat4 r{};

  double operator()(int k, int l) const { return r[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]; }

  // n R tn
  double form(const IntVec4& n) const;
};

GramMatrix gram(const Basis4& b);

// Q^T R Q = diag(values), eigenvalues ascending; columns of q are eigenvectors.
struct EigenDecomposition {
  std::array<double, 4> values{};
  Mat4 q{};

  double smallest() const { return values[0]; }
};

// Cyclic Jacobi rotations. Throws NotPositiveDefinite when an eigenvalue is
// <= tol.
EigenDecomposition eigen(const GramMatrix& r, double tol = kDefaultTolerance);

struct LatticePoint {
  IntVec4 coords{};
  Quaternion point;
};

// A rank-4 lattice with its Gram matrix, eigen-decomposition and inverse
// component matrix computed once at construction.
class Lattice {
 public:
  explicit Lattice(const Basis4& basis, double tol = kDefaultTolerance);

  const Basis4& basis() const { return basis_; }
  const GramMatrix& gram() const { return gram_; }
  const EigenDecomposition& eigen() const { return eigen_; }

  // sqrt of the smallest Gram eigenvalue
  double lambda1() const;

  // Real coordinates of q with respect to the basis.
  std::array<double, 4> coordinates(const Quaternion& q) const;

 private:
  Basis4 basis_;
  GramMatrix gram_;
  EigenDecomposition eigen_;
  Mat4 inverse_{};
};

enum class EnumerationMode {
  // every vector of the box |n_k| <= floor(bound / lambda1)
  Box,
  // partial-sum pruning inside the same box; visits a subset of the box that
  // still contains every vector with form value <= bound^2
  Pruned,
};

// Half width floor(bound / lambda1) of the box used for a given norm bound.
std::int64_t box_half_width(double bound, double lambda1, double tol = kDefaultTolerance);

// All integer vectors of the box for `bound`, lexicographic order. Throws
// BoxTooLarge when the box has more than settings.max_cells cells.
std::vector<IntVec4> enumerate_box(const Basis4& b, double bound, const Settings& settings = {});

// Visits, in lexicographic order, integer vectors of the box of half width
// `half_width`. In Pruned mode only vectors whose form value can be <= radius2
// are visited. The visitor returns false to stop early.
void for_each_candidate(const GramMatrix& r, std::int64_t half_width, double radius2,
                        EnumerationMode mode, const Settings& settings,
                        const std::function<bool(const IntVec4&)>& visit);

// Pruned enumeration without a box: every integer vector with n R tn <= radius2
// (up to rounding slack), lexicographic order. Throws BoxTooLarge when more than
// settings.max_cells nodes are visited. If live_radius2 is given, the radius
// used for pruning is min(radius2, *live_radius2) read at every node, so the
// visitor can shrink the search.
void for_each_in_ellipsoid(const GramMatrix& r, double radius2, const Settings& settings,
                           const std::function<bool(const IntVec4&)>& visit,
                           const double* live_radius2 = nullptr);

// Lattice vectors v with ||v| - radius| <= tol, lexicographic in coordinates.
std::vector<LatticePoint> points_with_norm(const Lattice& lattice, double radius,
                                           const Settings& settings = {},
                                           EnumerationMode mode = EnumerationMode::Box);

// Integer coordinates of q if q is in the lattice.
std::optional<IntVec4> membership(const Lattice& lattice, const Quaternion& q,
                                  double tol = kDefaultTolerance);

// Exact determinant of an integer matrix.
std::int64_t determinant(const IntMat4& m);

double determinant(const Mat4& m);

// Throws SingularBasis when |det| <= tol.
Mat4 inverse(const Mat4& m, double tol = kDefaultTolerance);

}  // namespace qtori
