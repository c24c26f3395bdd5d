#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qtori/lattice.hpp"

namespace qtori {

// 4x4 integer matrix with determinant +1 or -1. Rows act on a basis written as
// a column: (U b)_k = sum_l U_kl b_l.
class UnimodularMatrix {
 public:
  // Throws NotUnimodular.
  explicit UnimodularMatrix(const IntMat4& m);

  static UnimodularMatrix identity();

  const IntMat4& rows() const { return m_; }
  std::int64_t operator()(int r, int c) const { return m_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
  int determinant() const;

  Basis4 apply(const Basis4& b, double tol = kDefaultTolerance) const;

  // U S tU
  GramMatrix transform(const GramMatrix& s) const;

  UnimodularMatrix operator*(const UnimodularMatrix& other) const;
  UnimodularMatrix inverse() const;

  bool is_identity() const;

  friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;

 private:
  IntMat4 m_;
};

enum class CheckFailure {
  None,
  NotSorted,            // r_kk > r_ll for some l > k
  NegativeProduct,      // r_{k,k+1} < 0
  ZeroProduct,          // r_{k,k+1} = 0 (tameness only)
  NormOrdering,         // necessary condition (1)
  OffDiagonalBound,     // necessary condition (2)
  ShorterPrimitive,     // n R tn < r_kk with gcd(n_k..n_4) = 1
  EqualPrimitive,       // n R tn = r_kk with gcd(n_k..n_4) = 1, n != +-e_k
};

const char* to_string(CheckFailure f);

struct CheckReport {
  bool verdict = true;
  CheckFailure failure = CheckFailure::None;
  std::optional<int> step;               // 0..4
  std::optional<IntVec4> witness;        // present whenever verdict is false
  std::optional<std::pair<int, int>> pair;  // 1-based (k, l) for pairwise conditions
  double witness_value = 0.0;            // n R tn of the witness
  double threshold = 0.0;                // what the value was compared against
  std::string explanation;
};

// Re-evaluates a failing report's witness against R; true when the witness
// still exhibits the claimed violation.
bool witness_reproduces(const GramMatrix& r, const CheckReport& report, double tol = kDefaultTolerance);

// gcd(|n_k|, ..., |n_4|) for 0-based k; 0 when the tail is all zero.
std::int64_t tail_gcd(const IntVec4& n, int k);

// First nonzero coordinate made positive.
IntVec4 sign_normalized(const IntVec4& n);

// Conditions (1), (2) and B1. Necessary for reducedness, not sufficient.
CheckReport necessary_conditions(const GramMatrix& r, double tol = kDefaultTolerance);

// Sortedness, Step 0 (B1) and Steps 1-4 (B2') by box enumeration.
CheckReport check_reduced(const Basis4& b, const Settings& settings = {},
                          EnumerationMode mode = EnumerationMode::Box);

// Throws NotReduced if check_reduced fails.
CheckReport check_tame(const Basis4& b, const Settings& settings = {},
                       EnumerationMode mode = EnumerationMode::Box);

// Whether the k x 4 integer rows are the first rows of some GL(4, Z) matrix,
// i.e. every elementary divisor is 1. Throws RankDeficient.
bool extendable(std::span<const IntVec4> rows);

// A GL(4, Z) matrix whose first rows are `rows`, if one exists.
std::optional<UnimodularMatrix> complete_to_unimodular(std::span<const IntVec4> rows);

// Elementary divisors (absolute values, in elimination order).
std::vector<std::int64_t> elementary_divisors(std::span<const IntVec4> rows);

struct ReductionResult {
  Basis4 basis;                         // U applied to the input column
  UnimodularMatrix u;
  GramMatrix gram;                      // of the output basis
  std::array<double, 4> stage_minima{};  // Q_k(u_k)
};

// Minkowski-Siegel reduction. Throws InternalPostconditionFailure if the output
// fails check_reduced, BoxTooLarge if the search exceeds settings.max_cells.
ReductionResult reduce(const Basis4& b, const Settings& settings = {});

}  // namespace qtori
