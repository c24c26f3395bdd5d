#include "qtori/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "qtori/errors.hpp"

namespace qtori {
namespace {

using IntRows = std::vector<IntVec4>;

double slack(double x, double tol) { return tol * std::max(1.0, std::abs(x)); }

IntVec4 unit(int k) {
  IntVec4 e{};
  e[static_cast<std::size_t>(k)] = 1;
  return e;
}

std::string vec_text(const IntVec4& n) {
  std::ostringstream os;
  os << '(' << n[0] << ", " << n[1] << ", " << n[2] << ", " << n[3] << ')';
  return os.str();
}

CheckReport failure(CheckFailure kind, int step, const IntVec4& witness, double value, double threshold,
                    std::string explanation) {
  CheckReport r;
  r.verdict = false;
  r.failure = kind;
  r.step = step;
  r.witness = witness;
  r.witness_value = value;
  r.threshold = threshold;
  r.explanation = std::move(explanation);
  return r;
}

// Pick order among equally good witnesses: smaller value first, then the
// lexicographically smaller sign-normalised vector.
bool better_witness(double v, const IntVec4& n, double best_v, const IntVec4& best_n, double tol) {
  if (v < best_v - slack(best_v, tol)) return true;
  if (v > best_v + slack(best_v, tol)) return false;
  return sign_normalized(n) < sign_normalized(best_n);
}

bool sorted_pairs(const GramMatrix& r, double tol, CheckReport& out) {
  for (int k = 0; k < 3; ++k) {
    const double a = r(k, k);
    const double b = r(k + 1, k + 1);
    if (a > b + slack(b, tol)) {
      out = failure(CheckFailure::NotSorted, k + 1, unit(k + 1), b, a,
                    "|v" + std::to_string(k + 2) + "| < |v" + std::to_string(k + 1) + "|");
      out.pair = std::make_pair(k + 1, k + 2);
      return false;
    }
  }
  return true;
}

bool positive_products(const GramMatrix& r, double tol, CheckReport& out) {
  for (int k = 0; k < 3; ++k) {
    const double p = r(k, k + 1);
    if (p < -slack(std::sqrt(r(k, k) * r(k + 1, k + 1)), tol)) {
      IntVec4 w = unit(k);
      w[static_cast<std::size_t>(k + 1)] = 1;
      out = failure(CheckFailure::NegativeProduct, 0, w, p, 0.0,
                    "<v" + std::to_string(k + 1) + ", v" + std::to_string(k + 2) + "> < 0");
      out.pair = std::make_pair(k + 1, k + 2);
      return false;
    }
  }
  return true;
}

}  // namespace

UnimodularMatrix::UnimodularMatrix(const IntMat4& m) : m_(m) {
  const auto d = qtori::determinant(m_);
  if (d != 1 && d != -1) throw NotUnimodular();
}

UnimodularMatrix UnimodularMatrix::identity() {
  IntMat4 m{};
  for (int k = 0; k < 4; ++k) m[static_cast<std::size_t>(k)] = unit(k);
  return UnimodularMatrix(m);
}

int UnimodularMatrix::determinant() const { return static_cast<int>(qtori::determinant(m_)); }

Basis4 UnimodularMatrix::apply(const Basis4& b, double tol) const {
  std::array<Quaternion, 4> v;
  for (std::size_t k = 0; k < 4; ++k) v[k] = b.combine(m_[k]);
  return Basis4(v, tol);
}

GramMatrix UnimodularMatrix::transform(const GramMatrix& s) const {
  GramMatrix out;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          acc += static_cast<double>(m_[a][i]) * s.r[i][j] * static_cast<double>(m_[b][j]);
      out.r[a][b] = acc;
    }
  return out;
}

UnimodularMatrix UnimodularMatrix::operator*(const UnimodularMatrix& other) const {
  IntMat4 p{};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t i = 0; i < 4; ++i) p[a][b] += m_[a][i] * other.m_[i][b];
  return UnimodularMatrix(p);
}

UnimodularMatrix UnimodularMatrix::inverse() const {
  // adjugate divided by a determinant of +-1
  const int det = determinant();
  IntMat4 inv{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      // cofactor C_rc goes to inv[c][r]
      std::array<std::array<std::int64_t, 3>, 3> minor{};
      std::size_t mi = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        if (i == r) continue;
        std::size_t mj = 0;
        for (std::size_t j = 0; j < 4; ++j) {
          if (j == c) continue;
          minor[mi][mj++] = m_[i][j];
        }
        ++mi;
      }
      const std::int64_t d3 = minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1]) -
                              minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0]) +
                              minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]);
      const std::int64_t cof = ((r + c) % 2 == 0) ? d3 : -d3;
      inv[c][r] = cof * det;
    }
  return UnimodularMatrix(inv);
}

bool UnimodularMatrix::is_identity() const { return *this == identity(); }

const char* to_string(CheckFailure f) {
  switch (f) {
    case CheckFailure::None: return "none";
    case CheckFailure::NotSorted: return "not_sorted";
    case CheckFailure::NegativeProduct: return "negative_product";
    case CheckFailure::ZeroProduct: return "zero_product";
    case CheckFailure::NormOrdering: return "norm_ordering";
    case CheckFailure::OffDiagonalBound: return "off_diagonal_bound";
    case CheckFailure::ShorterPrimitive: return "shorter_primitive";
    case CheckFailure::EqualPrimitive: return "equal_primitive";
  }
  return "unknown";
}

std::int64_t tail_gcd(const IntVec4& n, int k) {
  std::int64_t g = 0;
  for (auto i = static_cast<std::size_t>(k); i < 4; ++i) g = std::gcd(g, std::abs(n[i]));
  return g;
}

IntVec4 sign_normalized(const IntVec4& n) {
  for (const auto x : n) {
    if (x > 0) return n;
    if (x < 0) return {-n[0], -n[1], -n[2], -n[3]};
  }
  return n;
}

bool witness_reproduces(const GramMatrix& r, const CheckReport& report, double tol) {
  if (report.verdict || !report.witness || !report.step) return false;
  const IntVec4& w = *report.witness;
  const double q = r.form(w);
  const int step = *report.step;
  switch (report.failure) {
    case CheckFailure::NegativeProduct:
    case CheckFailure::ZeroProduct: {
      if (!report.pair) return false;
      const int k = report.pair->first - 1;
      const double p = r(k, k + 1);
      const double s = slack(std::sqrt(r(k, k) * r(k + 1, k + 1)), tol);
      // Q(e_k + e_{k+1}) = r_kk + r_{k+1,k+1} + 2 r_{k,k+1}
      const double sum = r(k, k) + r(k + 1, k + 1);
      const bool consistent = std::abs(q - sum - 2.0 * p) <= slack(q, tol) * 10.0;
      return consistent && (report.failure == CheckFailure::NegativeProduct ? p < -s : std::abs(p) <= s);
    }
    case CheckFailure::NotSorted:
    case CheckFailure::NormOrdering:
    case CheckFailure::OffDiagonalBound:
    case CheckFailure::ShorterPrimitive: {
      const int k = step - 1;
      if (k < 0 || k > 3) return false;
      const double rkk = r(k, k);
      return q < rkk - slack(rkk, tol) && tail_gcd(w, k) == 1;
    }
    case CheckFailure::EqualPrimitive: {
      const int k = step - 1;
      if (k < 0 || k > 3) return false;
      const double rkk = r(k, k);
      const IntVec4 ek = unit(k);
      const IntVec4 mek{-ek[0], -ek[1], -ek[2], -ek[3]};
      if (w == ek || w == mek || w == IntVec4{}) return false;
      return std::abs(q - rkk) <= tol * rkk && tail_gcd(w, k) == 1;
    }
    case CheckFailure::None: return false;
  }
  return false;
}

CheckReport necessary_conditions(const GramMatrix& r, double tol) {
  CheckReport out;
  // (1) r_kk <= r_ll for l > k
  for (int k = 0; k < 4; ++k)
    for (int l = k + 1; l < 4; ++l) {
      if (r(k, k) > r(l, l) + slack(r(l, l), tol)) {
        out = failure(CheckFailure::NormOrdering, k + 1, unit(l), r(l, l), r(k, k),
                      "r" + std::to_string(k + 1) + std::to_string(k + 1) + " > r" + std::to_string(l + 1) +
                          std::to_string(l + 1));
        out.pair = std::make_pair(k + 1, l + 1);
        return out;
      }
    }
  // (2) |r_kl| <= r_ll / 2 for k != l; then e_l - sign(r_kl) e_k is shorter
  // than v_k and its tail from k contains a unit
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) {
      if (k == l) continue;
      const double bound = 0.5 * r(l, l);
      if (std::abs(r(k, l)) > bound + slack(bound, tol)) {
        IntVec4 w = unit(l);
        w[static_cast<std::size_t>(k)] = r(k, l) > 0 ? -1 : 1;
        w = sign_normalized(w);
        out = failure(CheckFailure::OffDiagonalBound, k + 1, w, r.form(w), r(k, k),
                      "|r" + std::to_string(k + 1) + std::to_string(l + 1) + "| > r" + std::to_string(l + 1) +
                          std::to_string(l + 1) + "/2");
        out.pair = std::make_pair(k + 1, l + 1);
        return out;
      }
    }
  if (!positive_products(r, tol, out)) return out;
  out.explanation = "necessary conditions hold";
  return out;
}

CheckReport check_reduced(const Basis4& b, const Settings& settings, EnumerationMode mode) {
  const Lattice lattice(b, settings.tol);
  const GramMatrix& r = lattice.gram();
  CheckReport out;
  if (!sorted_pairs(r, settings.tol, out)) return out;
  if (!positive_products(r, settings.tol, out)) return out;
  for (int k = 0; k < 4; ++k) {
    const double rkk = r(k, k);
    const double limit = rkk - slack(rkk, settings.tol);
    const std::int64_t m = box_half_width(std::sqrt(rkk), lattice.lambda1(), settings.tol);
    std::optional<IntVec4> best;
    double best_v = 0.0;
    for_each_candidate(r, m, rkk, mode, settings, [&](const IntVec4& n) {
      if (tail_gcd(n, k) != 1) return true;
      const double v = r.form(n);
      if (v >= limit) return true;
      if (!best || better_witness(v, n, best_v, *best, settings.tol)) {
        best = n;
        best_v = v;
      }
      return true;
    });
    if (best) {
      return failure(CheckFailure::ShorterPrimitive, k + 1, sign_normalized(*best), best_v, rkk,
                     "step " + std::to_string(k + 1) + ": " + vec_text(sign_normalized(*best)) +
                         " is shorter than v" + std::to_string(k + 1) + " with coprime tail");
    }
  }
  out.explanation = "reduced";
  return out;
}

CheckReport check_tame(const Basis4& b, const Settings& settings, EnumerationMode mode) {
  if (!check_reduced(b, settings, mode).verdict) throw NotReduced();
  const Lattice lattice(b, settings.tol);
  const GramMatrix& r = lattice.gram();
  for (int k = 0; k < 3; ++k) {
    const double p = r(k, k + 1);
    if (p <= slack(std::sqrt(r(k, k) * r(k + 1, k + 1)), settings.tol)) {
      IntVec4 w = unit(k);
      w[static_cast<std::size_t>(k + 1)] = 1;
      CheckReport out = failure(CheckFailure::ZeroProduct, 0, w, p, 0.0,
                                "<v" + std::to_string(k + 1) + ", v" + std::to_string(k + 2) + "> = 0");
      out.pair = std::make_pair(k + 1, k + 2);
      return out;
    }
  }
  for (int k = 0; k < 4; ++k) {
    const double rkk = r(k, k);
    const std::int64_t m = box_half_width(std::sqrt(rkk), lattice.lambda1(), settings.tol);
    const IntVec4 ek = unit(k);
    const IntVec4 mek{-ek[0], -ek[1], -ek[2], -ek[3]};
    std::optional<IntVec4> best;
    double best_v = 0.0;
    // candidates up to the upper edge of the equality band
    for_each_candidate(r, m, rkk * (1.0 + settings.tol), mode, settings, [&](const IntVec4& n) {
      if (n == IntVec4{} || n == ek || n == mek) return true;
      if (tail_gcd(n, k) != 1) return true;
      const double v = r.form(n);
      if (std::abs(v - rkk) > settings.tol * rkk) return true;
      const IntVec4 s = sign_normalized(n);
      if (!best || s < *best) {
        best = s;
        best_v = v;
      }
      return true;
    });
    if (best) {
      return failure(CheckFailure::EqualPrimitive, k + 1, *best, best_v, rkk,
                     "step " + std::to_string(k + 1) + ": " + vec_text(*best) + " has the length of v" +
                         std::to_string(k + 1) + " and a coprime tail");
    }
  }
  CheckReport out;
  out.explanation = "tame";
  return out;
}

namespace {

// Diagonalises a k x 4 integer matrix by unimodular row and column operations,
// P A Q = D. Optionally tracks P^-1 (k x k) and Q^-1 (4 x 4).
struct Smith {
  std::vector<IntVec4> a;
  std::vector<IntVec4> p_inv;  // k x k, stored in the first k entries of each row
  IntMat4 q_inv{};
  std::vector<std::int64_t> diag;

  explicit Smith(std::span<const IntVec4> rows) : a(rows.begin(), rows.end()) {
    const std::size_t k = a.size();
    if (k > 4) throw InvalidParameters("more than four integer rows");
    p_inv.assign(k, IntVec4{});
    for (std::size_t i = 0; i < k; ++i) p_inv[i][i] = 1;
    for (std::size_t i = 0; i < 4; ++i) q_inv[i][i] = 1;
    run();
  }

  void swap_rows(std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    for (auto& row : p_inv) std::swap(row[i], row[j]);
  }

  void swap_cols(std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    std::swap(q_inv[i], q_inv[j]);
  }

  // row_i -= f row_t
  void sub_row(std::size_t i, std::size_t t, std::int64_t f) {
    for (std::size_t c = 0; c < 4; ++c) a[i][c] -= f * a[t][c];
    for (auto& row : p_inv) row[t] += f * row[i];
  }

  // col_j -= f col_t
  void sub_col(std::size_t j, std::size_t t, std::int64_t f) {
    for (auto& row : a) row[j] -= f * row[t];
    for (std::size_t c = 0; c < 4; ++c) q_inv[t][c] += f * q_inv[j][c];
  }

  void run() {
    const std::size_t k = a.size();
    for (std::size_t t = 0; t < k; ++t) {
      for (;;) {
        std::size_t pi = k, pj = 4;
        for (std::size_t i = t; i < k; ++i)
          for (std::size_t j = t; j < 4; ++j)
            if (a[i][j] != 0 && (pi == k || std::abs(a[i][j]) < std::abs(a[pi][pj]))) {
              pi = i;
              pj = j;
            }
        if (pi == k) throw RankDeficient();
        if (pi != t) swap_rows(pi, t);
        if (pj != t) swap_cols(pj, t);
        bool clean = true;
        for (std::size_t i = t + 1; i < k; ++i) {
          sub_row(i, t, a[i][t] / a[t][t]);
          if (a[i][t] != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < 4; ++j) {
          sub_col(j, t, a[t][j] / a[t][t]);
          if (a[t][j] != 0) clean = false;
        }
        if (!clean) continue;
        bool divides = true;
        for (std::size_t i = t + 1; i < k && divides; ++i)
          for (std::size_t j = t + 1; j < 4; ++j)
            if (a[i][j] % a[t][t] != 0) {
              sub_row(t, i, -1);  // row_t += row_i
              divides = false;
              break;
            }
        if (divides) break;
      }
      diag.push_back(std::abs(a[t][t]));
    }
  }
};

}  // namespace

std::vector<std::int64_t> elementary_divisors(std::span<const IntVec4> rows) { return Smith(rows).diag; }

bool extendable(std::span<const IntVec4> rows) {
  const auto d = elementary_divisors(rows);
  return std::all_of(d.begin(), d.end(), [](std::int64_t x) { return x == 1; });
}

std::optional<UnimodularMatrix> complete_to_unimodular(std::span<const IntVec4> rows) {
  const Smith s(rows);
  if (!std::all_of(s.diag.begin(), s.diag.end(), [](std::int64_t x) { return x == 1; })) return std::nullopt;
  // A = P^-1 D Q^-1 and D = [+-I | 0], so A is P^-1 D times the top rows of Q^-1.
  const std::size_t k = rows.size();
  IntMat4 m = s.q_inv;
  for (std::size_t i = 0; i < k; ++i) {
    IntVec4 row{};
    for (std::size_t t = 0; t < k; ++t) {
      const std::int64_t f = s.p_inv[i][t] * s.a[t][t];
      for (std::size_t c = 0; c < 4; ++c) row[c] += f * s.q_inv[t][c];
    }
    m[i] = row;
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < 4; ++c)
      if (m[i][c] != rows[i][c]) throw InternalPostconditionFailure("unimodular completion does not reproduce its rows");
  return UnimodularMatrix(m);
}

ReductionResult reduce(const Basis4& b, const Settings& settings) {
  const double tol = settings.tol;
  // Sort by length first; the stage search does not depend on it, but an
  // already reduced input then comes back unchanged.
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return norm2(b[x]) < norm2(b[y]); });
  IntMat4 perm{};
  for (std::size_t k = 0; k < 4; ++k) perm[k] = unit(order[k]);
  const UnimodularMatrix p(perm);
  const Basis4 sorted = p.apply(b, tol);
  const GramMatrix s = gram(sorted);
  eigen(s, tol);  // rejects a Gram matrix that is not positive definite

  IntRows chosen;
  std::array<double, 4> minima{};
  for (int k = 0; k < 4; ++k) {
    auto feasible = [&](const IntVec4& n) {
      IntRows trial = chosen;
      trial.push_back(n);
      try {
        return extendable(trial);
      } catch (const RankDeficient&) {
        return false;
      }
    };
    // Tie order: larger sign-normalised vector wins, so unit vectors are
    // preferred over combinations of equal length.
    auto prefer = [&](double v, const IntVec4& n, double best_v, const IntVec4& best_n) {
      const double s_tol = slack(best_v, tol);
      if (v < best_v - s_tol) return true;
      if (v > best_v + s_tol) return false;
      return n > best_n;
    };

    std::optional<IntVec4> best;
    double best_v = 0.0;
    auto offer = [&](const IntVec4& raw) {
      const IntVec4 n = sign_normalized(raw);
      if (n == IntVec4{}) return;
      const double v = s.form(n);
      if (best && !prefer(v, n, best_v, *best)) return;
      if (!feasible(n)) return;
      best = n;
      best_v = v;
    };
    for (int i = 0; i < 4; ++i) offer(unit(i));
    if (!best) {
      const auto completion = complete_to_unimodular(chosen);
      for (std::size_t i = chosen.size(); i < 4; ++i) offer(completion->rows()[i]);
    }
    double live = best_v;
    for_each_in_ellipsoid(
        s, best_v, settings,
        [&](const IntVec4& n) {
          if (sign_normalized(n) != n || n == IntVec4{}) return true;
          offer(n);
          live = best_v;
          return true;
        },
        &live);

    IntVec4 u = *best;
    if (k > 0) {
      const IntVec4& prev = chosen.back();
      double cross = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          cross += static_cast<double>(prev[i]) * s.r[i][j] * static_cast<double>(u[j]);
      if (cross < 0.0) u = {-u[0], -u[1], -u[2], -u[3]};
    }
    chosen.push_back(u);
    minima[static_cast<std::size_t>(k)] = best_v;
  }

  IntMat4 rows{};
  for (std::size_t k = 0; k < 4; ++k) rows[k] = chosen[k];
  const UnimodularMatrix u = UnimodularMatrix(rows) * p;
  const Basis4 out = u.apply(b, tol);
  ReductionResult result{out, u, gram(out), minima};
  const CheckReport check = check_reduced(out, settings, EnumerationMode::Pruned);
  if (!check.verdict) {
    throw InternalPostconditionFailure("reduction output is not reduced: " + check.explanation);
  }
  return result;
}

}  // namespace qtori
