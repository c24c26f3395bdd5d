#include "qtori/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qtori/errors.hpp"

namespace qtori {
namespace {

constexpr Mat4 identity4() {
  Mat4 m{};
  for (std::size_t i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

Mat4 multiply(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 4; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat4 transpose(const Mat4& a) {
  Mat4 t{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t[i][j] = a[j][i];
  return t;
}

double off_diagonal_norm(const Mat4& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) s += a[i][j] * a[i][j];
  return std::sqrt(s);
}

double frobenius(const Mat4& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

// Box cell count (2m+1)^4, saturated.
unsigned long long box_cells(std::int64_t half_width) {
  const long double side = 2.0L * static_cast<long double>(half_width) + 1.0L;
  const long double cells = side * side * side * side;
  if (cells >= static_cast<long double>(std::numeric_limits<unsigned long long>::max())) {
    return std::numeric_limits<unsigned long long>::max();
  }
  return static_cast<unsigned long long>(cells);
}

// Completes the square from the last coordinate down:
//   n R tn = sum_k d_k (n_k + sum_{j<k} mu_kj n_j)^2
// so the first coordinate is the outermost enumeration variable.
struct SquareDecomposition {
  std::array<double, 4> d{};
  Mat4 mu{};
};

SquareDecomposition decompose(const GramMatrix& r) {
  SquareDecomposition out;
  Mat4 a = r.r;
  for (int k = 3; k >= 0; --k) {
    const auto uk = static_cast<std::size_t>(k);
    const double dk = a[uk][uk];
    if (!(dk > 0.0)) throw NotPositiveDefinite();
    out.d[uk] = dk;
    for (std::size_t j = 0; j < uk; ++j) out.mu[uk][j] = a[uk][j] / dk;
    for (std::size_t i = 0; i < uk; ++i)
      for (std::size_t j = 0; j < uk; ++j) a[i][j] -= a[i][uk] * a[uk][j] / dk;
  }
  return out;
}

class PrunedWalker {
 public:
  PrunedWalker(const GramMatrix& r, double radius2, std::optional<std::int64_t> half_width,
               const Settings& settings, const std::function<bool(const IntVec4&)>& visit,
               const double* live_radius2 = nullptr)
      : dec_(decompose(r)),
        radius2_(radius2),
        live_(live_radius2),
        tol_(settings.tol),
        half_width_(half_width),
        cap_(settings.max_cells),
        visit_(visit) {}

  void run() {
    IntVec4 n{};
    walk(0, n, 0.0);
  }

 private:
  bool walk(int k, IntVec4& n, double partial) {
    const auto uk = static_cast<std::size_t>(k);
    double center = 0.0;
    for (std::size_t j = 0; j < uk; ++j) center -= dec_.mu[uk][j] * static_cast<double>(n[j]);
    const double r2 = live_ ? std::min(radius2_, *live_) : radius2_;
    const double rem = r2 * (1.0 + tol_) + tol_ - partial;
    if (rem < 0.0) return true;
    const double width = std::sqrt(rem / dec_.d[uk]);
    const double slack = 1e-9 * (1.0 + std::abs(center) + width);
    double lo = std::ceil(center - width - slack);
    double hi = std::floor(center + width + slack);
    if (half_width_) {
      lo = std::max(lo, -static_cast<double>(*half_width_));
      hi = std::min(hi, static_cast<double>(*half_width_));
    }
    if (lo > hi) return true;
    if (hi - lo > 4e15) throw BoxTooLarge(std::numeric_limits<unsigned long long>::max(), cap_);
    for (auto x = static_cast<std::int64_t>(lo); x <= static_cast<std::int64_t>(hi); ++x) {
      if (++nodes_ > cap_) throw BoxTooLarge(nodes_, cap_);
      n[uk] = x;
      const double y = static_cast<double>(x) - center;
      const double next = partial + dec_.d[uk] * y * y;
      if (k == 3) {
        if (!visit_(n)) return false;
      } else if (!walk(k + 1, n, next)) {
        return false;
      }
    }
    n[uk] = 0;
    return true;
  }

  SquareDecomposition dec_;
  double radius2_;
  const double* live_;
  double tol_;
  std::optional<std::int64_t> half_width_;
  unsigned long long cap_;
  unsigned long long nodes_ = 0;
  const std::function<bool(const IntVec4&)>& visit_;
};

}  // namespace

Basis4::Basis4(const std::array<Quaternion, 4>& v, double tol) : v_(v) {
  for (const auto& q : v_) {
    for (int l = 0; l < 4; ++l) {
      if (!std::isfinite(q[l])) throw InvalidBasis("basis has a non-finite component");
    }
  }
  if (!independent(v_, tol)) throw SingularBasis();
}

bool Basis4::independent(const std::array<Quaternion, 4>& v, double tol) {
  Mat4 m{};
  for (std::size_t k = 0; k < 4; ++k) m[k] = v[k].components();
  return std::abs(determinant(m)) > tol;
}

Mat4 Basis4::component_matrix() const {
  Mat4 m{};
  for (std::size_t k = 0; k < 4; ++k) m[k] = v_[k].components();
  return m;
}

Quaternion Basis4::combine(const IntVec4& n) const {
  Quaternion q;
  for (std::size_t k = 0; k < 4; ++k) q += v_[k] * static_cast<double>(n[k]);
  return q;
}

double GramMatrix::form(const IntVec4& n) const {
  double s = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (n[k] == 0) continue;
    double row = 0.0;
    for (std::size_t l = 0; l < 4; ++l) row += r[k][l] * static_cast<double>(n[l]);
    s += static_cast<double>(n[k]) * row;
  }
  return s;
}

GramMatrix gram(const Basis4& b) {
  GramMatrix g;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) g.r[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = dot(b[k], b[l]);
  return g;
}

EigenDecomposition eigen(const GramMatrix& r, double tol) {
  Mat4 a = r.r;
  Mat4 v = identity4();
  const double stop = 1e-12 * std::max(1.0, frobenius(a));
  for (int sweep = 0; sweep < 64 && off_diagonal_norm(a) >= stop; ++sweep) {
    for (std::size_t p = 0; p < 3; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Mat4 rot = identity4();
        rot[p][p] = c;
        rot[q][q] = c;
        rot[p][q] = s;
        rot[q][p] = -s;
        a = multiply(transpose(rot), multiply(a, rot));
        a[p][q] = a[q][p] = 0.0;
        v = multiply(v, rot);
      }
    }
  }

  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });
  EigenDecomposition out;
  for (std::size_t c = 0; c < 4; ++c) {
    out.values[c] = a[order[c]][order[c]];
    for (std::size_t row = 0; row < 4; ++row) out.q[row][c] = v[row][order[c]];
  }
  if (!(out.values[0] > tol)) throw NotPositiveDefinite();
  return out;
}

Lattice::Lattice(const Basis4& basis, double tol)
    : basis_(basis), gram_(qtori::gram(basis)), eigen_(qtori::eigen(gram_, tol)),
      inverse_(inverse(basis.component_matrix(), tol)) {}

double Lattice::lambda1() const { return std::sqrt(eigen_.smallest()); }

std::array<double, 4> Lattice::coordinates(const Quaternion& q) const {
  // q = c M with the basis as rows of M, so c = q M^{-1}.
  std::array<double, 4> c{};
  for (std::size_t col = 0; col < 4; ++col)
    for (std::size_t l = 0; l < 4; ++l) c[col] += q[static_cast<int>(l)] * inverse_[l][col];
  return c;
}

std::int64_t box_half_width(double bound, double lambda1, double tol) {
  if (!(bound > 0.0)) return 0;
  const double ratio = bound / lambda1 + tol;
  if (!(ratio < 1e15)) return static_cast<std::int64_t>(1e15);
  return static_cast<std::int64_t>(std::floor(ratio));
}

std::vector<IntVec4> enumerate_box(const Basis4& b, double bound, const Settings& settings) {
  const Lattice lattice(b, settings.tol);
  const std::int64_t m = box_half_width(bound, lattice.lambda1(), settings.tol);
  const auto cells = box_cells(m);
  if (cells > settings.max_cells) throw BoxTooLarge(cells, settings.max_cells);
  std::vector<IntVec4> out;
  out.reserve(cells);
  for_each_candidate(lattice.gram(), m, 0.0, EnumerationMode::Box, settings, [&](const IntVec4& n) {
    out.push_back(n);
    return true;
  });
  return out;
}

void for_each_candidate(const GramMatrix& r, std::int64_t m, double radius2, EnumerationMode mode,
                        const Settings& settings, const std::function<bool(const IntVec4&)>& visit) {
  const auto cells = box_cells(m);
  if (cells > settings.max_cells) throw BoxTooLarge(cells, settings.max_cells);
  if (mode == EnumerationMode::Pruned) {
    PrunedWalker(r, radius2, m, settings, visit).run();
    return;
  }
  IntVec4 n{};
  for (n[0] = -m; n[0] <= m; ++n[0])
    for (n[1] = -m; n[1] <= m; ++n[1])
      for (n[2] = -m; n[2] <= m; ++n[2])
        for (n[3] = -m; n[3] <= m; ++n[3])
          if (!visit(n)) return;
}

void for_each_in_ellipsoid(const GramMatrix& r, double radius2, const Settings& settings,
                           const std::function<bool(const IntVec4&)>& visit,
                           const double* live_radius2) {
  PrunedWalker(r, radius2, std::nullopt, settings, visit, live_radius2).run();
}

std::vector<LatticePoint> points_with_norm(const Lattice& lattice, double radius, const Settings& settings,
                                           EnumerationMode mode) {
  const double reach = radius + settings.tol;
  const std::int64_t m = box_half_width(reach, lattice.lambda1(), settings.tol);
  std::vector<LatticePoint> out;
  for_each_candidate(lattice.gram(), m, reach * reach, mode, settings, [&](const IntVec4& n) {
    const Quaternion p = lattice.basis().combine(n);
    if (std::abs(norm(p) - radius) <= settings.tol) out.push_back({n, p});
    return true;
  });
  return out;
}

std::optional<IntVec4> membership(const Lattice& lattice, const Quaternion& q, double tol) {
  const auto c = lattice.coordinates(q);
  IntVec4 n{};
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(std::abs(c[k]) < 4e15)) return std::nullopt;
    n[k] = std::llround(c[k]);
  }
  const Quaternion back = lattice.basis().combine(n);
  if (norm(back - q) <= tol * std::max(1.0, norm(q))) return n;
  return std::nullopt;
}

std::int64_t determinant(const IntMat4& m) {
  // Laplace expansion along the first two rows, in 128-bit arithmetic.
  __extension__ typedef __int128 W;
  auto minor2 = [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
    return W(m[r0][c0]) * m[r1][c1] - W(m[r0][c1]) * m[r1][c0];
  };
  static constexpr std::array<std::array<std::size_t, 2>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  W det = 0;
  for (std::size_t a = 0; a < 6; ++a) {
    const auto [c0, c1] = pairs[a];
    const auto [d0, d1] = pairs[5 - a];
    // sign of the column permutation (c0, c1, d0, d1)
    const int inversions = (c0 > d0) + (c0 > d1) + (c1 > d0) + (c1 > d1);
    const W term = minor2(0, 1, c0, c1) * minor2(2, 3, d0, d1);
    det += (inversions % 2 == 0) ? term : -term;
  }
  return static_cast<std::int64_t>(det);
}

double determinant(const Mat4& m) {
  Mat4 a = m;
  double det = 1.0;
  for (std::size_t c = 0; c < 4; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < 4; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

Mat4 inverse(const Mat4& m, double tol) {
  if (!(std::abs(determinant(m)) > tol)) throw SingularBasis();
  Mat4 a = m;
  Mat4 inv = identity4();
  for (std::size_t c = 0; c < 4; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    const double p = a[c][c];
    for (std::size_t k = 0; k < 4; ++k) {
      a[c][k] /= p;
      inv[c][k] /= p;
    }
    for (std::size_t r = 0; r < 4; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (std::size_t k = 0; k < 4; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

}  // namespace qtori
