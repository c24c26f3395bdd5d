#include "qtori/autgroup.hpp"

#include <algorithm>
#include <map>
#include <numbers>

#include "qtori/errors.hpp"

namespace qtori {
namespace {

// Descending by components, with components closer than tol treated as equal.
bool precedes(const Quaternion& a, const Quaternion& b, double tol) {
  for (int l = 0; l < 4; ++l) {
    if (std::abs(a[l] - b[l]) <= tol) continue;
    return a[l] > b[l];
  }
  return false;
}

std::optional<std::size_t> find(const std::vector<Quaternion>& set, const Quaternion& q, double tol) {
  for (std::size_t i = 0; i < set.size(); ++i)
    if (approx_equal(set[i], q, tol)) return i;
  return std::nullopt;
}

using OrderCounts = std::map<int, int>;

OrderCounts expected_orders(AutGroupKind kind) {
  switch (kind) {
    case AutGroupKind::C1: return {{1, 1}, {2, 1}};
    case AutGroupKind::C2: return {{1, 1}, {2, 1}, {4, 2}};
    case AutGroupKind::C3: return {{1, 1}, {2, 1}, {3, 2}, {6, 2}};
    case AutGroupKind::D4: return {{1, 1}, {2, 1}, {4, 6}};
    case AutGroupKind::D6: return {{1, 1}, {2, 1}, {3, 2}, {4, 6}, {6, 2}};
    case AutGroupKind::T: return {{1, 1}, {2, 1}, {3, 8}, {4, 6}, {6, 8}};
  }
  return {};
}

bool contains(const AutGroup& g, const Quaternion& q, double tol) { return find(g.elements, q, tol).has_value(); }

}  // namespace

const char* to_string(AutGroupKind kind) {
  switch (kind) {
    case AutGroupKind::C1: return "2C1";
    case AutGroupKind::C2: return "2C2";
    case AutGroupKind::C3: return "2C3";
    case AutGroupKind::D4: return "2D4";
    case AutGroupKind::D6: return "2D6";
    case AutGroupKind::T: return "2T";
  }
  return "?";
}

std::optional<AutGroupKind> parse_kind(std::string_view text) {
  for (auto k : {AutGroupKind::C1, AutGroupKind::C2, AutGroupKind::C3, AutGroupKind::D4, AutGroupKind::D6,
                 AutGroupKind::T}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

int group_order(AutGroupKind kind) {
  switch (kind) {
    case AutGroupKind::C1: return 2;
    case AutGroupKind::C2: return 4;
    case AutGroupKind::C3: return 6;
    case AutGroupKind::D4: return 8;
    case AutGroupKind::D6: return 12;
    case AutGroupKind::T: return 24;
  }
  return 0;
}

bool is_normalized(const Lattice& lattice, const Settings& settings) {
  if (!membership(lattice, Quaternion(1.0), settings.tol)) return false;
  const double limit = 1.0 - settings.tol;
  const auto m = box_half_width(1.0, lattice.lambda1(), settings.tol);
  bool shorter = false;
  for_each_candidate(lattice.gram(), m, 1.0, EnumerationMode::Pruned, settings, [&](const IntVec4& n) {
    if (n == IntVec4{}) return true;
    if (lattice.gram().form(n) < limit * limit) {
      shorter = true;
      return false;
    }
    return true;
  });
  return !shorter;
}

AutGroup aut_group(const Basis4& b, const Settings& settings) {
  const double tol = settings.tol;
  bool renormalized = false;
  Basis4 basis = b;
  if (!is_normalized(Lattice(b, tol), settings)) {
    basis = special_basis(b, settings).basis;
    renormalized = true;
  }
  const Lattice lattice(basis, tol);
  std::vector<Quaternion> elements;
  for (const auto& p : points_with_norm(lattice, 1.0, settings)) {
    IntMat4 m{};
    bool inside = true;
    for (std::size_t k = 0; k < 4 && inside; ++k) {
      const auto row = membership(lattice, basis[static_cast<int>(k)] * p.point, tol);
      if (row) {
        m[k] = *row;
      } else {
        inside = false;
      }
    }
    if (!inside) continue;
    const auto d = determinant(m);
    if (d == 1 || d == -1) elements.push_back(p.point);
  }
  std::sort(elements.begin(), elements.end(), [&](const Quaternion& x, const Quaternion& y) { return precedes(x, y, tol); });
  const AutGroupKind kind = classify(elements, tol);
  return AutGroup{std::move(elements), kind, basis, renormalized};
}

int element_order(const Quaternion& a, double tol) {
  Quaternion p = a;
  for (int n = 1; n <= 12; ++n) {
    if (approx_equal(p, Quaternion(1.0), tol)) return n;
    p = p * a;
  }
  return 0;
}

AutGroupKind classify(const std::vector<Quaternion>& elements, double tol) {
  // products of unit quaternions carry a few ulps of error per factor
  const double snap = std::max(tol, 1e-12) * 16.0;
  if (!find(elements, Quaternion(1.0), snap) || !find(elements, Quaternion(-1.0), snap)) {
    throw UnclassifiableGroup("element set does not contain +1 and -1");
  }
  for (const auto& x : elements)
    for (const auto& y : elements)
      if (!find(elements, x * y, snap)) throw UnclassifiableGroup("element set is not closed under multiplication");

  OrderCounts counts;
  for (const auto& x : elements) {
    const int n = element_order(x, snap);
    if (n == 0) throw UnclassifiableGroup("element of order greater than 12");
    ++counts[n];
  }
  for (auto kind : {AutGroupKind::C1, AutGroupKind::C2, AutGroupKind::C3, AutGroupKind::D4, AutGroupKind::D6,
                    AutGroupKind::T}) {
    if (static_cast<int>(elements.size()) != group_order(kind) || counts != expected_orders(kind)) continue;
    if (kind == AutGroupKind::D6) {
      bool relation = false;
      for (const auto& e : elements) {
        if (element_order(e, snap) != 6) continue;
        for (const auto& j : elements) {
          if (element_order(j, snap) != 4) continue;
          if (approx_equal(j * e * inv(j), inv(e), snap)) {
            relation = true;
            break;
          }
        }
        if (relation) break;
      }
      if (!relation) throw UnclassifiableGroup("12 elements without the dicyclic relation");
    }
    return kind;
  }
  throw UnclassifiableGroup("no admissible group has " + std::to_string(elements.size()) +
                            " elements with these orders");
}

SymmetricTorus modulus_of_symmetric_torus(AutGroupKind kind, const SymmetricTorusParameters& params,
                                          const Settings& settings) {
  const double tol = settings.tol;
  const Quaternion I = params.axis;
  if (!is_imaginary_unit(I, tol)) throw InvalidParameters("axis I is not an imaginary unit");
  const bool needs_second = kind == AutGroupKind::D4 || kind == AutGroupKind::D6 || kind == AutGroupKind::T;
  const bool needs_alpha = kind == AutGroupKind::C2 || kind == AutGroupKind::C3;
  if (kind == AutGroupKind::C1) throw InvalidParameters("2C1 has no characteristic modulus");
  Quaternion J;
  Quaternion a3;
  if (needs_second) {
    if (!params.second) throw InvalidParameters("second unit J is required");
    J = *params.second;
    if (!is_imaginary_unit(J, tol)) throw InvalidParameters("J is not an imaginary unit");
    if (std::abs(dot(I, J)) > tol) throw InvalidParameters("J is not orthogonal to I");
  }
  if (needs_alpha) {
    if (!params.alpha3) throw InvalidParameters("alpha3 is required");
    a3 = *params.alpha3;
    if (norm(a3) < 1.0 - tol) throw InvalidParameters("|alpha3| < 1");
  }
  const Quaternion e6 = quat_exp(I * (std::numbers::pi / 3));
  Modulus m;
  std::vector<Quaternion> generators;
  switch (kind) {
    case AutGroupKind::C2:
      m = Modulus{{I, a3, a3 * I}};
      generators = {I};
      break;
    case AutGroupKind::C3:
      m = Modulus{{e6, a3, a3 * e6}};
      generators = {e6};
      break;
    case AutGroupKind::D4:
      m = Modulus{{I, J, J * I}};
      generators = {I, J};
      break;
    case AutGroupKind::D6:
      m = Modulus{{e6, J, J * e6}};
      generators = {e6, J};
      break;
    case AutGroupKind::T: {
      const Quaternion w = (Quaternion(-1.0) + I + J + I * J) * 0.5;
      m = Modulus{{-w, -I, I * w}};
      generators = {I, w};
      break;
    }
    case AutGroupKind::C1: break;
  }
  if (!Basis4::independent({1.0, m[0], m[1], m[2]}, tol)) {
    throw InvalidParameters("parameters give linearly dependent vectors");
  }
  const Basis4 basis = m.basis(tol);
  const CheckReport reduced = check_reduced(basis, settings);
  if (!reduced.verdict) throw InvalidParameters("parameters do not give a reduced basis: " + reduced.explanation);
  AutGroup group = aut_group(basis, settings);
  for (const auto& g : generators) {
    if (!contains(group, g, std::max(tol, 1e-12) * 16.0)) {
      throw InternalPostconditionFailure("computed group lacks a generator of " + std::string(to_string(kind)));
    }
  }
  return SymmetricTorus{m, std::move(group)};
}

}  // namespace qtori
