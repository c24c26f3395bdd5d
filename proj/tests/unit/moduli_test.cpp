#include <gtest/gtest.h>

#include <random>

#include "qtori/errors.hpp"
#include "qtori/moduli.hpp"
#include "support/lattices.hpp"
#include "support/oracles.hpp"

using qtori::Basis4;
using qtori::Modulus;
using qtori::Quaternion;

namespace {

constexpr double kTol = 1e-9;

void expect_same_gram(const Basis4& a, const Basis4& b, double tol = kTol) {
  const auto ga = qtori::gram(a), gb = qtori::gram(b);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) EXPECT_NEAR(ga(k, l), gb(k, l), tol) << k << "," << l;
}

void expect_quat(const Quaternion& got, const Quaternion& want, double tol = kTol) {
  EXPECT_TRUE(qtori::approx_equal(got, want, tol)) << got << " vs " << want;
}

Basis4 right_multiply(const Basis4& b, const Quaternion& u) {
  return Basis4({b[0] * u, b[1] * u, b[2] * u, b[3] * u});
}

Basis4 unimodular_change(const Basis4& b, std::mt19937_64& rng) {
  for (;;) {
    const auto m = oracle::random_integer_basis(rng, -2, 2);
    if (std::abs(oracle::det4(m)) == 1) return qtori::UnimodularMatrix(m).apply(b);
  }
}

Modulus oriented(const Basis4& b) { return qtori::normalize_orientation(qtori::modulus(b)).modulus; }

}  // namespace

TEST(SpecialBasis, Lipschitz) {
  const auto s = qtori::special_basis(fixtures::lipschitz());
  EXPECT_EQ(s.basis[0], Quaternion(1.0));
  expect_same_gram(s.basis, fixtures::lipschitz());
  EXPECT_NEAR(s.scale, 1.0, kTol);
  EXPECT_NEAR(norm(s.rotation), 1.0, kTol);
}

TEST(SpecialBasis, Hurwitz) {
  const auto s = qtori::special_basis(fixtures::hurwitz());
  const auto g = qtori::gram(s.basis);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(g(k, k), 1.0, kTol);
  for (int k = 0; k < 3; ++k) EXPECT_GE(g(k, k + 1), -kTol);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      if (k != l) EXPECT_LE(std::abs(g(k, l)), 0.5 + kTol);
  EXPECT_TRUE(qtori::check_reduced(s.basis).verdict);
}

TEST(SpecialBasis, Homothety) {
  const Basis4 b({2.0, Quaternion(0, 2, 0, 0), Quaternion(0, 0, 2, 0), Quaternion(0, 0, 0, 2)});
  const auto s = qtori::special_basis(b);
  EXPECT_NEAR(s.scale, 0.5, kTol);
  expect_same_gram(s.basis, fixtures::lipschitz());
}

TEST(SpecialBasis, GramIsReducedGramOverFirstNorm) {
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 40; ++t) {
    std::array<Quaternion, 4> v;
    for (auto& q : v) q = oracle::random_quaternion(rng, 3.0);
    const Basis4 b(v);
    const auto red = qtori::reduce(b);
    const auto s = qtori::special_basis(b);
    const double n2 = norm2(red.basis[0]);
    const auto gs = qtori::gram(s.basis);
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) EXPECT_NEAR(gs(k, l), red.gram(k, l) / n2, 1e-9 * std::max(1.0, std::abs(gs(k, l))));
    EXPECT_TRUE(qtori::check_reduced(s.basis).verdict);
    const auto m = qtori::modulus(b);
    EXPECT_TRUE(qtori::modulus_invariant_violations(m).empty());
  }
}

TEST(Modulus, AlreadySpecialInputsComeBackUnchanged) {
  for (const Basis4& b : {fixtures::cyclic_dihedral(), fixtures::tame(), fixtures::lipschitz()}) {
    const auto m = qtori::modulus(b);
    for (int k = 0; k < 3; ++k) expect_quat(m[k], b[k + 1]);
  }
}

TEST(Modulus, InvariantViolationsReported) {
  EXPECT_TRUE(qtori::modulus_invariant_violations(Modulus{{Quaternion::i(), Quaternion::j(), Quaternion::k()}}).empty());
  EXPECT_FALSE(qtori::modulus_invariant_violations(Modulus{{Quaternion(0.6, 1, 0, 0), Quaternion::j(), Quaternion(0, 0, 0, 2)}}).empty());
  EXPECT_FALSE(qtori::modulus_invariant_violations(Modulus{{Quaternion(0, 0.5, 0, 0), Quaternion::j(), Quaternion::k()}}).empty());
  EXPECT_FALSE(qtori::modulus_invariant_violations(Modulus{{Quaternion::i(), Quaternion(0, 0, 0, 2), Quaternion::j() * 1.5}}).empty());
}

TEST(FundamentalSet, Examples) {
  const Modulus lip{{Quaternion::i(), Quaternion::j(), Quaternion::k()}};
  EXPECT_TRUE(qtori::in_fundamental_set(lip).member);
  EXPECT_FALSE(qtori::in_tame_set(lip).member);
  const Modulus tame{{Quaternion(0.1, 2, 0, 0), Quaternion(0.01, 0, 3, 0), Quaternion(0.001, 0, 0, 4)}};
  EXPECT_TRUE(qtori::in_fundamental_set(tame).member);
  EXPECT_TRUE(qtori::in_tame_set(tame).member);
  const Modulus dependent{{Quaternion::i(), Quaternion::i(), Quaternion::k()}};
  const auto d = qtori::in_fundamental_set(dependent);
  EXPECT_FALSE(d.member);
  EXPECT_FALSE(d.reason.empty());
  EXPECT_FALSE(qtori::in_tame_set(dependent).member);
  const Modulus bad{{Quaternion(0, 1, 0, 0), Quaternion(1, 0, 1, 0.1), Quaternion(0, 0, 0, 2)}};
  EXPECT_FALSE(qtori::in_fundamental_set(bad).member);
  EXPECT_FALSE(qtori::in_tame_set(bad).member);
}

TEST(Orientation, Examples) {
  const Modulus swapped{{Quaternion::j(), Quaternion::i(), Quaternion::k()}};
  const auto r = qtori::normalize_orientation(swapped);
  EXPECT_FALSE(r.degenerate);
  expect_quat(r.modulus[0], Quaternion::i());
  expect_quat(r.modulus[1], Quaternion::j());
  expect_same_gram(r.modulus.basis(), swapped.basis());

  const Modulus canonical{{Quaternion::i(), Quaternion::j(), Quaternion::k()}};
  const auto c = qtori::normalize_orientation(canonical);
  for (int k = 0; k < 3; ++k) expect_quat(c.modulus[k], canonical[k]);

  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    const Quaternion I = qtori::imaginary_unit_of(oracle::random_quaternion(rng));
    Quaternion J = oracle::random_quaternion(rng).imag();
    J = qtori::imaginary_unit_of(J - I * dot(J, I));
    const Quaternion e = fixtures::expi(fixtures::kPi / 3, I);
    const Modulus m{{e, J, J * e}};
    const auto n = qtori::normalize_orientation(m);
    const Quaternion e0 = fixtures::expi(fixtures::kPi / 3, Quaternion::i());
    expect_quat(n.modulus[0], e0);
    expect_quat(n.modulus[1], Quaternion::j());
    expect_quat(n.modulus[2], Quaternion::j() * e0);
    expect_same_gram(n.modulus.basis(), m.basis());
    // proper rotation: products are preserved
    expect_quat(n.modulus[1] * n.modulus[0], n.modulus[2]);
  }
}

TEST(Orientation, DegenerateFrames) {
  const Modulus real_first{{Quaternion(1.0), Quaternion::j(), Quaternion::k()}};
  EXPECT_TRUE(qtori::normalize_orientation(real_first).degenerate);
  const Modulus collinear{{Quaternion(0.3, 1, 0, 0), Quaternion(-0.2, 2, 0, 0), Quaternion::k()}};
  const auto c = qtori::normalize_orientation(collinear);
  EXPECT_TRUE(c.degenerate);
  // such a triple spans too little to be a basis, so compare products directly
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(c.modulus[k].real(), collinear[k].real(), kTol);
    for (int l = 0; l < 3; ++l) EXPECT_NEAR(dot(c.modulus[k], c.modulus[l]), dot(collinear[k], collinear[l]), kTol);
  }
}

TEST(Modulus, TameUniqueness) {
  std::mt19937_64 rng(555);
  const Modulus want = oriented(fixtures::tame());
  for (int t = 0; t < 25; ++t) {
    const Basis4 other = right_multiply(unimodular_change(fixtures::tame(), rng), oracle::random_unit(rng));
    const Modulus got = oriented(other);
    for (int k = 0; k < 3; ++k) expect_quat(got[k], want[k]);
  }
}

TEST(Equivalence, Reflexive) {
  for (const Basis4& b : {fixtures::lipschitz(), fixtures::hurwitz(), fixtures::tame(), fixtures::cyclic(),
                          fixtures::sphere_five(), fixtures::non_normalized()}) {
    const auto w = qtori::equivalent(b, b);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(w->a_matrix.is_identity());
    EXPECT_EQ(w->a, Quaternion(1.0));
    EXPECT_NEAR(w->scale_ratio, 1.0, kTol);
  }
}

TEST(Equivalence, LipschitzRelabelled) {
  const Basis4 swapped({1.0, Quaternion::j(), Quaternion::i(), Quaternion::k()});
  const auto w = qtori::equivalent(fixtures::lipschitz(), swapped);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->a, Quaternion(1.0));
  for (const auto& row : w->a_matrix.rows()) {
    int nonzero = 0;
    for (auto x : row) {
      EXPECT_LE(std::abs(x), 1);
      nonzero += x != 0;
    }
    EXPECT_EQ(nonzero, 1);
  }
}

TEST(Equivalence, LipschitzIsNotHurwitz) {
  EXPECT_FALSE(qtori::equivalent(fixtures::lipschitz(), fixtures::hurwitz()).has_value());
  EXPECT_FALSE(qtori::equivalent(fixtures::hurwitz(), fixtures::lipschitz()).has_value());
  EXPECT_FALSE(qtori::equivalent(fixtures::cyclic(), fixtures::cyclic_dihedral()).has_value());
}

TEST(Equivalence, RightMultiplesAndBasisChanges) {
  std::mt19937_64 rng(808);
  const Basis4 bases[] = {fixtures::lipschitz(), fixtures::hurwitz(), fixtures::tame(), fixtures::cyclic(),
                          fixtures::sphere_five(), fixtures::cyclic_dihedral()};
  for (const auto& b : bases) {
    for (int t = 0; t < 4; ++t) {
      const Quaternion u = oracle::random_unit(rng) * (t == 3 ? 2.5 : 1.0);
      const Basis4 c = right_multiply(unimodular_change(b, rng), u);
      const auto w = qtori::equivalent(b, c);
      ASSERT_TRUE(w.has_value());
      EXPECT_NEAR(norm(w->a), 1.0, kTol);
      // A s1 = s2 a
      for (int k = 0; k < 4; ++k) {
        Quaternion lhs;
        for (int l = 0; l < 4; ++l) lhs += w->special1[l] * static_cast<double>(w->a_matrix(k, l));
        expect_quat(lhs, w->special2[k] * w->a, 1e-8);
      }
      // L1 m = L2
      const qtori::Lattice l2(c);
      for (int k = 0; k < 4; ++k) EXPECT_TRUE(qtori::membership(l2, b[k] * w->multiplier, 1e-8));
      EXPECT_NEAR(w->scale_ratio, norm(u), 1e-9 * norm(u));
      EXPECT_TRUE(qtori::equivalent(c, b).has_value());
      for (double r : {1.0, std::sqrt(2.0), std::sqrt(3.0), 2.0}) {
        EXPECT_EQ(qtori::points_with_norm(qtori::Lattice(w->special1), r).size(),
                  qtori::points_with_norm(qtori::Lattice(w->special2), r).size());
      }
    }
  }
}
