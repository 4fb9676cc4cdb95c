#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "stkit/st_groups.hpp"

using namespace stkit;

namespace {

Eigen::Matrix4cd symplectic_form() {
  Eigen::Matrix4cd omega = Eigen::Matrix4cd::Zero();
  omega(0, 2) = 1;
  omega(1, 3) = 1;
  omega(2, 0) = -1;
  omega(3, 1) = -1;
  return omega;
}

// Characteristic-polynomial coefficients straight from eigenvalues, an
// independent route around the trace identities used by charpoly_pair.
CharPolyPair eigenvalue_charpoly(const GroupElement& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m);
  const auto& ev = solver.eigenvalues();
  std::complex<double> e1 = 0, e2 = 0;
  for (int i = 0; i < 4; ++i) {
    e1 += ev(i);
    for (int j = i + 1; j < 4; ++j) e2 += ev(i) * ev(j);
  }
  return {-e1.real(), e2.real()};
}

}  // namespace

TEST_CASE("group catalog: 34 genus-2 groups plus two genus-1 groups") {
  CHECK(all_groups().size() == 36);
  CHECK(genus2_groups().size() == 34);
  for (STGroup g : genus2_groups()) CHECK(group_info(g).genus == 2);
  CHECK(group_info(STGroup::SU2_g1).genus == 1);
  CHECK(group_info(STGroup::NU1_g1).genus == 1);
  // Labels round-trip through the parser, and the aliases resolve.
  for (STGroup g : all_groups()) {
    auto parsed = parse_group_label(group_label(g));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == g);
  }
  CHECK(parse_group_label("SU(2)") == STGroup::SU2_g1);
  CHECK(parse_group_label("N(U(1))") == STGroup::NU1_g1);
  CHECK(parse_group_label(" USp(4) ") == STGroup::USp4);
  CHECK_FALSE(parse_group_label("nonsense").has_value());
}

TEST_CASE("component-group sizes match the hand-derived table") {
  // Sizes follow from the generator orders modulo the identity component:
  // e.g. (J zeta_4)^2 = -I lands in U(1), so C_{2,1} has two cosets, while
  // zeta_{2n}^k stays outside U(1) until k = n, giving n cosets for C_n-type
  // towers; quaternion groups contribute |Q|/2 cosets since only +-1 of each
  // quaternion pair is absorbed by U(1).
  const std::map<std::string, std::size_t> expected = {
      {"J(C2)", 4},   {"J(C4)", 8},   {"J(C6)", 12},  {"J(D2)", 8},  {"J(D3)", 12},
      {"J(D4)", 16},  {"J(D6)", 24},  {"J(T)", 24},   {"J(O)", 48},  {"C2_1", 2},
      {"C6_1", 6},    {"D2_1", 4},    {"D4_1", 8},    {"D6_1", 12},  {"D3_2", 6},
      {"D4_2", 8},    {"D6_2", 12},   {"O1", 24},     {"E1", 1},     {"E2", 2},
      {"E3", 3},      {"E4", 4},      {"E6", 6},      {"J(E1)", 2},  {"J(E2)", 4},
      {"J(E3)", 6},   {"J(E4)", 8},   {"J(E6)", 12},  {"F_ab", 4},   {"F_ac", 4},
      {"N(G1_3)", 2}, {"G3_3", 1},    {"N(G3_3)", 2}, {"USp(4)", 1}, {"SU2", 1},
      {"N(U1)", 2}};
  for (STGroup g : all_groups()) {
    const CosetTable& table = coset_table(g);
    INFO("group ", group_label(g));
    CHECK(table.size == expected.at(group_label(g)));
    CHECK(table.representatives.size() == table.size);
  }
}

TEST_CASE("every coset representative is unitary and symplectic") {
  const Eigen::Matrix4cd omega = symplectic_form();
  for (STGroup g : genus2_groups()) {
    const CosetTable& table = coset_table(g);
    // representatives[0] is the identity.
    CHECK((table.representatives[0] - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    for (const GroupElement& r : table.representatives) {
      INFO("group ", group_label(g));
      CHECK((r.adjoint() * r - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((r.transpose() * omega * r - omega).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  for (STGroup g : {STGroup::SU2_g1, STGroup::NU1_g1}) {
    for (const GroupElement& r : coset_table(g).representatives) {
      CHECK((r.adjoint() * r - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(std::abs(r.determinant() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("haar identity-component draws stay in their component") {
  Rng rng(2024);
  const std::vector<std::pair<ComponentTag, int>> tags = {
      {ComponentTag::U1, 2},      {ComponentTag::SU2, 2},      {ComponentTag::U1xU1, 2},
      {ComponentTag::U1xSU2, 2},  {ComponentTag::SU2xSU2, 2},  {ComponentTag::U1, 1},
      {ComponentTag::SU2, 1}};
  for (auto [tag, genus] : tags) {
    for (int i = 0; i < 50; ++i) {
      GroupElement u = haar_identity_component(tag, genus, rng);
      CHECK(in_identity_component(u, tag, genus));
      CHECK((u.adjoint() * u - GroupElement::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <
            1e-9);
    }
  }
}

TEST_CASE("embeddings hit exact anchor values") {
  // Identity: det(I - x I) = (1 - x)^4 -> c1 = -4, c2 = 6.
  auto cp = charpoly_pair(GroupElement(Eigen::Matrix4cd::Identity()));
  CHECK(cp.c1 == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(cp.c2 == doctest::Approx(6.0).epsilon(1e-14));
  // embed_u1(0) = I, embed_u1(pi) = -I.
  CHECK((embed_u1(0.0) - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((embed_u1(M_PI) + Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  // The quaternion i, j, k images square to -I.
  for (auto q : {quaternion_matrix(0, 1, 0, 0), quaternion_matrix(0, 0, 1, 0),
                 quaternion_matrix(0, 0, 0, 1)}) {
    CHECK(((q * q) + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  }
  // embed_su2xsu2(j, j): trace 0, square -I -> (c1, c2) = (0, 2).
  const Eigen::Matrix2cd qj = quaternion_matrix(0, 0, 1, 0);
  cp = charpoly_pair(embed_su2xsu2(qj, qj));
  CHECK(cp.c1 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(cp.c2 == doctest::Approx(2.0).epsilon(1e-14));
  // Non-special-unitary input is rejected.
  Eigen::Matrix2cd bad = Eigen::Matrix2cd::Identity() * 2.0;
  CHECK_THROWS_AS(embed_su2(bad), std::invalid_argument);
}

TEST_CASE("charpoly_pair agrees with the eigenvalue route on random draws") {
  Rng rng(55);
  for (STGroup g : genus2_groups()) {
    if (g == STGroup::USp4) continue;  // sampled without matrices
    const CosetTable& table = coset_table(g);
    const ComponentTag tag = group_info(g).component;
    for (int i = 0; i < 8; ++i) {
      const GroupElement& rep =
          table.representatives[static_cast<std::size_t>(rng.below(table.size))];
      GroupElement m = rep * haar_identity_component(tag, 2, rng);
      // Haar draws are unitary symplectic, so eigenvalues sit on the circle.
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m);
      for (int k = 0; k < 4; ++k) CHECK(std::abs(std::abs(solver.eigenvalues()(k)) - 1.0) < 1e-8);
      auto fast = charpoly_pair(m);
      auto slow = eigenvalue_charpoly(m);
      CHECK(fast.c1 == doctest::Approx(slow.c1).epsilon(1e-8));
      CHECK(fast.c2 == doctest::Approx(slow.c2).epsilon(1e-8));
    }
  }
}

TEST_CASE("samples stay inside the admissible coefficient region") {
  // (c1, c2) arises from angles iff c2 <= c1^2/4 + 2 and c2 >= 2|c1| - 2,
  // the image of the map c1 = -2(cos t1 + cos t2), c2 = 2 + 4 cos t1 cos t2.
  for (STGroup g : genus2_groups()) {
    Rng rng = Rng::substream(11, {static_cast<std::uint64_t>(g)});
    for (int i = 0; i < 500; ++i) {
      auto [c1, c2] = sample(g, rng);
      INFO("group ", group_label(g));
      CHECK(std::abs(c1) <= 4.0 + 1e-9);
      CHECK(c2 <= c1 * c1 / 4.0 + 2.0 + 1e-9);
      CHECK(c2 >= 2.0 * std::abs(c1) - 2.0 - 1e-9);
    }
  }
}

TEST_CASE("J-type cosets have exactly vanishing trace") {
  // J exchanges the two symplectic planes, so J times any block-diagonal
  // identity-component element has zero diagonal; the paper's density
  // argument for vanishing coefficients rests on this.
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    GroupElement u = haar_identity_component(ComponentTag::SU2, 2, rng);
    GroupElement ju = coset_table(STGroup::JE1).representatives[1] * u;
    CHECK(std::abs(ju.trace()) < 1e-14);
  }
}

namespace {

struct MomentSummary {
  double c1_sq = 0, c1_quad = 0, c2_mean = 0, c2_sq = 0, c1_odd = 0;
};

MomentSummary sampled_moments(STGroup g, int n, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, {static_cast<std::uint64_t>(g)});
  MomentSummary s;
  for (int i = 0; i < n; ++i) {
    auto [c1, c2] = sample(g, rng);
    s.c1_sq += c1 * c1;
    s.c1_quad += c1 * c1 * c1 * c1;
    s.c2_mean += c2;
    s.c2_sq += c2 * c2;
    s.c1_odd += c1;
  }
  const double inv = 1.0 / n;
  return {s.c1_sq * inv, s.c1_quad * inv, s.c2_mean * inv, s.c2_sq * inv, s.c1_odd * inv};
}

}  // namespace

TEST_CASE("connected-group sampler moments match closed forms") {
  // Closed forms per identity component, derived from the trace layout:
  //   U(1):        c1 = -4cos(t),          c2 = 4cos^2(t) + 2
  //   SU(2):       c1 = -2tr,              c2 = tr^2 + 2   (semicircle tr)
  //   U(1)xU(1):   c1 = -2(c_a + c_b),     c2 = 2 + 4 c_a c_b
  //   U(1)xSU(2):  c1 = -(2c + t),         c2 = 2ct + 2
  //   SU(2)^2:     c1 = -(t1 + t2),        c2 = t1 t2 + 2
  // with E[cos^2] = 1/2, E[cos^4] = 3/8, semicircle E[t^2] = 1, E[t^4] = 2.
  struct Expect {
    STGroup g;
    double c1_sq, c1_quad, c2_mean, c2_sq;
  };
  const std::vector<Expect> cases = {
      {STGroup::E1, 4.0, 32.0, 3.0, 10.0},       // SU(2)
      {STGroup::G3_3, 2.0, 10.0, 2.0, 5.0},      // SU(2) x SU(2)
      {STGroup::USp4, 1.0, 3.0, 1.0, 2.0},       // Weyl measure
  };
  const int n = 200000;
  for (const auto& e : cases) {
    auto m = sampled_moments(e.g, n, 4242);
    INFO("group ", group_label(e.g));
    CHECK(m.c1_sq == doctest::Approx(e.c1_sq).epsilon(0.05));
    CHECK(m.c1_quad == doctest::Approx(e.c1_quad).epsilon(0.05));
    CHECK(m.c2_mean == doctest::Approx(e.c2_mean).epsilon(0.05));
    CHECK(m.c2_sq == doctest::Approx(e.c2_sq).epsilon(0.05));
    CHECK(std::abs(m.c1_odd) < 0.05);
  }
  // The U(1), U(1)xU(1), and U(1)xSU(2) components only occur inside
  // disconnected groups; exercise them through the component sampler.
  Rng rng(9001);
  auto component_moments = [&](ComponentTag tag, int n_draws) {
    MomentSummary s;
    for (int i = 0; i < n_draws; ++i) {
      auto cp = charpoly_pair(haar_identity_component(tag, 2, rng));
      s.c1_sq += cp.c1 * cp.c1;
      s.c1_quad += cp.c1 * cp.c1 * cp.c1 * cp.c1;
      s.c2_mean += cp.c2;
      s.c2_sq += cp.c2 * cp.c2;
    }
    const double inv = 1.0 / n_draws;
    return MomentSummary{s.c1_sq * inv, s.c1_quad * inv, s.c2_mean * inv, s.c2_sq * inv, 0.0};
  };
  auto u1 = component_moments(ComponentTag::U1, 100000);
  CHECK(u1.c1_sq == doctest::Approx(8.0).epsilon(0.05));
  CHECK(u1.c1_quad == doctest::Approx(96.0).epsilon(0.05));
  CHECK(u1.c2_mean == doctest::Approx(4.0).epsilon(0.05));
  CHECK(u1.c2_sq == doctest::Approx(18.0).epsilon(0.05));
  auto u1u1 = component_moments(ComponentTag::U1xU1, 100000);
  CHECK(u1u1.c1_sq == doctest::Approx(4.0).epsilon(0.05));
  CHECK(u1u1.c1_quad == doctest::Approx(36.0).epsilon(0.05));
  CHECK(u1u1.c2_mean == doctest::Approx(2.0).epsilon(0.05));
  CHECK(u1u1.c2_sq == doctest::Approx(8.0).epsilon(0.05));
  auto u1su2 = component_moments(ComponentTag::U1xSU2, 100000);
  CHECK(u1su2.c1_sq == doctest::Approx(3.0).epsilon(0.05));
  CHECK(u1su2.c2_mean == doctest::Approx(2.0).epsilon(0.05));
  CHECK(u1su2.c2_sq == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("usp4 sampler matches higher catalog moments") {
  // E[c1^6] = 14, E[c2^3] = 4, E[c2^4] = 10 for Haar USp(4).
  Rng rng(808);
  const int n = 400000;
  double c1_6 = 0, c2_3 = 0, c2_4 = 0;
  for (int i = 0; i < n; ++i) {
    auto [c1, c2] = sample_usp4_charpoly(rng);
    const double s = c1 * c1;
    c1_6 += s * s * s;
    c2_3 += c2 * c2 * c2;
    c2_4 += c2 * c2 * c2 * c2;
  }
  CHECK(c1_6 / n == doctest::Approx(14.0).epsilon(0.05));
  CHECK(c2_3 / n == doctest::Approx(4.0).epsilon(0.05));
  CHECK(c2_4 / n == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("genus-1 samplers: semicircle moments and the exact CM coset") {
  Rng rng(17);
  const int n = 200000;
  double sq = 0, quad = 0;
  for (int i = 0; i < n; ++i) {
    double c1 = sample(STGroup::SU2_g1, rng).c1;
    sq += c1 * c1;
    quad += c1 * c1 * c1 * c1;
  }
  // Semicircle: E[c1^2] = 1, E[c1^4] = 2 (Catalan numbers).
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.03));
  CHECK(quad / n == doctest::Approx(2.0).epsilon(0.05));

  int zero = 0;
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    double c1 = sample(STGroup::NU1_g1, rng).c1;
    if (c1 == 0.0) ++zero;  // the J2 coset kills the trace exactly
  }
  // Coset choice is a fair coin: 50% +- 5 sigma.
  CHECK(std::abs(zero - m / 2) < 5 * std::sqrt(m * 0.25));
}

TEST_CASE("sample_batch is deterministic and schedule independent") {
  Dataset a = sample_batch(STGroup::JE3, 5, 40, 123, 1);
  Dataset b = sample_batch(STGroup::JE3, 5, 40, 123, 4);
  REQUIRE(a.rows() == 40);
  REQUIRE(a.cols() == 10);
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  CHECK(a.feature_names == b.feature_names);
  Dataset c = sample_batch(STGroup::JE3, 5, 40, 124, 1);
  CHECK(a.features != c.features);
  CHECK(a.labels[0] == "J(E3)");
  CHECK(a.feature_names[0] == "c1_1");
  CHECK(a.feature_names[1] == "c2_1");
  // Genus-1 batches carry only c1 columns.
  Dataset g1 = sample_batch(STGroup::NU1_g1, 3, 10, 5, 1);
  CHECK(g1.cols() == 3);
  CHECK(g1.feature_names[2] == "c1_3");
}
