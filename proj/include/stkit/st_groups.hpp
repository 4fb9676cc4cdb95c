#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stkit/dataset.hpp"
#include "stkit/rng.hpp"

namespace stkit {

// The 34 Sato-Tate groups arising for genus-2 curves over Q, plus the two
// genus-1 groups. Each group is a compact subgroup of USp(4) (genus 2,
// fixing the symplectic form [[0, I2], [-I2, 0]]) or of SU(2) up to
// normalizer (genus 1), described by an identity component and finitely many
// extra generators.
enum class STGroup : int {
  // identity component U(1)
  JC2, JC4, JC6,
  JD2, JD3, JD4, JD6,
  JT, JO,
  C2_1, C6_1,
  D2_1, D4_1, D6_1,
  D3_2, D4_2, D6_2,
  O1,
  // identity component SU(2)
  E1, E2, E3, E4, E6,
  JE1, JE2, JE3, JE4, JE6,
  // identity component U(1) x U(1)
  F_ab, F_ac,
  // identity component U(1) x SU(2)
  NG1_3,
  // identity component SU(2) x SU(2)
  G3_3, NG3_3,
  // full group
  USp4,
  // genus 1
  SU2_g1, NU1_g1,
};

enum class ComponentTag : int { U1, SU2, U1xU1, U1xSU2, SU2xSU2, USp4 };

struct GroupInfo {
  STGroup id;
  std::string label;   // ASCII spelling, e.g. "J(C2)", "D6_2", "USp(4)"
  int genus;           // 1 or 2
  ComponentTag component;
};

const std::vector<STGroup>& all_groups();     // 34 genus-2 groups, then SU(2), N(U(1))
const std::vector<STGroup>& genus2_groups();  // the 34
const GroupInfo& group_info(STGroup g);
const std::string& group_label(STGroup g);
std::optional<STGroup> parse_group_label(std::string_view label);

// Elements are dense complex matrices: 4x4 for genus-2 groups, 2x2 for the
// genus-1 groups.
using GroupElement = Eigen::MatrixXcd;

// diag(e^{i theta}, e^{i theta}, e^{-i theta}, e^{-i theta})
GroupElement embed_u1(double theta);

// A |-> block-diagonal (A, conj A). Requires A in SU(2) within 1e-8.
GroupElement embed_su2(const Eigen::Matrix2cd& a);

// A acts on coordinates (1,3), B on coordinates (2,4), matching the Lie
// algebra placement h_1 = E11 - E33, h_2 = E22 - E44. Requires A, B in SU(2).
GroupElement embed_su2xsu2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b);

// Unit quaternion a + bi + cj + dk as an SU(2) matrix
// [[a+bi, c+di], [-c+di, a-bi]].
Eigen::Matrix2cd quaternion_matrix(double a, double b, double c, double d);

// Embedded image of diag(e^{i pi/n}, e^{-i pi/n}).
GroupElement zeta_2n(int n);

// The finite generators of the group beyond its identity component
// (empty for connected groups).
std::vector<GroupElement> generators(STGroup g);

struct CosetTable {
  STGroup group;
  std::vector<GroupElement> representatives;  // representatives[0] is the identity
  std::size_t size = 0;
};

// Component-group coset representatives, built once per group by closing
// {identity, generators} under right multiplication, identifying elements
// that differ by an identity-component factor. Cached; thread-safe after
// first use per group.
const CosetTable& coset_table(STGroup g);

// True iff g lies in the embedded identity component named by tag
// (infinity-norm tolerance on the characteristic pattern).
bool in_identity_component(const GroupElement& g, ComponentTag tag, int genus, double tol = 1e-8);

// Haar-distributed element of the identity component: uniform angles for
// U(1) factors, uniform unit quaternions for SU(2) factors. The USp(4) tag
// is rejected here; its characteristic polynomials are sampled directly from
// the eigenvalue measure by sample_usp4_charpoly.
GroupElement haar_identity_component(ComponentTag tag, int genus, Rng& rng);

// Coefficients of det(I - x g) = x^4 + c1 x^3 + c2 x^2 + c1 x + 1 (genus 2).
// For genus-1 samples only c1 of det(I - x g) = x^2 + c1 x + 1 is meaningful
// and c2 is fixed at 0.
struct CharPolyPair {
  double c1 = 0.0;
  double c2 = 0.0;
};

// Characteristic polynomial pair of a 4x4 group element:
// c1 = -tr(g), c2 = (tr(g)^2 - tr(g^2)) / 2, both real for g in USp(4).
CharPolyPair charpoly_pair(const GroupElement& g);

// c1 = -tr(g) for a 2x2 group element.
double charpoly_c1_genus1(const GroupElement& g);

// One Haar draw from the group: uniform coset representative times a Haar
// identity-component element. USp(4) draws come from the Weyl eigenvalue
// measure without materializing matrices.
CharPolyPair sample(STGroup g, Rng& rng);

// Eigenvalue angles (theta1, theta2) from the USp(4) Weyl density
// proportional to (cos t1 - cos t2)^2 sin^2 t1 sin^2 t2 on [0, pi]^2, by
// rejection sampling; then c1 = -2(cos t1 + cos t2), c2 = 2 + 4 cos t1 cos t2.
CharPolyPair sample_usp4_charpoly(Rng& rng);

// num_samples rows of pairs_per_sample concatenated draws. Row r uses the
// substream (seed, group index, r), so the result is independent of both
// schedule and thread count. Genus-2 rows are [c1_1, c2_1, ..., c1_K, c2_K];
// genus-1 rows are [c1_1, ..., c1_K]. Labels are the group label.
Dataset sample_batch(STGroup g, int pairs_per_sample, int num_samples, std::uint64_t seed,
                     int threads = 1);

}  // namespace stkit
