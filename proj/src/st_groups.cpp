#include "stkit/st_groups.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace stkit {

using cd = std::complex<double>;

namespace {

GroupElement zero4() { return GroupElement::Zero(4, 4); }

GroupElement matrix_j() {
  GroupElement m = zero4();
  m(0, 3) = 1;
  m(1, 2) = -1;
  m(2, 1) = -1;
  m(3, 0) = 1;
  return m;
}

GroupElement matrix_a() {
  GroupElement m = zero4();
  m(0, 2) = 1;
  m(1, 1) = 1;
  m(2, 0) = -1;
  m(3, 3) = 1;
  return m;
}

GroupElement matrix_b() {
  GroupElement m = zero4();
  m(0, 0) = 1;
  m(1, 3) = 1;
  m(2, 2) = 1;
  m(3, 1) = -1;
  return m;
}

GroupElement matrix_c() {
  GroupElement m = zero4();
  m(0, 1) = 1;
  m(1, 0) = -1;
  m(2, 3) = 1;
  m(3, 2) = -1;
  return m;
}

GroupElement matrix_j2() {
  GroupElement m = GroupElement::Zero(2, 2);
  m(0, 1) = 1;
  m(1, 0) = -1;
  return m;
}

void require_su2(const Eigen::Matrix2cd& a, const char* who) {
  const Eigen::Matrix2cd dev = a.adjoint() * a - Eigen::Matrix2cd::Identity();
  if (dev.cwiseAbs().maxCoeff() > 1e-8 || std::abs(a.determinant() - cd(1.0)) > 1e-8) {
    throw std::invalid_argument(std::string(who) + ": input must lie in SU(2)");
  }
}

// The 24 unit quaternions of the binary tetrahedral group.
const std::vector<Eigen::Matrix2cd>& q1_quaternions() {
  static const std::vector<Eigen::Matrix2cd> q = [] {
    std::vector<Eigen::Matrix2cd> out;
    for (int axis = 0; axis < 4; ++axis) {
      for (int s : {1, -1}) {
        double v[4] = {0, 0, 0, 0};
        v[axis] = s;
        out.push_back(quaternion_matrix(v[0], v[1], v[2], v[3]));
      }
    }
    for (int s0 : {1, -1})
      for (int s1 : {1, -1})
        for (int s2 : {1, -1})
          for (int s3 : {1, -1}) {
            out.push_back(quaternion_matrix(0.5 * s0, 0.5 * s1, 0.5 * s2, 0.5 * s3));
          }
    return out;
  }();
  return q;
}

// The 24 unit quaternions (1/sqrt2)(±e1 ± e2) over the six basis pairs.
const std::vector<Eigen::Matrix2cd>& q2_quaternions() {
  static const std::vector<Eigen::Matrix2cd> q = [] {
    std::vector<Eigen::Matrix2cd> out;
    const double inv = 1.0 / std::sqrt(2.0);
    const std::pair<int, int> pairs[6] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (auto [i, j] : pairs) {
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          double v[4] = {0, 0, 0, 0};
          v[i] = si * inv;
          v[j] = sj * inv;
          out.push_back(quaternion_matrix(v[0], v[1], v[2], v[3]));
        }
    }
    return out;
  }();
  return q;
}

const std::vector<GroupInfo>& group_table() {
  static const std::vector<GroupInfo> table = {
      {STGroup::JC2, "J(C2)", 2, ComponentTag::U1},
      {STGroup::JC4, "J(C4)", 2, ComponentTag::U1},
      {STGroup::JC6, "J(C6)", 2, ComponentTag::U1},
      {STGroup::JD2, "J(D2)", 2, ComponentTag::U1},
      {STGroup::JD3, "J(D3)", 2, ComponentTag::U1},
      {STGroup::JD4, "J(D4)", 2, ComponentTag::U1},
      {STGroup::JD6, "J(D6)", 2, ComponentTag::U1},
      {STGroup::JT, "J(T)", 2, ComponentTag::U1},
      {STGroup::JO, "J(O)", 2, ComponentTag::U1},
      {STGroup::C2_1, "C2_1", 2, ComponentTag::U1},
      {STGroup::C6_1, "C6_1", 2, ComponentTag::U1},
      {STGroup::D2_1, "D2_1", 2, ComponentTag::U1},
      {STGroup::D4_1, "D4_1", 2, ComponentTag::U1},
      {STGroup::D6_1, "D6_1", 2, ComponentTag::U1},
      {STGroup::D3_2, "D3_2", 2, ComponentTag::U1},
      {STGroup::D4_2, "D4_2", 2, ComponentTag::U1},
      {STGroup::D6_2, "D6_2", 2, ComponentTag::U1},
      {STGroup::O1, "O1", 2, ComponentTag::U1},
      {STGroup::E1, "E1", 2, ComponentTag::SU2},
      {STGroup::E2, "E2", 2, ComponentTag::SU2},
      {STGroup::E3, "E3", 2, ComponentTag::SU2},
      {STGroup::E4, "E4", 2, ComponentTag::SU2},
      {STGroup::E6, "E6", 2, ComponentTag::SU2},
      {STGroup::JE1, "J(E1)", 2, ComponentTag::SU2},
      {STGroup::JE2, "J(E2)", 2, ComponentTag::SU2},
      {STGroup::JE3, "J(E3)", 2, ComponentTag::SU2},
      {STGroup::JE4, "J(E4)", 2, ComponentTag::SU2},
      {STGroup::JE6, "J(E6)", 2, ComponentTag::SU2},
      {STGroup::F_ab, "F_ab", 2, ComponentTag::U1xU1},
      {STGroup::F_ac, "F_ac", 2, ComponentTag::U1xU1},
      {STGroup::NG1_3, "N(G1_3)", 2, ComponentTag::U1xSU2},
      {STGroup::G3_3, "G3_3", 2, ComponentTag::SU2xSU2},
      {STGroup::NG3_3, "N(G3_3)", 2, ComponentTag::SU2xSU2},
      {STGroup::USp4, "USp(4)", 2, ComponentTag::USp4},
      {STGroup::SU2_g1, "SU2", 1, ComponentTag::SU2},
      {STGroup::NU1_g1, "N(U1)", 1, ComponentTag::U1},
  };
  return table;
}

}  // namespace

const std::vector<STGroup>& all_groups() {
  static const std::vector<STGroup> ids = [] {
    std::vector<STGroup> out;
    for (const auto& info : group_table()) out.push_back(info.id);
    return out;
  }();
  return ids;
}

const std::vector<STGroup>& genus2_groups() {
  static const std::vector<STGroup> ids = [] {
    std::vector<STGroup> out;
    for (const auto& info : group_table()) {
      if (info.genus == 2) out.push_back(info.id);
    }
    return out;
  }();
  return ids;
}

const GroupInfo& group_info(STGroup g) { return group_table()[static_cast<std::size_t>(g)]; }

const std::string& group_label(STGroup g) { return group_info(g).label; }

std::optional<STGroup> parse_group_label(std::string_view label) {
  static const std::map<std::string, STGroup, std::less<>> lookup = [] {
    std::map<std::string, STGroup, std::less<>> m;
    for (const auto& info : group_table()) m.emplace(info.label, info.id);
    m.emplace("SU(2)", STGroup::SU2_g1);
    m.emplace("N(U(1))", STGroup::NU1_g1);
    return m;
  }();
  const auto first = label.find_first_not_of(" \t");
  if (first == std::string_view::npos) return std::nullopt;
  const auto last = label.find_last_not_of(" \t");
  const auto it = lookup.find(label.substr(first, last - first + 1));
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

GroupElement embed_u1(double theta) {
  GroupElement m = zero4();
  const cd u = std::polar(1.0, theta);
  m(0, 0) = u;
  m(1, 1) = u;
  m(2, 2) = std::conj(u);
  m(3, 3) = std::conj(u);
  return m;
}

GroupElement embed_su2(const Eigen::Matrix2cd& a) {
  require_su2(a, "embed_su2");
  GroupElement m = zero4();
  m.block<2, 2>(0, 0) = a;
  m.block<2, 2>(2, 2) = a.conjugate();
  return m;
}

GroupElement embed_su2xsu2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  require_su2(a, "embed_su2xsu2");
  require_su2(b, "embed_su2xsu2");
  GroupElement m = zero4();
  m(0, 0) = a(0, 0);
  m(0, 2) = a(0, 1);
  m(2, 0) = a(1, 0);
  m(2, 2) = a(1, 1);
  m(1, 1) = b(0, 0);
  m(1, 3) = b(0, 1);
  m(3, 1) = b(1, 0);
  m(3, 3) = b(1, 1);
  return m;
}

Eigen::Matrix2cd quaternion_matrix(double a, double b, double c, double d) {
  Eigen::Matrix2cd m;
  m(0, 0) = cd(a, b);
  m(0, 1) = cd(c, d);
  m(1, 0) = cd(-c, d);
  m(1, 1) = cd(a, -b);
  return m;
}

GroupElement zeta_2n(int n) {
  if (n < 1) throw std::invalid_argument("zeta_2n: n must be >= 1");
  Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
  const double angle = std::numbers::pi / static_cast<double>(n);
  z(0, 0) = std::polar(1.0, angle);
  z(1, 1) = std::polar(1.0, -angle);
  return embed_su2(z);
}

std::vector<GroupElement> generators(STGroup g) {
  const GroupElement j = matrix_j();
  const GroupElement jq = embed_su2(quaternion_matrix(0, 0, 1, 0));
  auto embedded = [](const std::vector<Eigen::Matrix2cd>& quats) {
    std::vector<GroupElement> out;
    out.reserve(quats.size());
    for (const auto& q : quats) out.push_back(embed_su2(q));
    return out;
  };
  const double pi = std::numbers::pi;

  switch (g) {
    case STGroup::JC2: return {zeta_2n(2), j};
    case STGroup::JC4: return {zeta_2n(4), j};
    case STGroup::JC6: return {zeta_2n(6), j};
    case STGroup::JD2: return {zeta_2n(2), j, jq};
    case STGroup::JD3: return {zeta_2n(3), j, jq};
    case STGroup::JD4: return {zeta_2n(4), j, jq};
    case STGroup::JD6: return {zeta_2n(6), j, jq};
    case STGroup::JT: {
      auto out = embedded(q1_quaternions());
      out.push_back(j);
      return out;
    }
    case STGroup::JO: {
      auto out = embedded(q1_quaternions());
      auto q2 = embedded(q2_quaternions());
      out.insert(out.end(), q2.begin(), q2.end());
      out.push_back(j);
      return out;
    }
    case STGroup::C2_1: return {j * zeta_2n(2)};
    case STGroup::C6_1: return {j * zeta_2n(6)};
    case STGroup::D2_1: return {j * zeta_2n(2), jq};
    case STGroup::D4_1: return {j * zeta_2n(4), jq};
    case STGroup::D6_1: return {j * zeta_2n(6), jq};
    case STGroup::D3_2: return {zeta_2n(3), j * jq};
    case STGroup::D4_2: return {zeta_2n(4), j * jq};
    case STGroup::D6_2: return {zeta_2n(6), j * jq};
    case STGroup::O1: {
      // O1 = <T, J Q2> with T = <U(1), Q1>.
      auto out = embedded(q1_quaternions());
      for (const auto& q : q2_quaternions()) out.push_back(j * embed_su2(q));
      return out;
    }
    case STGroup::E1: return {};
    case STGroup::E2: return {embed_u1(pi / 2)};
    case STGroup::E3: return {embed_u1(pi / 3)};
    case STGroup::E4: return {embed_u1(pi / 4)};
    case STGroup::E6: return {embed_u1(pi / 6)};
    case STGroup::JE1: return {j};
    case STGroup::JE2: return {embed_u1(pi / 2), j};
    case STGroup::JE3: return {embed_u1(pi / 3), j};
    case STGroup::JE4: return {embed_u1(pi / 4), j};
    case STGroup::JE6: return {embed_u1(pi / 6), j};
    case STGroup::F_ab: return {matrix_a(), matrix_b()};
    case STGroup::F_ac: return {matrix_a() * matrix_c()};
    case STGroup::NG1_3: return {matrix_a()};
    case STGroup::G3_3: return {};
    case STGroup::NG3_3: return {j};
    case STGroup::USp4: return {};
    case STGroup::SU2_g1: return {};
    case STGroup::NU1_g1: return {matrix_j2()};
  }
  throw std::logic_error("generators: unknown group");
}

namespace {

double block_abs_max(const GroupElement& g, std::initializer_list<std::pair<int, int>> cells) {
  double m = 0.0;
  for (auto [r, c] : cells) m = std::max(m, std::abs(g(r, c)));
  return m;
}

bool is_diag_u1_pair(const cd& u, const cd& v, double tol) {
  // v == conj(u) and |u| == 1
  return std::abs(v - std::conj(u)) <= tol && std::abs(std::abs(u) - 1.0) <= tol;
}

}  // namespace

bool in_identity_component(const GroupElement& g, ComponentTag tag, int genus, double tol) {
  if (genus == 1) {
    if (g.rows() != 2 || g.cols() != 2) return false;
    if (tag == ComponentTag::U1) {
      return block_abs_max(g, {{0, 1}, {1, 0}}) <= tol && is_diag_u1_pair(g(0, 0), g(1, 1), tol);
    }
    if (tag == ComponentTag::SU2) {
      const Eigen::Matrix2cd m = g;
      const Eigen::Matrix2cd dev = m.adjoint() * m - Eigen::Matrix2cd::Identity();
      return dev.cwiseAbs().maxCoeff() <= tol && std::abs(m.determinant() - cd(1.0)) <= tol;
    }
    throw std::invalid_argument("in_identity_component: invalid genus-1 component");
  }
  if (g.rows() != 4 || g.cols() != 4) return false;
  switch (tag) {
    case ComponentTag::U1: {
      double off = 0.0;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          if (r != c) off = std::max(off, std::abs(g(r, c)));
      return off <= tol && std::abs(g(0, 0) - g(1, 1)) <= tol &&
             std::abs(g(2, 2) - g(3, 3)) <= tol && is_diag_u1_pair(g(0, 0), g(2, 2), tol);
    }
    case ComponentTag::SU2: {
      const double corners = block_abs_max(
          g, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 0}, {2, 1}, {3, 0}, {3, 1}});
      if (corners > tol) return false;
      Eigen::Matrix2cd upper = g.block<2, 2>(0, 0);
      Eigen::Matrix2cd lower = g.block<2, 2>(2, 2);
      if ((lower - upper.conjugate()).cwiseAbs().maxCoeff() > tol) return false;
      return std::abs(upper.determinant() - cd(1.0)) <= tol;
    }
    case ComponentTag::U1xU1: {
      double off = 0.0;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          if (r != c) off = std::max(off, std::abs(g(r, c)));
      return off <= tol && is_diag_u1_pair(g(0, 0), g(2, 2), tol) &&
             is_diag_u1_pair(g(1, 1), g(3, 3), tol);
    }
    case ComponentTag::U1xSU2: {
      const double off = block_abs_max(g, {{0, 1}, {0, 2}, {0, 3}, {1, 0}, {1, 2}, {2, 0},
                                           {2, 1}, {2, 3}, {3, 0}, {3, 2}});
      if (off > tol) return false;
      if (!is_diag_u1_pair(g(0, 0), g(2, 2), tol)) return false;
      Eigen::Matrix2cd b;
      b << g(1, 1), g(1, 3), g(3, 1), g(3, 3);
      const Eigen::Matrix2cd dev = b.adjoint() * b - Eigen::Matrix2cd::Identity();
      return dev.cwiseAbs().maxCoeff() <= tol && std::abs(b.determinant() - cd(1.0)) <= tol;
    }
    case ComponentTag::SU2xSU2: {
      const double off = block_abs_max(g, {{0, 1}, {0, 3}, {1, 0}, {1, 2}, {2, 1}, {2, 3},
                                           {3, 0}, {3, 2}});
      if (off > tol) return false;
      Eigen::Matrix2cd a, b;
      a << g(0, 0), g(0, 2), g(2, 0), g(2, 2);
      b << g(1, 1), g(1, 3), g(3, 1), g(3, 3);
      const Eigen::Matrix2cd deva = a.adjoint() * a - Eigen::Matrix2cd::Identity();
      const Eigen::Matrix2cd devb = b.adjoint() * b - Eigen::Matrix2cd::Identity();
      return deva.cwiseAbs().maxCoeff() <= tol && std::abs(a.determinant() - cd(1.0)) <= tol &&
             devb.cwiseAbs().maxCoeff() <= tol && std::abs(b.determinant() - cd(1.0)) <= tol;
    }
    case ComponentTag::USp4:
      return true;
  }
  throw std::invalid_argument("in_identity_component: invalid component");
}

namespace {

CosetTable build_coset_table(STGroup g) {
  const GroupInfo& info = group_info(g);
  const int dim = info.genus == 2 ? 4 : 2;
  const std::vector<GroupElement> gens = generators(g);

  CosetTable table;
  table.group = g;
  table.representatives.push_back(GroupElement::Identity(dim, dim));
  // Breadth-first closure under right multiplication. The component group is
  // finite, so positive powers reach inverses and the closure is the full
  // quotient.
  std::size_t next = 0;
  while (next < table.representatives.size()) {
    const GroupElement current = table.representatives[next];
    ++next;
    for (const GroupElement& gen : gens) {
      const GroupElement cand = current * gen;
      bool known = false;
      for (const GroupElement& rep : table.representatives) {
        if (in_identity_component(rep.adjoint() * cand, info.component, info.genus)) {
          known = true;
          break;
        }
      }
      if (!known) {
        table.representatives.push_back(cand);
        if (table.representatives.size() > 64) {
          throw std::runtime_error("coset_table: closure exceeded 64 cosets");
        }
      }
    }
  }
  table.size = table.representatives.size();
  return table;
}

}  // namespace

const CosetTable& coset_table(STGroup g) {
  static std::array<std::once_flag, 36> flags;
  static std::array<CosetTable, 36> tables;
  const auto idx = static_cast<std::size_t>(g);
  std::call_once(flags[idx], [&] { tables[idx] = build_coset_table(g); });
  return tables[idx];
}

namespace {

Eigen::Matrix2cd random_unit_quaternion(Rng& rng) {
  double a, b, c, d, norm;
  do {
    a = rng.gaussian();
    b = rng.gaussian();
    c = rng.gaussian();
    d = rng.gaussian();
    norm = std::sqrt(a * a + b * b + c * c + d * d);
  } while (norm < 1e-12);
  return quaternion_matrix(a / norm, b / norm, c / norm, d / norm);
}

Eigen::Matrix2cd random_u1_as_su2(Rng& rng) {
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
  z(0, 0) = std::polar(1.0, theta);
  z(1, 1) = std::polar(1.0, -theta);
  return z;
}

}  // namespace

GroupElement haar_identity_component(ComponentTag tag, int genus, Rng& rng) {
  if (genus == 1) {
    if (tag == ComponentTag::U1) return random_u1_as_su2(rng);
    if (tag == ComponentTag::SU2) return random_unit_quaternion(rng);
    throw std::invalid_argument("haar_identity_component: invalid genus-1 component");
  }
  switch (tag) {
    case ComponentTag::U1:
      return embed_u1(rng.uniform(0.0, 2.0 * std::numbers::pi));
    case ComponentTag::SU2:
      return embed_su2(random_unit_quaternion(rng));
    case ComponentTag::U1xU1:
      return embed_su2xsu2(random_u1_as_su2(rng), random_u1_as_su2(rng));
    case ComponentTag::U1xSU2:
      return embed_su2xsu2(random_u1_as_su2(rng), random_unit_quaternion(rng));
    case ComponentTag::SU2xSU2:
      return embed_su2xsu2(random_unit_quaternion(rng), random_unit_quaternion(rng));
    case ComponentTag::USp4:
      throw std::invalid_argument(
          "haar_identity_component: USp(4) is sampled via sample_usp4_charpoly");
  }
  throw std::invalid_argument("haar_identity_component: invalid component");
}

CharPolyPair charpoly_pair(const GroupElement& g) {
  const cd tr = g.trace();
  cd tr2(0.0, 0.0);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) tr2 += g(r, c) * g(c, r);
  CharPolyPair out;
  out.c1 = -tr.real();
  out.c2 = 0.5 * (tr * tr - tr2).real();
  return out;
}

double charpoly_c1_genus1(const GroupElement& g) { return -g.trace().real(); }

CharPolyPair sample_usp4_charpoly(Rng& rng) {
  // Rejection from the uniform proposal on [0, pi]^2; the density is bounded
  // by 4, giving acceptance rate 1/32.
  double t1, t2;
  while (true) {
    t1 = rng.uniform(0.0, std::numbers::pi);
    t2 = rng.uniform(0.0, std::numbers::pi);
    const double c1 = std::cos(t1), c2 = std::cos(t2);
    const double s1 = std::sin(t1), s2 = std::sin(t2);
    const double density = (c1 - c2) * (c1 - c2) * s1 * s1 * s2 * s2;
    if (rng.uniform() * 4.0 <= density) break;
  }
  const double x = std::cos(t1), y = std::cos(t2);
  CharPolyPair out;
  out.c1 = -2.0 * (x + y);
  out.c2 = 2.0 + 4.0 * x * y;
  return out;
}

CharPolyPair sample(STGroup g, Rng& rng) {
  const GroupInfo& info = group_info(g);
  if (g == STGroup::USp4) return sample_usp4_charpoly(rng);
  const CosetTable& table = coset_table(g);
  const std::size_t idx =
      table.size == 1 ? 0 : static_cast<std::size_t>(rng.below(table.size));
  const GroupElement gamma =
      table.representatives[idx] * haar_identity_component(info.component, info.genus, rng);
  if (info.genus == 1) return {charpoly_c1_genus1(gamma), 0.0};
  return charpoly_pair(gamma);
}

Dataset sample_batch(STGroup g, int pairs_per_sample, int num_samples, std::uint64_t seed,
                     int threads) {
  if (pairs_per_sample < 1 || num_samples < 1) {
    throw std::invalid_argument("sample_batch: sizes must be positive");
  }
  const GroupInfo& info = group_info(g);
  const int dim = info.genus == 2 ? 2 : 1;
  const std::uint64_t group_key = static_cast<std::uint64_t>(static_cast<int>(g));

  Dataset out;
  out.features.resize(num_samples, static_cast<Eigen::Index>(pairs_per_sample) * dim);
  out.labels.assign(static_cast<std::size_t>(num_samples), info.label);
  out.feature_names.reserve(static_cast<std::size_t>(pairs_per_sample) * dim);
  for (int k = 1; k <= pairs_per_sample; ++k) {
    out.feature_names.push_back("c1_" + std::to_string(k));
    if (dim == 2) out.feature_names.push_back("c2_" + std::to_string(k));
  }

  coset_table(g);  // build once before going parallel

  auto fill_row = [&](int row) {
    Rng rng = Rng::substream(seed, {group_key, static_cast<std::uint64_t>(row)});
    for (int k = 0; k < pairs_per_sample; ++k) {
      const CharPolyPair pair = sample(g, rng);
      out.features(row, static_cast<Eigen::Index>(k) * dim) = pair.c1;
      if (dim == 2) out.features(row, static_cast<Eigen::Index>(k) * dim + 1) = pair.c2;
    }
  };

  if (threads <= 1) {
    for (int r = 0; r < num_samples; ++r) fill_row(r);
  } else {
    std::vector<std::thread> pool;
    std::size_t used = std::min<std::size_t>(static_cast<std::size_t>(threads),
                                             static_cast<std::size_t>(num_samples));
    for (std::size_t t = 0; t < used; ++t) {
      pool.emplace_back([&, t] {
        for (int r = static_cast<int>(t); r < num_samples; r += static_cast<int>(used)) {
          fill_row(r);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace stkit
