#pragma once

#include <cstdint>
#include <vector>

namespace stkit {

// Quadratic character of F_p for an odd prime p, tabulated once:
// chi(a) = 1 if a is a nonzero square mod p, -1 if a nonsquare, 0 if a = 0.
class QuadraticCharacter {
 public:
  explicit QuadraticCharacter(std::int64_t p);

  std::int64_t p() const { return p_; }

  // a must already be reduced to [0, p).
  int operator()(std::int64_t a) const { return table_[static_cast<std::size_t>(a)]; }

  // Smallest positive quadratic non-residue mod p.
  std::int64_t least_nonresidue() const { return least_nonresidue_; }

 private:
  std::int64_t p_;
  std::int64_t least_nonresidue_;
  std::vector<signed char> table_;
};

// Arithmetic in F_{p^2} = F_p[t] / (t^2 - r) with r the least non-residue.
// Elements are pairs (a, b) representing a + b t with 0 <= a, b < p.
//
// Square detection: for p below a memory cap, a full table over all p^2
// elements is built by marking the image of the squaring map. Above the cap
// the identity chi_{p^2}(z) = chi_p(Norm(z)) with Norm(a + bt) = a^2 - r b^2
// is used instead; the two predicates agree everywhere.
class QuadExtField {
 public:
  explicit QuadExtField(std::int64_t p);

  struct Elem {
    std::int64_t a;
    std::int64_t b;
  };

  std::int64_t p() const { return chi_.p(); }
  std::int64_t r() const { return r_; }

  Elem add(Elem x, Elem y) const {
    std::int64_t a = x.a + y.a;
    if (a >= p()) a -= p();
    std::int64_t b = x.b + y.b;
    if (b >= p()) b -= p();
    return {a, b};
  }

  Elem mul(Elem x, Elem y) const {
    const std::int64_t q = p();
    // (a1 + b1 t)(a2 + b2 t) = (a1 a2 + r b1 b2) + (a1 b2 + b1 a2) t
    std::int64_t a = (x.a * y.a % q + r_ * (x.b * y.b % q)) % q;
    std::int64_t b = (x.a * y.b % q + x.b * y.a % q) % q;
    return {a, b};
  }

  Elem embed(std::int64_t a) const { return {a, 0}; }

  bool is_zero(Elem x) const { return x.a == 0 && x.b == 0; }

  // 1 if x is a nonzero square in F_{p^2}, -1 if a nonsquare, 0 if x = 0.
  int chi2(Elem x) const;

 private:
  QuadraticCharacter chi_;
  std::int64_t r_;
  std::vector<signed char> square_table_;  // empty when the norm path is used
};

}  // namespace stkit
