#include <doctest.h>

#include <cstdint>
#include <vector>

#include "stkit/curves.hpp"
#include "stkit/numbers.hpp"
#include "stkit/rng.hpp"

using namespace stkit;

namespace {

std::int64_t residue(const BigInt& a, std::int64_t p) { return mod_reduce(a, p); }

// Full-plane enumeration oracle for genus 1: counts projective points of the
// long Weierstrass model over F_p, no characters involved.
std::int64_t naive_count_genus1(const EllipticCurveQ& e, std::int64_t p) {
  const std::int64_t a1 = residue(e.a1, p), a2 = residue(e.a2, p), a3 = residue(e.a3, p),
                     a4 = residue(e.a4, p), a6 = residue(e.a6, p);
  std::int64_t count = 1;  // the point at infinity
  for (std::int64_t x = 0; x < p; ++x) {
    for (std::int64_t y = 0; y < p; ++y) {
      const std::int64_t lhs = (y * y + a1 * x * y + a3 * y) % p;
      const std::int64_t rhs = (((x + a2) * x + a4) % p * x + a6) % p;
      if (lhs == rhs) ++count;
    }
  }
  return count;
}

// Nonsingular-point count of the reduced curve (smooth infinity included),
// the quantity behind the bad-prime convention a_p = p - #E_ns(F_p).
std::int64_t naive_ns_count_genus1(const EllipticCurveQ& e, std::int64_t p) {
  const std::int64_t a1 = residue(e.a1, p), a2 = residue(e.a2, p), a3 = residue(e.a3, p),
                     a4 = residue(e.a4, p), a6 = residue(e.a6, p);
  std::int64_t count = 1;
  for (std::int64_t x = 0; x < p; ++x) {
    for (std::int64_t y = 0; y < p; ++y) {
      const std::int64_t f = ((y * y + a1 * x * y + a3 * y) % p + p -
                              ((((x + a2) * x + a4) % p * x + a6) % p)) %
                             p;
      if (f != 0) continue;
      const std::int64_t fy = (2 * y + a1 * x + a3) % p;
      const std::int64_t fx =
          ((a1 * y) % p + p - (3 * x * x + 2 * a2 * x + a4) % p + 3 * p) % p;
      if (fy != 0 || fx != 0) ++count;
    }
  }
  return count;
}

std::int64_t eval_poly_mod(const IntPoly& f, std::int64_t x, std::int64_t p) {
  std::int64_t acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + residue(f[i], p)) % p;
  return acc;
}

// Genus-2 point count over F_p by direct enumeration of y^2 + h(x) y = f(x),
// with the two standard points at infinity counted from v^2 + h3 v = f6.
std::int64_t naive_count_genus2_fp(const HyperellipticCurveQ& c, std::int64_t p) {
  std::int64_t count = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t fx = eval_poly_mod(c.f, x, p);
    const std::int64_t hx = eval_poly_mod(c.h, x, p);
    for (std::int64_t y = 0; y < p; ++y) {
      if ((y * y + hx * y) % p == fx) ++count;
    }
  }
  const std::int64_t h3 = c.h.size() > 3 ? residue(c.h[3], p) : 0;
  const std::int64_t f6 = c.f.size() > 6 ? residue(c.f[6], p) : 0;
  if (poly_degree(c.g) == 5) {
    count += 1;
  } else {
    for (std::int64_t v = 0; v < p; ++v) {
      if ((v * v + h3 * v) % p == f6) ++count;
    }
  }
  return count;
}

// Minimal independent model of F_{p^2}: a + b sqrt(s) with s the LARGEST
// nonresidue, a deliberately different representation from the library's.
struct TestExt {
  std::int64_t p, s;
  explicit TestExt(std::int64_t prime) : p(prime), s(0) {
    for (std::int64_t c = p - 1; c > 1; --c) {
      bool square = false;
      for (std::int64_t x = 1; x < p && !square; ++x) square = x * x % p == c;
      if (!square) {
        s = c;
        break;
      }
    }
  }
  using E = std::pair<std::int64_t, std::int64_t>;
  E add(E x, E y) const { return {(x.first + y.first) % p, (x.second + y.second) % p}; }
  E mul(E x, E y) const {
    return {(x.first * y.first % p + s * (x.second * y.second % p)) % p,
            (x.first * y.second % p + x.second * y.first % p) % p};
  }
};

std::int64_t naive_count_genus2_fp2(const HyperellipticCurveQ& c, std::int64_t p) {
  TestExt ext(p);
  using E = TestExt::E;
  std::vector<E> elements;
  for (std::int64_t a = 0; a < p; ++a) {
    for (std::int64_t b = 0; b < p; ++b) elements.push_back({a, b});
  }
  auto eval = [&](const IntPoly& poly, E x) {
    E acc{0, 0};
    for (std::size_t i = poly.size(); i-- > 0;) {
      acc = ext.add(ext.mul(acc, x), {residue(poly[i], p), 0});
    }
    return acc;
  };
  std::int64_t count = 0;
  for (const E& x : elements) {
    const E fx = eval(c.f, x);
    const E hx = eval(c.h, x);
    for (const E& y : elements) {
      E lhs = ext.add(ext.mul(y, y), ext.mul(hx, y));
      if (lhs == fx) ++count;
    }
  }
  const std::int64_t h3 = c.h.size() > 3 ? residue(c.h[3], p) : 0;
  const std::int64_t f6 = c.f.size() > 6 ? residue(c.f[6], p) : 0;
  if (poly_degree(c.g) == 5) {
    count += 1;
  } else {
    for (const E& v : elements) {
      E lhs = ext.add(ext.mul(v, v), ext.mul({h3, 0}, v));
      if (lhs == E{f6, 0}) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("polynomial discriminants match closed forms") {
  // Quadratic: disc(a x^2 + b x + c) = b^2 - 4 a c.
  CHECK(poly_discriminant({BigInt(3), BigInt(5), BigInt(2)}) == BigInt(1));
  CHECK(poly_discriminant({BigInt(1), BigInt(0), BigInt(1)}) == BigInt(-4));
  // Trinomial: disc(x^5 + a x + b) = 4^4 a^5 + 5^5 b^4.
  CHECK(poly_discriminant({BigInt(0), BigInt(-1), BigInt(0), BigInt(0), BigInt(0), BigInt(1)}) ==
        BigInt(-256));
  CHECK(poly_discriminant({BigInt(1), BigInt(1), BigInt(0), BigInt(0), BigInt(0), BigInt(1)}) ==
        BigInt(256 + 3125));
  // Cubic x^3 + ax + b: disc = -4a^3 - 27b^2.
  for (std::int64_t a = -3; a <= 3; ++a) {
    for (std::int64_t b = -3; b <= 3; ++b) {
      if (4 * a * a * a + 27 * b * b == 0) continue;
      CHECK(poly_discriminant({BigInt(b), BigInt(a), BigInt(0), BigInt(1)}) ==
            BigInt(-4 * a * a * a - 27 * b * b));
    }
  }
  // Repeated root: disc = 0.
  CHECK(poly_discriminant({BigInt(0), BigInt(0), BigInt(1)}) == BigInt(0));
}

TEST_CASE("elliptic invariants satisfy the standard identities") {
  Rng rng(99);
  int built = 0;
  while (built < 20) {
    const auto r = [&] { return BigInt(static_cast<std::int64_t>(rng.below(7)) - 3); };
    try {
      EllipticCurveQ e("t", r(), r(), r(), r(), r());
      CHECK(e.b2 * e.b6 - e.b4 * e.b4 == 4 * e.b8);
      CHECK(e.c4 == e.b2 * e.b2 - 24 * e.b4);
      // For y^2 = cubic, the curve discriminant is 16 disc(cubic).
      ++built;
    } catch (const std::invalid_argument&) {
      continue;  // singular draw
    }
  }
  for (std::int64_t a = -2; a <= 2; ++a) {
    for (std::int64_t b = -2; b <= 2; ++b) {
      if (4 * a * a * a + 27 * b * b == 0) continue;
      EllipticCurveQ e("t", 0, 0, 0, a, b);
      CHECK(e.disc ==
            16 * poly_discriminant({BigInt(b), BigInt(a), BigInt(0), BigInt(1)}));
    }
  }
  CHECK_THROWS_AS(EllipticCurveQ("sing", 0, 0, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("genus-1 good-prime traces match naive projective counting") {
  const std::vector<EllipticCurveQ> curves = {
      EllipticCurveQ("11a1", 0, -1, 1, -10, -20), EllipticCurveQ("37a1", 0, 0, 1, -1, 0),
      EllipticCurveQ("27a1", 0, 0, 1, 0, 0),      EllipticCurveQ("j1728", 0, 0, 0, 1, 0),
      EllipticCurveQ("j0", 0, 0, 0, 0, 1),        EllipticCurveQ("mixed", 1, -1, 1, -3, 3)};
  for (const auto& e : curves) {
    for (std::int64_t p : primes_below(50)) {
      if (!is_good_genus1(e, p)) continue;
      CHECK(ap_genus1(e, p) == p + 1 - naive_count_genus1(e, p));
    }
  }
}

TEST_CASE("genus-1 bad-prime traces match the nonsingular-count convention") {
  const std::vector<EllipticCurveQ> curves = {
      EllipticCurveQ("11a1", 0, -1, 1, -10, -20),  // split multiplicative at 11
      EllipticCurveQ("37a1", 0, 0, 1, -1, 0),      // nonsplit multiplicative at 37
      EllipticCurveQ("27a1", 0, 0, 1, 0, 0),       // additive at 3
      EllipticCurveQ("ns3", 0, -1, 0, 0, 3),       // nonsplit multiplicative at 3
  };
  for (const auto& e : curves) {
    for (std::int64_t p : primes_below(50)) {
      if (is_good_genus1(e, p)) continue;
      const std::int64_t a = ap_genus1(e, p);
      CHECK(a == p - naive_ns_count_genus1(e, p));
      CHECK(a >= -1);
      CHECK(a <= 1);
    }
  }
  CHECK(ap_genus1(curves[0], 11) == 1);
  CHECK(ap_genus1(curves[1], 37) == -1);
  CHECK(ap_genus1(curves[2], 3) == 0);
  CHECK(ap_genus1(curves[3], 3) == -1);
}

TEST_CASE("known 11a1 traces") {
  EllipticCurveQ e("11a1", 0, -1, 1, -10, -20);
  CHECK(ap_genus1(e, 2) == -2);
  CHECK(ap_genus1(e, 3) == -1);
  CHECK(ap_genus1(e, 5) == 1);
  CHECK(ap_genus1(e, 7) == -2);
  CHECK(ap_genus1(e, 13) == 4);
}

TEST_CASE("genus-1 euler vector covers every prime below the bound") {
  EllipticCurveQ e("37a1", 0, 0, 1, -1, 0);
  auto v = euler_vector_genus1(e, 100);
  CHECK(v.genus == 1);
  CHECK(v.primes == primes_below(100));
  CHECK(v.a2.empty());
  for (std::size_t i = 0; i < v.primes.size(); ++i) {
    const double p = static_cast<double>(v.primes[i]);
    const double expected =
        static_cast<double>(ap_genus1(e, v.primes[i])) / std::sqrt(p);
    CHECK(v.a1[i] == doctest::Approx(expected).epsilon(1e-15));
    CHECK(std::abs(v.a1[i]) <= 2.0 + 1e-12);  // Weil bound
  }
}

TEST_CASE("j-invariants and the CM predicate") {
  CHECK(j_invariant(EllipticCurveQ("j1728", 0, 0, 0, 1, 0)) == BigRat(1728));
  CHECK(j_invariant(EllipticCurveQ("j0", 0, 0, 0, 0, 1)) == BigRat(0));
  CHECK(is_cm(EllipticCurveQ("j1728", 0, 0, 0, 1, 0)));
  CHECK(is_cm(EllipticCurveQ("j0", 0, 0, 0, 0, 1)));
  CHECK_FALSE(is_cm(EllipticCurveQ("11a1", 0, -1, 1, -10, -20)));
  CHECK_FALSE(is_cm(EllipticCurveQ("37a1", 0, 0, 1, -1, 0)));
  CHECK(cm_j_invariants().size() == 13);

  // The curve y^2 = x^3 - 3j(j-1728) x - 2j(j-1728)^2 has j-invariant j;
  // running it across the 13 CM values exercises every branch of is_cm.
  for (const BigInt& j : cm_j_invariants()) {
    if (j == 0 || j == 1728) continue;
    const BigInt a = -3 * j * (j - 1728);
    const BigInt b = -2 * j * (j - 1728) * (j - 1728);
    EllipticCurveQ e("cm", 0, 0, 0, a, b);
    CHECK(j_invariant(e) == BigRat(j));
    CHECK(is_cm(e));
  }
  // Quadratic twist by d = 5 preserves j.
  const BigInt j = cm_j_invariants()[7];
  const BigInt a = -3 * j * (j - 1728) * 25;
  const BigInt b = -2 * j * (j - 1728) * (j - 1728) * 125;
  EllipticCurveQ tw("tw", 0, 0, 0, a, b);
  CHECK(j_invariant(tw) == BigRat(j));
  CHECK(is_cm(tw));
}

TEST_CASE("genus-2 point counts match naive enumeration over F_p and F_p2") {
  const std::vector<HyperellipticCurveQ> curves = {
      HyperellipticCurveQ("deg5", {BigInt(0), BigInt(-1), BigInt(0), BigInt(0), BigInt(0),
                                   BigInt(1)},
                          {BigInt(0)}),  // y^2 = x^5 - x
      HyperellipticCurveQ("deg6", {BigInt(1), BigInt(0), BigInt(0), BigInt(0), BigInt(0),
                                   BigInt(0), BigInt(1)},
                          {BigInt(0)}),  // y^2 = x^6 + 1
      HyperellipticCurveQ("lc3", {BigInt(1), BigInt(2), BigInt(0), BigInt(0), BigInt(0),
                                  BigInt(0), BigInt(3)},
                          {BigInt(0)}),  // y^2 = 3x^6 + 2x + 1
      HyperellipticCurveQ("withh", {BigInt(1), BigInt(0), BigInt(0), BigInt(1), BigInt(0),
                                    BigInt(1)},
                          {BigInt(1), BigInt(1)}),  // y^2 + (x+1) y = x^5 + x^3 + 1
      HyperellipticCurveQ("h3", {BigInt(0), BigInt(1), BigInt(0), BigInt(0), BigInt(0),
                                 BigInt(0), BigInt(1)},
                          {BigInt(1), BigInt(0), BigInt(0), BigInt(1)}),
      // y^2 + (x^3+1) y = x^6 + x
  };
  for (const auto& c : curves) {
    for (std::int64_t p : {3, 5, 7, 11, 13}) {
      if (!is_good_genus2(c, p)) continue;
      auto [n1, n2] = point_counts_genus2(c, p);
      CHECK(n1 == naive_count_genus2_fp(c, p));
      CHECK(n2 == naive_count_genus2_fp2(c, p));
    }
  }
}

TEST_CASE("genus-2 L-polynomials are palindromic and Weil-bounded") {
  HyperellipticCurveQ c("wh", {BigInt(1), BigInt(0), BigInt(0), BigInt(1), BigInt(0), BigInt(1)},
                        {BigInt(1), BigInt(1)});
  for (std::int64_t p : primes_below(60)) {
    if (!is_good_genus2(c, p)) continue;
    auto [n1, n2] = point_counts_genus2(c, p);
    auto lp = l_polynomial_genus2(n1, n2, p);
    REQUIRE(lp.coefficients.size() == 5);
    CHECK(lp.coefficients[0] == 1);
    CHECK(lp.coefficients[3] == p * lp.coefficients[1]);  // functional equation
    CHECK(lp.coefficients[4] == BigInt(p) * p);
    auto [a1, a2] = normalized_pair(lp);
    CHECK(std::abs(a1) <= 4.0 + 1e-9);
    CHECK(std::abs(a2) <= 6.0 + 1e-9);
    // Inverting Newton's identities recovers the point counts.
    const std::int64_t s1 = -static_cast<std::int64_t>(lp.coefficients[1]);
    const std::int64_t b2 = static_cast<std::int64_t>(lp.coefficients[2]);
    CHECK(n1 == p + 1 - s1);
    CHECK(n2 == p * p + 1 - (s1 * s1 - 2 * b2));
  }
}

TEST_CASE("jacobian of y^2 = x^6 + 1 splits as the square of y^2 = x^3 + 1") {
  // The quotient maps (x,y) -> (x^2, y) and (x,y) -> (x^{-2}, y x^{-3}) both
  // land on y^2 = x^3 + 1, so L_p of the genus-2 curve is the square of the
  // elliptic L_p at every common good prime. This ties the genus-2 counting
  // pipeline to the independent genus-1 one.
  HyperellipticCurveQ c("x6+1", {BigInt(1), BigInt(0), BigInt(0), BigInt(0), BigInt(0), BigInt(0),
                                 BigInt(1)},
                        {BigInt(0)});
  EllipticCurveQ e("x3+1", 0, 0, 0, 0, 1);
  for (std::int64_t p : primes_below(60)) {
    if (!is_good_genus2(c, p) || !is_good_genus1(e, p)) continue;
    auto [n1, n2] = point_counts_genus2(c, p);
    auto lp = l_polynomial_genus2(n1, n2, p);
    const BigInt a = ap_genus1(e, p);
    // (1 - aT + pT^2)^2 = 1 - 2aT + (a^2 + 2p) T^2 - 2ap T^3 + p^2 T^4
    CHECK(lp.coefficients[1] == -2 * a);
    CHECK(lp.coefficients[2] == a * a + 2 * p);
    CHECK(lp.coefficients[3] == -2 * a * p);
  }
}

TEST_CASE("genus-2 euler vector skips bad primes and keeps the requested length") {
  // disc(x^5 + 3) = 5^5 3^4, so 3 and 5 are bad on top of 2.
  HyperellipticCurveQ c("x5+3", {BigInt(3), BigInt(0), BigInt(0), BigInt(0), BigInt(0), BigInt(1)},
                        {BigInt(0)});
  auto v = euler_vector_genus2(c, 5);
  CHECK(v.genus == 2);
  CHECK(v.primes == std::vector<std::int64_t>{7, 11, 13, 17, 19});
  CHECK(v.a1.size() == 5);
  CHECK(v.a2.size() == 5);
}

TEST_CASE("hyperelliptic constructor rejects bad models") {
  // deg f = 4
  CHECK_THROWS_AS(
      HyperellipticCurveQ("f4", {BigInt(1), BigInt(0), BigInt(0), BigInt(0), BigInt(1)},
                          {BigInt(0)}),
      std::invalid_argument);
  // 4f + h^2 not squarefree: f = x^5, h = 0
  CHECK_THROWS_AS(HyperellipticCurveQ(
                      "nsq", {BigInt(0), BigInt(0), BigInt(0), BigInt(0), BigInt(0), BigInt(1)},
                      {BigInt(0)}),
                  std::invalid_argument);
  // deg h = 4
  CHECK_THROWS_AS(
      HyperellipticCurveQ("h4",
                          {BigInt(1), BigInt(0), BigInt(0), BigInt(0), BigInt(0), BigInt(1)},
                          {BigInt(0), BigInt(0), BigInt(0), BigInt(0), BigInt(1)}),
      std::invalid_argument);
}

TEST_CASE("point_counts_genus2 rejects bad or even primes") {
  HyperellipticCurveQ c("x5-x", {BigInt(0), BigInt(-1), BigInt(0), BigInt(0), BigInt(0), BigInt(1)},
                        {BigInt(0)});
  CHECK_THROWS_AS(point_counts_genus2(c, 2), std::invalid_argument);
  HyperellipticCurveQ d("x5+3", {BigInt(3), BigInt(0), BigInt(0), BigInt(0), BigInt(0), BigInt(1)},
                        {BigInt(0)});
  CHECK_THROWS_AS(point_counts_genus2(d, 5), std::invalid_argument);
}
