#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stkit/numbers.hpp"

namespace stkit {

// Polynomials over Z are coefficient lists, constant term first.
using IntPoly = std::vector<BigInt>;

int poly_degree(const IntPoly& f);  // -1 for the zero polynomial

// Discriminant of f via the resultant Res(f, f'), computed exactly with
// fraction-free Gaussian elimination on the Sylvester matrix.
BigInt poly_discriminant(const IntPoly& f);

// Elliptic curve over Q in long Weierstrass form
//   y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6.
// The standard b-invariants and the discriminant are cached on construction.
struct EllipticCurveQ {
  EllipticCurveQ(std::string label, BigInt a1, BigInt a2, BigInt a3, BigInt a4, BigInt a6);

  std::string label;
  BigInt a1, a2, a3, a4, a6;
  BigInt b2, b4, b6, b8;
  BigInt c4;
  BigInt disc;  // nonzero by construction
};

// Genus-2 curve over Q with model y^2 + h(x) y = f(x), deg f in {5,6},
// deg h <= 3. g = 4f + h^2 must be squarefree of degree 5 or 6.
struct HyperellipticCurveQ {
  HyperellipticCurveQ(std::string label, IntPoly f, IntPoly h);

  std::string label;
  IntPoly f, h;
  IntPoly g;      // 4f + h^2
  BigInt disc_g;  // disc(g), nonzero by construction
};

// Unnormalized local Euler factor L_p(T), constant term 1, degree 2*genus.
struct LocalLPolynomial {
  std::int64_t p = 0;
  int degree = 0;                  // 2 or 4
  std::vector<BigInt> coefficients;  // [1, b1, ..., b_degree]
  bool good = true;
};

// Normalized coefficient vector for one curve: for genus 1 the values
// a_tilde_p = a_p / sqrt(p); for genus 2 the pairs (a1_p, a2_p) from
// L_p(p^{-1/2} T).
struct EulerCoefficientVector {
  std::string label;
  int genus = 1;
  std::vector<std::int64_t> primes;
  std::vector<double> a1;
  std::vector<double> a2;  // empty for genus 1
};

// --- genus 1 ---

bool is_good_genus1(const EllipticCurveQ& curve, std::int64_t p);

// Trace of Frobenius, a_p = p + 1 - #E(F_p) at good p. At bad p the count of
// nonsingular points of the reduced curve (smooth point at infinity included)
// is used, giving a_p = p - #E_ns(F_p) in {-1, 0, 1}: +1 split
// multiplicative, -1 nonsplit multiplicative, 0 additive. Assumes a minimal
// model at bad primes.
std::int64_t ap_genus1(const EllipticCurveQ& curve, std::int64_t p);

// Normalized a_p / sqrt(p) for all primes p < prime_bound, ascending, bad
// primes included.
EulerCoefficientVector euler_vector_genus1(const EllipticCurveQ& curve, std::int64_t prime_bound);

BigRat j_invariant(const EllipticCurveQ& curve);

// The 13 rational j-invariants of elliptic curves over Q with complex
// multiplication.
const std::vector<BigInt>& cm_j_invariants();

bool is_cm(const EllipticCurveQ& curve);

// --- genus 2 ---

bool is_good_genus2(const HyperellipticCurveQ& curve, std::int64_t p);

// (N1, N2) = (#C(F_p), #C(F_{p^2})) for the smooth projective model.
// Requires p odd with good reduction; throws std::invalid_argument otherwise.
std::pair<std::int64_t, std::int64_t> point_counts_genus2(const HyperellipticCurveQ& curve,
                                                          std::int64_t p);

// Degree-4 Euler factor from the two point counts via Newton's identities:
// with s1 = p + 1 - N1 and s2 = p^2 + 1 - N2,
//   L_p(T) = 1 - s1 T + ((s1^2 - s2)/2) T^2 - p s1 T^3 + p^2 T^4.
// Throws std::logic_error if (s1^2 - s2) is odd (impossible for a correct
// count).
LocalLPolynomial l_polynomial_genus2(std::int64_t n1, std::int64_t n2, std::int64_t p);

// Normalized (a1_p, a2_p) for the first num_primes odd good primes,
// ascending; bad primes are skipped and the window extends so exactly
// num_primes primes are produced. Throws std::runtime_error if the internal
// search bound is exhausted first.
EulerCoefficientVector euler_vector_genus2(const HyperellipticCurveQ& curve, std::size_t num_primes);

// Normalized pair from an unnormalized good genus-2 Euler factor.
std::pair<double, double> normalized_pair(const LocalLPolynomial& lp);

}  // namespace stkit
