#include "stkit/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stkit/finite_field.hpp"

namespace stkit {

int poly_degree(const IntPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    if (f[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

namespace {

// Determinant by the Bareiss fraction-free algorithm; all divisions are
// exact, so the computation stays in the integers.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return BigInt(1);
  BigInt prev(1);
  int sign = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (m[i][i] == 0) {
      std::size_t pivot = i + 1;
      while (pivot < n && m[pivot][i] == 0) ++pivot;
      if (pivot == n) return BigInt(0);
      std::swap(m[i], m[pivot]);
      sign = -sign;
    }
    for (std::size_t r = i + 1; r < n; ++r) {
      for (std::size_t c = i + 1; c < n; ++c) {
        m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev;
      }
      m[r][i] = 0;
    }
    prev = m[i][i];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

// Resultant of f (degree n) and g (degree m) as the Sylvester determinant.
BigInt resultant(const IntPoly& f, int n, const IntPoly& g, int m) {
  const std::size_t size = static_cast<std::size_t>(n + m);
  std::vector<std::vector<BigInt>> syl(size, std::vector<BigInt>(size, BigInt(0)));
  // m rows of f coefficients, leading coefficient first, then n rows of g.
  for (int row = 0; row < m; ++row) {
    for (int k = 0; k <= n; ++k) {
      syl[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + k)] =
          f[static_cast<std::size_t>(n - k)];
    }
  }
  for (int row = 0; row < n; ++row) {
    for (int k = 0; k <= m; ++k) {
      syl[static_cast<std::size_t>(m + row)][static_cast<std::size_t>(row + k)] =
          g[static_cast<std::size_t>(m - k)];
    }
  }
  return bareiss_determinant(std::move(syl));
}

IntPoly poly_derivative(const IntPoly& f) {
  IntPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(BigInt(i) * f[i]);
  if (d.empty()) d.push_back(BigInt(0));
  return d;
}

std::vector<std::int64_t> reduce_poly(const IntPoly& f, std::int64_t p) {
  std::vector<std::int64_t> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = mod_reduce(f[i], p);
  return out;
}

std::int64_t horner_mod(const std::vector<std::int64_t>& coeffs, std::int64_t x, std::int64_t p) {
  std::int64_t v = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    v = (v * x + coeffs[i]) % p;
  }
  return v;
}

void validate_prime(std::int64_t p) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw std::invalid_argument("p must be prime");
  }
}

}  // namespace

BigInt poly_discriminant(const IntPoly& f) {
  const int n = poly_degree(f);
  if (n < 1) throw std::invalid_argument("poly_discriminant: degree must be >= 1");
  if (n == 1) return BigInt(1);
  IntPoly fp = poly_derivative(f);
  const int m = poly_degree(fp);  // n - 1 in characteristic zero
  BigInt res = resultant(f, n, fp, m);
  BigInt disc = res / f[static_cast<std::size_t>(n)];
  const int exponent = (n * (n - 1)) / 2;
  return exponent % 2 == 0 ? disc : -disc;
}

EllipticCurveQ::EllipticCurveQ(std::string label_, BigInt a1_, BigInt a2_, BigInt a3_, BigInt a4_,
                               BigInt a6_)
    : label(std::move(label_)),
      a1(std::move(a1_)),
      a2(std::move(a2_)),
      a3(std::move(a3_)),
      a4(std::move(a4_)),
      a6(std::move(a6_)) {
  b2 = a1 * a1 + 4 * a2;
  b4 = 2 * a4 + a1 * a3;
  b6 = a3 * a3 + 4 * a6;
  b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  c4 = b2 * b2 - 24 * b4;
  disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  if (disc == 0) throw std::invalid_argument("EllipticCurveQ: singular model (discriminant 0)");
}

HyperellipticCurveQ::HyperellipticCurveQ(std::string label_, IntPoly f_, IntPoly h_)
    : label(std::move(label_)), f(std::move(f_)), h(std::move(h_)) {
  const int deg_f = poly_degree(f);
  if (deg_f != 5 && deg_f != 6) {
    throw std::invalid_argument("HyperellipticCurveQ: deg f must be 5 or 6");
  }
  if (poly_degree(h) > 3) {
    throw std::invalid_argument("HyperellipticCurveQ: deg h must be <= 3");
  }
  g.assign(7, BigInt(0));
  for (std::size_t i = 0; i < f.size() && i < 7; ++i) g[i] = 4 * f[i];
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) g[i + j] += h[i] * h[j];
  }
  const int deg_g = poly_degree(g);
  if (deg_g != 5 && deg_g != 6) {
    throw std::invalid_argument("HyperellipticCurveQ: 4f + h^2 must have degree 5 or 6");
  }
  g.resize(static_cast<std::size_t>(deg_g) + 1);
  disc_g = poly_discriminant(g);
  if (disc_g == 0) {
    throw std::invalid_argument("HyperellipticCurveQ: 4f + h^2 must be squarefree");
  }
}

bool is_good_genus1(const EllipticCurveQ& curve, std::int64_t p) {
  validate_prime(p);
  return curve.disc % p != 0;
}

namespace {

// a_p for odd p given a prebuilt character table for that p.
std::int64_t ap_genus1_odd(const EllipticCurveQ& curve, const QuadraticCharacter& chi) {
  const std::int64_t p = chi.p();
  // Complete the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
  const std::vector<std::int64_t> g = {mod_reduce(curve.b6, p), mod_reduce(2 * curve.b4, p),
                                       mod_reduce(curve.b2, p), 4 % p};
  if (curve.disc % p != 0) {
    std::int64_t sum = 0;
    for (std::int64_t x = 0; x < p; ++x) sum += chi(horner_mod(g, x, p));
    return -sum;
  }
  // Bad reduction: a_p = p - #E_ns(F_p). The affine solution count of the
  // original model equals that of z^2 = g(x); singular points are the x with
  // g(x) = g'(x) = 0 (each carries one rational point).
  const std::vector<std::int64_t> gp = {mod_reduce(2 * curve.b4, p), mod_reduce(2 * curve.b2, p),
                                        12 % p};
  std::int64_t affine = 0;
  std::int64_t singular = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t v = horner_mod(g, x, p);
    affine += 1 + chi(v);
    if (v == 0 && horner_mod(gp, x, p) == 0) ++singular;
  }
  return p - 1 - (affine - singular);
}

std::int64_t ap_genus1_two(const EllipticCurveQ& curve) {
  const std::int64_t a1 = mod_reduce(curve.a1, 2), a2 = mod_reduce(curve.a2, 2),
                     a3 = mod_reduce(curve.a3, 2), a4 = mod_reduce(curve.a4, 2),
                     a6 = mod_reduce(curve.a6, 2);
  const bool good = curve.disc % 2 != 0;
  std::int64_t nonsingular_affine = 0;
  std::int64_t affine = 0;
  for (std::int64_t x = 0; x <= 1; ++x) {
    for (std::int64_t y = 0; y <= 1; ++y) {
      const std::int64_t lhs = (y * y + a1 * x * y + a3 * y) % 2;
      const std::int64_t rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
      if (lhs != rhs) continue;
      ++affine;
      // Partial derivatives mod 2: F_y = a1 x + a3, F_x = a1 y + x^2 + a4.
      const std::int64_t fy = (a1 * x + a3) % 2;
      const std::int64_t fx = (a1 * y + x * x + a4) % 2;
      if (fx != 0 || fy != 0) ++nonsingular_affine;
    }
  }
  if (good) return 2 + 1 - (affine + 1);
  return 2 - 1 - nonsingular_affine;
}

}  // namespace

std::int64_t ap_genus1(const EllipticCurveQ& curve, std::int64_t p) {
  validate_prime(p);
  if (p == 2) return ap_genus1_two(curve);
  QuadraticCharacter chi(p);
  return ap_genus1_odd(curve, chi);
}

EulerCoefficientVector euler_vector_genus1(const EllipticCurveQ& curve, std::int64_t prime_bound) {
  if (prime_bound < 2) throw std::invalid_argument("euler_vector_genus1: prime_bound must be >= 2");
  EulerCoefficientVector out;
  out.label = curve.label;
  out.genus = 1;
  out.primes = primes_below(prime_bound);
  out.a1.resize(out.primes.size());
  for (std::size_t i = 0; i < out.primes.size(); ++i) {
    const std::int64_t p = out.primes[i];
    const std::int64_t ap = ap_genus1(curve, p);
    out.a1[i] = static_cast<double>(ap) / std::sqrt(static_cast<double>(p));
  }
  return out;
}

BigRat j_invariant(const EllipticCurveQ& curve) {
  // Divide rather than construct from a (num, den) pair: the pair
  // constructor rejects negative denominators, and disc is often negative.
  BigRat j(curve.c4 * curve.c4 * curve.c4);
  j /= BigRat(curve.disc);
  return j;
}

const std::vector<BigInt>& cm_j_invariants() {
  static const std::vector<BigInt> values = {
      BigInt(0),
      BigInt(54000),               //  2^4 3^3 5^3
      BigInt(-12288000),           // -2^15 3 5^3
      BigInt(1728),                //  2^6 3^3
      BigInt(287496),              //  2^3 3^3 11^3
      BigInt(-3375),               // -3^3 5^3
      BigInt(16581375),            //  3^3 5^3 17^3
      BigInt(8000),                //  2^6 5^3
      BigInt(-32768),              // -2^15
      BigInt(-884736),             // -2^15 3^3
      BigInt(-884736000),          // -2^18 3^3 5^3
      BigInt(-147197952000),       // -2^15 3^3 5^3 11^3
      BigInt("-262537412640768000")  // -2^18 3^3 5^3 23^3 29^3
  };
  return values;
}

bool is_cm(const EllipticCurveQ& curve) {
  const BigRat j = j_invariant(curve);
  if (boost::multiprecision::denominator(j) != 1) return false;
  const BigInt jn = boost::multiprecision::numerator(j);
  const auto& cm = cm_j_invariants();
  return std::find(cm.begin(), cm.end(), jn) != cm.end();
}

bool is_good_genus2(const HyperellipticCurveQ& curve, std::int64_t p) {
  validate_prime(p);
  if (p == 2) return false;
  const BigInt& lc = curve.g[curve.g.size() - 1];
  return lc % p != 0 && curve.disc_g % p != 0;
}

std::pair<std::int64_t, std::int64_t> point_counts_genus2(const HyperellipticCurveQ& curve,
                                                          std::int64_t p) {
  if (!is_good_genus2(curve, p)) {
    throw std::invalid_argument("point_counts_genus2: p must be an odd prime of good reduction");
  }
  const std::vector<std::int64_t> g = reduce_poly(curve.g, p);
  const int deg_g = poly_degree(curve.g);
  const std::int64_t lc = g[static_cast<std::size_t>(deg_g)];

  QuadraticCharacter chi(p);
  std::int64_t n1 = 0;
  for (std::int64_t x = 0; x < p; ++x) n1 += 1 + chi(horner_mod(g, x, p));
  n1 += deg_g == 5 ? 1 : 1 + chi(lc);

  QuadExtField ext(p);
  std::int64_t n2 = 0;
  for (std::int64_t a = 0; a < p; ++a) {
    for (std::int64_t b = 0; b < p; ++b) {
      QuadExtField::Elem x{a, b};
      QuadExtField::Elem v = ext.embed(g[g.size() - 1]);
      for (std::size_t i = g.size() - 1; i-- > 0;) {
        v = ext.add(ext.mul(v, x), ext.embed(g[i]));
      }
      n2 += 1 + ext.chi2(v);
    }
  }
  // Every element of F_p^* is a square in F_{p^2}, so a degree-6 model always
  // has two points at infinity over F_{p^2}.
  n2 += deg_g == 5 ? 1 : 1 + ext.chi2(ext.embed(lc));
  return {n1, n2};
}

LocalLPolynomial l_polynomial_genus2(std::int64_t n1, std::int64_t n2, std::int64_t p) {
  const std::int64_t s1 = p + 1 - n1;
  const std::int64_t s2 = p * p + 1 - n2;
  const std::int64_t numerator = s1 * s1 - s2;
  if (numerator % 2 != 0) {
    throw std::logic_error("l_polynomial_genus2: non-integral middle coefficient");
  }
  LocalLPolynomial lp;
  lp.p = p;
  lp.degree = 4;
  lp.good = true;
  lp.coefficients = {BigInt(1), BigInt(-s1), BigInt(numerator / 2), BigInt(-p * s1),
                     BigInt(p) * p};
  return lp;
}

std::pair<double, double> normalized_pair(const LocalLPolynomial& lp) {
  const double p = static_cast<double>(lp.p);
  const double b1 = lp.coefficients[1].convert_to<double>();
  const double b2 = lp.coefficients[2].convert_to<double>();
  return {b1 / std::sqrt(p), b2 / p};
}

EulerCoefficientVector euler_vector_genus2(const HyperellipticCurveQ& curve,
                                           std::size_t num_primes) {
  if (num_primes < 1) throw std::invalid_argument("euler_vector_genus2: num_primes must be >= 1");
  constexpr std::int64_t kSearchBound = 1000000;
  std::vector<std::int64_t> good;
  std::int64_t bound = 8192;
  while (true) {
    good.clear();
    for (std::int64_t p : primes_below(bound)) {
      if (p == 2) continue;
      if (is_good_genus2(curve, p)) good.push_back(p);
      if (good.size() == num_primes) break;
    }
    if (good.size() == num_primes) break;
    if (bound >= kSearchBound) {
      throw std::runtime_error("euler_vector_genus2: not enough good primes below search bound");
    }
    bound *= 2;
  }

  EulerCoefficientVector out;
  out.label = curve.label;
  out.genus = 2;
  out.primes = good;
  out.a1.resize(good.size());
  out.a2.resize(good.size());
  for (std::size_t i = 0; i < good.size(); ++i) {
    auto [n1, n2] = point_counts_genus2(curve, good[i]);
    auto [a1, a2] = normalized_pair(l_polynomial_genus2(n1, n2, good[i]));
    out.a1[i] = a1;
    out.a2[i] = a2;
  }
  return out;
}

}  // namespace stkit
