#include "stkit/finite_field.hpp"

#include <stdexcept>

#include "stkit/numbers.hpp"

namespace stkit {

QuadraticCharacter::QuadraticCharacter(std::int64_t p) : p_(p) {
  if (p < 3 || p % 2 == 0 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw std::invalid_argument("QuadraticCharacter: p must be an odd prime");
  }
  table_.assign(static_cast<std::size_t>(p), -1);
  table_[0] = 0;
  for (std::int64_t i = 1; i <= (p - 1) / 2; ++i) {
    table_[static_cast<std::size_t>(i * i % p)] = 1;
  }
  least_nonresidue_ = 0;
  for (std::int64_t a = 2; a < p; ++a) {
    if (table_[static_cast<std::size_t>(a)] == -1) {
      least_nonresidue_ = a;
      break;
    }
  }
}

namespace {
// Full squareness tables are capped at p <= 4096 (16 MB); beyond that the
// norm character predicate is used.
constexpr std::int64_t kSquareTableMaxP = 4096;
}  // namespace

QuadExtField::QuadExtField(std::int64_t p) : chi_(p), r_(chi_.least_nonresidue()) {
  if (p <= kSquareTableMaxP) {
    const std::size_t n = static_cast<std::size_t>(p) * static_cast<std::size_t>(p);
    square_table_.assign(n, -1);
    square_table_[0] = 0;
    for (std::int64_t a = 0; a < p; ++a) {
      for (std::int64_t b = 0; b < p; ++b) {
        if (a == 0 && b == 0) continue;
        Elem s = mul({a, b}, {a, b});
        square_table_[static_cast<std::size_t>(s.a * p + s.b)] = 1;
      }
    }
  }
}

int QuadExtField::chi2(Elem x) const {
  if (is_zero(x)) return 0;
  if (!square_table_.empty()) {
    return square_table_[static_cast<std::size_t>(x.a * p() + x.b)];
  }
  // Norm(a + bt) = (a + bt)(a - bt) = a^2 - r b^2; the norm map sends squares
  // of F_{p^2}^* onto squares of F_p^* with even multiplicity, giving
  // chi_{p^2}(x) = chi_p(Norm(x)).
  const std::int64_t q = p();
  std::int64_t n = (x.a * x.a % q - r_ * (x.b * x.b % q)) % q;
  if (n < 0) n += q;
  return chi_(n);
}

}  // namespace stkit
