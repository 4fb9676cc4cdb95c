#include "stkit/numbers.hpp"

#include <cmath>
#include <stdexcept>

namespace stkit {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is a proven witness set for all n < 3.3 * 10^24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::int64_t> primes_below(std::int64_t bound) {
  std::vector<std::int64_t> out;
  if (bound <= 2) return out;
  std::vector<bool> sieve(static_cast<std::size_t>(bound), true);
  sieve[0] = sieve[1] = false;
  for (std::int64_t i = 2; i * i < bound; ++i) {
    if (!sieve[static_cast<std::size_t>(i)]) continue;
    for (std::int64_t j = i * i; j < bound; j += i) sieve[static_cast<std::size_t>(j)] = false;
  }
  for (std::int64_t i = 2; i < bound; ++i) {
    if (sieve[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

std::vector<std::int64_t> first_primes(std::size_t count) {
  if (count == 0) return {};
  // Upper bound on the count-th prime, padded for small counts.
  double n = static_cast<double>(count);
  std::int64_t bound = static_cast<std::int64_t>(n * (std::log(n + 2) + std::log(std::log(n + 4)) + 2)) + 16;
  std::vector<std::int64_t> ps = primes_below(bound);
  while (ps.size() < count) {
    bound *= 2;
    ps = primes_below(bound);
  }
  ps.resize(count);
  return ps;
}

std::int64_t mod_reduce(const BigInt& a, std::int64_t p) {
  BigInt r = a % p;
  std::int64_t v = static_cast<std::int64_t>(r);
  if (v < 0) v += p;
  return v;
}

std::int64_t pow_mod(std::int64_t a, std::int64_t e, std::int64_t p) {
  return static_cast<std::int64_t>(pow_mod_u64(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(e),
                                               static_cast<std::uint64_t>(p)));
}

int legendre_symbol(const BigInt& a, std::int64_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw std::invalid_argument("legendre_symbol: modulus must be an odd prime");
  }
  std::int64_t r = mod_reduce(a, p);
  if (r == 0) return 0;
  std::int64_t t = pow_mod(r, (p - 1) / 2, p);
  return t == 1 ? 1 : -1;
}

std::string to_string(const BigInt& a) { return a.str(); }
std::string to_string(const BigRat& a) { return a.str(); }

}  // namespace stkit
