#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace stkit {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// All primes p < bound, ascending.
std::vector<std::int64_t> primes_below(std::int64_t bound);

// At least `count` primes, ascending, starting from 2.
std::vector<std::int64_t> first_primes(std::size_t count);

// Least nonnegative residue of a modulo p (p > 0).
std::int64_t mod_reduce(const BigInt& a, std::int64_t p);

// a^e mod p for 0 <= a < p < 2^31, e >= 0.
std::int64_t pow_mod(std::int64_t a, std::int64_t e, std::int64_t p);

// Legendre symbol (a|p) in {-1, 0, 1} for odd prime p, via Euler's criterion.
// Throws std::invalid_argument if p is not an odd prime.
int legendre_symbol(const BigInt& a, std::int64_t p);

std::string to_string(const BigInt& a);
std::string to_string(const BigRat& a);

}  // namespace stkit
