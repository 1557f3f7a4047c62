#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fqval {

// Exact integers. Natural is used for values that are nonnegative by
// contract; Integer for signed quantities such as discrete-log exponents.
using Natural = mpz_class;
using Integer = mpz_class;

Natural parse_natural(std::string_view text);
Integer parse_integer(std::string_view text);
std::string to_decimal(const mpz_class& n);

bool is_prime(const Natural& n);
void require_prime(const Natural& p, const char* what);

/// Converts to uint64, throwing CapExceeded if the value does not fit.
std::uint64_t to_u64(const mpz_class& n, const char* what);
bool fits_u64(const mpz_class& n);

Natural pow(const Natural& base, unsigned long exponent);
Natural powm(const Natural& base, const Integer& exponent, const Natural& modulus);
Natural gcd(const Natural& a, const Natural& b);
Natural lcm(const Natural& a, const Natural& b);

/// Prime factorization as (prime, exponent) pairs, primes ascending.
/// Trial division followed by Pollard-Brent rho for the cofactor.
using Factorization = std::vector<std::pair<Natural, unsigned>>;
Factorization factorize(const Natural& n);

/// Primes in [lo, hi] by segmented sieve.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

}  // namespace fqval
