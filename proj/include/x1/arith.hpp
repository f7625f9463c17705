#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace x1 {

using i64 = std::int64_t;
using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

i64 gcd(i64 a, i64 b);
i64 mod(i64 a, i64 m);                      // result in [0, m)
i64 inv_mod(i64 a, i64 m);                  // throws if not invertible
i64 mul_mod(i64 a, i64 b, i64 m);
// a*x + b*y = g = gcd(a,b) >= 0
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);
BigInt ext_gcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y);

std::vector<std::pair<i64, int>> factorize(i64 n);
std::vector<i64> prime_factors(i64 n);
std::vector<i64> divisors(i64 n);
bool is_squarefree(i64 n);
i64 euler_phi(i64 n);
int mobius(i64 n);
i64 num_divisors(i64 n);
Rational sigma_minus1(i64 n);

i64 isqrt(i64 n);
bool is_square(i64 n);
BigInt isqrt(const BigInt& n);
bool is_square(const BigInt& n);

// mobius values 0..n by sieve
std::vector<signed char> mobius_table(i64 n);

std::string to_string(const BigInt& x);
std::string rational_num(const Rational& q);
std::string rational_den(const Rational& q);
double to_double(const Rational& q);

} // namespace x1
