#pragma once
// Independent reference computations used by the unit and acceptance tests.
// None of these call into the library's closed forms for the quantity they check.
#include <vector>

#include "x1/arith.hpp"

namespace oracle {

using x1::i64;
using x1::Rational;

// Order-N vectors (c, d) mod N, counted by brute force.
i64 order_n_vectors(i64 n);
// Gamma_1(N)-cusps: order-N vectors (a, c) mod N under (a, c) -> (a + c, c) and (a, c) -> (-a, -c), by union-find.
i64 cusp_count(i64 n);
// [PSL_2(Z) : image of Gamma_1(N)] for N >= 3
i64 psl_index(i64 n);
// Riemann-Hurwitz for N >= 5, where Gamma_1(N) has no elliptic points.
i64 genus(i64 n);
Rational volume_over_pi(i64 n);
// (p - 1)/24 times the number of order-M vectors mod M, M = N/p
Rational s_p(i64 n, i64 p);

// Kronecker symbol (D / m) for m >= 1
int kronecker(i64 D, i64 m);
// sqrt(D) L(1, chi_D) for a nonsquare discriminant D > 0, via the fundamental discriminant
double sqrtD_L1(i64 D);

// 6/pi (-2 log 2 - 2 zeta'(2)/zeta(2)) with zeta'(2) from Glaisher's constant
double a_glaisher();

// Admissible Green's function on the s-edge banana graph by a finite-difference solve with m
// segments per edge, Richardson-combined over m and 2m. x on edge 0; y = vertex 0 or y = x.
double green_fd(i64 s, double a, double l, double x, bool diagonal, int m = 40);

// Sum of q(n,-m)^{-s} over a cone {m = 0, n = u mod N, n > 0, e_den m >= e_num n} with q = A x^2 + B x z + C z^2,
// by direct enumeration of all points with q(n,-m) <= bound.
double cone_sum(i64 A, i64 B, i64 C, i64 N, i64 u, i64 e_num, i64 e_den, double s, double bound);

} // namespace oracle
