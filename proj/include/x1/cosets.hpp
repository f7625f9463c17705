#pragma once
#include <array>
#include <string>
#include <vector>

#include "x1/arith.hpp"

namespace x1 {

struct DoubleCosetCount {
    i64 c = 0;
    i64 d = 0;
    i64 count = 0;
    std::string method; // "brute_force" or "bijection"
    i64 period_multiplier = 1; // enumeration period used (brute force)
};

// Matrices (alpha beta; c delta) with alpha = 0, beta = d mod N, det 1, modulo
// <(1 N; 0 1)> on the left and <(1 1; 0 1)> on the right.
DoubleCosetCount count_Sd_brute(i64 n, i64 d, i64 c, i64 max_multiplier = 8);

// Explicit preimage construction from delta mod c; needs gcd(c,N) = 1 and d*c = -1 mod N.
DoubleCosetCount count_Sd_bijection(i64 n, i64 d, i64 c);

// Representatives built by the bijection, one per unit class mod c: rows (alpha, beta, c, delta).
std::vector<std::array<i64, 4>> bijection_representatives(i64 n, i64 d, i64 c);

std::vector<DoubleCosetCount> scattering_count_series(i64 n, i64 d, i64 c_max, const std::string& method);

} // namespace x1
