#pragma once
#include <optional>
#include <vector>

#include "x1/arith.hpp"

namespace x1 {

struct Cusp {
    i64 a = 0;
    i64 c = 0;
    bool canonical = true;
};

struct BadFiberData {
    i64 p = 0;
    i64 s_p = 0;
    i64 g_p = 0;
};

class ModulusContext {
public:
    i64 n = 0;
    std::vector<i64> prime_factors;
    i64 phi = 0;
    i64 num_divisors = 0;
    Rational sigma_minus1;
    bool squarefree = false;
    bool admissible = false;
    // witnesses of admissibility: coprime q, r >= 4 with q*r | n
    i64 adm_q = 0, adm_r = 0;
    i64 cusp_count = 0;

    // Throw "formulas-require-N>=5" below level 5.
    i64 genus() const;
    Rational volume_over_pi() const;
    // index of Gamma_1(N) in SL_2(Z) up to +-1: N^2 prod(1 - p^-2) / 2 for N >= 3
    i64 psl_index() const;
    // product over p | N of (p^2 - 1)
    i64 prod_p2_minus1() const;

    int mu(i64 d) const; // Moebius utility

private:
    friend ModulusContext build_context(i64 n);
    std::optional<i64> genus_;
    std::optional<Rational> volume_;
};

ModulusContext build_context(i64 n);

BadFiberData s_p(const ModulusContext& ctx, i64 p);

std::vector<Cusp> enumerate_cusps(const ModulusContext& ctx);

// Number of Gamma_1(N)-cusps lying over the cusp infinity of Gamma_0(N).
i64 cusps_above_infinity(const ModulusContext& ctx);

} // namespace x1
