#pragma once
#include <string>

#include "x1/arith.hpp"
#include "x1/hp.hpp"
#include "x1/numeric.hpp"

namespace x1 {

// v_N = pi * vol / pi, extended precision
HP v_N(i64 n);

// 2 sqrt(pi) Gamma(s-1/2) zeta(2s-1) / (Gamma(s) zeta(2s)) N^{-2s} prod_{p|N} (1 - p^{-2s})^{-1}
cplx phi_inf_inf(i64 n, cplx s);
HP phi_inf_inf_hp(i64 n, const HP& s);

// sqrt(pi) Gamma(s-1/2) / (Gamma(s) zeta(2s))
HP phi_core_hp(const HP& s);

struct AConst {
    HP value;           // digamma / zeta'(2) reduction
    HP finite_difference; // central differences, Richardson extrapolated
    double fd_halving_change = 0; // |D(h/2) - D(h)| after one Richardson level
    double difference = 0;
    bool agree = true;  // |difference| <= 1e-10
};
const AConst& a_const(); // cached per working precision

enum class LaurentSource { closed_form, numeric_expansion };

struct LaurentAtOne {
    Rational residue_times_pi; // residue = residue_times_pi / pi = 1 / v_N
    HP residue;
    HP constant;
    LaurentSource source = LaurentSource::closed_form;
    double numeric_residue = 0;
    double numeric_constant = 0;
    double residue_error = 0;  // |numeric - 1/v_N|
    double constant_error = 0; // |numeric - closed form|
    bool cross_check_ok = true;
};

// Closed form (1/v_N)(2 gamma + a pi/6 - 2 sum p^2 log p / (p^2 - 1)), cross-checked against
// symmetric pole-subtracted averages at s = 1 +- 1e-4, 1 +- 1e-5 with Richardson extrapolation.
LaurentAtOne phi_laurent(i64 n, bool numeric_check = true);

// (1/v_N)(2 gamma + a pi/6 + sum (-p^2 + 2p + 1)/(p^2 - 1) log p)
HP phi_0inf_const(i64 n);

struct AnalyticParams {
    double zconst = 0; // stand-in for the Selberg zeta constant
    double c1 = 0;     // stand-in for C_1
    bool zconst_default = true;
    bool c1_default = true;
    std::string source_note = "zconst and c1 unknown, set to 0";
};

struct CFBreakdown {
    HP selberg;   // -zconst / (2 g v)
    HP rankin;    // (2 + 2 gamma + a pi/6 - 2 sum p^2 log p/(p^2-1)) / (2 g v)
    HP gamma_term; // (Gamma'(2) + gamma - log 4 pi) / (4 pi g)
    HP parabolic; // phi(N) d(N) / (2 g v) * (2 C_1 - 3 gamma - a pi/6 + sum (2p+1)/(p+1) log p - (1 - 1/d) sigma_{-1})
    HP total;
};

CFBreakdown CF(i64 n, const AnalyticParams& params = {});

struct GcanValue {
    HP value;            // 4 pi C_F - 2 pi phi_0inf_const
    HP direct;           // five groups summed directly
    double difference = 0;
    // five groups, in the order: Selberg, Rankin, Gamma, parabolic, phi_0inf
    HP groups[5];
    std::string dropped_note = "dropped O(1/g_N) term, no constant available";
};

GcanValue gcan_cusps(i64 n, const AnalyticParams& params = {});

struct AnalyticPart {
    HP value;          // 4 g (g-1) gcan
    HP groups[5];      // 4 g (g-1) times the five gcan groups
    double leading = 0; // 2 g log N
    double ratio = 0;
    GcanValue gcan;
    std::string note = "leading term 2 g_N log N follows the proof's last line";
};

AnalyticPart analytic_part(i64 n, const AnalyticParams& params = {});

} // namespace x1
