#pragma once
#include <string>
#include <utility>
#include <vector>

#include "x1/arith.hpp"
#include "x1/hp.hpp"
#include "x1/scattering.hpp"

namespace x1 {

// Two vertices 0 and infinity joined by s_p edges of length one.
struct GraphData {
    i64 p = 0;
    i64 s_p = 0, g_p = 0;
    i64 genus = 0;  // g_N = 2 g_p + s_p - 1
    Rational a_p;   // s_p g_p / (s_p - 1)
    Rational l_p;   // 2 a_p + s_p
};

GraphData graph_data(i64 n, i64 p);

// A coefficient times sum over p | N of c_p log p, kept exact until evaluation.
struct LogCombination {
    Rational coefficient;
    std::vector<std::pair<i64, Rational>> terms; // (p, c_p)
    HP value() const;
};

struct VIntersections {
    LogCombination v0_vinf; // positive
    LogCombination v0_v0;   // its negative, equal to (V_inf, V_inf)
};

VIntersections v_intersections(i64 n);

struct GeometricPart {
    LogCombination exact;   // 24 (g+1)(g-1) / prod(p^2-1) * sum (p+1)/(p-1) log p
    HP value;
    double ratio = 0;       // value / (g log N)
};

GeometricPart geometric_part(i64 n);

struct OmegaSq {
    HP analytic, geometric, value;
    double ratio = 0;       // value / (3 g log N)
    AnalyticPart analytic_detail;
};

OmegaSq omega_sq(i64 n, const AnalyticParams& params = {});

enum class GreenTarget { zero, infinity, diagonal };
enum class GreenForm {
    displayed, // the three polynomials as written
    admissible // shifted by the constant that makes int g(x, y) dmu(x) = 0
};

// g(x, 0), g(x, inf) or g(x, x) for x on an edge, 0 <= x <= 1
Rational graph_green(i64 n, i64 p, const Rational& x, GreenTarget target, GreenForm form = GreenForm::displayed);
double graph_green_d(const GraphData& gd, double x, GreenTarget target, GreenForm form = GreenForm::displayed);
// The constant separating the two forms, in closed form in g_N and s_p.
Rational green_shift(i64 genus, i64 s_p);

// int f dmu_p with mu_p = (a/l)(delta_0 + delta_inf) + dx/l on each edge, by quadrature
double integrate_mu(const GraphData& gd, GreenTarget target, GreenForm form);

struct RpValue {
    i64 p = 0;
    i64 s_p = 0;
    Rational closed_displayed; // the displayed three-term closed form
    Rational closed;           // (g-1)(3g + (s-1)^2) / (3 g s)
    double quad_displayed = 0; // integral of the displayed diagonal polynomial
    double quad = 0;           // integral of the admissible diagonal function
    double diff_displayed = 0; // closed_displayed - quad_displayed
    double diff = 0;           // closed - quad
    bool agree_displayed = false;
    bool agree = false;
};

// r_p = int g(x,x) ((2g-2) mu_p + delta_K), K = (g-1)(0 + inf)
RpValue rp_value(i64 n, i64 p, double tolerance = 1e-10);

struct OmegaAdm {
    HP omega_sq;
    HP correction;           // sum r_p / (p-1) log p with the admissible r_p
    HP correction_displayed; // the same with the displayed closed form
    HP value;
    HP value_displayed;
    double ratio = 0;        // value / (3 g log N)
    std::vector<RpValue> rp;
};

OmegaAdm omega_adm(i64 n, const AnalyticParams& params = {});
// omega_sq - sum r_p / (p-1) log p for caller-supplied r_p (one per prime of N, in order)
HP omega_adm_with(i64 n, const HP& omega_sq_value, const std::vector<Rational>& rp);

struct Faltings {
    HP value;
    HP omega_sq;
    LogCombination sp_term;  // sum s_p/(p-1) log p
    double delta_fal = 0;
    double ratio = 0;        // value / ((g/4) log N)
};

Faltings faltings_height(i64 n, const AnalyticParams& params = {}, double delta_fal = 0);

struct Bogomolov {
    HP lo, hi;
    double asymptotic_lo = 0, asymptotic_hi = 0;
    double eps = 0;
    double ratio_lo = 0;     // lo / ((3/4) log N)
};

Bogomolov bogomolov_bounds(i64 n, const AnalyticParams& params = {}, double eps = 0);

} // namespace x1
