#include "x1/surface.hpp"

#include <cmath>

#include "x1/context.hpp"
#include "x1/error.hpp"
#include "x1/numeric.hpp"

namespace x1 {

namespace {

ModulusContext admissible_context(i64 n)
{
    ModulusContext ctx = build_context(n);
    if (!ctx.admissible)
        throw Error("not-admissible", "N = " + std::to_string(n) + " is not odd squarefree with coprime q, r >= 4 dividing it");
    if (ctx.genus() < 2)
        throw Error("genus-too-small", "need g_N >= 2");
    return ctx;
}

double log_n(i64 n) { return std::log(static_cast<double>(n)); }

} // namespace

HP LogCombination::value() const
{
    HP s = 0;
    for (const auto& [p, c] : terms)
        s += hp_from(c) * hp_log(p);
    return hp_from(coefficient) * s;
}

GraphData graph_data(i64 n, i64 p)
{
    ModulusContext ctx = build_context(n);
    BadFiberData bf = s_p(ctx, p);
    if (bf.s_p < 2)
        throw Error("degenerate-graph", "s_p < 2 at p = " + std::to_string(p));
    GraphData gd;
    gd.p = p;
    gd.s_p = bf.s_p;
    gd.g_p = bf.g_p;
    gd.genus = ctx.genus();
    if (gd.genus != 2 * gd.g_p + gd.s_p - 1)
        throw Error("internal-consistency", "g_N != 2 g_p + s_p - 1");
    gd.a_p = Rational(gd.s_p * gd.g_p, gd.s_p - 1);
    gd.l_p = 2 * gd.a_p + gd.s_p;
    return gd;
}

VIntersections v_intersections(i64 n)
{
    ModulusContext ctx = admissible_context(n);
    const i64 g = ctx.genus();
    LogCombination c;
    c.coefficient = Rational(ctx.phi) * 24 * Rational(g - 1) * Rational(g - 1) / Rational(ctx.prod_p2_minus1());
    for (i64 p : ctx.prime_factors)
        c.terms.push_back({p, Rational(p + 1, p - 1)});
    VIntersections v;
    v.v0_vinf = c;
    v.v0_v0 = c;
    v.v0_v0.coefficient = -c.coefficient;
    return v;
}

GeometricPart geometric_part(i64 n)
{
    ModulusContext ctx = admissible_context(n);
    const i64 g = ctx.genus();
    VIntersections v = v_intersections(n);
    GeometricPart out;
    out.exact = v.v0_vinf;
    out.exact.coefficient = v.v0_vinf.coefficient / Rational(ctx.phi) * Rational(g + 1, g - 1);
    out.value = out.exact.value();
    out.ratio = static_cast<double>(out.value) / (static_cast<double>(g) * log_n(n));
    return out;
}

OmegaSq omega_sq(i64 n, const AnalyticParams& params)
{
    ModulusContext ctx = admissible_context(n);
    OmegaSq out;
    out.analytic_detail = analytic_part(n, params);
    out.analytic = out.analytic_detail.value;
    out.geometric = geometric_part(n).value;
    out.value = out.analytic + out.geometric;
    out.ratio = static_cast<double>(out.value) / (3.0 * static_cast<double>(ctx.genus()) * log_n(n));
    return out;
}

Rational green_shift(i64 genus, i64 s_p)
{
    const Rational g(genus), s(s_p);
    return (6 * g * g + g * s - g + s * s - 2 * s + 1) / (12 * g * g * s);
}

Rational graph_green(i64 n, i64 p, const Rational& x, GreenTarget target, GreenForm form)
{
    if (x < 0 || x > 1)
        throw Error("domain", "x must lie in [0, 1]");
    GraphData gd = graph_data(n, p);
    const Rational& a = gd.a_p;
    const Rational& l = gd.l_p;
    const Rational s(gd.s_p);
    const Rational c0 = (3 * a + 2 * s) / (6 * s * l);
    Rational v;
    switch (target) {
    case GreenTarget::zero:
        v = x * x / (2 * l) - (a + s) / (s * l) * x - c0;
        break;
    case GreenTarget::infinity: {
        Rational y = 1 - x;
        v = y * y / (2 * l) - (a + s) / (s * l) * y - c0;
        break;
    }
    case GreenTarget::diagonal:
        v = (1 - 1 / s - 1 / l) * x * (1 - x) - c0;
        break;
    }
    if (form == GreenForm::admissible)
        v += green_shift(gd.genus, gd.s_p);
    return v;
}

double graph_green_d(const GraphData& gd, double x, GreenTarget target, GreenForm form)
{
    if (x < 0 || x > 1)
        throw Error("domain", "x must lie in [0, 1]");
    const double a = to_double(gd.a_p);
    const double l = to_double(gd.l_p);
    const double s = static_cast<double>(gd.s_p);
    const double c0 = (3 * a + 2 * s) / (6 * s * l);
    double v = 0;
    switch (target) {
    case GreenTarget::zero:
        v = x * x / (2 * l) - (a + s) / (s * l) * x - c0;
        break;
    case GreenTarget::infinity:
        v = (1 - x) * (1 - x) / (2 * l) - (a + s) / (s * l) * (1 - x) - c0;
        break;
    case GreenTarget::diagonal:
        v = (1 - 1 / s - 1 / l) * x * (1 - x) - c0;
        break;
    }
    if (form == GreenForm::admissible)
        v += to_double(green_shift(gd.genus, gd.s_p));
    return v;
}

double integrate_mu(const GraphData& gd, GreenTarget target, GreenForm form)
{
    const double a = to_double(gd.a_p);
    const double l = to_double(gd.l_p);
    const double s = static_cast<double>(gd.s_p);
    auto f = [&](double x) { return graph_green_d(gd, x, target, form); };
    // the s edges are identical, so one edge integral is weighted by s
    double edge = integrate_gk_real(f, 0, 1, 1e-16, 1e-14);
    return (a / l) * (f(0) + f(1)) + (s / l) * edge;
}

RpValue rp_value(i64 n, i64 p, double tolerance)
{
    GraphData gd = graph_data(n, p);
    const Rational g(gd.genus), s(gd.s_p);
    RpValue r;
    r.p = p;
    r.s_p = gd.s_p;
    r.closed_displayed = -(g - 1) * (3 * g + s - 1) / (3 * s * g) + (g - 1) * (g - 1) * s / (3 * g * g) -
                         (2 * s - 1) * (g - 1) * (g - 1) / (s * g * g);
    r.closed = (g - 1) * (3 * g + (s - 1) * (s - 1)) / (3 * g * s);

    const double gm1 = static_cast<double>(gd.genus - 1);
    auto integral = [&](GreenForm form) {
        double mu_part = integrate_mu(gd, GreenTarget::diagonal, form);
        // delta_K = (g-1)(delta_0 + delta_inf); the diagonal at a vertex is the x = 0 or x = 1 value
        double k_part = gm1 * (graph_green_d(gd, 0, GreenTarget::diagonal, form) +
                               graph_green_d(gd, 1, GreenTarget::diagonal, form));
        return 2 * gm1 * mu_part + k_part;
    };
    r.quad_displayed = integral(GreenForm::displayed);
    r.quad = integral(GreenForm::admissible);
    r.diff_displayed = to_double(r.closed_displayed) - r.quad_displayed;
    r.diff = to_double(r.closed) - r.quad;
    r.agree_displayed = std::abs(r.diff_displayed) <= tolerance;
    r.agree = std::abs(r.diff) <= tolerance;
    return r;
}

HP omega_adm_with(i64 n, const HP& omega_sq_value, const std::vector<Rational>& rp)
{
    ModulusContext ctx = build_context(n);
    if (rp.size() != ctx.prime_factors.size())
        throw Error("domain", "one r_p per prime factor required");
    HP corr = 0;
    for (size_t i = 0; i < rp.size(); ++i) {
        i64 p = ctx.prime_factors[i];
        corr += hp_from(rp[i]) / HP(p - 1) * hp_log(p);
    }
    return omega_sq_value - corr;
}

OmegaAdm omega_adm(i64 n, const AnalyticParams& params)
{
    ModulusContext ctx = admissible_context(n);
    OmegaAdm out;
    out.omega_sq = omega_sq(n, params).value;
    std::vector<Rational> rp, rp_disp;
    for (i64 p : ctx.prime_factors) {
        RpValue r = rp_value(n, p);
        out.rp.push_back(r);
        rp.push_back(r.closed);
        rp_disp.push_back(r.closed_displayed);
    }
    out.value = omega_adm_with(n, out.omega_sq, rp);
    out.value_displayed = omega_adm_with(n, out.omega_sq, rp_disp);
    out.correction = out.omega_sq - out.value;
    out.correction_displayed = out.omega_sq - out.value_displayed;
    out.ratio = static_cast<double>(out.value) / (3.0 * static_cast<double>(ctx.genus()) * log_n(n));
    return out;
}

Faltings faltings_height(i64 n, const AnalyticParams& params, double delta_fal)
{
    ModulusContext ctx = admissible_context(n);
    const i64 g = ctx.genus();
    Faltings f;
    f.omega_sq = omega_sq(n, params).value;
    f.sp_term.coefficient = 1;
    for (i64 p : ctx.prime_factors)
        f.sp_term.terms.push_back({p, Rational(s_p(ctx, p).s_p, p - 1)});
    f.delta_fal = delta_fal;
    f.value = (f.omega_sq + f.sp_term.value() + HP(delta_fal) - 4 * HP(g) * log(2 * hp_pi())) / 12;
    f.ratio = static_cast<double>(f.value) / (static_cast<double>(g) / 4 * log_n(n));
    return f;
}

Bogomolov bogomolov_bounds(i64 n, const AnalyticParams& params, double eps)
{
    ModulusContext ctx = admissible_context(n);
    const i64 g = ctx.genus();
    Bogomolov b;
    HP wa = omega_adm(n, params).value;
    b.lo = wa / (4 * HP(g - 1));
    b.hi = wa / (2 * HP(g - 1));
    b.eps = eps;
    b.asymptotic_lo = (0.75 - eps) * log_n(n);
    b.asymptotic_hi = (1.5 + eps) * log_n(n);
    b.ratio_lo = static_cast<double>(b.lo) / (0.75 * log_n(n));
    return b;
}

} // namespace x1
