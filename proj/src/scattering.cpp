#include "x1/scattering.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "x1/context.hpp"
#include "x1/error.hpp"

namespace x1 {

namespace {

const ModulusContext& checked_context(i64 n, ModulusContext& ctx)
{
    ctx = build_context(n);
    if (n % 2 == 0 || !ctx.squarefree)
        throw Error("bad-level", "scattering constants need odd squarefree N");
    return ctx;
}

HP sum_over_primes(const ModulusContext& ctx, HP (*coef)(const HP&))
{
    HP s = 0;
    for (i64 p : ctx.prime_factors)
        s += coef(HP(p)) * hp_log(p);
    return s;
}

HP coef_laurent(const HP& p) { return p * p / (p * p - 1); }
HP coef_0inf(const HP& p) { return (-p * p + 2 * p + 1) / (p * p - 1); }
HP coef_parabolic(const HP& p) { return (2 * p + 1) / (p + 1); }

i64 genus_at_least_one(const ModulusContext& ctx)
{
    i64 g = ctx.genus();
    if (g < 1)
        throw Error("genus-too-small", "assembly needs g_N >= 1");
    return g;
}

} // namespace

HP v_N(i64 n)
{
    return hp_pi() * hp_from(build_context(n).volume_over_pi());
}

cplx phi_inf_inf(i64 n, cplx s)
{
    if (std::abs(s - 1.0) < 1e-300)
        throw Error("pole", "phi_inf_inf has a pole at s = 1");
    const double sqpi = std::sqrt(std::numbers::pi);
    cplx v = 2 * sqpi * gamma_c(s - 0.5) * riemann_zeta(2.0 * s - 1.0) * rgamma_c(s) / riemann_zeta(2.0 * s);
    v *= std::pow(static_cast<double>(n), -2.0 * s);
    for (i64 p : prime_factors(n))
        v /= 1.0 - std::pow(static_cast<double>(p), -2.0 * s);
    return v;
}

HP phi_core_hp(const HP& s)
{
    return sqrt(hp_pi()) * hp_gamma(s - HP(0.5)) / (hp_gamma(s) * hp_zeta(2 * s));
}

HP phi_inf_inf_hp(i64 n, const HP& s)
{
    if (s == 1)
        throw Error("pole", "phi_inf_inf has a pole at s = 1");
    HP v = 2 * phi_core_hp(s) * hp_zeta(2 * s - 1) * pow(HP(n), -2 * s);
    for (i64 p : prime_factors(n))
        v /= 1 - pow(HP(p), -2 * s);
    return v;
}

const AConst& a_const()
{
    static std::mutex mtx;
    static std::map<unsigned, AConst> cache;
    std::lock_guard<std::mutex> lock(mtx);
    unsigned digits = HP::default_precision();
    auto it = cache.find(digits);
    if (it != cache.end())
        return it->second;

    AConst a;
    HP pi = hp_pi();
    HP zeta2 = pi * pi / 6;
    // psi(1/2) - psi(1) = -2 log 2
    a.value = (6 / pi) * (-2 * log(HP(2)) - 2 * hp_zeta_prime2() / zeta2);

    auto central = [](const HP& h) { return (phi_core_hp(1 + h) - phi_core_hp(1 - h)) / (2 * h); };
    HP h = HP(1) / 10000;
    HP d1 = central(h), d2 = central(h / 2), d3 = central(h / 4);
    HP r1 = (4 * d2 - d1) / 3, r2 = (4 * d3 - d2) / 3;
    a.finite_difference = (16 * r2 - r1) / 15;
    a.fd_halving_change = static_cast<double>(abs(r2 - r1));
    a.difference = static_cast<double>(abs(a.value - a.finite_difference));
    a.agree = a.difference <= 1e-10;
    return cache.emplace(digits, a).first->second;
}

LaurentAtOne phi_laurent(i64 n, bool numeric_check)
{
    ModulusContext ctx;
    checked_context(n, ctx);
    LaurentAtOne out;
    out.residue_times_pi = 1 / ctx.volume_over_pi();
    HP v = v_N(n);
    out.residue = 1 / v;
    const AConst& a = a_const();
    out.constant = (2 * hp_euler() + a.value * hp_pi() / 6 - 2 * sum_over_primes(ctx, coef_laurent)) / v;
    out.source = LaurentSource::closed_form;
    if (!numeric_check)
        return out;

    // symmetric average cancels the pole exactly; the half difference times h isolates the residue
    auto avg = [&](const HP& h) { return (phi_inf_inf_hp(n, 1 + h) + phi_inf_inf_hp(n, 1 - h)) / 2; };
    auto res = [&](const HP& h) { return h * (phi_inf_inf_hp(n, 1 + h) - phi_inf_inf_hp(n, 1 - h)) / 2; };
    HP h1 = HP(1) / 10000, h2 = HP(1) / 100000;
    HP c = (100 * avg(h2) - avg(h1)) / 99;
    HP r = (100 * res(h2) - res(h1)) / 99;
    out.numeric_constant = static_cast<double>(c);
    out.numeric_residue = static_cast<double>(r);
    out.constant_error = static_cast<double>(abs(c - out.constant));
    out.residue_error = static_cast<double>(abs(r - out.residue));
    out.cross_check_ok = out.constant_error <= 1e-6 && out.residue_error <= 1e-10;
    return out;
}

HP phi_0inf_const(i64 n)
{
    ModulusContext ctx;
    checked_context(n, ctx);
    const AConst& a = a_const();
    return (2 * hp_euler() + a.value * hp_pi() / 6 + sum_over_primes(ctx, coef_0inf)) / v_N(n);
}

CFBreakdown CF(i64 n, const AnalyticParams& params)
{
    ModulusContext ctx;
    checked_context(n, ctx);
    const HP g = HP(genus_at_least_one(ctx));
    const HP v = v_N(n);
    const HP pi = hp_pi();
    const HP gam = hp_euler();
    const HP api6 = a_const().value * pi / 6;
    const HP d = HP(ctx.num_divisors);

    CFBreakdown b;
    b.selberg = -HP(params.zconst) / (2 * g * v);
    b.rankin = (2 + 2 * gam + api6 - 2 * sum_over_primes(ctx, coef_laurent)) / (2 * g * v);
    // Gamma'(2) = 1 - gamma
    HP gamma_prime2 = 1 - gam;
    b.gamma_term = (gamma_prime2 + gam - log(4 * pi)) / (4 * pi * g);
    HP inner = 2 * HP(params.c1) - 3 * gam - api6 + sum_over_primes(ctx, coef_parabolic) -
               (1 - 1 / d) * hp_from(ctx.sigma_minus1);
    b.parabolic = HP(ctx.phi) * d / (2 * g * v) * inner;
    b.total = b.selberg + b.rankin + b.gamma_term + b.parabolic;
    return b;
}

GcanValue gcan_cusps(i64 n, const AnalyticParams& params)
{
    ModulusContext ctx;
    checked_context(n, ctx);
    const HP pi = hp_pi();
    GcanValue out;
    CFBreakdown cf = CF(n, params);
    HP p0 = phi_0inf_const(n);
    out.value = 4 * pi * cf.total - 2 * pi * p0;

    // second route: the five groups written out with their own prefactors
    const HP g = HP(genus_at_least_one(ctx));
    const HP v = v_N(n);
    const HP gam = hp_euler();
    const HP api6 = a_const().value * pi / 6;
    const HP d = HP(ctx.num_divisors);
    out.groups[0] = -2 * pi / (g * v) * HP(params.zconst);
    out.groups[1] = 2 * pi / (g * v) * (2 + 2 * gam + api6 - 2 * sum_over_primes(ctx, coef_laurent));
    out.groups[2] = ((1 - gam) + gam - log(4 * pi)) / g;
    out.groups[3] = 2 * pi * HP(ctx.phi) * d / (g * v) *
                    (2 * HP(params.c1) - 3 * gam - api6 + sum_over_primes(ctx, coef_parabolic) -
                     (1 - 1 / d) * hp_from(ctx.sigma_minus1));
    out.groups[4] = -2 * pi / v * (2 * gam + api6 + sum_over_primes(ctx, coef_0inf));
    out.direct = out.groups[0] + out.groups[1] + out.groups[2] + out.groups[3] + out.groups[4];
    out.difference = static_cast<double>(abs(out.value - out.direct));
    return out;
}

AnalyticPart analytic_part(i64 n, const AnalyticParams& params)
{
    ModulusContext ctx;
    checked_context(n, ctx);
    const i64 g = genus_at_least_one(ctx);
    AnalyticPart out;
    out.gcan = gcan_cusps(n, params);
    const HP scale = HP(4 * g) * HP(g - 1);
    out.value = scale * out.gcan.value;
    for (int i = 0; i < 5; ++i)
        out.groups[i] = scale * out.gcan.groups[i];
    out.leading = 2.0 * static_cast<double>(g) * std::log(static_cast<double>(n));
    out.ratio = static_cast<double>(out.value) / out.leading;
    return out;
}

} // namespace x1
