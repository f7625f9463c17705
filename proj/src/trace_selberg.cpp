#include "x1/trace_selberg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "x1/context.hpp"
#include "x1/error.hpp"
#include "x1/hp.hpp"
#include "x1/numeric.hpp"

namespace x1 {

namespace {

constexpr double kPi = std::numbers::pi;

double v_n(i64 n)
{
    return kPi * to_double(build_context(n).volume_over_pi());
}

double index_sl2(i64 n)
{
    double idx = static_cast<double>(n) * static_cast<double>(n);
    for (i64 p : prime_factors(n))
        idx *= 1.0 - 1.0 / (static_cast<double>(p) * static_cast<double>(p));
    return idx;
}

// Sum over |l| > l_max, l = +-2 mod N as appropriate, of W^bd(l) * phi(log n_l), phi decreasing.
// Explicit up to a cutoff, then blocks [L, 1.05 L) bounded by W^bd at the right end and phi at the left.
template <class Phi>
double dropped_sum(i64 n, i64 l_max, double t, Phi log_phi)
{
    const double idx = index_sl2(n);
    auto log_wbd = [&](double logD) { return std::log(idx) + std::log1p(0.5 * logD) + std::log(logD + 2); };

    double total = 0;
    const i64 explicit_end = std::max<i64>(4 * l_max, 2000);
    for (i64 a = l_max + 1; a <= explicit_end; ++a) {
        int mult = (mod(a - 2, n) == 0) + (mod(-a - 2, n) == 0);
        if (mult == 0 || a <= 2)
            continue;
        double D = static_cast<double>(a) * a - 4;
        double x = std::log(eigenvalue_n(a));
        total += mult * std::exp(log_wbd(std::log(D)) + log_phi(x));
    }
    double L1 = static_cast<double>(explicit_end) + 1;
    for (int it = 0; it < 20000; ++it) {
        double L2 = L1 * 1.05;
        double count = 2.0 * (std::floor((L2 - L1) / static_cast<double>(n)) + 1.0);
        double x_lo = std::log(L1 - 1);
        double lb = std::log(count) + log_wbd(2 * std::log(L2)) + log_phi(x_lo);
        double block = std::exp(lb);
        total += block;
        if (x_lo > t + 1 && lb < -745 + 5) // blocks now shrink by more than 0.95 per step
            break;
        if (x_lo > t + 1 && block < 1e-30 * total) {
            total += 20 * block;
            break;
        }
        L1 = L2;
    }
    return total;
}

} // namespace

double gaussian_g(double t, double w)
{
    if (!(t > 0))
        throw Error("domain", "gaussian_g needs t > 0");
    return std::exp(-t / 4 - w * w / (4 * t)) / std::sqrt(4 * kPi * t);
}

double g_integral(double t, double w)
{
    if (!(t > 0))
        throw Error("domain", "integral needs t > 0");
    w = std::abs(w);
    if (std::isinf(t))
        return std::exp(-w / 2);
    double st = std::sqrt(t);
    double xm = w / (2 * st) - st / 2;
    double xp = w / (2 * st) + st / 2;
    if (xm < 0) {
        double a = std::exp(-w / 2) * std::erfc(xm);
        double b = std::exp(-w * w / (4 * t) - t / 4) * erfcx(xp);
        return 0.5 * (a - b);
    }
    return 0.5 * std::exp(-w * w / (4 * t) - t / 4) * (erfcx(xm) - erfcx(xp));
}

double g_integral_quadrature(double t, double w, double* err)
{
    if (!(t > 0))
        throw Error("domain", "integral needs t > 0");
    // xi = u^2 removes the endpoint singularity
    auto f = [w](double u) {
        if (u == 0)
            return 0.0;
        return std::exp(-u * u / 4 - w * w / (4 * u * u)) / std::sqrt(kPi);
    };
    return integrate_gk_real(f, 0, std::sqrt(t), 1e-17, 1e-13, err);
}

double oscillatory_term(double n_l, double t, double* err)
{
    if (!(t > 0))
        throw Error("domain", "oscillatory term needs t > 0");
    const double R = std::sqrt(41.5 / t);
    const double k = 2 * std::log(n_l);
    auto f = [t, k](double r) {
        double q = 0.25 + r * r;
        return std::exp(-t * q) * std::cos(k * r) / q;
    };
    // even integrand: (1/4) * 2 * int_0^R
    double e = 0;
    double v = 0.5 * integrate_gk_real(f, 0, R, 1e-17, 1e-14, &e);
    if (err)
        *err = 0.5 * e;
    return v;
}

double A_l(double n_l, double t)
{
    return -(kPi / 2) * g_integral(t, 2 * std::log(n_l));
}

double A_l_bound(double n_l, double t)
{
    double x = std::log(n_l);
    return kPi / (2 * x * x) * std::exp(-x * x / t);
}

double eigenvalue_n(i64 l)
{
    double a = static_cast<double>(std::abs(l));
    if (a <= 2)
        throw Error("trace-condition", "need |l| > 2");
    // (a + sqrt(a^2-4))/2 without cancellation
    return 0.5 * (a + std::sqrt((a - 2) * (a + 2)));
}

double class_weight_bound(i64 n, i64 l)
{
    double D = static_cast<double>(l) * static_cast<double>(l) - 4;
    double logD = std::log(D);
    return index_sl2(n) * (1 + 0.5 * logD) * (logD + 2);
}

i64 default_l_max(i64 n)
{
    return n * ((40 + n - 1) / n) + 2;
}

TraceSpectrum::TraceSpectrum(i64 n, i64 l_max) : n_(n)
{
    if (n < 3 || n % 2 == 0)
        throw Error("bad-level", "trace data needs odd N >= 3");
    extend(l_max > 0 ? l_max : default_l_max(n));
}

void TraceSpectrum::extend(i64 l_max)
{
    if (l_max <= l_max_)
        return;
    for (i64 a = 3; a <= l_max; ++a) {
        for (i64 l : {a, -a}) {
            if (mod(l - 2, n_) != 0 || terms_.count(l))
                continue;
            ClassSet cs = enumerate_classes(n_, l);
            TraceTerm term;
            term.l = l;
            term.disc = cs.disc;
            term.classes = cs.h();
            term.n_l = eigenvalue_n(l);
            HP sum = 0;
            for (const auto& rep : cs.reps)
                sum += 2 * rep.unit.log_eps;
            term.weight = static_cast<double>(sum / sqrt(HP(cs.disc)));
            term.weight_bound = class_weight_bound(n_, l);
            terms_[l] = term;
        }
    }
    l_max_ = l_max;
}

std::vector<TraceTerm> TraceSpectrum::terms(i64 l_max) const
{
    if (l_max > l_max_) {
        std::vector<i64> need;
        for (i64 a = l_max_ + 1; a <= l_max; ++a)
            for (i64 l : {a, -a})
                if (mod(l - 2, n_) == 0)
                    need.push_back(l);
        std::string list;
        for (i64 l : need)
            list += (list.empty() ? "" : ",") + std::to_string(l);
        throw Error("missing-class-data", "class data required for l in {" + list + "}");
    }
    std::vector<TraceTerm> out;
    for (const auto& [l, term] : terms_)
        if (std::abs(l) <= l_max)
            out.push_back(term);
    return out;
}

TracePoint theta_trace(const TraceSpectrum& spec, double t, i64 l_max)
{
    if (!(t > 0))
        throw Error("domain", "theta needs t > 0");
    TracePoint pt;
    pt.t = t;
    pt.l_max = l_max;
    auto terms = spec.terms(l_max);
    double sum = 0;
    for (const auto& term : terms)
        sum += term.weight * gaussian_g(t, 2 * std::log(term.n_l));
    pt.theta = sum;
    pt.terms = terms.size();
    const double pre = -t / 4 - 0.5 * std::log(4 * kPi * t);
    pt.tail_bound_pointwise = dropped_sum(spec.level(), l_max, t, [&](double x) { return pre - x * x / t; });
    pt.tail_bound = dropped_sum(spec.level(), l_max, t, [&](double x) { return -x * x / t - 2 * std::log(x); });
    return pt;
}

TraceCurve theta_curve(const TraceSpectrum& spec, const std::vector<double>& t_grid, i64 l_max)
{
    TraceCurve c;
    c.n = spec.level();
    c.l_max = l_max;
    for (double t : t_grid)
        c.points.push_back(theta_trace(spec, t, l_max));
    for (const auto& term : spec.terms(l_max))
        c.traces_used.push_back(term.l);
    return c;
}

ThetaIntegral theta_integral(const TraceSpectrum& spec, double t, i64 l_max)
{
    ThetaIntegral out;
    for (const auto& term : spec.terms(l_max))
        out.value += term.weight * g_integral(t, 2 * std::log(term.n_l));
    out.tail_bound = dropped_sum(spec.level(), l_max, t, [&](double x) { return -x * x / t - 2 * std::log(x); });
    return out;
}

RHValue RH_at_1(const TraceSpectrum& spec, double t, i64 l_max, double tolerance)
{
    RHValue r;
    r.t = t;
    r.l_max = l_max;
    const double vN = v_n(spec.level());
    ThetaIntegral ti = theta_integral(spec, t, l_max);
    r.value = -ti.value / (2 * vN);
    r.tail_bound = ti.tail_bound / (2 * vN);
    double cs = 0, qerr = 0;
    for (const auto& term : spec.terms(l_max)) {
        double e = 0;
        double osc = oscillatory_term(term.n_l, t, &e);
        cs += term.weight * (-kPi / (2 * term.n_l) + osc);
        qerr += term.weight * e;
    }
    r.value_class_sum = cs / (kPi * vN);
    r.quadrature_error = qerr / (kPi * vN);
    r.difference = r.value - r.value_class_sum;
    r.agree = std::abs(r.difference) <= tolerance;
    return r;
}

SelbergEstimate selberg_const_estimate(const TraceSpectrum& spec, double T, i64 l_max)
{
    if (!(T > 0))
        throw Error("domain", "T must be positive");
    SelbergEstimate e;
    e.T = T;
    e.l_max = l_max;
    ThetaIntegral a = theta_integral(spec, T, l_max);
    ThetaIntegral b = theta_integral(spec, 2 * T, l_max);
    e.value = a.value - T + 1;
    e.value_2T = b.value - 2 * T + 1;
    e.drift = e.value_2T - e.value;
    e.l_tail_bound = a.tail_bound;
    e.l_tail_bound_2T = b.tail_bound;
    e.note = "estimate only: truncation in T reported as drift, truncation in l as a bound; neither is a rigorous error bar";
    return e;
}

double class_number_regulator(i64 D)
{
    double sum = 0;
    for (const auto& cl : sl2_classes(D)) {
        if (cl.content != 1)
            continue;
        sum += static_cast<double>(hp_log_unit(cl.t0, Rational(cl.u0), BigInt(D)));
    }
    return sum;
}

SiegelSlope siegel_slope(i64 X_max, int points)
{
    if (X_max < 64 || X_max > 100000)
        throw Error("domain", "siegel slope needs 64 <= X_max <= 1e5");
    if (points < 3)
        throw Error("domain", "need at least three fit points");
    SiegelSlope out;
    out.X_max = X_max;
    std::vector<i64> marks;
    const double lo = static_cast<double>(X_max) / 32;
    for (int i = 0; i < points; ++i) {
        double x = lo * std::pow(32.0, static_cast<double>(i) / (points - 1));
        marks.push_back(static_cast<i64>(std::llround(x)));
    }
    marks.push_back(X_max / 2);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    double S = 0;
    size_t mi = 0;
    std::vector<SiegelPoint> all;
    for (i64 D = 2; D < X_max && mi < marks.size(); ++D) {
        while (mi < marks.size() && marks[mi] <= D)
            all.push_back({static_cast<double>(marks[mi++]), S});
        if ((D % 4 != 0 && D % 4 != 1) || is_square(D))
            continue;
        S += class_number_regulator(D) / std::sqrt(static_cast<double>(D));
        ++out.discriminants;
    }
    while (mi < marks.size())
        all.push_back({static_cast<double>(marks[mi++]), S});

    double half = 0, full = 0;
    for (size_t i = 0; i < all.size(); ++i) {
        if (i > 0 && all[i].S < all[i - 1].S)
            out.monotone = false;
        if (static_cast<i64>(all[i].X) == X_max / 2)
            half = all[i].S;
        if (static_cast<i64>(all[i].X) == X_max)
            full = all[i].S;
    }
    out.doubling_ratio = half > 0 ? full / half : 0;

    // least squares for log S = log C + e log X on the geometric grid
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& p : all) {
        if (p.X < lo - 0.5 || p.S <= 0)
            continue;
        double x = std::log(p.X), y = std::log(p.S);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    out.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.constant = std::exp((sy - out.exponent * sx) / m);
    out.points = all;
    return out;
}

} // namespace x1
