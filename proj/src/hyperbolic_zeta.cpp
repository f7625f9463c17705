#include "x1/hyperbolic_zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "x1/context.hpp"
#include "x1/error.hpp"

namespace x1 {

namespace {

using i128 = __int128;

double binom(int n, int k) { return boost::math::binomial_coefficient<double>(n, k); }

// Bernoulli number B_n with B_1 = -1/2
double bernoulli(int n)
{
    if (n == 0)
        return 1;
    if (n == 1)
        return -0.5;
    if (n % 2)
        return 0;
    return boost::math::bernoulli_b2n<double>(n / 2);
}

double bernoulli_poly(int n, double x)
{
    double r = 0;
    for (int k = 0; k <= n; ++k)
        r += binom(n, k) * bernoulli(k) * std::pow(x, n - k);
    return r;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

i128 ceil_div(i128 a, i128 b) // b > 0
{
    i128 q = a / b;
    if (q * b < a)
        ++q;
    return q;
}

// I(s, rho) = int_0^1 w^{2s-2} (1 + rho w)^{-s} dw
cplx landau_integral(cplx s, double rho)
{
    auto f = [&](double w) -> cplx {
        if (w <= 0)
            return 0;
        return std::exp((2.0 * s - 2.0) * std::log(w) - s * std::log1p(rho * w));
    };
    return integrate_de01(f, 1e-15);
}

// g(k) = pref X^{-s} Y^{-s} and its derivatives through Leibniz.
struct RowKernel {
    cplx s;
    double log_pref = 0; // log(C N^2)
    std::vector<cplx> poch; // (s)_i

    RowKernel(cplx s_, double cn2, int max_m) : s(s_), log_pref(std::log(cn2)), poch(max_m + 1)
    {
        poch[0] = 1;
        for (int i = 1; i <= max_m; ++i)
            poch[i] = poch[i - 1] * (s + static_cast<double>(i - 1));
    }
    cplx value(double X, double Y) const { return std::exp(-s * (log_pref + std::log(X) + std::log(Y))); }
    cplx deriv(int m, double X, double Y, cplx base) const
    {
        cplx sum = 0;
        double ix = 1.0 / X, iy = 1.0 / Y;
        for (int i = 0; i <= m; ++i)
            sum += binom(m, i) * poch[i] * poch[m - i] * std::pow(ix, i) * std::pow(iy, m - i);
        return (m % 2 ? -1.0 : 1.0) * sum * base;
    }
};

const std::vector<i64>& mobius_prefix(i64 n)
{
    static std::mutex mtx;
    static std::vector<i64> table; // stored as mu values
    static i64 size = 0;
    std::lock_guard<std::mutex> lock(mtx);
    if (size < n) {
        auto mu = mobius_table(n);
        table.assign(mu.begin(), mu.end());
        size = n;
    }
    return table;
}

} // namespace

RegionSpec make_region(const ClassRep& rep, i64 n, i64 u)
{
    if (gcd(u, n) != 1 || u <= 0 || u >= n)
        throw Error("bad-residue", "need 0 < u < N with gcd(u, N) = 1");
    RegionSpec r;
    r.q = rep.q;
    r.unit = rep.unit;
    r.level = n;
    r.u = u;
    r.u_prime = mod(-u, n);
    r.A = rep.q.a.convert_to<i64>();
    r.B = rep.q.b.convert_to<i64>();
    r.C = rep.q.c.convert_to<i64>();
    if (!(r.A > 0 && r.B < 0 && r.C > 0))
        throw Error("not-normalized", "cone needs a > 0, b < 0, c > 0: " + rep.q.str());
    const BigInt& t = rep.unit.t_q;
    const BigInt& U = rep.unit.U;
    const i64 rr = rep.unit.r;
    r.E = Rational(rr * t + BigInt(r.B) * U, 2 * BigInt(r.C) * U);
    r.e_num = boost::multiprecision::numerator(r.E).convert_to<i64>();
    r.e_den = boost::multiprecision::denominator(r.E).convert_to<i64>();
    const i64 D = r.B * r.B - 4 * r.A * r.C;
    r.sqrt_disc = std::sqrt(static_cast<double>(D));
    r.theta = (r.B + r.sqrt_disc) / (2.0 * r.C);
    r.theta_bar = (r.B - r.sqrt_disc) / (2.0 * r.C);
    r.eps = rep.unit.eps_d;
    double uq = to_double(rep.unit.u_q);
    r.e1 = 1.0 / (r.C * uq * r.eps);
    r.e2 = r.e1 + r.sqrt_disc / r.C;
    // E_q > theta, decided exactly: 2 C u_q E - B = t_q > u_q sqrt(D)
    if (!(t * t > D * U * U / BigInt(rr * rr)))
        throw Error("internal-consistency", "cone boundary does not exceed theta");
    return r;
}

bool in_region(const RegionSpec& r, i64 m, i64 n)
{
    if (n <= 0 || mod(m, r.level) != 0 || mod(n - r.u, r.level) != 0)
        return false;
    return static_cast<i128>(r.e_den) * m >= static_cast<i128>(r.e_num) * n;
}

i64 region_value(const RegionSpec& r, i64 m, i64 n)
{
    i128 v = static_cast<i128>(r.A) * n * n - static_cast<i128>(r.B) * n * m + static_cast<i128>(r.C) * m * m;
    return static_cast<i64>(v);
}

std::vector<std::pair<i64, i64>> region_points(const RegionSpec& r, i64 bound)
{
    std::vector<std::pair<i64, i64>> pts;
    const i64 N = r.level;
    double qe = r.C * r.e1 * r.e2;
    for (i64 n = r.u;; n += N) {
        if (qe * n * n > bound + 1e-9 * bound + 1)
            break;
        i64 k0 = static_cast<i64>(ceil_div(static_cast<i128>(r.e_num) * n, static_cast<i128>(r.e_den) * N));
        for (i64 k = k0;; ++k) {
            i64 v = region_value(r, N * k, n);
            if (v > bound)
                break;
            pts.push_back({N * k, n});
        }
    }
    return pts;
}

CuValue cu(i64 n, i64 u, cplx s, i64 tail_terms)
{
    if (s.real() <= 0.5)
        throw Error("divergence", "c_u(s) needs Re(s) > 1/2");
    if (gcd(u, n) != 1)
        throw Error("bad-residue", "u must be a unit mod N");
    const auto& mu = mobius_prefix(tail_terms);
    i64 target = n == 1 ? 0 : inv_mod(mod(u, n), n);
    CuValue r;
    cplx sum = 0;
    for (i64 d = (target == 0 ? n : target); d <= tail_terms; d += n) {
        if (mu[d] == 0)
            continue;
        sum += static_cast<double>(mu[d]) * std::exp(-2.0 * s * std::log(static_cast<double>(d)));
    }
    r.value = sum;
    r.terms = tail_terms;
    double sig = 2 * s.real();
    r.tail_bound = std::pow(static_cast<double>(tail_terms), 1 - sig) / (sig - 1);
    return r;
}

std::string method_name(ZetaMethod m) { return m == ZetaMethod::direct_sum ? "direct_sum" : "mellin_split"; }

ZetaValue region_zeta_direct(const RegionSpec& r, cplx s, const DirectOptions& opt)
{
    if (s.real() <= 1)
        throw Error("divergence", "direct summation needs Re(s) > 1");
    const i64 N = r.level;
    const int M = opt.direct_terms;
    const int em = opt.em_order;
    const int P = opt.asym_order;
    RowKernel ker(s, static_cast<double>(r.C) * N * N, std::max(2 * em + 1, P));

    // Chebyshev interpolant of I(s, rho) in z = log(1 + rho), rho in [0, eps^2 - 1]
    const double zmax = 2 * std::log(r.eps);
    auto Iz = [&](double z) { return landau_integral(s, std::expm1(z)); };
    Chebyshev cheb;
    for (int nodes = 64;; nodes *= 2) {
        cheb = Chebyshev(Iz, 0.0, zmax, nodes);
        double worst = 0;
        for (double f : {0.137, 0.591, 0.943}) {
            cplx ref = Iz(f * zmax);
            worst = std::max(worst, std::abs(cheb(f * zmax) - ref) / std::abs(ref));
        }
        if (worst < 1e-13 || nodes >= 512)
            break;
    }

    // rows summed directly: the closed-form tail needs (n/N)(E - theta) large
    i64 J = std::max<i64>(opt.height_bound, static_cast<i64>(std::ceil(60.0 / r.e1)));
    J = std::min<i64>(J, 400000);

    cplx total = 0;
    double err = 0;
    const double ned = static_cast<double>(N) * r.e_den;
    for (i64 j = 0; j < J; ++j) {
        const i64 n = r.u + N * j;
        const i128 k0 = ceil_div(static_cast<i128>(r.e_num) * n, static_cast<i128>(r.e_den) * N);
        const i128 num0 = static_cast<i128>(N) * k0 * r.e_den - static_cast<i128>(r.e_num) * n;
        const double xb = static_cast<double>(n) / N * r.e1;
        const double d = static_cast<double>(n) * r.sqrt_disc / (static_cast<double>(N) * r.C);
        cplx row = 0;
        for (int k = 0; k < M; ++k) {
            double X = xb + (static_cast<double>(num0) + static_cast<double>(k) * ned) / ned;
            row += ker.value(X, X + d);
        }
        double XK = xb + (static_cast<double>(num0) + static_cast<double>(M) * ned) / ned;
        double YK = XK + d;
        cplx base = ker.value(XK, YK);
        cplx I = cheb(std::log1p(d / XK));
        row += std::exp(-s * ker.log_pref + (1.0 - 2.0 * s) * std::log(XK)) * I;
        row += 0.5 * base;
        for (int i = 1; i <= em; ++i)
            row -= bernoulli(2 * i) / factorial(2 * i) * ker.deriv(2 * i - 1, XK, YK, base);
        err += std::abs(bernoulli(2 * em + 2) / factorial(2 * em + 2) * ker.deriv(2 * em + 1, XK, YK, base));
        total += row;
    }

    // rows j >= J: integral from the exact boundary plus Bernoulli-polynomial corrections, summed with
    // Hurwitz zeta over residues of j modulo the period of the boundary offset
    std::vector<cplx> G(P);
    {
        cplx base = ker.value(r.e1, r.e2);
        for (int m = 0; m < P; ++m)
            G[m] = ker.deriv(m, r.e1, r.e2, base);
    }
    cplx Gint = std::exp(-s * ker.log_pref + (1.0 - 2.0 * s) * std::log(r.e1)) *
                landau_integral(s, r.eps * r.eps - 1.0);
    const double a0 = static_cast<double>(r.u) / N + static_cast<double>(J);
    cplx tail = Gint * hurwitz_zeta(2.0 * s - 1.0, a0);
    const i64 Q = r.e_den;
    cplx last = 0;
    for (i64 rho = 0; rho < Q; ++rho) {
        const i64 j = J + rho;
        const i64 n = r.u + N * j;
        i128 md = static_cast<i128>(r.e_den) * N;
        i128 off = (-(static_cast<i128>(r.e_num) * n)) % md;
        if (off < 0)
            off += md;
        const double delta = static_cast<double>(off) / static_cast<double>(md);
        const double a = (static_cast<double>(r.u) / N + static_cast<double>(j)) / Q;
        for (int i = 1; i <= P; ++i) {
            cplx sig = 2.0 * s + static_cast<double>(i - 1);
            cplx term = bernoulli_poly(i, delta) / factorial(i) * G[i - 1] *
                        std::exp(-sig * std::log(static_cast<double>(Q))) * hurwitz_zeta(sig, a);
            tail -= term;
            if (i == P)
                last += term;
        }
    }
    total += tail;
    err += std::abs(last) + 1e-14 * std::abs(total);

    ZetaValue z;
    z.s = s;
    z.value = total;
    z.method = ZetaMethod::direct_sum;
    z.error_estimate = err;
    z.truncation.rows_direct = J;
    z.truncation.direct_terms = M;
    z.truncation.em_order = em;
    z.truncation.asym_order = P;
    z.truncation.period = Q;
    return z;
}

double theta_series(const RegionSpec& r, double t)
{
    if (!(t > 0))
        throw Error("bad-argument", "theta series needs t > 0");
    const i64 N = r.level;
    const double cutoff = 40.0 + std::log1p(1.0 / t);
    const double qmax = cutoff / t;
    const double qe = r.C * r.e1 * r.e2;
    double sum = 0, comp = 0;
    for (i64 n = r.u;; n += N) {
        if (qe * static_cast<double>(n) * n > qmax)
            break;
        i64 k0 = static_cast<i64>(ceil_div(static_cast<i128>(r.e_num) * n, static_cast<i128>(r.e_den) * N));
        double row = 0;
        for (i64 k = k0;; ++k) {
            double v = static_cast<double>(region_value(r, N * k, n));
            if (v > qmax)
                break;
            row += std::exp(-t * v);
        }
        // Kahan summation across rows
        double y = row - comp;
        double tt = sum + y;
        comp = (tt - sum) - y;
        sum = tt;
    }
    return sum;
}

std::vector<double> default_theta_grid(double t_min, double t_max, int points)
{
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = t_min * std::pow(t_max / t_min, static_cast<double>(i) / (points - 1));
    return g;
}

namespace {

struct RawFit {
    std::vector<double> betas;
    double rms = 0;
    double max_abs = 0;
    double condition = 0;
};

RawFit fit_columns(const std::vector<double>& grid, const std::vector<double>& vals, int k)
{
    const int cols = k + 3;
    const int rows = static_cast<int>(grid.size());
    if (rows < cols)
        throw Error("ill-conditioned-fit", "fewer grid points than coefficients");
    Eigen::MatrixXd Am(rows, cols);
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) {
        y(i) = grid[i] * vals[i];
        for (int c = 0; c < cols; ++c)
            Am(i, c) = std::pow(grid[i], 0.5 * c);
    }
    Eigen::VectorXd scale(cols);
    for (int c = 0; c < cols; ++c) {
        scale(c) = Am.col(c).cwiseAbs().maxCoeff();
        Am.col(c) /= scale(c);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Am, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd x = svd.solve(y);
    RawFit f;
    const auto& sv = svd.singularValues();
    f.condition = sv(0) / sv(sv.size() - 1);
    f.betas.resize(cols);
    for (int c = 0; c < cols; ++c)
        f.betas[c] = x(c) / scale(c);
    Eigen::VectorXd res = Am * x - y;
    f.rms = std::sqrt(res.squaredNorm() / rows);
    for (int i = 0; i < rows; ++i)
        f.max_abs = std::max(f.max_abs, std::abs(res(i)) / grid[i]);
    return f;
}

} // namespace

ThetaFit theta_expansion_fit(const RegionSpec& r, int k, const std::vector<double>& grid_in)
{
    if (k < -1)
        throw Error("bad-argument", "fit order must be at least -1");
    std::vector<double> grid = grid_in.empty() ? default_theta_grid() : grid_in;
    std::vector<double> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        vals[i] = theta_series(r, grid[i]);
    RawFit main = fit_columns(grid, vals, k);
    ThetaFit f;
    f.betas = main.betas;
    f.grid = grid;
    f.residual_norm = main.rms;
    f.max_residual = main.max_abs;
    f.k = k;
    f.condition = main.condition;
    f.high_order_refused = main.condition > 1e13;

    double b = main.betas[0], spread = 0;
    auto consider = [&](const RawFit& g) { spread = std::max(spread, std::abs(g.betas[0] - b) / std::abs(b)); };
    if (k - 1 >= -1)
        consider(fit_columns(grid, vals, k - 1));
    if (static_cast<int>(grid.size()) >= k + 4)
        consider(fit_columns(grid, vals, k + 1));
    for (int parity : {0, 1}) {
        std::vector<double> g2, v2;
        for (size_t i = parity; i < grid.size(); i += 2) {
            g2.push_back(grid[i]);
            v2.push_back(vals[i]);
        }
        if (static_cast<int>(g2.size()) >= k + 3)
            consider(fit_columns(g2, v2, k));
    }
    f.beta_m2_stability = spread;
    return f;
}

ContinuedRegion::ContinuedRegion(const RegionSpec& r, const ContinuationOptions& opt) : opt_(opt)
{
    fit_ = theta_expansion_fit(r, opt.k, opt.grid);
    if (fit_.high_order_refused)
        throw Error("ill-conditioned-fit",
                    "theta fit condition number " + std::to_string(fit_.condition) + " too large");
    // upper cutoff where theta drops below 1e-18
    t_max_ = 1.0;
    while (theta_series(r, t_max_) > 1e-18)
        t_max_ *= 1.5;

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
    auto build = [&](double va, double vb, std::vector<Node>& out) {
        int panels = std::max(1, static_cast<int>(std::ceil((vb - va) / opt.panel)));
        double h = (vb - va) / panels;
        for (int p = 0; p < panels; ++p) {
            double c = va + (p + 0.5) * h, hh = 0.5 * h;
            for (size_t i = 0; i < xk.size(); ++i) {
                double wgi = (i % 2 == 0) ? wg[i / 2] : 0.0;
                for (int sgn : {1, -1}) {
                    if (i == 0 && sgn < 0)
                        continue;
                    double v = c + sgn * hh * xk[i];
                    out.push_back(Node{std::exp(v), hh * wk[i], hh * wgi});
                }
            }
        }
    };
    build(std::log(opt.t_lo), 0.0, low_);
    build(0.0, std::log(t_max_), high_);
    for (auto& nd : low_) {
        double fitv = 0;
        for (int j = -2; j <= fit_.k; ++j)
            fitv += fit_.beta(j) * std::pow(nd.t, 0.5 * j);
        low_val_.push_back(theta_series(r, nd.t) - fitv);
    }
    for (auto& nd : high_)
        high_val_.push_back(theta_series(r, nd.t));
    dropped_ = fit_.max_residual;
}

ZetaValue ContinuedRegion::eval(cplx s) const
{
    cplx rg = rgamma_c(s);
    cplx expl = 0;
    for (int j = -2; j <= fit_.k; ++j) {
        cplx den = s + 0.5 * j;
        if (std::abs(den) < 1e-12) {
            if (std::abs(rg) > 1e-12 || j < 0)
                throw Error("pole", "explicit part has a pole at s = " + std::to_string(-0.5 * j) +
                                        " with residue " + std::to_string(fit_.beta(j) * std::real(rg)));
            continue; // 1/Gamma vanishes
        }
        expl += fit_.beta(j) / den;
    }
    cplx lowk = 0, lowg = 0, highk = 0, highg = 0;
    for (size_t i = 0; i < low_.size(); ++i) {
        cplx f = std::exp(s * std::log(low_[i].t)) * low_val_[i];
        lowk += low_[i].w_k * f;
        lowg += low_[i].w_g * f;
    }
    for (size_t i = 0; i < high_.size(); ++i) {
        cplx f = std::exp(s * std::log(high_[i].t)) * high_val_[i];
        highk += high_[i].w_k * f;
        highg += high_[i].w_g * f;
    }
    ZetaValue z;
    z.s = s;
    z.method = ZetaMethod::mellin_split;
    z.value = rg * (expl + lowk + highk);
    double sig = std::max(s.real(), 0.05);
    double err = std::abs(lowk - lowg) + std::abs(highk - highg) + dropped_ * std::pow(opt_.t_lo, sig) / sig;
    z.error_estimate = std::abs(rg) * err + 1e-14 * std::abs(z.value);
    z.truncation.t_lo = opt_.t_lo;
    z.truncation.t_hi = t_max_;
    z.truncation.fit_order = fit_.k;
    return z;
}

ZetaFunction::ZetaFunction(i64 n, i64 l, i64 u, const ClassOptions& copt)
    : n_(n), l_(l), u_(u), classes_(enumerate_classes(n, l, copt))
{
    for (const auto& rep : classes_.reps) {
        regions_.push_back(make_region(rep, n, u));
        regions_.push_back(make_region(rep, n, mod(-u, n)));
    }
}

ZetaValue ZetaFunction::direct(cplx s, const DirectOptions& opt) const
{
    ZetaValue z;
    z.s = s;
    z.value = 0;
    for (const auto& r : regions_) {
        ZetaValue v = region_zeta_direct(r, s, opt);
        z.value += v.value;
        z.error_estimate += v.error_estimate;
        z.truncation.rows_direct = std::max(z.truncation.rows_direct, v.truncation.rows_direct);
        z.truncation.period = std::max(z.truncation.period, v.truncation.period);
        z.truncation.direct_terms = v.truncation.direct_terms;
        z.truncation.em_order = v.truncation.em_order;
        z.truncation.asym_order = v.truncation.asym_order;
    }
    return z;
}

ZetaValue ZetaFunction::continued(cplx s, const ContinuationOptions& opt) const
{
    bool same = !cont_.empty() && cont_opt_.k == opt.k && cont_opt_.grid == opt.grid && cont_opt_.t_lo == opt.t_lo &&
                cont_opt_.panel == opt.panel;
    if (!same) {
        cont_.clear();
        for (const auto& r : regions_)
            cont_.push_back(std::make_unique<ContinuedRegion>(r, opt));
        cont_opt_ = opt;
    }
    ZetaValue z;
    z.s = s;
    z.method = ZetaMethod::mellin_split;
    z.value = 0;
    for (const auto& c : cont_) {
        ZetaValue v = c->eval(s);
        z.value += v.value;
        z.error_estimate += v.error_estimate;
        z.truncation = v.truncation;
    }
    return z;
}

HP ZetaFunction::residue_closed() const
{
    HP sum = 0;
    HP sd = sqrt(HP(classes_.disc));
    for (const auto& rep : classes_.reps)
        sum += 2 * rep.unit.log_eps;
    return sum / (HP(n_ * n_) * sd);
}

std::vector<double> ZetaFunction::class_residues() const
{
    std::vector<double> out;
    double sd = std::sqrt(static_cast<double>(classes_.disc));
    for (const auto& rep : classes_.reps)
        out.push_back(2 * rep.unit.log_eps_d / (static_cast<double>(n_ * n_) * sd));
    return out;
}

double ZetaFunction::residue_extrapolated(size_t i, const std::vector<double>& h_in) const
{
    std::vector<double> h = h_in;
    if (h.empty())
        for (int j = 1; j <= 10; ++j)
            h.push_back(0.02 * j);
    std::vector<double> y;
    for (double hh : h) {
        cplx s = 1.0 + hh;
        cplx v = region_zeta_direct(regions_.at(2 * i), s).value + region_zeta_direct(regions_.at(2 * i + 1), s).value;
        y.push_back(hh * v.real());
    }
    return extrapolate_to_zero(h, y);
}

ZetaValue zeta_direct(i64 n, i64 l, i64 u, cplx s, i64 height_bound)
{
    ZetaFunction z(n, l, u);
    DirectOptions opt;
    opt.height_bound = height_bound;
    return z.direct(s, opt);
}

ZetaValue zeta_continued(i64 n, i64 l, i64 u, cplx s, int k)
{
    ZetaFunction z(n, l, u);
    ContinuationOptions opt;
    opt.k = k;
    return z.continued(s, opt);
}

HP weighted_residue(const ClassSet& set)
{
    ModulusContext ctx = build_context(set.level);
    HP sd = sqrt(HP(set.disc));
    HP sum = 0;
    for (const auto& rep : set.reps)
        sum += rep.unit.log_eps;
    HP vN = hp_pi() * hp_from(ctx.volume_over_pi());
    return 2 * sum / (hp_pi() * vN * sd);
}

HP weighted_residue(i64 n, i64 l) { return weighted_residue(enumerate_classes(n, l)); }

} // namespace x1
