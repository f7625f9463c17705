#include "x1/numeric.hpp"

#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include "x1/error.hpp"

namespace x1 {

namespace {

const double kPi = 3.14159265358979323846;

const std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

} // namespace

cplx lgamma_c(cplx z)
{
    if (z.real() < 0.5) {
        // log Gamma(z) = log pi - log sin(pi z) - log Gamma(1-z)
        return std::log(kPi) - std::log(std::sin(kPi * z)) - lgamma_c(1.0 - z);
    }
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i)
        x += kLanczos[i] / (z + static_cast<double>(i));
    cplx t = z + 7.5;
    return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma_c(cplx z)
{
    if (z.real() < 0.5)
        return kPi / (std::sin(kPi * z) * gamma_c(1.0 - z));
    return std::exp(lgamma_c(z));
}

cplx rgamma_c(cplx z)
{
    if (z.real() < 0.5)
        return std::sin(kPi * z) * gamma_c(1.0 - z) / kPi;
    return std::exp(-lgamma_c(z));
}

cplx hurwitz_zeta(cplx s, double a)
{
    if (std::abs(s - 1.0) < 1e-14)
        throw Error("pole", "Hurwitz zeta at s = 1");
    // shift so the Euler-Maclaurin tail starts far enough out
    const double start = std::max(20.0, std::abs(s) + 20.0);
    cplx sum = 0;
    double x = a;
    while (x < start) {
        sum += std::exp(-s * std::log(x));
        x += 1.0;
    }
    cplx xs = std::exp(-s * std::log(x));
    sum += x * xs / (s - 1.0) + 0.5 * xs;
    // - sum_j B_2j/(2j)! f^{(2j-1)}(x), f^{(m)} = (-1)^m (s)_m x^{-s-m}
    cplx poch = s; // (s)_1
    double xpow = 1.0 / x;
    double fact = 1.0;
    for (int j = 1; j <= 15; ++j) {
        int m = 2 * j - 1;
        fact *= (2.0 * j - 1) * (2.0 * j);
        cplx deriv = -poch * xs * xpow; // (-1)^m with m odd
        cplx term = boost::math::bernoulli_b2n<double>(j) / fact * deriv;
        sum -= term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            break;
        poch *= (s + static_cast<double>(m)) * (s + static_cast<double>(m + 1));
        xpow /= x * x;
    }
    return sum;
}

cplx riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

double erfcx(double x)
{
    if (x < 25.0)
        return std::exp(x * x) * std::erfc(x);
    // continued fraction tail, accurate for large x
    double r = 0;
    for (int k = 60; k >= 1; --k)
        r = (k / 2.0) / (x + r);
    return 1.0 / (std::sqrt(kPi) * (x + r));
}

namespace {

template <class T>
T gk_rec(const std::function<T(double)>& f, double a, double b, double abs_tol, double rel_tol, int depth,
         double& err_acc)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
    T k = f(c) * wk[0];
    T g = f(c) * wg[0];
    for (size_t i = 1; i < xk.size(); ++i) {
        T fp = f(c + h * xk[i]);
        T fm = f(c - h * xk[i]);
        k += (fp + fm) * wk[i];
        if (i % 2 == 0)
            g += (fp + fm) * wg[i / 2];
    }
    k *= h;
    g *= h;
    double e = std::abs(k - g);
    if (e <= std::max(abs_tol, rel_tol * std::abs(k)) || depth <= 0) {
        err_acc += e;
        return k;
    }
    return gk_rec(f, a, c, abs_tol / 2, rel_tol, depth - 1, err_acc) +
           gk_rec(f, c, b, abs_tol / 2, rel_tol, depth - 1, err_acc);
}

} // namespace

cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b, double abs_tol, double rel_tol,
                  double* err, int max_depth)
{
    double e = 0;
    cplx r = gk_rec<cplx>(f, a, b, abs_tol, rel_tol, max_depth, e);
    if (err)
        *err = e;
    return r;
}

double integrate_gk_real(const std::function<double(double)>& f, double a, double b, double abs_tol,
                         double rel_tol, double* err, int max_depth)
{
    double e = 0;
    double r = gk_rec<double>(f, a, b, abs_tol, rel_tol, max_depth, e);
    if (err)
        *err = e;
    return r;
}

cplx integrate_de01(const std::function<cplx(double)>& f, double tol, double* err)
{
    static boost::math::quadrature::tanh_sinh<double> ts;
    double e = 0;
    cplx r = ts.integrate(f, 0.0, 1.0, tol, &e);
    if (err)
        *err = e;
    return r;
}

Chebyshev::Chebyshev(const std::function<cplx(double)>& f, double a, double b, int n) : a_(a), b_(b), c_(n)
{
    std::vector<cplx> v(n);
    for (int k = 0; k < n; ++k) {
        double x = std::cos(kPi * (k + 0.5) / n);
        v[k] = f(0.5 * (a + b) + 0.5 * (b - a) * x);
    }
    for (int j = 0; j < n; ++j) {
        cplx s = 0;
        for (int k = 0; k < n; ++k)
            s += v[k] * std::cos(kPi * j * (k + 0.5) / n);
        c_[j] = s * (2.0 / n);
    }
    c_[0] *= 0.5;
}

cplx Chebyshev::operator()(double x) const
{
    double u = (2 * x - a_ - b_) / (b_ - a_);
    cplx b1 = 0, b2 = 0;
    for (size_t j = c_.size(); j-- > 1;) {
        cplx t = 2 * u * b1 - b2 + c_[j];
        b2 = b1;
        b1 = t;
    }
    return u * b1 - b2 + c_[0];
}

double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& y)
{
    std::vector<double> p = y;
    size_t n = h.size();
    for (size_t m = 1; m < n; ++m)
        for (size_t i = 0; i + m < n; ++i)
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
    return p[0];
}

} // namespace x1
