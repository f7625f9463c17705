#pragma once
#include <complex>
#include <functional>
#include <vector>

namespace x1 {

using cplx = std::complex<double>;

// Complex Gamma via Lanczos (g = 7); reflection for Re(z) < 1/2.
cplx lgamma_c(cplx z);
cplx gamma_c(cplx z);
cplx rgamma_c(cplx z); // 1/Gamma, entire

// Hurwitz zeta sum_{j>=0} (a+j)^{-s}, Re(s) > 1 or any s != 1 through Euler-Maclaurin continuation.
cplx hurwitz_zeta(cplx s, double a);
cplx riemann_zeta(cplx s);

// exp(x^2) erfc(x)
double erfcx(double x);

// Adaptive Gauss-Kronrod (7/15) on [a,b] for complex integrands; err receives the estimate.
cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b, double abs_tol, double rel_tol,
                  double* err = nullptr, int max_depth = 40);
double integrate_gk_real(const std::function<double(double)>& f, double a, double b, double abs_tol,
                         double rel_tol, double* err = nullptr, int max_depth = 40);

// Double-exponential rule on (0,1) with endpoint singularities allowed.
cplx integrate_de01(const std::function<cplx(double)>& f, double tol, double* err = nullptr);

// Chebyshev interpolant of a complex function on [a,b].
class Chebyshev {
public:
    Chebyshev() = default;
    Chebyshev(const std::function<cplx(double)>& f, double a, double b, int n);
    cplx operator()(double x) const;
    double a() const { return a_; }
    double b() const { return b_; }

private:
    double a_ = 0, b_ = 1;
    std::vector<cplx> c_;
};

// Neville extrapolation of samples (h_i, y_i) to h = 0.
double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& y);

} // namespace x1
