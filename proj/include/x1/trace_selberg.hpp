#pragma once
#include <map>
#include <string>
#include <vector>

#include "x1/arith.hpp"
#include "x1/forms.hpp"

namespace x1 {

// g(t, w) = (4 pi t)^{-1/2} exp(-t/4 - w^2/(4t))
double gaussian_g(double t, double w);

// int_0^t g(xi, w) dxi through erfcx; t = inf gives exp(-|w|/2).
double g_integral(double t, double w);
// Same integral by adaptive quadrature in sqrt(xi), used as a cross-check.
double g_integral_quadrature(double t, double w, double* err = nullptr);

// (1/4) int h(t,r) / (1/4 + r^2) exp(-2 i r log n) dr with h = exp(-t(1/4 + r^2)),
// quadrature on [-R, R] with the Gaussian below 1e-18 outside.
double oscillatory_term(double n_l, double t, double* err = nullptr);

// A_l(t) = -pi/(2 n_l) + oscillatory term = -(pi/2) int_0^t g(xi, 2 log n_l) dxi
double A_l(double n_l, double t);
// pi / (2 log^2 n) * n^{-log n / t}
double A_l_bound(double n_l, double t);

// (l + sqrt(l^2 - 4)) / 2 for |l| > 2, taken at |l|
double eigenvalue_n(i64 l);

// Upper bound for the class weight of trace l at level N (see TraceSpectrum::weight).
double class_weight_bound(i64 n, i64 l);

struct TraceTerm {
    i64 l = 0;
    i64 disc = 0;
    size_t classes = 0;
    double n_l = 0;
    double weight = 0;      // sum over classes of 2 log eps_q / sqrt(l^2 - 4)
    double weight_bound = 0;
};

// Class data for all traces |l| <= l_max with l = 2 mod N, cached and extended on demand.
class TraceSpectrum {
public:
    explicit TraceSpectrum(i64 n, i64 l_max = 0);
    i64 level() const { return n_; }
    i64 l_max() const { return l_max_; }
    void extend(i64 l_max);
    // Terms with |l| <= l_max; throws "missing-class-data" if not cached.
    std::vector<TraceTerm> terms(i64 l_max) const;
    const std::map<i64, TraceTerm>& all() const { return terms_; }

private:
    i64 n_;
    i64 l_max_ = 0;
    std::map<i64, TraceTerm> terms_;
};

// N * ceil(40 / N) + 2
i64 default_l_max(i64 n);

struct TracePoint {
    double t = 0;
    double theta = 0;
    i64 l_max = 0;
    double tail_bound = 0;           // dropped |l| > l_max: sum of W^bd times the A_l bound scaled to int_0^t g
    double tail_bound_pointwise = 0; // dropped |l| > l_max: sum of W^bd g(t, 2 log n_l)
    size_t terms = 0;
};

struct TraceCurve {
    i64 n = 0;
    i64 l_max = 0;
    std::vector<TracePoint> points;
    std::vector<i64> traces_used;
};

TracePoint theta_trace(const TraceSpectrum& spec, double t, i64 l_max);
TraceCurve theta_curve(const TraceSpectrum& spec, const std::vector<double>& t_grid, i64 l_max);

// int_0^t Theta with its tail bound
struct ThetaIntegral {
    double value = 0;
    double tail_bound = 0;
};
ThetaIntegral theta_integral(const TraceSpectrum& spec, double t, i64 l_max);

struct RHValue {
    double t = 0;
    i64 l_max = 0;
    double value = 0;        // -(1/(2 v_N)) int_0^t Theta
    double value_class_sum = 0; // (1/(pi v_N)) sum W_l A_l(t), A_l from the oscillatory integral
    double difference = 0;
    double quadrature_error = 0;
    double tail_bound = 0;
    bool agree = true;       // |difference| <= tolerance
};

RHValue RH_at_1(const TraceSpectrum& spec, double t, i64 l_max, double tolerance = 1e-6);

struct SelbergEstimate {
    double T = 0;
    i64 l_max = 0;
    double value = 0;        // int_0^T (Theta - 1) + 1
    double value_2T = 0;
    double drift = 0;        // value_2T - value
    double l_tail_bound = 0; // tail bound of int_0^T Theta from |l| > l_max
    double l_tail_bound_2T = 0;
    std::string note;
};

SelbergEstimate selberg_const_estimate(const TraceSpectrum& spec, double T, i64 l_max);

struct SiegelPoint {
    double X = 0;
    double S = 0;
};

struct SiegelSlope {
    i64 X_max = 0;
    double exponent = 0;
    double constant = 0;    // S ~ constant * X^exponent
    std::vector<SiegelPoint> points;
    bool monotone = true;
    double doubling_ratio = 0; // S(X_max) / S(X_max / 2)
    i64 discriminants = 0;
};

// S(X) = sum over nonsquare 0 < D < X, D = 0,1 mod 4, of h(D) log eps_0(D) / sqrt(D), h counting primitive classes.
SiegelSlope siegel_slope(i64 X_max, int points = 12);
// h(D) log eps_0(D) summed over primitive reduction cycles
double class_number_regulator(i64 D);

} // namespace x1
