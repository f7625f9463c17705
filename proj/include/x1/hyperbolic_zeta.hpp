#pragma once
#include <memory>
#include <string>
#include <vector>

#include "x1/forms.hpp"
#include "x1/hp.hpp"
#include "x1/numeric.hpp"

namespace x1 {

// Cone R^q_u(N) = {(m, n) : m = 0, n = u mod N, n > 0, m >= E_q n} attached to a normalized form q.
struct RegionSpec {
    FormN q;
    UnitData unit;
    i64 level = 0;
    i64 u = 0, u_prime = 0;
    Rational E;            // (t_q + B u_q) / (2 C u_q)
    i64 e_num = 0, e_den = 0; // E = e_num / e_den, lowest terms
    i64 A = 0, B = 0, C = 0;
    double sqrt_disc = 0;
    double theta = 0, theta_bar = 0; // q(n,-m) = C (m - theta n)(m - theta_bar n)
    double e1 = 0;         // E - theta = 1 / (C u_q eps_q)
    double e2 = 0;         // E - theta_bar
    double eps = 0;        // eps_q
};

RegionSpec make_region(const ClassRep& rep, i64 n, i64 u);
bool in_region(const RegionSpec& r, i64 m, i64 n);
// q(n, -m)
i64 region_value(const RegionSpec& r, i64 m, i64 n);
// Points of the cone with q(n, -m) <= bound, as (m, n).
std::vector<std::pair<i64, i64>> region_points(const RegionSpec& r, i64 bound);

struct CuValue {
    cplx value;
    double tail_bound = 0;
    i64 terms = 0;
};
// sum over d > 0, d u = 1 mod N of mu(d) d^{-2s}
CuValue cu(i64 n, i64 u, cplx s, i64 tail_terms = 1000000);

enum class ZetaMethod { direct_sum, mellin_split };
std::string method_name(ZetaMethod m);

struct ZetaTruncation {
    i64 rows_direct = 0;   // rows summed term by term
    int direct_terms = 0;  // terms per row before Euler-Maclaurin
    int em_order = 0;      // odd derivatives used per row
    int asym_order = 0;    // Bernoulli polynomial orders in the closed-form row tail
    i64 period = 0;        // period of the boundary offset in the row index
    double t_lo = 0, t_hi = 0; // Mellin split integration range
    int fit_order = 0;
};

struct ZetaValue {
    cplx s;
    cplx value;
    ZetaMethod method = ZetaMethod::direct_sum;
    double error_estimate = 0;
    ZetaTruncation truncation;
};

struct DirectOptions {
    i64 height_bound = 200;   // minimum number of rows summed directly
    int direct_terms = 16;
    int em_order = 4;
    int asym_order = 8;
};

// Sum of q(n,-m)^{-s} over one cone, Re(s) > 1.
ZetaValue region_zeta_direct(const RegionSpec& r, cplx s, const DirectOptions& opt = {});

// theta(t) = sum over the cone of exp(-t q(n,-m)), dropped tail below 1e-12 relative.
double theta_series(const RegionSpec& r, double t);

struct ThetaFit {
    std::vector<double> betas; // beta_{-2}, ..., beta_k
    std::vector<double> grid;
    double residual_norm = 0;  // rms of t*theta - fit
    double max_residual = 0;   // max |theta - fit| on the grid
    int k = 0;
    double condition = 0;
    double beta_m2_stability = 0; // relative spread of beta_{-2} across k-1, k+1 and grid halves
    bool high_order_refused = false;
    double beta(int j) const { return betas.at(static_cast<size_t>(j + 2)); }
};

std::vector<double> default_theta_grid(double t_min = 1e-6, double t_max = 1e-4, int points = 60);
ThetaFit theta_expansion_fit(const RegionSpec& r, int k, const std::vector<double>& grid);

struct ContinuationOptions {
    int k = 4;
    std::vector<double> grid;  // empty: default_theta_grid()
    double t_lo = 1e-4;        // lower end of the remainder integral
    double panel = 0.25;       // panel width in log t
};

// Mellin split of one cone with theta values cached on fixed Gauss-Kronrod panels.
class ContinuedRegion {
public:
    ContinuedRegion(const RegionSpec& r, const ContinuationOptions& opt = {});
    ZetaValue eval(cplx s) const;
    const ThetaFit& fit() const { return fit_; }
    double t_max() const { return t_max_; }

private:
    ContinuationOptions opt_;
    ThetaFit fit_;
    double t_max_ = 0;
    struct Node {
        double t, w_k, w_g;
    };
    std::vector<Node> low_;  // [t_lo, 1], remainder theta - fit
    std::vector<double> low_val_;
    std::vector<Node> high_; // [1, t_max], theta
    std::vector<double> high_val_;
    double dropped_ = 0;     // size of the neglected part below t_lo
};

// zeta_{u,N}(s, l) assembled over classes and both cones u, u'.
class ZetaFunction {
public:
    ZetaFunction(i64 n, i64 l, i64 u, const ClassOptions& copt = {});
    const ClassSet& classes() const { return classes_; }
    const std::vector<RegionSpec>& regions() const { return regions_; } // (q,u), (q,u') per class
    i64 level() const { return n_; }
    i64 trace() const { return l_; }
    i64 u() const { return u_; }

    ZetaValue direct(cplx s, const DirectOptions& opt = {}) const;
    ZetaValue continued(cplx s, const ContinuationOptions& opt = {}) const;
    // sum over classes of 2 log eps_q / (N^2 sqrt(l^2-4)), extended precision
    HP residue_closed() const;
    // per class: 2 log eps_q / (N^2 sqrt D)
    std::vector<double> class_residues() const;
    // (s-1) * (cone sums of class i) extrapolated to s = 1 from s = 1 + h
    double residue_extrapolated(size_t class_index, const std::vector<double>& h = {}) const;

private:
    i64 n_, l_, u_;
    ClassSet classes_;
    std::vector<RegionSpec> regions_;
    mutable std::vector<std::unique_ptr<ContinuedRegion>> cont_;
    mutable ContinuationOptions cont_opt_;
};

ZetaValue zeta_direct(i64 n, i64 l, i64 u, cplx s, i64 height_bound = 200);
ZetaValue zeta_continued(i64 n, i64 l, i64 u, cplx s, int k = 4);

// (2 / (pi v_N)) sum_q log(eps_q) / sqrt(l^2 - 4)
HP weighted_residue(i64 n, i64 l);
HP weighted_residue(const ClassSet& set);

} // namespace x1
