#include "x1/hp.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <vector>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "x1/error.hpp"

namespace x1 {

unsigned working_digits()
{
    static const unsigned digits = [] {
        const char* env = std::getenv("ARAKELOV_X1_PRECISION");
        if (!env)
            return 50u;
        int d = std::atoi(env);
        if (d < 20 || d > 2000)
            throw Error("bad-precision", "ARAKELOV_X1_PRECISION must lie in [20, 2000]");
        return static_cast<unsigned>(d);
    }();
    return digits;
}

namespace {

// Boost starts mpfr_float at 20 digits; start at the working precision instead.
const bool precision_initialized = [] {
    try {
        HP::default_precision(working_digits());
    } catch (const Error&) {
        HP::default_precision(50);
    }
    return true;
}();

} // namespace

PrecisionScope::PrecisionScope(unsigned digits) : saved_(HP::default_precision())
{
    HP::default_precision(digits);
}

PrecisionScope::~PrecisionScope() { HP::default_precision(saved_); }

HP hp_from(const Rational& q)
{
    return HP(boost::multiprecision::numerator(q).str()) / HP(boost::multiprecision::denominator(q).str());
}

HP hp_from(const BigInt& z) { return HP(z.str()); }

HP hp_pi() { return boost::math::constants::pi<HP>(); }
HP hp_euler() { return boost::math::constants::euler<HP>(); }
HP hp_log(i64 n) { return log(HP(n)); }

HP hp_log_unit(const BigInt& t, const Rational& u, const BigInt& D)
{
    return log((hp_from(t) + hp_from(u) * sqrt(hp_from(D))) / 2);
}

HP hp_zeta(const HP& s) { return boost::math::zeta(s); }
HP hp_gamma(const HP& s) { return boost::math::tgamma(s); }

HP hp_zeta_prime2()
{
    // -zeta'(2) = sum_{n>=1} log n / n^2; direct part up to M-1, then Euler-Maclaurin from M.
    // d^k/dx^k [x^-2 log x] = (-1)^k (2)_k x^{-2-k} [log x - sum_{j<k} 1/(2+j)]
    static std::mutex mtx;
    static std::map<unsigned, HP> cache;
    std::lock_guard<std::mutex> lock(mtx);
    unsigned digits = HP::default_precision();
    auto it = cache.find(digits);
    if (it != cache.end())
        return it->second;

    const long M = 40 + static_cast<long>(digits);
    HP sum = 0;
    for (long n = 2; n < M; ++n)
        sum += log(HP(n)) / (HP(n) * n);
    HP x = M;
    HP lx = log(x);
    auto deriv = [&](int k) {
        HP poch = 1, h = 0;
        for (int j = 0; j < k; ++j) {
            poch *= 2 + j;
            h += HP(1) / (2 + j);
        }
        HP v = poch * pow(x, -2 - k) * (lx - h);
        return (k % 2) ? HP(-v) : v;
    };
    // integral_M^inf log x / x^2 = (log M + 1)/M
    sum += (lx + 1) / x + deriv(0) / 2;
    HP eps = pow(HP(10), -static_cast<int>(digits) - 5);
    for (int j = 1; j < 400; ++j) {
        HP b = boost::math::bernoulli_b2n<HP>(j);
        HP fact = boost::math::factorial<HP>(2 * j);
        HP term = b / fact * deriv(2 * j - 1);
        sum -= term;
        if (abs(term) < eps)
            break;
    }
    HP result = -sum;
    cache.emplace(digits, result);
    return result;
}

} // namespace x1
