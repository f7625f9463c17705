#pragma once
#include <boost/multiprecision/mpfr.hpp>

#include "x1/arith.hpp"

namespace x1 {

using HP = boost::multiprecision::mpfr_float;

// Decimal digits for the extended-precision kernel (ARAKELOV_X1_PRECISION, default 50).
unsigned working_digits();

// Sets the mpfr default precision for the lifetime of the object.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

HP hp_from(const Rational& q);
HP hp_from(const BigInt& z);
HP hp_pi();
HP hp_euler();
HP hp_log(i64 n);

// log((t + u*sqrt(D))/2), all arguments exact
HP hp_log_unit(const BigInt& t, const Rational& u, const BigInt& D);

HP hp_zeta(const HP& s);
HP hp_gamma(const HP& s);
// zeta'(2) by Euler-Maclaurin on sum log n / n^2
HP hp_zeta_prime2();

} // namespace x1
