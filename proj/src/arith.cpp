#include "x1/arith.hpp"

#include <algorithm>
#include <cmath>

#include "x1/error.hpp"

namespace x1 {

i64 gcd(i64 a, i64 b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 mod(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 mul_mod(i64 a, i64 b, i64 m)
{
    return static_cast<i64>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y)
{
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
        i64 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

BigInt ext_gcd(const BigInt& a_in, const BigInt& b_in, BigInt& x, BigInt& y)
{
    BigInt a = a_in, b = b_in;
    BigInt x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        BigInt q = a / b;
        BigInt t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

i64 inv_mod(i64 a, i64 m)
{
    i64 x, y;
    if (ext_gcd(mod(a, m), m, x, y) != 1)
        throw Error("not-invertible", std::to_string(a) + " mod " + std::to_string(m));
    return mod(x, m);
}

std::vector<std::pair<i64, int>> factorize(i64 n)
{
    if (n < 1)
        throw Error("bad-argument", "factorize needs n >= 1");
    std::vector<std::pair<i64, int>> f;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p)
            continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1)
        f.emplace_back(n, 1);
    return f;
}

std::vector<i64> prime_factors(i64 n)
{
    std::vector<i64> ps;
    for (auto& [p, e] : factorize(n))
        ps.push_back(p);
    return ps;
}

std::vector<i64> divisors(i64 n)
{
    std::vector<i64> ds{1};
    for (auto& [p, e] : factorize(n)) {
        size_t m = ds.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < m; ++i)
                ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

bool is_squarefree(i64 n)
{
    for (auto& [p, e] : factorize(n))
        if (e > 1)
            return false;
    return true;
}

i64 euler_phi(i64 n)
{
    i64 r = n;
    for (auto& [p, e] : factorize(n))
        r = r / p * (p - 1);
    return r;
}

int mobius(i64 n)
{
    int m = 1;
    for (auto& [p, e] : factorize(n)) {
        if (e > 1)
            return 0;
        m = -m;
    }
    return m;
}

i64 num_divisors(i64 n)
{
    i64 d = 1;
    for (auto& [p, e] : factorize(n))
        d *= e + 1;
    return d;
}

Rational sigma_minus1(i64 n)
{
    Rational s = 0;
    for (i64 d : divisors(n))
        s += Rational(1, d);
    return s;
}

i64 isqrt(i64 n)
{
    if (n < 0)
        throw Error("bad-argument", "isqrt of negative");
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<__int128>(r) * r > n)
        --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

bool is_square(i64 n)
{
    if (n < 0)
        return false;
    i64 r = isqrt(n);
    return r * r == n;
}

BigInt isqrt(const BigInt& n)
{
    if (n < 0)
        throw Error("bad-argument", "isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

bool is_square(const BigInt& n)
{
    if (n < 0)
        return false;
    BigInt r = isqrt(n);
    return r * r == n;
}

std::vector<signed char> mobius_table(i64 n)
{
    std::vector<signed char> mu(n + 1, 1);
    std::vector<char> composite(n + 1, 0);
    if (n >= 0)
        mu[0] = 0;
    for (i64 p = 2; p <= n; ++p) {
        if (composite[p])
            continue;
        for (i64 k = p; k <= n; k += p) {
            if (k > p)
                composite[k] = 1;
            mu[k] = static_cast<signed char>(-mu[k]);
        }
        if (p <= n / p)
            for (i64 k = p * p; k <= n; k += p * p)
                mu[k] = 0;
    }
    return mu;
}

std::string to_string(const BigInt& x) { return x.str(); }
std::string rational_num(const Rational& q) { return boost::multiprecision::numerator(q).str(); }
std::string rational_den(const Rational& q) { return boost::multiprecision::denominator(q).str(); }
double to_double(const Rational& q) { return q.convert_to<double>(); }

} // namespace x1
