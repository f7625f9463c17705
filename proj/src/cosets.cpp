#include "x1/cosets.hpp"

#include <set>

#include "x1/error.hpp"

namespace x1 {

namespace {

void check_args(i64 n, i64 d, i64 c)
{
    if (n < 1 || c < 1)
        throw Error("bad-argument", "need N >= 1 and c >= 1");
    if (gcd(d, n) != 1)
        throw Error("bad-argument", "d must be a unit mod N");
}

// Orbit count with delta over [0, mult*c*N) and alpha over [0, mult*c*N^2).
i64 brute_count(i64 n, i64 d, i64 c, i64 mult)
{
    std::set<std::pair<i64, i64>> keys;
    const i64 dl = mult * c * n;
    const i64 al = mult * c * n * n;
    for (i64 delta = 0; delta < dl; ++delta) {
        if (gcd(delta, c) != 1)
            continue;
        for (i64 alpha = 0; alpha < al; alpha += n) {
            i64 num = alpha * delta - 1;
            if (mod(num, c) != 0)
                continue;
            i64 beta = num / c;
            if (mod(beta - d, n) != 0)
                continue;
            keys.emplace(mod(delta, c), mod(alpha, c * n));
        }
    }
    return static_cast<i64>(keys.size());
}

} // namespace

DoubleCosetCount count_Sd_brute(i64 n, i64 d, i64 c, i64 max_multiplier)
{
    check_args(n, d, c);
    i64 prev = brute_count(n, d, c, 1);
    for (i64 m = 2; m <= max_multiplier; m *= 2) {
        i64 cur = brute_count(n, d, c, m);
        if (cur == prev)
            return DoubleCosetCount{c, mod(d, n), cur, "brute_force", m};
        prev = cur;
    }
    throw Error("increase-bound", "orbit count did not saturate");
}

std::vector<std::array<i64, 4>> bijection_representatives(i64 n, i64 d, i64 c)
{
    check_args(n, d, c);
    if (gcd(c, n) != 1 || mod(d * c + 1, n) != 0)
        throw Error("bijection-hypothesis-violated",
                    "needs gcd(c,N) = 1 and d*c = -1 mod N (c=" + std::to_string(c) + ", d=" + std::to_string(d) +
                        ", N=" + std::to_string(n) + ")");
    // v*N - d*c = 1
    const i64 v = (1 + d * c) / n;
    std::vector<std::array<i64, 4>> reps;
    for (i64 delta = 0; delta < c; ++delta) {
        if (gcd(delta, c) != 1)
            continue;
        i64 dl = (c == 1) ? 1 : delta;
        // x*delta - y*c = v
        i64 x, y;
        ext_gcd(dl, c, x, y); // x*dl + y*c = 1
        i64 xs = x * v, ys = -y * v;
        i64 alpha = xs * n, beta = d + ys * n;
        if (alpha * dl - beta * c != 1)
            throw Error("internal-consistency", "constructed matrix has determinant != 1");
        reps.push_back({alpha, beta, c, dl});
    }
    return reps;
}

DoubleCosetCount count_Sd_bijection(i64 n, i64 d, i64 c)
{
    auto reps = bijection_representatives(n, d, c);
    std::set<i64> classes;
    for (auto& r : reps)
        classes.insert(mod(r[3], c));
    return DoubleCosetCount{c, mod(d, n), static_cast<i64>(classes.size()), "bijection", 1};
}

std::vector<DoubleCosetCount> scattering_count_series(i64 n, i64 d, i64 c_max, const std::string& method)
{
    std::vector<DoubleCosetCount> out;
    for (i64 c = 1; c <= c_max; ++c) {
        if (gcd(c, n) != 1)
            continue;
        if (method == "bijection")
            out.push_back(count_Sd_bijection(n, d, c));
        else
            out.push_back(count_Sd_brute(n, d, c));
    }
    return out;
}

} // namespace x1
