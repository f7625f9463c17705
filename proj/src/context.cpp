#include "x1/context.hpp"

#include <algorithm>
#include <set>

#include "x1/error.hpp"

namespace x1 {

i64 ModulusContext::genus() const
{
    if (!genus_)
        throw Error("formulas-require-N>=5", "genus undefined for N = " + std::to_string(n));
    return *genus_;
}

Rational ModulusContext::volume_over_pi() const
{
    if (!volume_)
        throw Error("formulas-require-N>=5", "volume undefined for N = " + std::to_string(n));
    return *volume_;
}

i64 ModulusContext::psl_index() const
{
    i64 idx = n * n;
    for (i64 p : prime_factors)
        idx = idx / (p * p) * (p * p - 1);
    return n >= 3 ? idx / 2 : idx;
}

i64 ModulusContext::prod_p2_minus1() const
{
    i64 r = 1;
    for (i64 p : prime_factors)
        r *= p * p - 1;
    return r;
}

int ModulusContext::mu(i64 d) const { return mobius(d); }

namespace {

bool find_admissible_split(i64 n, const std::vector<i64>& primes, i64& q_out, i64& r_out)
{
    // q and r are coprime divisors of a squarefree n, so they are products of disjoint prime sets.
    const size_t k = primes.size();
    std::vector<int> label(k, 0);
    size_t total = 1;
    for (size_t i = 0; i < k; ++i)
        total *= 3;
    for (size_t code = 0; code < total; ++code) {
        size_t c = code;
        i64 q = 1, r = 1;
        for (size_t i = 0; i < k; ++i) {
            int t = static_cast<int>(c % 3);
            c /= 3;
            if (t == 1)
                q *= primes[i];
            else if (t == 2)
                r *= primes[i];
        }
        if (q >= 4 && r >= 4 && q <= r && n % (q * r) == 0) {
            q_out = q;
            r_out = r;
            return true;
        }
    }
    return false;
}

} // namespace

ModulusContext build_context(i64 n)
{
    if (n < 1)
        throw Error("bad-argument", "N must be positive");
    ModulusContext ctx;
    ctx.n = n;
    ctx.prime_factors = prime_factors(n);
    ctx.phi = euler_phi(n);
    ctx.num_divisors = num_divisors(n);
    ctx.sigma_minus1 = x1::sigma_minus1(n);
    ctx.squarefree = is_squarefree(n);

    i64 cusp_twice = 0;
    for (i64 d : divisors(n))
        cusp_twice += euler_phi(d) * euler_phi(n / d);
    ctx.cusp_count = n >= 3 ? cusp_twice / 2 : cusp_twice;

    if (ctx.squarefree && n % 2 == 1)
        ctx.admissible = find_admissible_split(n, ctx.prime_factors, ctx.adm_q, ctx.adm_r);

    if (n >= 5) {
        Rational prod = 1;
        for (i64 p : ctx.prime_factors)
            prod *= Rational(p + 1, p);
        Rational vol = Rational(ctx.phi * n) * prod / 6;
        Rational g = 1 + vol / 4 - Rational(cusp_twice, 4);
        if (denominator(g) != 1)
            throw Error("internal-consistency", "genus formula not integral at N = " + std::to_string(n));
        ctx.genus_ = numerator(g).convert_to<i64>();
        ctx.volume_ = vol;
    }
    return ctx;
}

BadFiberData s_p(const ModulusContext& ctx, i64 p)
{
    if (p < 2 || ctx.n % p != 0 || !std::count(ctx.prime_factors.begin(), ctx.prime_factors.end(), p))
        throw Error("p-does-not-divide-N", std::to_string(p) + " does not divide " + std::to_string(ctx.n));
    if (!ctx.squarefree)
        throw Error("requires-squarefree", "s_p needs squarefree N");
    const i64 m = ctx.n / p;
    // below 4 the cofactor curve has elliptic points and the count is not a cusp count
    if (m < 4)
        throw Error("cofactor-too-small", "s_p needs N/p >= 4, got N/p = " + std::to_string(m));
    Rational s = Rational(p - 1, 24) * euler_phi(m) * m;
    for (i64 q : prime_factors(m))
        s *= Rational(q + 1, q);
    if (denominator(s) != 1)
        throw Error("internal-consistency", "s_p = " + s.str() + " is not integral");
    BadFiberData bf;
    bf.p = p;
    bf.s_p = numerator(s).convert_to<i64>();
    Rational gp = Rational(ctx.genus() - bf.s_p + 1, 2);
    if (denominator(gp) != 1 || gp < 0)
        throw Error("internal-consistency", "g_p = " + gp.str() + " is not a non-negative integer");
    bf.g_p = numerator(gp).convert_to<i64>();
    return bf;
}

std::vector<Cusp> enumerate_cusps(const ModulusContext& ctx)
{
    // (a, c) of order N, identified under (a, c) ~ (a + k c, c) and (a, c) ~ (-a, -c).
    // Orbit key: for each sign, reduce a modulo gcd(c, N); keep the lexicographically least (c, a).
    const i64 n = ctx.n;
    std::set<std::pair<i64, i64>> reps;
    for (i64 c = 0; c < n; ++c) {
        for (i64 a = 0; a < n; ++a) {
            if (gcd(gcd(a, c), n) != 1)
                continue;
            std::pair<i64, i64> best{n, n};
            for (int sgn : {1, -1}) {
                i64 cc = mod(sgn * c, n);
                i64 g = gcd(cc, n);
                i64 aa = mod(sgn * a, n) % g;
                if (n == 1)
                    aa = 0;
                best = std::min(best, std::make_pair(cc, aa));
            }
            reps.insert(best);
        }
    }
    std::vector<Cusp> out;
    for (auto& [c, a] : reps)
        out.push_back(Cusp{a, c, true});
    return out;
}

i64 cusps_above_infinity(const ModulusContext& ctx)
{
    i64 count = 0;
    for (const Cusp& cu : enumerate_cusps(ctx))
        if (cu.c == 0)
            ++count;
    return count;
}

} // namespace x1
