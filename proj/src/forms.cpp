#include "x1/forms.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

#include "x1/error.hpp"

namespace x1 {

namespace {

using i128 = __int128;

i64 mod_big(const BigInt& x, i64 n)
{
    BigInt r = x % n;
    if (r < 0)
        r += n;
    return r.convert_to<i64>();
}

BigInt big_mod(const BigInt& x, const BigInt& m)
{
    BigInt r = x % m;
    if (r < 0)
        r += m;
    return r;
}

Mat2 step_matrix(const BigInt& s) { return Mat2{0, -1, 1, s}; }

bool reduced_big(const BigInt& a, const BigInt& b, const BigInt& D)
{
    if (b <= 0 || b * b >= D)
        return false;
    BigInt a2 = 2 * abs(a);
    if ((a2 + b) * (a2 + b) <= D)
        return false;
    BigInt m = a2 - b;
    return m <= 0 || m * m < D;
}

// One reduction step q -> q o (0 -1; 1 s).
FormN rho_big(const FormN& q, const BigInt& D, const BigInt& sD, BigInt& s_out)
{
    BigInt m = 2 * abs(q.c);
    BigInt bp;
    if (abs(q.c) <= sD) {
        bp = sD - big_mod(sD + q.b, m);
    } else {
        bp = big_mod(-q.b, m);
        if (bp > abs(q.c))
            bp -= m;
    }
    s_out = (bp + q.b) / (2 * q.c);
    FormN r = q;
    r.a = q.c;
    r.b = bp;
    r.c = (bp * bp - D) / (4 * q.c);
    return r;
}

bool reduced_i64(i64 a, i64 b, i64 D)
{
    if (b <= 0 || static_cast<i128>(b) * b >= D)
        return false;
    i128 a2 = 2 * static_cast<i128>(a < 0 ? -a : a);
    if ((a2 + b) * (a2 + b) <= D)
        return false;
    i128 m = a2 - b;
    return m <= 0 || m * m < D;
}

RForm rho_i64(const RForm& f, i64 D, i64 sD, i64& s_out)
{
    i64 ac = f.c < 0 ? -f.c : f.c;
    i64 m = 2 * ac;
    i64 bp = sD - mod(sD + f.b, m); // |c| < sqrt(D) for reduced input
    s_out = (bp + f.b) / (2 * f.c);
    return RForm{f.c, bp, (bp * bp - D) / (4 * f.c)};
}

FormN to_form(const RForm& f) { return FormN{f.a, f.b, f.c, 1, 0}; }

// Sign-adjusted powers of the unit (t + u sqrt(D))/2.
void unit_mul(const BigInt& t1, const BigInt& u1, const BigInt& t2, const BigInt& u2, const BigInt& D, BigInt& t,
              BigInt& u)
{
    BigInt tt = (t1 * t2 + D * u1 * u2) / 2;
    BigInt uu = (t1 * u2 + t2 * u1) / 2;
    t = tt;
    u = uu;
}

struct Mod2 {
    i64 a, b, c, d;
};

Mod2 to_mod(const Mat2& m, i64 n) { return Mod2{mod_big(m.a, n), mod_big(m.b, n), mod_big(m.c, n), mod_big(m.d, n)}; }

std::pair<i64, i64> apply_mod(const Mod2& m, std::pair<i64, i64> v, i64 n)
{
    return {mod(m.a * v.first + m.b * v.second, n), mod(m.c * v.first + m.d * v.second, n)};
}

// SL_2(Z) matrix with first column (x, z), x, z coprime.
Mat2 complete_column(i64 x, i64 z)
{
    i64 s, t;
    i64 g = ext_gcd(x, z, s, t); // s x + t z = 1
    if (g != 1)
        throw Error("internal-consistency", "column not primitive");
    // (x y; z w) with x w - y z = 1: w = s, y = -t
    return Mat2{x, -t, z, s};
}

// Lift of a vector of order N to a primitive integer column.
std::pair<i64, i64> lift_vector(i64 x, i64 z, i64 n)
{
    i64 zz = (z == 0) ? n : z;
    for (i64 i = 0;; ++i) {
        i64 xx = x + i * n;
        if (gcd(xx, zz) == 1)
            return {xx, zz};
    }
}

} // namespace

Mat2 Mat2::inverse() const { return Mat2{d, -b, -c, a}; }

Mat2 Mat2::operator*(const Mat2& o) const
{
    return Mat2{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

bool in_gamma1(const Mat2& g, i64 n)
{
    return g.det() == 1 && mod_big(g.a - 1, n) == 0 && mod_big(g.d - 1, n) == 0 && mod_big(g.c, n) == 0;
}

BigInt FormN::content() const
{
    BigInt g = boost::multiprecision::gcd(a, b);
    return boost::multiprecision::gcd(g, c);
}

std::string FormN::str() const { return "[" + a.str() + ", " + b.str() + ", " + c.str() + "]"; }

FormN matrix_to_form(const Mat2& g, i64 n)
{
    if (!in_gamma1(g, n))
        throw Error("not-in-gamma1", "matrix is not in Gamma_1(N)");
    BigInt tr = g.trace();
    if (abs(tr) <= 2 || mod_big(tr - 2, n) != 0)
        throw Error("trace-condition", "need |trace| > 2 and trace = 2 mod N");
    // g = (1 + aN, b; cN, 1 + dN) -> [cN, (d - a)N, -b]
    return FormN{g.c, g.d - g.a, -g.b, n, tr.convert_to<i64>()};
}

Mat2 form_to_matrix(const FormN& q)
{
    if (q.level % 2 == 0)
        throw Error("parity", "form_to_matrix needs odd N");
    if (mod(q.trace - 2, q.level) != 0)
        throw Error("trace-condition", "need l = 2 mod N");
    BigInt lm = q.trace - q.b, lp = q.trace + q.b;
    if (big_mod(lm, 2) != 0)
        throw Error("parity", "(l - bN)/2 is not integral");
    return Mat2{lm / 2, -q.c, q.a, lp / 2};
}

FormN act(const FormN& q, const Mat2& m)
{
    FormN r = q;
    r.a = q.a * m.a * m.a + q.b * m.a * m.c + q.c * m.c * m.c;
    r.b = q.b * (m.a * m.d + m.b * m.c) + 2 * (q.a * m.a * m.b + q.c * m.c * m.d);
    r.c = q.a * m.b * m.b + q.b * m.b * m.d + q.c * m.d * m.d;
    return r;
}

BigInt evaluate(const FormN& q, const BigInt& x, const BigInt& z) { return q.a * x * x + q.b * x * z + q.c * z * z; }

std::pair<FormN, Mat2> reduce_form(const FormN& q)
{
    BigInt D = q.disc();
    if (D <= 0 || is_square(D))
        throw Error("bad-discriminant", "reduction needs a positive nonsquare discriminant");
    BigInt sD = isqrt(D);
    FormN f = q;
    Mat2 T;
    BigInt s;
    for (long it = 0; !reduced_big(f.a, f.b, D); ++it) {
        if (it > 100000)
            throw Error("internal-consistency", "reduction did not terminate");
        f = rho_big(f, D, sD, s);
        T = T * step_matrix(s);
    }
    return {f, T};
}

std::pair<BigInt, BigInt> pell_fundamental(i64 D)
{
    if (D <= 0 || is_square(D))
        throw Error("square-discriminant", "Pell equation needs positive nonsquare D");
    if (mod(D, 4) == 2 || mod(D, 4) == 3) {
        auto [t, u] = pell_fundamental(4 * D);
        return {t, 2 * u};
    }
    FormN p = (D % 4 == 0) ? FormN{1, 0, -(D / 4), 1, 0} : FormN{1, 1, (1 - D) / 4, 1, 0};
    FormN f = reduce_form(p).first;
    BigInt Db = D, sD = isqrt(Db);
    FormN g = f;
    Mat2 P;
    BigInt s;
    do {
        g = rho_big(g, Db, sD, s);
        P = P * step_matrix(s);
    } while (!(g == f));
    BigInt t = abs(P.trace());
    BigInt u = abs(P.c / f.a);
    if (t * t - Db * u * u != 4)
        throw Error("internal-consistency", "cycle product is not an automorph");
    return {t, u};
}

Mat2 automorph(const FormN& q, const BigInt& T, const BigInt& U)
{
    BigInt r = q.content();
    BigInt a = q.a / r, b = q.b / r, c = q.c / r;
    return Mat2{(T - b * U) / 2, -c * U, a * U, (T + b * U) / 2};
}

UnitData unit_for_class(const FormN& q)
{
    const i64 n = q.level;
    BigInt D = q.disc();
    BigInt r = q.content();
    BigInt Dp = D / (r * r);
    auto [t0, u0] = pell_fundamental(Dp.convert_to<i64>());
    const i64 phi = euler_phi(n);
    BigInt t = t0, u = u0;
    for (i64 k = 1; k <= phi; ++k) {
        Mat2 m = automorph(q, t, u);
        for (int s : {1, -1}) {
            Mat2 g = s == 1 ? m : -m;
            if (!in_gamma1(g, n))
                continue;
            if (!(act(q, g) == q))
                throw Error("internal-consistency", "alpha_q does not fix q");
            UnitData ud;
            ud.t_q = t;
            ud.U = u;
            ud.r = r.convert_to<i64>();
            ud.u_q = Rational(u, r);
            ud.sign = s;
            ud.k = k;
            ud.t0 = t0;
            ud.u0 = u0;
            ud.alpha_q = g;
            ud.log_eps = log((hp_from(t) + hp_from(u) * sqrt(hp_from(Dp))) / 2);
            ud.log_eps_d = ud.log_eps.convert_to<double>();
            ud.eps_d = std::exp(ud.log_eps_d);
            return ud;
        }
        unit_mul(t, u, t0, u0, Dp, t, u);
    }
    throw Error("k-exceeds-phi", "no power eps_0^k with k <= phi(N) lies in Gamma_1(N) for " + q.str());
}

std::vector<Sl2Class> sl2_classes(i64 D)
{
    if (D <= 0 || is_square(D) || mod(D, 4) > 1)
        throw Error("bad-discriminant", "need a positive nonsquare discriminant = 0,1 mod 4");
    const i64 sD = isqrt(D);
    std::set<RForm> reduced;
    for (i64 b = (D % 2 == 0) ? 2 : 1; b <= sD; b += 2) {
        i64 P = (D - b * b) / 4; // -ac
        for (i64 a = 1; a * a <= P; ++a) {
            if (P % a)
                continue;
            for (i64 aa : {a, P / a}) {
                if (reduced_i64(aa, b, D)) {
                    reduced.insert(RForm{aa, b, -P / aa});
                    reduced.insert(RForm{-aa, b, P / aa});
                }
            }
        }
    }
    std::vector<Sl2Class> out;
    std::set<RForm> seen;
    for (const RForm& f0 : reduced) {
        if (seen.count(f0))
            continue;
        Sl2Class cl;
        RForm f = f0;
        Mat2 P;
        i64 s;
        do {
            if (!reduced.count(f))
                throw Error("internal-consistency", "reduction cycle left the reduced set");
            seen.insert(f);
            cl.cycle.push_back(f);
            cl.prefix.push_back(P);
            f = rho_i64(f, D, sD, s);
            P = P * step_matrix(s);
        } while (!(f == f0));
        i64 r = gcd(gcd(f0.a, f0.b), f0.c);
        cl.content = r;
        BigInt T = abs(P.trace());
        BigInt U = abs(P.c / (f0.a / r));
        if (T * T - BigInt(D / (r * r)) * U * U != 4)
            throw Error("internal-consistency", "cycle product is not an automorph");
        cl.t0 = T;
        cl.u0 = U;
        out.push_back(std::move(cl));
    }
    return out;
}

namespace {

struct Candidate {
    i64 A = 0;
    i64 beta = 0; // -B
    i64 C = 0;
    Mat2 g;
    bool operator<(const Candidate& o) const { return std::tie(A, beta, C) < std::tie(o.A, o.beta, o.C); }
};

// Lexicographically least [A, B, C] with A > 0, B < -sqrt(D) among forms base o g whose first column lies in
// the orbit, searching columns in the box |x|, |z| <= H.
bool best_in_box(const RForm& base, i64 D, i64 sD, const std::vector<std::pair<i64, i64>>& orbit, i64 n, i64 H,
                 Candidate& best)
{
    bool found = false;
    for (auto [vx, vz] : orbit) {
        i64 x0 = mod(vx, n) - ((H + mod(vx, n)) / n) * n;
        i64 z0 = mod(vz, n) - ((H + mod(vz, n)) / n) * n;
        for (i64 x = x0; x <= H; x += n) {
            if (x < -H)
                continue;
            for (i64 z = z0; z <= H; z += n) {
                if (z < -H)
                    continue;
                if (gcd(x, z) != 1)
                    continue;
                i128 A = static_cast<i128>(base.a) * x * x + static_cast<i128>(base.b) * x * z +
                         static_cast<i128>(base.c) * z * z;
                if (A <= 0)
                    continue;
                if ((found || best.A > 0) && A > best.A)
                    continue;
                i64 s, t;
                ext_gcd(x, z, s, t);
                i64 y = -t, w = s;
                i128 B0 = static_cast<i128>(base.b) * (static_cast<i128>(x) * w + static_cast<i128>(y) * z) +
                          2 * (static_cast<i128>(base.a) * x * y + static_cast<i128>(base.c) * z * w);
                i128 m = 2 * A;
                // beta > sqrt(D), beta = -B0 mod 2A, minimal
                i128 r0 = (-B0) % m;
                if (r0 < 0)
                    r0 += m;
                i128 lo = sD + 1;
                i128 beta = lo + ((r0 - lo) % m + m) % m;
                i128 C = (beta * beta - D) / (4 * A);
                Candidate c;
                c.A = static_cast<i64>(A);
                c.beta = static_cast<i64>(beta);
                c.C = static_cast<i64>(C);
                i128 j = (-beta - B0) / m;
                c.g = Mat2{x, BigInt(y) + BigInt(static_cast<i64>(j)) * x, z, BigInt(w) + BigInt(static_cast<i64>(j)) * z};
                if (!found && best.A == 0) {
                    best = c;
                    found = true;
                } else if (c < best) {
                    best = c;
                    found = true;
                }
            }
        }
    }
    return found;
}

} // namespace

ClassSet enumerate_classes(i64 n, i64 l, const ClassOptions& opt)
{
    if (n < 3 || n % 2 == 0)
        throw Error("bad-level", "class enumeration needs odd N >= 3");
    if (std::abs(l) <= 2 || mod(l - 2, n) != 0)
        throw Error("trace-condition", "need |l| > 2 and l = 2 mod N");
    ClassSet set;
    set.level = n;
    set.trace = l;
    const i64 D = l * l - 4;
    set.disc = D;
    const i64 sD = isqrt(D);
    set.sl2 = sl2_classes(D);
    const i64 H0 = opt.start_box > 0 ? opt.start_box : 2 * n;
    const i64 Hmax = opt.max_box > 0 ? opt.max_box : 512 * n;

    for (size_t ci = 0; ci < set.sl2.size(); ++ci) {
        const Sl2Class& cl = set.sl2[ci];
        const RForm& base = cl.cycle[0];
        FormN q0 = to_form(base);
        q0.level = n;
        q0.trace = l;
        Mat2 alpha0 = automorph(q0, cl.t0, cl.u0);
        Mod2 am = to_mod(alpha0, n);

        std::set<std::pair<i64, i64>> admissible;
        for (i64 x = 0; x < n; ++x)
            for (i64 z = 0; z < n; ++z) {
                if (gcd(gcd(x, z), n) != 1)
                    continue;
                auto [xx, zz] = lift_vector(x, z, n);
                FormN f = act(q0, complete_column(xx, zz));
                if (mod_big(f.a, n) == 0 && mod_big(f.b, n) == 0)
                    admissible.insert({x, z});
            }
        set.admissible_cosets += static_cast<i64>(admissible.size());

        std::set<std::pair<i64, i64>> visited;
        for (auto v : admissible) {
            if (visited.count(v))
                continue;
            std::vector<std::pair<i64, i64>> orbit;
            std::pair<i64, i64> w = v;
            std::pair<i64, i64> negv{mod(-v.first, n), mod(-v.second, n)};
            i64 k = 0;
            int sign = 1;
            while (true) {
                orbit.push_back(w);
                orbit.push_back({mod(-w.first, n), mod(-w.second, n)});
                w = apply_mod(am, w, n);
                ++k;
                if (w == v) {
                    sign = 1;
                    break;
                }
                if (w == negv) {
                    sign = -1;
                    break;
                }
                if (k > n * n)
                    throw Error("internal-consistency", "orbit did not close");
            }
            for (auto& o : orbit) {
                if (!admissible.count(o))
                    throw Error("internal-consistency", "orbit leaves admissible cosets");
                visited.insert(o);
            }

            ClassRep rep;
            rep.sl2_index = ci;
            rep.orbit = orbit;
            std::sort(rep.orbit.begin(), rep.orbit.end());

            Candidate best;
            Candidate prev;
            bool have_prev = false;
            i64 H = H0;
            for (; H <= Hmax; H *= 2) {
                best_in_box(base, D, sD, rep.orbit, n, H, best);
                if (best.A > 0 && have_prev && !(best < prev) && !(prev < best)) {
                    rep.box_confirmed = H;
                    break;
                }
                if (best.A > 0) {
                    if (!have_prev || best < prev)
                        rep.box_found = H;
                    prev = best;
                    have_prev = true;
                }
            }
            if (best.A == 0 || rep.box_confirmed == 0)
                throw Error("inconclusive-enumeration", "normalized representative not certified within the box");

            rep.g = best.g;
            rep.q = act(q0, rep.g);
            rep.q.level = n;
            rep.q.trace = l;
            rep.normalized = rep.q.a > 0 && rep.q.b < 0 && rep.q.c > 0;

            // unit and stabilizer generator: g^-1 (sign * alpha0^k) g
            BigInt t = cl.t0, u = cl.u0;
            BigInt Dp = D / (cl.content * cl.content);
            for (i64 j = 1; j < k; ++j)
                unit_mul(t, u, cl.t0, cl.u0, Dp, t, u);
            Mat2 ak = automorph(q0, t, u);
            if (sign < 0)
                ak = -ak;
            Mat2 gamma = rep.g.inverse() * ak * rep.g;
            if (!in_gamma1(gamma, n) || !(act(rep.q, gamma) == rep.q))
                throw Error("internal-consistency", "stabilizer generator check failed for " + rep.q.str());
            UnitData& ud = rep.unit;
            ud.t_q = t;
            ud.U = u;
            ud.r = cl.content;
            ud.u_q = Rational(u, cl.content);
            ud.sign = sign;
            ud.k = k;
            ud.t0 = cl.t0;
            ud.u0 = cl.u0;
            ud.alpha_q = gamma;
            ud.log_eps = log((hp_from(t) + hp_from(u) * sqrt(hp_from(Dp))) / 2);
            ud.log_eps_d = ud.log_eps.convert_to<double>();
            ud.eps_d = std::exp(ud.log_eps_d);

            size_t idx = set.reps.size();
            for (auto& o : rep.orbit)
                set.lookup[{ci, o}] = idx;
            set.reps.push_back(std::move(rep));
        }
    }
    return set;
}

size_t classify(const ClassSet& set, const FormN& q)
{
    const i64 n = set.level;
    if (q.disc() != set.disc || mod_big(q.a, n) != 0 || mod_big(q.b, n) != 0)
        throw Error("not-in-Q_l(N)", q.str());
    auto [f, T] = reduce_form(q);
    for (size_t ci = 0; ci < set.sl2.size(); ++ci) {
        const Sl2Class& cl = set.sl2[ci];
        for (size_t i = 0; i < cl.cycle.size(); ++i) {
            const RForm& r = cl.cycle[i];
            if (f.a != r.a || f.b != r.b || f.c != r.c)
                continue;
            // q o T = base o prefix[i]  =>  q = base o (prefix[i] T^-1)
            Mat2 g = cl.prefix[i] * T.inverse();
            std::pair<i64, i64> v{mod_big(g.a, n), mod_big(g.c, n)};
            auto it = set.lookup.find({ci, v});
            if (it == set.lookup.end())
                throw Error("internal-consistency", "coset of a form in Q_l(N) is not admissible");
            return it->second;
        }
    }
    throw Error("internal-consistency", "reduced form not found in any cycle");
}

std::vector<Mat2> gamma1_generators(i64 n)
{
    // Right cosets Gamma_1(N) g <-> bottom row of g mod N; Schreier generators from S and T.
    const Mat2 S{0, -1, 1, 0}, T{1, 1, 0, 1};
    std::map<std::pair<i64, i64>, Mat2> rep;
    std::deque<std::pair<i64, i64>> queue;
    rep[{0, 1 % n}] = Mat2{};
    queue.push_back({0, 1 % n});
    auto row = [&](const Mat2& m) { return std::make_pair(mod_big(m.c, n), mod_big(m.d, n)); };
    while (!queue.empty()) {
        auto key = queue.front();
        queue.pop_front();
        Mat2 r = rep[key];
        for (const Mat2& x : {S, T}) {
            Mat2 rx = r * x;
            auto k2 = row(rx);
            if (!rep.count(k2)) {
                rep[k2] = rx;
                queue.push_back(k2);
            }
        }
    }
    std::vector<Mat2> gens;
    for (auto& [key, r] : rep)
        for (const Mat2& x : {S, T}) {
            Mat2 rx = r * x;
            Mat2 g = rx * rep[row(rx)].inverse();
            if (g == Mat2{})
                continue;
            if (!in_gamma1(g, n))
                throw Error("internal-consistency", "Schreier generator not in Gamma_1(N)");
            if (std::find(gens.begin(), gens.end(), g) == gens.end())
                gens.push_back(g);
        }
    return gens;
}

UnionFindResult unionfind_classes(i64 n, i64 l, i64 H, i64 H_search)
{
    const i64 D = l * l - 4;
    std::vector<std::array<i64, 3>> forms;
    std::map<std::array<i64, 3>, size_t> index;
    for (i64 A = -H_search; A <= H_search; ++A) {
        if (A == 0 || mod(A, n) != 0)
            continue;
        for (i64 B = -H_search; B <= H_search; ++B) {
            if (mod(B, n) != 0)
                continue;
            i64 num = B * B - D;
            if (num % (4 * A) != 0)
                continue;
            i64 C = num / (4 * A);
            if (std::abs(C) > H_search)
                continue;
            index[{A, B, C}] = forms.size();
            forms.push_back({A, B, C});
        }
    }
    std::vector<size_t> parent(forms.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<size_t(size_t)> find = [&](size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::vector<Mat2> gens = gamma1_generators(n);
    std::vector<Mat2> all = gens;
    for (auto& g : gens)
        all.push_back(g.inverse());
    for (size_t i = 0; i < forms.size(); ++i) {
        FormN q{forms[i][0], forms[i][1], forms[i][2], n, l};
        for (auto& g : all) {
            FormN r = act(q, g);
            if (abs(r.a) > H_search || abs(r.b) > H_search || abs(r.c) > H_search)
                continue;
            auto it = index.find({r.a.convert_to<i64>(), r.b.convert_to<i64>(), r.c.convert_to<i64>()});
            if (it == index.end())
                throw Error("internal-consistency", "action left Q_l(N)");
            parent[find(i)] = find(it->second);
        }
    }
    UnionFindResult res;
    std::map<size_t, size_t> comp_id;
    for (size_t i = 0; i < forms.size(); ++i) {
        auto& f = forms[i];
        if (std::abs(f[0]) > H || std::abs(f[1]) > H || std::abs(f[2]) > H)
            continue;
        size_t root = find(i);
        if (!comp_id.count(root))
            comp_id[root] = comp_id.size();
        res.forms.push_back(FormN{f[0], f[1], f[2], n, l});
        res.component.push_back(comp_id[root]);
    }
    res.components = comp_id.size();
    return res;
}

} // namespace x1
