#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace oracle {

namespace {

i64 gcd3(i64 a, i64 b, i64 c) { return std::gcd(std::gcd(a, b), c); }

struct DSU {
    std::vector<i64> p;
    explicit DSU(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    i64 find(i64 x)
    {
        while (p[x] != x)
            x = p[x] = p[p[x]];
        return x;
    }
    void unite(i64 a, i64 b) { p[find(a)] = find(b); }
};

bool squarefree(i64 n)
{
    for (i64 p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0)
            return false;
    return true;
}

bool fundamental(i64 D)
{
    if (D % 4 == 1)
        return squarefree(D);
    if (D % 4 == 0) {
        i64 k = D / 4;
        return (k % 4 == 2 || k % 4 == 3) && squarefree(k);
    }
    return false;
}

} // namespace

i64 order_n_vectors(i64 n)
{
    i64 count = 0;
    for (i64 c = 0; c < n; ++c)
        for (i64 d = 0; d < n; ++d)
            count += gcd3(c, d, n) == 1;
    return count;
}

i64 cusp_count(i64 n)
{
    DSU dsu(static_cast<size_t>(n * n));
    auto id = [n](i64 a, i64 c) { return ((a % n + n) % n) * n + ((c % n + n) % n); };
    for (i64 a = 0; a < n; ++a)
        for (i64 c = 0; c < n; ++c) {
            if (gcd3(a, c, n) != 1)
                continue;
            dsu.unite(id(a, c), id(a + c, c));
            dsu.unite(id(a, c), id(-a, -c));
        }
    std::vector<char> seen(static_cast<size_t>(n * n), 0);
    i64 count = 0;
    for (i64 a = 0; a < n; ++a)
        for (i64 c = 0; c < n; ++c) {
            if (gcd3(a, c, n) != 1)
                continue;
            i64 r = dsu.find(id(a, c));
            if (!seen[r]) {
                seen[r] = 1;
                ++count;
            }
        }
    return count;
}

i64 psl_index(i64 n) { return order_n_vectors(n) / 2; }

i64 genus(i64 n)
{
    if (n < 5)
        throw std::invalid_argument("oracle genus needs N >= 5");
    // g = 1 + mu/12 - nu_inf/2 without elliptic points
    Rational g = 1 + Rational(psl_index(n), 12) - Rational(cusp_count(n), 2);
    if (denominator(g) != 1)
        throw std::logic_error("non-integral genus");
    return numerator(g).convert_to<i64>();
}

Rational volume_over_pi(i64 n) { return Rational(psl_index(n), 3); }

Rational s_p(i64 n, i64 p)
{
    i64 m = n / p;
    return Rational((p - 1) * order_n_vectors(m), 24);
}

int kronecker(i64 D, i64 m)
{
    if (m <= 0)
        throw std::invalid_argument("kronecker needs m >= 1");
    int result = 1;
    while (m % 2 == 0) {
        m /= 2;
        i64 r = ((D % 8) + 8) % 8;
        if (r % 2 == 0)
            return 0;
        if (r == 3 || r == 5)
            result = -result;
    }
    // Jacobi symbol (D / m), m odd
    i64 a = ((D % m) + m) % m;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = m % 8;
            if (r == 3 || r == 5)
                result = -result;
        }
        std::swap(a, m);
        if (a % 4 == 3 && m % 4 == 3)
            result = -result;
        a %= m;
    }
    return m == 1 ? result : 0;
}

double sqrtD_L1(i64 D)
{
    i64 f = 1;
    for (i64 c = static_cast<i64>(std::sqrt(static_cast<double>(D))) + 1; c >= 1; --c) {
        if (D % (c * c) == 0 && fundamental(D / (c * c))) {
            f = c;
            break;
        }
    }
    i64 D0 = D / (f * f);
    if (!fundamental(D0))
        throw std::logic_error("no fundamental discriminant found");
    double s = 0;
    for (i64 a = 1; a < D0; ++a) {
        int chi = kronecker(D0, a);
        if (chi != 0)
            s -= chi * std::log(std::sin(M_PI * static_cast<double>(a) / static_cast<double>(D0)));
    }
    // s = sqrt(D0) L(1, chi_D0); pass to the order of conductor f
    double v = s * static_cast<double>(f);
    i64 g = f;
    for (i64 p = 2; p <= g; ++p) {
        if (g % p != 0)
            continue;
        while (g % p == 0)
            g /= p;
        v *= 1.0 - kronecker(D0, p) / static_cast<double>(p);
    }
    return v;
}

double a_glaisher()
{
    const double A = 1.28242712910062263687534256886979172776768892732500;
    const double gamma = 0.57721566490153286060651209008240243104215933593992;
    const double pi = M_PI;
    double zeta2 = pi * pi / 6;
    double zeta2p = zeta2 * (gamma + std::log(2 * pi) - 12 * std::log(A));
    return 6 / pi * (-2 * std::log(2.0) - 2 * zeta2p / zeta2);
}

namespace {

double green_fd_once(i64 s, double a, double l, double x, bool diagonal, int m)
{
    const int inner = m - 1;
    const int nodes = 2 + static_cast<int>(s) * inner;
    auto node = [&](int e, int j) {
        if (j == 0)
            return 0;
        if (j == m)
            return 1;
        return 2 + e * inner + (j - 1);
    };
    const double h = 1.0 / m;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nodes + 1, nodes + 1);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(nodes);
    for (int e = 0; e < s; ++e) {
        for (int j = 0; j < m; ++j) {
            int u = node(e, j), v = node(e, j + 1);
            M(u, u) += 1 / h;
            M(v, v) += 1 / h;
            M(u, v) -= 1 / h;
            M(v, u) -= 1 / h;
            mu(u) += h / (2 * l);
            mu(v) += h / (2 * l);
        }
    }
    mu(0) += a / l;
    mu(1) += a / l;
    for (int i = 0; i < nodes; ++i) {
        M(i, nodes) = mu(i);
        M(nodes, i) = mu(i);
    }
    int jx = static_cast<int>(std::lround(x * m));
    if (std::abs(jx - x * m) > 1e-9)
        throw std::invalid_argument("x must be a grid point");
    int target = diagonal ? node(0, jx) : 0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nodes + 1);
    rhs.head(nodes) = -mu;
    rhs(target) += 1;
    Eigen::VectorXd g = M.partialPivLu().solve(rhs);
    return g(node(0, jx));
}

} // namespace

double green_fd(i64 s, double a, double l, double x, bool diagonal, int m)
{
    double g1 = green_fd_once(s, a, l, x, diagonal, m);
    double g2 = green_fd_once(s, a, l, x, diagonal, 2 * m);
    return (4 * g2 - g1) / 3;
}

double cone_sum(i64 A, i64 B, i64 C, i64 N, i64 u, i64 e_num, i64 e_den, double s, double bound)
{
    const double E = static_cast<double>(e_num) / static_cast<double>(e_den);
    const double qe = static_cast<double>(A) - static_cast<double>(B) * E + static_cast<double>(C) * E * E;
    double sum = 0;
    for (i64 n = ((u % N) + N) % N; ; n += N) {
        if (n <= 0)
            continue;
        if (qe * static_cast<double>(n) * static_cast<double>(n) > bound)
            break;
        // least multiple of N with e_den m >= e_num n
        __int128 num = static_cast<__int128>(e_num) * n;
        __int128 m = num / e_den;
        if (m * e_den < num)
            ++m;
        if (num < 0 && m * e_den >= num) {
            while ((m - 1) * e_den >= num)
                --m;
        }
        __int128 r = ((m % N) + N) % N;
        if (r != 0)
            m += N - r;
        for (;; m += N) {
            __int128 q = static_cast<__int128>(A) * n * n - static_cast<__int128>(B) * n * m + static_cast<__int128>(C) * m * m;
            double qd = static_cast<double>(q);
            if (qd > bound)
                break;
            sum += std::pow(qd, -s);
        }
    }
    return sum;
}

} // namespace oracle
