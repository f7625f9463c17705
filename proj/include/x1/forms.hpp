#pragma once
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "x1/arith.hpp"
#include "x1/hp.hpp"

namespace x1 {

// (a b; c d)
struct Mat2 {
    BigInt a = 1, b = 0, c = 0, d = 1;

    static Mat2 identity() { return Mat2{}; }
    BigInt det() const { return a * d - b * c; }
    BigInt trace() const { return a + d; }
    Mat2 inverse() const; // determinant one assumed
    Mat2 operator*(const Mat2& o) const;
    Mat2 operator-() const { return Mat2{-a, -b, -c, -d}; }
    bool operator==(const Mat2& o) const = default;
};

using GammaMatrix = Mat2;

bool in_gamma1(const Mat2& g, i64 n);

// [A, B, C] = A x^2 + B x z + C z^2 with N | A and N | B for members of Q_l(N).
struct FormN {
    BigInt a, b, c;
    i64 level = 1;
    i64 trace = 0;

    BigInt disc() const { return b * b - 4 * a * c; }
    BigInt content() const;
    bool operator==(const FormN& o) const { return a == o.a && b == o.b && c == o.c; }
    std::string str() const;
};

FormN matrix_to_form(const Mat2& g, i64 n);
Mat2 form_to_matrix(const FormN& q);
// q o delta = [q(x,z), b(xt+yz) + 2(axy+czt), q(y,t)] for delta = (x y; z t)
FormN act(const FormN& q, const Mat2& delta);
// value q(x, z)
BigInt evaluate(const FormN& q, const BigInt& x, const BigInt& z);

// Smallest positive (t, u) with t^2 - D u^2 = 4.
std::pair<BigInt, BigInt> pell_fundamental(i64 D);

// Proper automorph of a form with content r belonging to the unit (T + U sqrt(D/r^2))/2.
Mat2 automorph(const FormN& q, const BigInt& T, const BigInt& U);

struct UnitData {
    BigInt t_q;      // positive
    BigInt U;        // positive, w.r.t. D/r^2
    i64 r = 1;       // content of q
    Rational u_q;    // U / r, so that t_q^2 - D u_q^2 = 4
    int sign = 1;    // alpha_q = sign * automorph(q, t_q, U)
    i64 k = 1;       // eps_q = eps_0^k
    BigInt t0, u0;   // fundamental solution for D/r^2
    Mat2 alpha_q;
    HP log_eps;      // log eps_q at working precision
    double log_eps_d = 0;
    double eps_d = 0;
};

UnitData unit_for_class(const FormN& q);

// Integer reduced indefinite form, 0 < b < sqrt(D), sqrt(D) - b < 2|a| < sqrt(D) + b.
struct RForm {
    i64 a, b, c;
    bool operator<(const RForm& o) const { return std::tie(a, b, c) < std::tie(o.a, o.b, o.c); }
    bool operator==(const RForm& o) const = default;
};

struct Sl2Class {
    std::vector<RForm> cycle;   // cycle[0] is the base form
    std::vector<Mat2> prefix;   // base o prefix[i] = cycle[i]
    i64 content = 1;
    BigInt t0, u0;              // fundamental unit of D / content^2
};

// All SL_2(Z)-classes of forms of discriminant D (primitive and imprimitive), via reduction cycles.
std::vector<Sl2Class> sl2_classes(i64 D);
// Reduce q to a reduced form: q o T = reduced.
std::pair<FormN, Mat2> reduce_form(const FormN& q);

struct ClassOptions {
    i64 start_box = 0;   // first search box for normalized representatives; 0 means 2N
    i64 max_box = 0;     // 0 means 512N
};

struct ClassRep {
    FormN q;
    UnitData unit;
    Mat2 g;              // q = base o g, base = first form of the SL_2 cycle
    size_t sl2_index = 0;
    std::vector<std::pair<i64, i64>> orbit; // first columns mod N of the cosets in this class
    i64 box_found = 0, box_confirmed = 0;
    bool normalized = false; // a > 0, b < 0, c > 0
};

struct ClassSet {
    i64 level = 0, trace = 0;
    i64 disc = 0;
    std::vector<Sl2Class> sl2;
    std::vector<ClassRep> reps;
    size_t h() const { return reps.size(); }
    std::map<std::pair<size_t, std::pair<i64, i64>>, size_t> lookup; // (sl2 index, vector) -> class
    i64 admissible_cosets = 0;
};

ClassSet enumerate_classes(i64 n, i64 l, const ClassOptions& opt = {});
// Index in set.reps of the Gamma_1(N)-class of q.
size_t classify(const ClassSet& set, const FormN& q);

// Forms of Q_l(N) with max(|A|,|B|,|C|) <= H, grouped by union-find under Schreier generators of Gamma_1(N).
struct UnionFindResult {
    std::vector<FormN> forms;
    std::vector<size_t> component; // per form, canonical component id
    size_t components = 0;
};
std::vector<Mat2> gamma1_generators(i64 n);
UnionFindResult unionfind_classes(i64 n, i64 l, i64 H, i64 H_search);

} // namespace x1
