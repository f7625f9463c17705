#include <gtest/gtest.h>

#include <map>
#include <random>

#include "x1/arith.hpp"
#include "x1/error.hpp"
#include "x1/forms.hpp"

using namespace x1;

namespace {

// random element of Gamma_1(N) as a product of Schreier generators
Mat2 random_gamma1(const std::vector<Mat2>& gens, std::mt19937_64& rng, int len)
{
    std::uniform_int_distribution<size_t> pick(0, 2 * gens.size() - 1);
    Mat2 g;
    for (int i = 0; i < len; ++i) {
        size_t k = pick(rng);
        g = g * (k < gens.size() ? gens[k] : gens[k - gens.size()].inverse());
    }
    return g;
}

} // namespace

TEST(Forms, DictionaryRoundTripAndDiscriminant)
{
    std::mt19937_64 rng(7);
    for (i64 n : {5, 7, 11, 25}) {
        auto gens = gamma1_generators(n);
        for (const Mat2& g : gens)
            EXPECT_TRUE(in_gamma1(g, n));
        for (int i = 0; i < 200; ++i) {
            Mat2 g = random_gamma1(gens, rng, 6);
            if (abs(g.trace()) <= 2)
                continue;
            FormN q = matrix_to_form(g, n);
            EXPECT_EQ(q.disc(), g.trace() * g.trace() - 4);
            EXPECT_EQ(q.a % n, 0);
            EXPECT_EQ(q.b % n, 0);
            EXPECT_EQ(form_to_matrix(q), g);
        }
    }
}

TEST(Forms, DictionaryIsEquivariant)
{
    std::mt19937_64 rng(11);
    for (i64 n : {5, 7}) {
        auto gens = gamma1_generators(n);
        for (int i = 0; i < 200; ++i) {
            Mat2 g = random_gamma1(gens, rng, 5);
            Mat2 d = random_gamma1(gens, rng, 3);
            if (abs(g.trace()) <= 2)
                continue;
            EXPECT_EQ(matrix_to_form(d.inverse() * g * d, n), act(matrix_to_form(g, n), d));
        }
    }
}

TEST(Forms, PellFundamentalSolutions)
{
    std::map<i64, std::pair<int, int>> known = {{5, {3, 1}}, {8, {6, 2}}, {12, {4, 1}}, {13, {11, 3}}, {45, {7, 1}}};
    for (auto& [D, tu] : known) {
        auto [t, u] = pell_fundamental(D);
        EXPECT_EQ(t, tu.first) << D;
        EXPECT_EQ(u, tu.second) << D;
    }
    for (i64 D = 5; D < 400; ++D) {
        if (is_square(D) || (D % 4 != 0 && D % 4 != 1))
            continue;
        auto [t, u] = pell_fundamental(D);
        EXPECT_EQ(t * t - D * u * u, 4) << D;
    }
}

TEST(Forms, UnitDataStabilizesAndLiesInGamma1)
{
    for (i64 n : {5, 7}) {
        for (i64 l : {n + 2, 2 * n + 2}) {
            ClassSet set = enumerate_classes(n, l);
            for (const ClassRep& rep : set.reps) {
                const UnitData& u = rep.unit;
                Rational lhs = Rational(u.t_q) * Rational(u.t_q) - Rational(l * l - 4) * u.u_q * u.u_q;
                EXPECT_EQ(lhs, Rational(4));
                EXPECT_TRUE(in_gamma1(u.alpha_q, n));
                EXPECT_EQ(act(rep.q, u.alpha_q), rep.q);
                EXPECT_LE(u.k, euler_phi(n));
                EXPECT_EQ(u.alpha_q.trace(), u.sign * u.t_q);
            }
        }
    }
}

TEST(Forms, ClassesMatchUnionFindComponents)
{
    const i64 n = 5, l = 7;
    ClassSet set = enumerate_classes(n, l);
    EXPECT_EQ(set.h(), 6u);
    UnionFindResult uf = unionfind_classes(n, l, 60, 600);
    std::map<size_t, size_t> comp_to_class;
    std::vector<bool> hit(set.h(), false);
    for (size_t i = 0; i < uf.forms.size(); ++i) {
        size_t cls = classify(set, uf.forms[i]);
        hit[cls] = true;
        auto [it, fresh] = comp_to_class.insert({uf.component[i], cls});
        if (!fresh)
            EXPECT_EQ(it->second, cls) << uf.forms[i].str();
    }
    for (size_t c = 0; c < set.h(); ++c)
        EXPECT_TRUE(hit[c]) << c;
}

TEST(Forms, ClassifyIsInvariantUnderGamma1)
{
    std::mt19937_64 rng(3);
    const i64 n = 7, l = 16;
    ClassSet set = enumerate_classes(n, l);
    auto gens = gamma1_generators(n);
    for (size_t c = 0; c < set.h(); ++c) {
        for (int i = 0; i < 10; ++i) {
            Mat2 d = random_gamma1(gens, rng, 4);
            EXPECT_EQ(classify(set, act(set.reps[c].q, d)), c);
        }
    }
}

TEST(Forms, NegativeTraceClassesAreWellFormed)
{
    // -8 = 2 mod 5
    ClassSet set = enumerate_classes(5, -8);
    EXPECT_EQ(set.disc, 60);
    EXPECT_GT(set.h(), 0u);
    for (const ClassRep& rep : set.reps) {
        EXPECT_EQ(rep.q.disc(), BigInt(60));
        EXPECT_TRUE(in_gamma1(rep.unit.alpha_q, 5));
        EXPECT_EQ(act(rep.q, rep.unit.alpha_q), rep.q);
    }
}
