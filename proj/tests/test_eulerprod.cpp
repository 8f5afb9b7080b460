#include <gtest/gtest.h>

#include "ffm/eulerprod.hpp"

using namespace ffm;

namespace {

Rational factorial(int n) {
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

TEST(XiSample, DeterministicPerSeed) {
    auto t = PrimeTable::counts(3, 5);
    auto a = sample_xi(t, 7), b = sample_xi(t, 7), c = sample_xi(t, 8);
    EXPECT_EQ(a.angles, b.angles);
    EXPECT_NE(a.angles, c.angles);
    for (int d = 1; d <= 5; ++d) EXPECT_EQ(Integer(a.angles[d].size()), t.E(d));
}

// Direct sum over all monic f of xi(f) u^deg f against the Euler product.
TEST(EulerProduct, CoefficientsMatchDirectSum) {
    const int q = 3, D = 5;
    auto t = PrimeTable::build(q, D);
    auto xi = sample_xi(t, 11);
    auto c = lxi_coeffs(xi, D);
    for (int d = 0; d <= D; ++d) {
        cplx s = 0;
        for (auto& f : enumerate_monic(q, d)) s += xi_of(xi, t, f);
        EXPECT_LT(std::abs(s - c[d]), 1e-9) << "d=" << d;
    }
}

TEST(EulerProduct, ExpOfLogCoefficients) {
    auto t = PrimeTable::counts(5, 6);
    for (std::uint64_t seed : {1, 2, 3}) {
        auto xi = sample_xi(t, seed);
        auto c = lxi_coeffs(xi, 6);
        auto e = exp_series(xn_values(xi, 6).X, 6);
        for (int d = 0; d <= 6; ++d) EXPECT_LT(std::abs(c[d] - e[d]), 1e-9);
    }
}

TEST(EulerProduct, ConstantXiCountsMonics) {
    auto t = PrimeTable::counts(7, 4);
    auto c = lxi_coeffs(constant_xi(t), 4);
    for (int d = 0; d <= 4; ++d) EXPECT_NEAR(c[d].real(), std::pow(7.0, d), 1e-6);
}

TEST(Expectation, DiagonalAndVanishing) {
    for (int q : {2, 3, 5})
        for (int d = 1; d <= 4; ++d) {
            EXPECT_EQ(monomial_expectation(q, {{d}, {d}}), ipow(q, d));
            EXPECT_EQ(monomial_expectation(q, {{d}, {}}), 0);
            EXPECT_EQ(monomial_expectation(q, {{d}, {d + 1}}), 0);
        }
    // f1 f2 = g with deg f_i = 1: every ordered pair gives one g
    EXPECT_EQ(monomial_expectation(3, {{1, 1}, {2}}), 9);
}

TEST(Expectation, BackendsAgreeAndAreSymmetric) {
    const std::vector<MonomialSpec> battery{
        {{1, 1}, {1, 1}}, {{1, 2}, {3}}, {{2, 2}, {1, 3}}, {{1, 1, 1}, {3}}, {{3}, {1, 1, 1}}, {{2, 2}, {2, 2}},
        {{1, 3}, {2, 2}}, {{4}, {1, 3}}};
    for (int q : {2, 3})
        for (const auto& s : battery) {
            Integer a = monomial_expectation(q, s);
            EXPECT_EQ(a, monomial_expectation_hashjoin(q, s));
            EXPECT_EQ(a, monomial_expectation(q, {s.anti, s.hol}));
        }
}

TEST(Expectation, EngineMemoises) {
    ExpectationEngine e(3);
    EXPECT_EQ(e.count({{2, 1}, {1, 2}}), monomial_expectation(3, {{1, 2}, {1, 2}}));
    EXPECT_EQ(e.count({{1, 2}, {2, 1}}), e.count({{2, 1}, {1, 2}}));
}

// X_1 is a sum of q independent unit phases.
TEST(XMoments, FirstVariableMoments) {
    for (int q : {2, 3, 5, 7}) {
        EXPECT_EQ(x_mixed_moment(q, {{1}, {1}}), Rational(q));
        EXPECT_EQ(x_mixed_moment(q, {{2}, {2}}), Rational(2 * q * q - q));
        EXPECT_EQ(x_mixed_moment(q, {{2}, {1}}), 0);
    }
}

TEST(XMoments, SeriesCoefficientsAreScaledMoments) {
    const int q = 3, k = 2, D = 8;
    auto S = x_moment_series(q, k, D);
    for (int p1 = 0; p1 <= 3; ++p1)
        for (int p2 = 0; p2 <= 2; ++p2)
            for (int t1 = 0; t1 <= 3; ++t1)
                for (int t2 = 0; t2 <= 2; ++t2) {
                    if (p1 + 2 * p2 + t1 + 2 * t2 > D) continue;
                    Rational m = x_mixed_moment(q, {{p1, p2}, {t1, t2}});
                    Rational scale = factorial(p1) * factorial(p2) * factorial(t1) * factorial(t2);
                    EXPECT_EQ(S.coeff({p1, p2, t1, t2}) * scale, m) << p1 << p2 << t1 << t2;
                }
}

TEST(XMoments, MonteCarloAgrees) {
    auto r = xi_moment_battery(3, {{{1}, {1}}, {{1, 1}, {2}}}, {{{1, 1}, {1, 1}}}, 20000, 5);
    ASSERT_EQ(r.size(), 3u);
    for (const auto& m : r) EXPECT_LE(m.z(), 4.0) << m.mean << " vs " << m.exact;
}
