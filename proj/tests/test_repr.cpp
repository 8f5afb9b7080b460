#include <gtest/gtest.h>

#include <random>

#include "ffm/repr.hpp"
#include "ffm/unitary.hpp"

using namespace ffm;

namespace {

std::vector<cplx> random_points(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> x(n);
    for (auto& z : x) z = cplx(g(rng), g(rng));
    return x;
}

cplx elementary(const std::vector<cplx>& x, int k) {
    std::vector<cplx> e(k + 1, 0.0);
    e[0] = 1;
    for (cplx z : x)
        for (int j = k; j >= 1; --j) e[j] += z * e[j - 1];
    return e[k];
}

}  // namespace

TEST(ETuple, WeightNormAndRanges) {
    ETuple e{{5, 2, 3, 1}, 2, 2, 6};
    EXPECT_EQ(e.weight_norm(), (6 - 5) + (6 - 2) + 3 + 1);
    EXPECT_FALSE(e.in_original_range());
    EXPECT_TRUE(e.in_extended_range());
    EXPECT_TRUE((ETuple{{6, 4, 4, 0}, 2, 2, 6}).in_original_range());
}

TEST(ETuple, Enumeration) {
    auto a = enumerate_e(3, 1, 0, false, 100);
    EXPECT_EQ(a.size(), 4u);
    for (int n = 1; n <= 3; ++n)
        for (int rt = 0; rt <= n; ++rt)
            for (int N = 1; N <= 4; ++N) {
                auto es = enumerate_e(N, n - rt, rt, true, 6);
                for (std::size_t i = 0; i < es.size(); ++i) {
                    EXPECT_TRUE(es[i].in_extended_range());
                    EXPECT_LE(es[i].weight_norm(), 6);
                    if (i) EXPECT_LE(es[i - 1].weight_norm(), es[i].weight_norm());
                }
                for (const auto& e : enumerate_e(N, n - rt, rt, false, 100)) EXPECT_TRUE(e.in_original_range());
            }
    auto z = enumerate_e(4, 2, 1, false, 0);
    ASSERT_EQ(z.size(), 1u);
    EXPECT_EQ(z[0].e, (std::vector<int>{4, 0, 0}));
}

TEST(Schur, SmallShapes) {
    std::mt19937_64 rng(3);
    auto x = random_points(4, rng);
    cplx p1 = x[0] + x[1] + x[2] + x[3];
    cplx p2 = 0;
    for (cplx z : x) p2 += z * z;
    EXPECT_LT(std::abs(schur_eval({0, 0, 0, 0}, x) - 1.0), 1e-12);
    EXPECT_LT(std::abs(schur_eval({1, 0, 0, 0}, x) - p1), 1e-10);
    EXPECT_LT(std::abs(schur_eval({1, 1, 0, 0}, x) - elementary(x, 2)), 1e-10);
    EXPECT_LT(std::abs(schur_eval({2, 0, 0, 0}, x) - (p1 * p1 + p2) / 2.0), 1e-10);
    EXPECT_LT(std::abs(schur_eval({1, 1, 1, 1}, x) - elementary(x, 4)), 1e-10);
}

TEST(Schur, BialternantMatchesJacobiTrudi) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        auto x = random_points(3, rng);
        for (auto lam : {std::vector<int>{3, 1, 0}, {2, 2, 1}, {4, 0, 0}, {5, 3, 2}})
            EXPECT_LT(std::abs(schur_bialternant(lam, x) - schur_jacobi_trudi(lam, x)),
                      1e-8 * std::max(1.0, std::abs(schur_jacobi_trudi(lam, x))));
    }
}

// s_lambda(1,...,1) by the hook-content formula.
TEST(Schur, DegenerateArgumentsUseCombinatorialFormula) {
    EXPECT_NEAR(schur_eval({2, 1, 0}, {1.0, 1.0, 1.0}).real(), 8, 1e-10);
    EXPECT_NEAR(schur_eval({2, 2, 0, 0}, {1.0, 1.0, 1.0, 1.0}).real(), 20, 1e-10);
    cplx z = std::polar(1.0, 0.3);
    EXPECT_LT(std::abs(schur_eval({3, 0}, {z, z}) - 4.0 * z * z * z), 1e-10);
}

TEST(Schur, ConjugatePartition) {
    EXPECT_EQ(conjugate_partition({3, 1}), (std::vector<int>{2, 1, 1}));
    EXPECT_EQ(conjugate_partition({2, 2, 0}), (std::vector<int>{2, 2}));
    EXPECT_EQ(conjugate_partition({}), std::vector<int>{});
}

TEST(Psi, DegreeBoundedByWeightNorm) {
    for (int N = 1; N <= 4; ++N)
        for (int n = 1; n <= 3; ++n)
            for (int rt = 0; rt <= n; ++rt)
                for (const auto& e : enumerate_e(N, n - rt, rt, true, 6)) {
                    auto p = psi_e(e, 3);
                    EXPECT_LE(p.degree(), e.weight_norm());
                }
}

TEST(Psi, CharacterValue) {
    for (int N = 2; N <= 5; ++N)
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto s = haar_sample(N, 40 + seed, 5);
            for (const auto& e : enumerate_e(N, 1, 1, false, 6)) EXPECT_LT(trace_identity_check(e, s.eig, 5), 1e-8);
            for (const auto& e : enumerate_e(N, 2, 1, false, 5)) EXPECT_LT(trace_identity_check(e, s.eig, 5), 1e-8);
        }
}

TEST(Psi, BudgetIsEnforced) {
    Budget b;
    b.terms = 5;
    ETuple e{{4, 4, 4, 4}, 4, 0, 4};  // every entry nonzero: 24 Leibniz terms
    EXPECT_THROW(psi_e(e, 3, b), BudgetExceeded);
}

TEST(Cauchy, SingleFactorIsExact) {
    auto s = haar_sample(3, 8, 5);
    EXPECT_LT(cauchy_reconstruction_error(5, 3, 1, 0, {cplx(0, 0.2)}, s.c), 1e-10);
    EXPECT_LT(cauchy_reconstruction_error(5, 3, 1, 0, {0.0}, s.c), 1e-10);
}

TEST(Cauchy, RandomDraws) {
    auto s = haar_sample(2, 9, 5);
    EXPECT_LE(cauchy_reconstruction_error(5, 2, 1, 1, {cplx(0, 0.1), cplx(0, -0.3)}, s.c), 1e-8);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 20; ++t) {
        int N = 1 + t % 5;
        int n = 1 + t % 3;
        int rt = t % (n + 1);
        auto m = haar_sample(N, 500 + t, 3);
        std::vector<cplx> a(n);
        for (auto& z : a) z = cplx(0, u(rng));
        EXPECT_LE(cauchy_reconstruction_error(3, N, n - rt, rt, a, m.c), 1e-8) << "N=" << N << " n=" << n;
    }
}

TEST(Decomposition, SplitsByWeightNorm) {
    auto d0 = moment_decomposition(5, 3, 1, 1, {0.0, 0.0}, 0);
    ASSERT_EQ(d0.lf.size(), 1u);
    EXPECT_EQ(d0.lf[0].e.e, (std::vector<int>{3, 0}));
    auto d2 = moment_decomposition(5, 3, 1, 1, {0.0, 0.0}, 2);
    EXPECT_EQ(int(d2.lf.size()) + d2.hf_count, int(enumerate_e(3, 1, 1, false, 100).size()));
    for (const auto& t : d2.lf) EXPECT_LE(t.weight_norm, 2);
    EXPECT_GT(d2.hf_min_norm, 2);
}

TEST(Decomposition, MomentProductMatchesPhi) {
    auto s = haar_sample(4, 2, 7);
    std::vector<cplx> a{cplx(0, 0.3), cplx(0, -0.1), cplx(0, 0.5)};
    EXPECT_LT(std::abs(moment_product(s.c, 7, 2, 1, a) - phi_moment(7, 2, 1, a)(s.c)), 1e-12);
}

// Haar average of psi_e times a conjugated low-degree monomial vanishes
// whenever weight_norm(e) exceeds the monomial degree.
TEST(Orthogonality, HighWeightAgainstLowDegree) {
    const int N = 6, q = 3, n = 20000;
    std::vector<ETuple> high;
    for (const auto& e : enumerate_e(N, 1, 1, false, 4))
        if (e.weight_norm() > 2) high.push_back(e);
    std::vector<CoeffPolynomial> psis;
    for (const auto& e : high) psis.push_back(psi_e(e, q));
    const std::vector<std::pair<std::vector<int>, std::vector<int>>> monos{
        {{1}, {}}, {{2}, {}}, {{}, {1}}, {{1, 1}, {}}, {{1}, {1}}, {{}, {2}}};
    std::vector<std::vector<cplx>> sum(psis.size(), std::vector<cplx>(monos.size()));
    std::vector<std::vector<double>> sq(psis.size(), std::vector<double>(monos.size()));
    for (int i = 0; i < n; ++i) {
        auto s = haar_sample(N, 9000 + i, q);
        for (std::size_t a = 0; a < psis.size(); ++a) {
            cplx p = psis[a].eval(s.c);
            for (std::size_t b = 0; b < monos.size(); ++b) {
                cplx m = 1;
                for (int d : monos[b].first) m *= s.c[d];
                for (int d : monos[b].second) m *= std::conj(s.c[d]);
                cplx v = p * std::conj(m);
                sum[a][b] += v;
                sq[a][b] += std::norm(v);
            }
        }
    }
    for (std::size_t a = 0; a < psis.size(); ++a)
        for (std::size_t b = 0; b < monos.size(); ++b) {
            cplx mean = sum[a][b] / double(n);
            double se = std::sqrt((sq[a][b] / n - std::norm(mean)) / n);
            EXPECT_LE(std::abs(mean), 4 * se + 1e-12) << "psi #" << a << " monomial #" << b;
        }
}
