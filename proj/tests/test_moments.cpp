#include <gtest/gtest.h>

#include "ffm/charfamily.hpp"
#include "ffm/moments.hpp"

using namespace ffm;

namespace {

MomentSpec spec(int q, int N, int r, int rt, std::vector<cplx> alpha = {}) {
    MomentSpec s;
    s.q = q;
    s.N = N;
    s.r = r;
    s.rt = rt;
    s.alpha = std::move(alpha);
    return s;
}

}  // namespace

TEST(PsiAverage, TwoRoutesAgree) {
    for (int q : {2, 3}) {
        ExpectationEngine engine(q);
        for (int N = 1; N <= 3; ++N)
            for (int n = 1; n <= 2; ++n)
                for (int rt = 0; rt <= n; ++rt)
                    for (const auto& e : enumerate_e(N, n - rt, rt, true, 5))
                        EXPECT_EQ(psi_ep_direct(e, engine), psi_ep_via_ms(e, engine))
                            << "q=" << q << " N=" << N << " rt=" << rt;
    }
}

TEST(PsiAverage, TrivialTuple) {
    ETuple e{{0}, 1, 0, 4};
    EXPECT_EQ(psi_ep_direct(e, 5), QSqrtScalar::one(5));
    EXPECT_EQ(psi_ep_via_ms(e, 5), QSqrtScalar::one(5));
}

TEST(MainTerm, DegenerateCasesAreOne) {
    EXPECT_EQ(mt_rep_sum(spec(5, 6, 1, 0)).mt, cplx(1, 0));
    EXPECT_EQ(mt_rep_sum(spec(5, 6, 0, 1)).mt, cplx(1, 0));
    EXPECT_EQ(mt_rep_sum(spec(3, 4, 1, 0, {cplx(0, 0.4)})).mt, cplx(1, 0));
}

TEST(MainTerm, DefaultCutoff) {
    auto s = spec(5, 6, 1, 1);
    EXPECT_EQ(s.resolved_K(), 60);
    s.tol = 0.5;
    EXPECT_EQ(s.resolved_K(), 16);
    s.K = 9;
    EXPECT_EQ(s.resolved_K(), 9);
    EXPECT_THROW(mt_rep_sum(spec(5, 6, 1, 1, {cplx(0.1, 0), 0.0})), DomainError);
    EXPECT_THROW(mt_rep_sum(spec(5, 6, 1, 1, {0.0})), DomainError);
}

// Second moment: sum_{i=0}^N q^{i(alpha_2 - alpha_1)}.
TEST(MainTerm, SecondMomentGeometricSum) {
    for (auto [q, N] : {std::pair{5, 6}, {3, 4}, {13, 12}}) {
        std::vector<cplx> a{cplx(0, 0.3), cplx(0, -0.2)};
        cplx ref = 0;
        for (int i = 0; i <= N; ++i) ref += std::pow(cplx(q), double(i) * (a[1] - a[0]));
        auto s = spec(q, N, 1, 1, a);
        s.K = 24;
        EXPECT_LT(std::abs(mt_rep_sum(s).mt - ref), 1e-9 * std::abs(ref)) << "q=" << q;
    }
    auto s = spec(5, 6, 1, 1);
    s.K = 16;
    EXPECT_LT(std::abs(mt_rep_sum(s).mt - 7.0), 1e-12);
}

TEST(MainTerm, ShellConvergence) {
    auto s = spec(5, 6, 1, 1);
    s.K = 16;
    auto a = mt_rep_sum(s);
    s.K = 24;
    auto b = mt_rep_sum(s);
    ASSERT_EQ(b.shells.size(), 25u);
    for (int w = 9; w <= 24; ++w) EXPECT_LE(b.shells[w].l1, b.shells[w - 1].l1 + 1e-15);
    EXPECT_LE(std::abs(b.mt - a.mt), 1e-3 * std::abs(b.mt));
    EXPECT_NEAR(b.truncation_estimate, b.shells[23].l1 + b.shells[24].l1, 1e-15);
    cplx acc = 0;
    for (const auto& sh : b.shells) {
        EXPECT_LE(sh.nonzero, sh.terms);
        acc = sh.partial;
    }
    EXPECT_EQ(acc, b.mt);
}

TEST(MainTerm, CommonRotationInvariance) {
    for (auto [r, rt] : {std::pair{1, 1}, {2, 2}}) {
        std::vector<cplx> base;
        for (int i = 0; i < r + rt; ++i) base.emplace_back(0, 0.1 * (i + 1) * (i % 2 ? -1 : 1));
        auto s0 = spec(5, 3, r, rt, base);
        s0.K = 12;
        cplx m0 = mt_rep_sum(s0).mt;
        for (double t : {0.25, -0.7}) {
            auto sh = base;
            for (auto& z : sh) z += cplx(0, t);
            auto s1 = spec(5, 3, r, rt, sh);
            s1.K = 12;
            EXPECT_LE(std::abs(mt_rep_sum(s1).mt - m0), 1e-9 * std::max(1.0, std::abs(m0)));
        }
    }
}

TEST(MainTerm, RealForConjugateSymmetricShifts) {
    auto s = spec(5, 4, 1, 1, {cplx(0, 0.3), cplx(0, 0.3)});
    s.K = 12;
    cplx m = mt_rep_sum(s).mt;
    EXPECT_LE(std::abs(m.imag()), 1e-9 * std::abs(m));
    s = spec(5, 3, 2, 2, {cplx(0, 0.3), cplx(0, -0.2), cplx(0, 0.3), cplx(0, -0.2)});
    s.K = 12;
    m = mt_rep_sum(s).mt;
    EXPECT_LE(std::abs(m.imag()), 1e-9 * std::abs(m));
}

// For small q^N the family average is available exactly and coincides with the main term.
TEST(MainTerm, EqualsFamilyAverageAtSmallConductor) {
    UnitGroup G(3, 3);
    auto Ls = family_l_polynomials(G);
    struct Case {
        int r, rt;
        std::vector<cplx> a;
    };
    for (const auto& c : std::vector<Case>{{1, 1, {0.0, 0.0}},
                                           {2, 2, {0.0, 0.0, 0.0, 0.0}},
                                           {1, 1, {cplx(0, 0.4), cplx(0, -0.1)}},
                                           {2, 1, {cplx(0, 0.2), cplx(0, -0.5), cplx(0, 0.1)}}}) {
        auto s = spec(3, 3, c.r, c.rt, c.a);
        s.K = 20;
        cplx mt = mt_rep_sum(s).mt;
        cplx fam = family_moment(Ls, c.r, c.rt, c.a);
        EXPECT_LT(std::abs(mt - fam), 1e-9 * std::max(1.0, std::abs(fam))) << "r=" << c.r << " rt=" << c.rt;
    }
}

TEST(Compare, FirstMomentAllSidesOne) {
    CompareOptions opt;
    opt.samples = 2000;
    auto s = spec(5, 3, 1, 0);
    auto rep = compare_moment(s, opt);
    EXPECT_EQ(rep.mt, cplx(1, 0));
    ASSERT_TRUE(rep.family.has_value());
    EXPECT_LT(std::abs(*rep.family - 1.0), 1e-9);
    ASSERT_TRUE(rep.chimera.has_value());
    EXPECT_LE(*rep.diff_chimera_mt, 4 * rep.chimera->stderrs[0] + 1e-12);
    EXPECT_FALSE(rep.warnings.empty());
}

TEST(Compare, FamilySkippedWhenTooLarge) {
    CompareOptions opt;
    opt.chimera = false;
    auto rep = compare_moment(spec(13, 12, 1, 1), opt);
    EXPECT_FALSE(rep.family.has_value());
    EXPECT_FALSE(rep.warnings.empty());
}
