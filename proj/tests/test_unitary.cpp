#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ffm/unitary.hpp"

using namespace ffm;

namespace {

// Asymptotic two-sample Kolmogorov-Smirnov p-value.
double ks_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    const double n = double(a.size()) * b.size() / (a.size() + b.size());
    const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0;
    for (int k = 1; k <= 100; ++k) p += 2 * (k % 2 ? 1 : -1) * std::exp(-2.0 * k * k * lam * lam);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TEST(Haar, UnitaryAndDeterministic) {
    for (int N : {1, 4, 12}) {
        auto a = haar_sample(N, 3, 5), b = haar_sample(N, 3, 5);
        EXPECT_EQ(a.eig, b.eig);
        for (cplx z : a.eig) EXPECT_NEAR(std::abs(z), 1, 1e-10);
        std::mt19937_64 rng(9);
        auto M = haar_matrix(N, rng);
        double err = (M.adjoint() * M - Eigen::MatrixXcd::Identity(N, N)).norm();
        EXPECT_LT(err, 1e-12);
    }
    EXPECT_THROW(haar_sample(0, 1), DomainError);
}

TEST(Haar, TraceDistributionIsLeftInvariant) {
    const int N = 4, n = 4000;
    std::mt19937_64 rng(17), rng_u(23);
    Eigen::MatrixXcd U = haar_matrix(N, rng_u);
    std::vector<double> re_a, re_b, ab_a, ab_b;
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXcd M = haar_matrix(N, rng);
        cplx t = M.trace();
        re_a.push_back(t.real());
        ab_a.push_back(std::abs(t));
        Eigen::MatrixXcd M2 = haar_matrix(N, rng);
        cplx t2 = (U * M2).trace();
        re_b.push_back(t2.real());
        ab_b.push_back(std::abs(t2));
    }
    EXPECT_GT(ks_pvalue(re_a, re_b), 0.01);
    EXPECT_GT(ks_pvalue(ab_a, ab_b), 0.01);
}

TEST(Secular, SmallCases) {
    const int q = 7;
    cplx lam = std::polar(1.0, 0.4);
    auto c = secular_coeffs({lam}, q);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0], cplx(1));
    EXPECT_LT(std::abs(c[1] + std::sqrt(7.0) * lam), 1e-14);
}

// det(I - q^{1/2} u M) expanded directly.
TEST(Secular, MatchesCharacteristicPolynomial) {
    const int q = 3;
    auto s = haar_sample(5, 4, q);
    std::vector<cplx> poly{1.0};
    for (cplx z : s.eig) {
        std::vector<cplx> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= std::sqrt(3.0) * z * poly[i];
        }
        poly = next;
    }
    for (int d = 0; d <= 5; ++d) EXPECT_LT(std::abs(poly[d] - s.c[d]), 1e-10);
}

TEST(Secular, NewtonIdentitiesRecoverTraces) {
    for (int N : {5, 16, 32}) {
        auto s = haar_sample(N, 100 + N, 5, 2 * N);
        auto tr = traces_from_secular(s.c, 5, 2 * N);
        for (int n = 0; n <= 2 * N; ++n) EXPECT_LT(std::abs(tr[n] - s.traces[n]), 1e-8) << "N=" << N << " n=" << n;
    }
}

TEST(DiaconisShahshahani, ExactValues) {
    EXPECT_EQ(ds_exact({{1}, {1}}), 1);
    EXPECT_EQ(ds_exact({{0, 1}, {0, 1}}), 2);
    EXPECT_EQ(ds_exact({{2}, {2}}), 2);
    EXPECT_EQ(ds_exact({{1, 1}, {1, 1}}), 2);
    EXPECT_EQ(ds_exact({{2}, {0, 1}}), 0);
    EXPECT_EQ(ds_exact({{1}, {}}), 0);
}

TEST(DiaconisShahshahani, MonteCarloBattery) {
    std::vector<TraceMonomial> ms{{{1}, {}}, {{1}, {1}}, {{0, 1}, {0, 1}}, {{2}, {0, 1}}, {{1, 1}, {1, 1}}};
    auto r = ds_moment_battery(8, ms, 20000, 77);
    for (std::size_t i = 0; i < ms.size(); ++i) EXPECT_LE(r[i].z(), 4.0) << i << ": " << r[i].mean;
}

TEST(Chimera, ConstantFunctionalIsExact) {
    ChimeraConfig cfg;
    cfg.q = 5;
    cfg.N = 6;
    cfg.k = 1;
    cfg.samples = 2000;
    auto r = chimera_expectation({phi_one()}, cfg);
    EXPECT_EQ(r.estimates[0], cplx(1.0));
    EXPECT_GE(r.ess, 1);
    EXPECT_LE(r.ess, cfg.samples);
    EXPECT_GT(r.gamma_hat, 0);
}

TEST(Chimera, IndependentOfThreadCount) {
    ChimeraConfig cfg;
    cfg.q = 5;
    cfg.N = 6;
    cfg.k = 2;
    cfg.samples = 3000;
    auto a = chimera_expectation({phi_abs2(1), phi_coeff(2)}, cfg);
    cfg.threads = 3;
    auto b = chimera_expectation({phi_abs2(1), phi_coeff(2)}, cfg);
    EXPECT_EQ(a.estimates, b.estimates);
    EXPECT_EQ(a.gamma_hat, b.gamma_hat);
}

TEST(Chimera, WeightModesAgree) {
    ChimeraConfig cfg;
    cfg.q = 5;
    cfg.N = 8;
    cfg.k = 2;
    cfg.samples = 4000;
    cfg.mode = WeightMode::hermite;
    auto h = chimera_expectation({phi_abs2(1)}, cfg);
    cfg.mode = WeightMode::fourier;
    cfg.seed = 2;
    auto f = chimera_expectation({phi_abs2(1)}, cfg);
    double joint = std::hypot(h.stderrs[0], f.stderrs[0]);
    EXPECT_LE(std::abs(h.estimates[0] - f.estimates[0]), 4 * joint);
}

// Low-degree coefficients have their Euler-product means under the chimera measure.
TEST(Chimera, LowDegreeMoments) {
    ChimeraConfig cfg;
    cfg.q = 13;
    cfg.N = 12;
    cfg.k = 3;
    cfg.samples = 4000;
    auto r = chimera_expectation({phi_coeff(1), phi_abs2(1)}, cfg);
    EXPECT_LE(std::abs(r.estimates[0]), 4 * r.stderrs[0]);
    EXPECT_LE(std::abs(r.estimates[1] - 13.0), std::max(4 * r.stderrs[1], 1.3));
}

TEST(Chimera, SupportBound) {
    auto rep = support_probe(3, 8, 2000, 5, 1);
    EXPECT_EQ(rep.violations, 0);
    EXPECT_LE(rep.max_retained_x1, 3.1);
}

TEST(Chimera, CoordinatesUseTraces) {
    auto s = haar_sample(4, 1, 5, 3);
    auto x = chimera_coords(s, 5, 3);
    for (int n = 1; n <= 3; ++n) EXPECT_LT(std::abs(x[n - 1] + std::pow(5.0, n / 2.0) * s.traces[n] / double(n)), 1e-12);
}
