#include <gtest/gtest.h>

#include <set>

#include "ffm/ffpoly.hpp"

using namespace ffm;

TEST(FieldParams, RejectsNonPrimes) {
    EXPECT_THROW(FieldParams(4), DomainError);
    EXPECT_THROW(FieldParams(1), DomainError);
    FieldParams f(7);
    EXPECT_TRUE(f.density_ok);
    EXPECT_TRUE(f.pointwise_ok);
    EXPECT_FALSE(f.hf_ok);
}

TEST(MonicPoly, IndexRoundTrip) {
    for (int q : {2, 3, 5})
        for (int d = 0; d <= 4; ++d) {
            std::uint64_t n = 1;
            for (int i = 0; i < d; ++i) n *= q;
            for (std::uint64_t i = 0; i < n; ++i) {
                auto f = MonicPoly::from_index(q, d, i);
                ASSERT_EQ(f.degree(), d);
                ASSERT_EQ(f.index(q), i);
            }
        }
    EXPECT_THROW(MonicPoly({1, 2}), DomainError);
}

TEST(MonicPoly, MultiplicationAndDivision) {
    const int q = 5;
    for (std::uint64_t i = 0; i < 25; ++i)
        for (std::uint64_t j = 0; j < 125; j += 7) {
            auto f = MonicPoly::from_index(q, 2, i);
            auto g = MonicPoly::from_index(q, 3, j);
            auto h = mul(f, g, q);
            EXPECT_EQ(h.degree(), 5);
            EXPECT_TRUE(divides(f, h, q));
            EXPECT_TRUE(divides(g, h, q));
            EXPECT_TRUE(poly_mod(h.coeffs(), f, q).empty());
        }
}

TEST(MonicPoly, RootTestAgreesWithEvaluation) {
    const int q = 7;
    for (auto& f : enumerate_monic(q, 3)) {
        bool root = false;
        for (int x = 0; x < q; ++x) {
            long v = 0, p = 1;
            for (auto a : f.coeffs()) {
                v = (v + a * p) % q;
                p = p * x % q;
            }
            root |= v == 0;
        }
        EXPECT_EQ(has_root(f, q), root) << f.to_string();
    }
}

TEST(Counting, MobiusAndDivisors) {
    std::vector<int> mu{0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0};
    for (int n = 1; n <= 12; ++n) EXPECT_EQ(mobius(n), mu[n]) << n;
    EXPECT_EQ(divisors(12), (std::vector<int>{1, 2, 3, 4, 6, 12}));
}

TEST(Counting, KnownIrreducibleCounts) {
    std::vector<long> q2{0, 2, 1, 2, 3, 6, 9, 18, 30};
    for (int d = 1; d <= 8; ++d) EXPECT_EQ(irreducible_count(2, d), q2[d]);
    std::vector<long> q3{0, 3, 3, 8, 18};
    for (int d = 1; d <= 4; ++d) EXPECT_EQ(irreducible_count(3, d), q3[d]);
}

// Every monic of degree n factors uniquely into irreducibles: q^n = sum over
// multisets, i.e. prod_d (1 - u^d)^{-E_d} = 1/(1 - qu).
TEST(Counting, ZetaFunctionIdentity) {
    for (int q : {2, 3, 5, 7}) {
        const int D = 10;
        std::vector<Integer> s(D + 1, 0);
        s[0] = 1;
        for (int d = 1; d <= D; ++d) {
            Integer E = irreducible_count(q, d);
            // multiply by (1 - u^d)^{-E}: coefficient of u^{dk} is C(E+k-1, k)
            std::vector<Integer> t(D + 1, 0);
            for (int n = 0; n <= D; ++n) {
                Integer binom = 1;
                for (int k = 0; n + d * k <= D; ++k) {
                    t[n + d * k] += s[n] * binom;
                    binom = binom * (E + k) / (k + 1);
                }
            }
            s = t;
        }
        for (int n = 0; n <= D; ++n) EXPECT_EQ(s[n], ipow(q, n)) << "q=" << q << " n=" << n;
    }
}

TEST(PrimeTable, EnumerationMatchesOracle) {
    for (auto [q, dmax] : {std::pair{2, 7}, {3, 5}, {5, 3}}) {
        auto t = PrimeTable::build(q, dmax);
        for (int d = 1; d <= dmax; ++d) {
            EXPECT_EQ(Integer(t.primes(d).size()), t.E(d));
            std::set<std::uint64_t> seen;
            for (const auto& f : t.primes(d)) {
                EXPECT_TRUE(is_irreducible_bruteforce(f, q)) << f.to_string();
                if (d == 2 || d == 3) EXPECT_FALSE(has_root(f, q));
                seen.insert(f.index(q));
            }
            EXPECT_EQ(seen.size(), t.primes(d).size());
        }
    }
}

TEST(PrimeTable, FactorisationReconstructs) {
    const int q = 3;
    auto t = PrimeTable::build(q, 4);
    for (auto& f : enumerate_monic(q, 4)) {
        MonicPoly g;
        for (const auto& fa : t.factor(f))
            for (int m = 0; m < fa.multiplicity; ++m) g = mul(g, t.primes(fa.degree)[fa.index], q);
        EXPECT_EQ(g, f);
    }
}

TEST(PrimeTable, CountsOnlyForLargeDegree) {
    auto t = PrimeTable::counts(13, 40);
    EXPECT_FALSE(t.enumerated());
    EXPECT_EQ(t.E(1), 13);
    EXPECT_THROW(t.count(40), BudgetExceeded);
}

TEST(PrimeTable, BudgetIsEnforced) {
    Budget b;
    b.enumeration = 100;
    EXPECT_THROW(PrimeTable::build(3, 6, b), BudgetExceeded);
    EXPECT_THROW(enumerate_monic(3, 6, b), BudgetExceeded);
}

TEST(ABE, SumsOverProperDivisors) {
    for (int q : {2, 5, 13})
        for (int n = 1; n <= 12; ++n) {
            auto t = abe_triple(q, n);
            Rational A = 0, B = 0;
            for (int d : divisors(n))
                if (d < n) {
                    A += Rational(irreducible_count(q, d));
                    B += Rational(irreducible_count(q, d) * d) / n;
                }
            EXPECT_EQ(t.A, A);
            EXPECT_EQ(t.B, B);
            EXPECT_EQ(t.B + Rational(t.E), Rational(ipow(q, n)) / n);
        }
}
