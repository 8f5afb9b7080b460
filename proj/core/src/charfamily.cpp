#include "ffm/charfamily.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace ffm {

UnitGroup::UnitGroup(int q, int N, const Budget& budget) : q_(q), N_(N) {
    if (!is_prime(static_cast<std::uint64_t>(q))) throw DomainError("UnitGroup: q must be prime");
    if (N < 1) throw DomainError("UnitGroup: N must be >= 1");
    double sz = std::pow(static_cast<double>(q), N + 1);
    if (sz > static_cast<double>(budget.enumeration)) throw BudgetExceeded("UnitGroup: q^{N+1} exceeds enumeration budget");
    size_ = static_cast<std::uint64_t>(std::llround(sz));

    // Greedy basis of the abelian q-group: repeatedly take g of largest order
    // modulo the subgroup H built so far, then correct g so that <g> meets H
    // trivially.
    dlog_.assign(size_, {});
    std::vector<char> inH(size_, 0);
    std::vector<std::uint64_t> H{0};
    inH[0] = 1;
    while (H.size() < size_) {
        std::uint64_t best = 0, best_ord = 1, best_h = 0;
        for (std::uint64_t g = 0; g < size_; ++g) {
            if (inH[g]) continue;
            std::uint64_t ord = 1, h = g;
            while (!inH[h]) {
                h = pow(h, static_cast<std::uint64_t>(q_));
                ord *= static_cast<std::uint64_t>(q_);
            }
            if (ord > best_ord) best = g, best_ord = ord, best_h = h;
        }
        const auto& c = dlog_[best_h];
        std::uint64_t g = best;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if (c[i] % best_ord != 0) throw IdentityFailure("group-basis", "coordinate not divisible by the quotient order");
            std::uint64_t t = c[i] / best_ord;
            if (t) g = mul(g, pow(basis_[i], orders_[i] - t));
        }
        basis_.push_back(g);
        orders_.push_back(best_ord);
        std::vector<std::uint64_t> next;
        next.reserve(H.size() * best_ord);
        for (std::uint64_t h : H) {
            std::uint64_t x = h;
            for (std::uint64_t t = 0; t < best_ord; ++t) {
                if (t > 0) {
                    if (inH[x]) throw IdentityFailure("group-basis", "new generator meets the subgroup");
                    dlog_[x] = dlog_[h];
                    dlog_[x].push_back(static_cast<std::uint32_t>(t));
                    inH[x] = 1;
                }
                next.push_back(x);
                x = mul(x, g);
            }
        }
        for (std::uint64_t h : H) dlog_[h].push_back(0);
        H = std::move(next);
    }
    dlog_[0].resize(basis_.size(), 0);
}

std::vector<std::uint32_t> UnitGroup::decode(std::uint64_t g) const {
    std::vector<std::uint32_t> b(N_ + 2, 0);
    b[0] = 1;
    for (int j = 1; j <= N_ + 1; ++j) {
        b[j] = static_cast<std::uint32_t>(g % q_);
        g /= q_;
    }
    return b;
}

std::uint64_t UnitGroup::encode(const std::vector<std::uint32_t>& b) const {
    std::uint64_t g = 0;
    for (int j = N_ + 1; j >= 1; --j) g = g * q_ + b[j];
    return g;
}

std::uint64_t UnitGroup::mul(std::uint64_t a, std::uint64_t b) const {
    auto x = decode(a), y = decode(b);
    std::vector<std::uint32_t> z(N_ + 2, 0);
    for (int i = 0; i <= N_ + 1; ++i) {
        if (!x[i]) continue;
        for (int j = 0; i + j <= N_ + 1; ++j) z[i + j] = static_cast<std::uint32_t>((z[i + j] + x[i] * y[j]) % q_);
    }
    return encode(z);
}

std::uint64_t UnitGroup::pow(std::uint64_t a, std::uint64_t n) const {
    std::uint64_t r = 0;
    while (n) {
        if (n & 1) r = mul(r, a);
        a = mul(a, a);
        n >>= 1;
    }
    return r;
}

std::uint64_t UnitGroup::reversal(const MonicPoly& f) const {
    const auto& c = f.coeffs();
    const int d = f.degree();
    std::vector<std::uint32_t> b(N_ + 2, 0);
    b[0] = 1;
    for (int j = 1; j <= N_ + 1 && j <= d; ++j) b[j] = c[d - j] % q_;
    return encode(b);
}

std::uint64_t character_exponent(const UnitGroup& G, const DirichletCharacter& nu, std::uint64_t g) {
    const auto& lg = G.log(g);
    const std::uint64_t E = G.exponent();
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < lg.size(); ++i) {
        std::uint64_t o = G.orders()[i];
        t = (t + (nu.k[i] * lg[i] % o) * (E / o)) % E;
    }
    return t;
}

cplx character_value(const UnitGroup& G, const DirichletCharacter& nu, std::uint64_t g) {
    double E = static_cast<double>(G.exponent());
    return std::polar(1.0, 2 * kPi * static_cast<double>(character_exponent(G, nu, g)) / E);
}

std::vector<DirichletCharacter> all_even_characters(const UnitGroup& G) {
    std::vector<DirichletCharacter> out;
    out.reserve(G.size());
    const auto& ord = G.orders();
    // 1 + x^{N+1} generates the kernel of reduction mod x^{N+1}
    const std::uint64_t top = static_cast<std::uint64_t>(std::llround(std::pow(G.q(), G.N())));
    std::vector<std::uint64_t> k(ord.size(), 0);
    for (std::uint64_t n = 0; n < G.size(); ++n) {
        DirichletCharacter nu{k, true, false};
        nu.primitive = character_exponent(G, nu, top) != 0;
        out.push_back(std::move(nu));
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (++k[i] < ord[i]) break;
            k[i] = 0;
        }
    }
    return out;
}

std::vector<DirichletCharacter> enumerate_family(const UnitGroup& G) {
    auto all = all_even_characters(G);
    std::vector<DirichletCharacter> out;
    for (auto& nu : all)
        if (nu.primitive) out.push_back(std::move(nu));
    return out;
}

cplx chi_of(const UnitGroup& G, const DirichletCharacter& nu, const MonicPoly& f) {
    return character_value(G, nu, G.reversal(f));
}

namespace {

// hist[d][g] = #monic f of degree d whose reversal is g, d = 0..N+2
std::vector<std::vector<std::uint64_t>> reversal_histograms(const UnitGroup& G, const Budget& budget) {
    const int q = G.q(), N = G.N();
    double total = 0;
    for (int d = 0; d <= N + 2; ++d) total += std::pow(q, d);
    if (total > static_cast<double>(budget.enumeration)) throw BudgetExceeded("l_polynomial: too many monic polynomials");
    std::vector<std::vector<std::uint64_t>> hist(N + 3, std::vector<std::uint64_t>(G.size(), 0));
    for (int d = 0; d <= N + 2; ++d) {
        std::uint64_t count = static_cast<std::uint64_t>(std::llround(std::pow(q, d)));
        for (std::uint64_t idx = 0; idx < count; ++idx) ++hist[d][G.reversal(MonicPoly::from_index(q, d, idx))];
    }
    return hist;
}

LPolynomial l_from_hist(const UnitGroup& G, const DirichletCharacter& nu,
                        const std::vector<std::vector<std::uint64_t>>& hist) {
    const int N = G.N();
    const std::uint64_t E = G.exponent();
    LPolynomial L{G.q(), N, {}};
    std::vector<cplx> full(N + 3);
    std::vector<std::int64_t> by_root(E);
    for (int d = 0; d <= N + 2; ++d) {
        std::fill(by_root.begin(), by_root.end(), 0);
        for (std::uint64_t g = 0; g < G.size(); ++g)
            if (hist[d][g]) by_root[character_exponent(G, nu, g)] += static_cast<std::int64_t>(hist[d][g]);
        cplx s = 0;
        for (std::uint64_t t = 0; t < E; ++t)
            if (by_root[t]) s += static_cast<double>(by_root[t]) * std::polar(1.0, 2 * kPi * t / static_cast<double>(E));
        full[d] = s;
    }
    double scale = std::pow(G.q(), (N + 2) / 2.0);
    for (int d = N + 1; d <= N + 2; ++d)
        if (std::abs(full[d]) > 1e-10 * scale)
            throw IdentityFailure("l-degree", "c_" + std::to_string(d) + " does not vanish");
    full.resize(N + 1);
    L.c = std::move(full);
    return L;
}

}  // namespace

LPolynomial l_polynomial(const UnitGroup& G, const DirichletCharacter& nu) {
    if (!nu.primitive || !nu.even) throw DomainError("l_polynomial: character must be even and primitive");
    return l_from_hist(G, nu, reversal_histograms(G, Budget::from_env()));
}

std::vector<LPolynomial> family_l_polynomials(const UnitGroup& G, const Budget& budget) {
    auto hist = reversal_histograms(G, budget);
    auto fam = enumerate_family(G);
    if (static_cast<double>(fam.size()) * G.size() * (G.N() + 3) > static_cast<double>(budget.terms) * 50)
        throw BudgetExceeded("family_l_polynomials: family too large");
    std::vector<LPolynomial> out;
    out.reserve(fam.size());
    for (const auto& nu : fam) out.push_back(l_from_hist(G, nu, hist));
    return out;
}

std::vector<cplx> l_roots(const LPolynomial& L) {
    // work in v = q^{1/2} u, where the roots sit on the unit circle
    const double sq = std::sqrt(static_cast<double>(L.q));
    std::vector<cplx> a(L.c.size());
    for (std::size_t d = 0; d < a.size(); ++d) a[d] = L.c[d] * std::pow(sq, -static_cast<double>(d));
    int n = static_cast<int>(a.size()) - 1;
    while (n > 0 && std::abs(a[n]) < 1e-12) --n;
    if (n == 0) return {};
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -a[i] / a[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    // a root of multiplicity m comes back as a cluster of m eigenvalues with
    // spread ~ eps^{1/m}; polish the cluster mean as a simple root of the
    // (m-1)-th derivative
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::vector<bool> done(n, false);
    std::vector<cplx> roots;
    for (int i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::vector<int> cl{i};
        for (int j = i + 1; j < n; ++j)
            if (!done[j] && std::abs(ev[j] - ev[i]) < 1e-5) cl.push_back(j);
        cplx v = 0;
        for (int j : cl) v += ev[j], done[j] = true;
        v /= static_cast<double>(cl.size());
        std::vector<cplx> b = a;
        b.resize(n + 1);
        for (std::size_t k = 1; k < cl.size(); ++k) {
            for (std::size_t d = 0; d + 1 < b.size(); ++d) b[d] = b[d + 1] * static_cast<double>(d + 1);
            b.pop_back();
        }
        const int m = static_cast<int>(b.size()) - 1;
        for (int it = 0; it < 4 && m > 0; ++it) {  // Newton polish
            cplx p = 0, dp = 0;
            for (int d = m; d >= 0; --d) {
                dp = dp * v + p;
                p = p * v + b[d];
            }
            if (std::abs(dp) < 1e-300) break;
            v -= p / dp;
        }
        for (std::size_t k = 0; k < cl.size(); ++k) roots.push_back(v / sq);
    }
    return roots;
}

cplx family_moment(const std::vector<LPolynomial>& Ls, int r, int rt, const std::vector<cplx>& alpha) {
    if (static_cast<int>(alpha.size()) != r + rt) throw DomainError("family_moment: alpha needs r + rt entries");
    if (Ls.empty()) throw DomainError("family_moment: empty family");
    auto conv = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        std::vector<cplx> c(a.size() + b.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
        return c;
    };
    const double lq = std::log(static_cast<double>(Ls.front().q));
    cplx total = 0;
    for (const auto& L : Ls) {
        std::vector<cplx> P{1.0}, Q{1.0};
        for (int j = 0; j < r + rt; ++j) {
            std::vector<cplx> f(L.c.size());
            for (std::size_t d = 0; d < L.c.size(); ++d)
                f[d] = L.c[d] * std::exp(-static_cast<double>(d) * (0.5 + alpha[j]) * lq);
            if (j < r) {
                P = conv(P, f);
            } else {
                for (auto& v : f) v = std::conj(v);
                Q = conv(Q, f);
            }
        }
        // the t-average keeps only equal total degrees on both sides
        for (std::size_t D = 0; D < std::min(P.size(), Q.size()); ++D) total += P[D] * Q[D];
    }
    return total / static_cast<double>(Ls.size());
}

cplx family_moment(int q, int N, int r, int rt, const std::vector<cplx>& alpha, const Budget& budget) {
    UnitGroup G(q, N, budget);
    return family_moment(family_l_polynomials(G, budget), r, rt, alpha);
}

}  // namespace ffm
