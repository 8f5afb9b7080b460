#include "ffm/eulerprod.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <unordered_map>

namespace ffm {

XiSample sample_xi(const PrimeTable& table, std::uint64_t seed, int dmax) {
    if (dmax < 0) dmax = table.dmax();
    if (dmax > table.dmax()) throw DomainError("sample_xi: dmax beyond table");
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
    std::mt19937_64 rng(ss);
    std::uniform_real_distribution<double> unif(0.0, 2 * kPi);
    XiSample xi;
    xi.q = table.q();
    xi.dmax = dmax;
    xi.angles.resize(static_cast<std::size_t>(dmax) + 1);
    for (int d = 1; d <= dmax; ++d) {
        xi.angles[d].resize(table.count(d));
        for (double& a : xi.angles[d]) a = unif(rng);
    }
    return xi;
}

XiSample constant_xi(const PrimeTable& table, int dmax) {
    if (dmax < 0) dmax = table.dmax();
    XiSample xi;
    xi.q = table.q();
    xi.dmax = dmax;
    xi.angles.resize(static_cast<std::size_t>(dmax) + 1);
    for (int d = 1; d <= dmax; ++d) xi.angles[d].assign(table.count(d), 0.0);
    return xi;
}

cplx xi_of(const XiSample& xi, const PrimeTable& table, const MonicPoly& f) {
    cplx v = 1;
    for (const auto& fac : table.factor(f)) {
        if (fac.degree > xi.dmax) throw DomainError("xi_of: prime degree beyond sample");
        v *= std::pow(xi.at(fac.degree, fac.index), fac.multiplicity);
    }
    return v;
}

LogCoeffVector xn_values(const XiSample& xi, int k) {
    if (k > xi.dmax) throw DomainError("xn_values: k beyond sampled degrees");
    LogCoeffVector out;
    out.X.assign(static_cast<std::size_t>(k) + 1, 0.0);
    out.b.assign(static_cast<std::size_t>(k) + 1, 0.0);
    for (int n = 1; n <= k; ++n) {
        cplx s = 0;
        for (int d : divisors(n)) {
            int m = n / d;
            cplx part = 0;
            for (double a : xi.angles[d]) part += std::polar(1.0, m * a);
            s += part * (static_cast<double>(d) / n);
        }
        out.X[n] = s;
        out.b[n] = std::sqrt(n / std::pow(static_cast<double>(xi.q), n)) * s;
    }
    return out;
}

std::vector<cplx> lxi_coeffs(const XiSample& xi, int dmax) {
    if (dmax > xi.dmax) throw DomainError("lxi_coeffs: dmax beyond sampled degrees");
    std::vector<cplx> c(static_cast<std::size_t>(dmax) + 1, 0.0);
    c[0] = 1;
    for (int d = 1; d <= dmax; ++d)
        for (double a : xi.angles[d]) {
            cplx z = std::polar(1.0, a);
            // multiply by 1/(1 - z x^d)
            for (int n = d; n <= dmax; ++n) c[n] += z * c[n - d];
        }
    return c;
}

std::vector<cplx> exp_series(const std::vector<cplx>& X, int dmax) {
    std::vector<cplx> c(static_cast<std::size_t>(dmax) + 1, 0.0);
    c[0] = 1;
    for (int n = 1; n <= dmax; ++n) {
        cplx s = 0;
        for (int j = 1; j <= n && j < static_cast<int>(X.size()); ++j) s += static_cast<double>(j) * X[j] * c[n - j];
        c[n] = s / static_cast<double>(n);
    }
    return c;
}

namespace {

// Every vector m with sum k and m_i <= bound_i.
void compositions(const std::vector<int>& bound, int k, std::vector<int>& cur, std::size_t i,
                  const std::function<void(const std::vector<int>&)>& emit) {
    if (i == bound.size()) {
        if (k == 0) emit(cur);
        return;
    }
    for (int m = 0; m <= std::min(k, bound[i]); ++m) {
        cur[i] = m;
        compositions(bound, k - m, cur, i + 1, emit);
    }
    cur[i] = 0;
}

bool normalise(const MonomialSpec& spec, std::vector<int>& hol, std::vector<int>& anti, bool& zero) {
    zero = false;
    hol.clear();
    anti.clear();
    for (int d : spec.hol) {
        if (d < 0) zero = true;
        else if (d > 0) hol.push_back(d);
    }
    for (int d : spec.anti) {
        if (d < 0) zero = true;
        else if (d > 0) anti.push_back(d);
    }
    std::sort(hol.begin(), hol.end());
    std::sort(anti.begin(), anti.end());
    if (std::accumulate(hol.begin(), hol.end(), 0) != std::accumulate(anti.begin(), anti.end(), 0)) zero = true;
    return !zero;
}

Integer to_integer(const Rational& r) {
    if (r.get_den() != 1) throw IdentityFailure("integral-count", "non-integral monomial count " + to_string(r));
    return r.get_num();
}

}  // namespace

Integer monomial_expectation(int q, const MonomialSpec& spec, const Budget& budget) {
    std::vector<int> hol, anti;
    bool zero;
    if (!normalise(spec, hol, anti, zero)) return 0;
    if (hol.empty()) return 1;
    const int a = static_cast<int>(hol.size()), b = static_cast<int>(anti.size());
    if (a + b > Series<Rational>::kMaxVars) throw BudgetExceeded("monomial_expectation: more than 8 factors");
    std::vector<int> caps = hol;
    caps.insert(caps.end(), anti.begin(), anti.end());
    for (int c : caps)
        if (c > 255) throw BudgetExceeded("monomial_expectation: degree above 255");
    const int S = std::accumulate(hol.begin(), hol.end(), 0);
    std::vector<int> w(caps.size(), 1);
    Series<Rational> total(caps, w, 2 * S);
    total.add(Series<Rational>::Key{0}, Rational(1));
    const int dtop = std::max(*std::max_element(hol.begin(), hol.end()), *std::max_element(anti.begin(), anti.end()));
    for (int delta = 1; delta <= dtop; ++delta) {
        std::vector<int> bh(a), ba(b);
        int kh = 0, ka = 0;
        for (int i = 0; i < a; ++i) kh += (bh[i] = hol[i] / delta);
        for (int j = 0; j < b; ++j) ka += (ba[j] = anti[j] / delta);
        int kmax = std::min(kh, ka);
        if (kmax == 0) continue;
        Series<Rational> local(caps, w, 2 * S);
        local.add(Series<Rational>::Key{0}, Rational(1));
        std::vector<int> mh(a, 0), ma(b, 0), e(a + b, 0);
        for (int k = 1; k <= kmax; ++k) {
            compositions(bh, k, mh, 0, [&](const std::vector<int>& x) {
                compositions(ba, k, ma, 0, [&](const std::vector<int>& y) {
                    for (int i = 0; i < a; ++i) e[i] = delta * x[i];
                    for (int j = 0; j < b; ++j) e[a + j] = delta * y[j];
                    local.add(e, Rational(1));
                });
            });
        }
        Rational E(irreducible_count(q, delta));
        total = total.mul(local.pow(E, budget.terms), budget.terms);
    }
    return to_integer(total.coeff(caps));
}

Integer monomial_expectation_hashjoin(int q, const MonomialSpec& spec, const Budget& budget) {
    std::vector<int> hol, anti;
    bool zero;
    if (!normalise(spec, hol, anti, zero)) return 0;
    if (hol.empty()) return 1;
    const int S = std::accumulate(hol.begin(), hol.end(), 0);
    if (S * std::log2(static_cast<double>(q)) > 62) throw BudgetExceeded("hash-join: product index exceeds 64 bits");

    auto side_size = [&](const std::vector<int>& degs) {
        long double n = 1;
        for (int d : degs) n *= std::pow(static_cast<long double>(q), d);
        if (n > static_cast<long double>(budget.enumeration))
            throw BudgetExceeded("hash-join: side enumeration exceeds cap");
        return static_cast<std::uint64_t>(n);
    };
    auto for_each_product = [&](const std::vector<int>& degs, const std::function<void(std::uint64_t)>& emit) {
        std::uint64_t n = side_size(degs);
        std::vector<std::uint64_t> radix;
        for (int d : degs) {
            std::uint64_t r = 1;
            for (int i = 0; i < d; ++i) r *= q;
            radix.push_back(r);
        }
        for (std::uint64_t t = 0; t < n; ++t) {
            std::uint64_t rest = t;
            MonicPoly prod;
            for (std::size_t i = 0; i < degs.size(); ++i) {
                prod = mul(prod, MonicPoly::from_index(q, degs[i], rest % radix[i]), q);
                rest /= radix[i];
            }
            emit(prod.index(q));
        }
    };
    std::unordered_map<std::uint64_t, std::uint64_t> index;
    for_each_product(hol, [&](std::uint64_t key) { ++index[key]; });
    Integer total = 0;
    for_each_product(anti, [&](std::uint64_t key) {
        auto it = index.find(key);
        if (it != index.end()) total += static_cast<unsigned long>(it->second);
    });
    return total;
}

namespace {

// E[exp(sum s_n X_n + t_n conj X_n)] truncated by caps and weighted degree.
Series<Rational> x_series(int q, int k, const std::vector<int>& caps_s, const std::vector<int>& caps_t, int D,
                          const Budget& budget) {
    if (2 * k > Series<Rational>::kMaxVars) throw BudgetExceeded("x-moment series: k above 4");
    std::vector<int> caps(caps_s);
    caps.insert(caps.end(), caps_t.begin(), caps_t.end());
    std::vector<int> w(2 * k);
    for (int n = 1; n <= k; ++n) w[n - 1] = w[k + n - 1] = n;
    Series<Rational> total(caps, w, D);
    total.add(Series<Rational>::Key{0}, Rational(1));

    std::vector<Integer> fact(256);
    fact[0] = 1;
    for (int i = 1; i < 256; ++i) fact[i] = fact[i - 1] * i;

    for (int delta = 1; delta <= k; ++delta) {
        // Per prime of degree delta: average over theta of
        // exp(sum_m (s_{m delta} e^{i m theta} + t_{m delta} e^{-i m theta}) / m).
        const int M = k / delta;
        Series<Rational> local(caps, w, D);
        std::vector<int> e(2 * k, 0);
        std::function<void(int, int, int, Rational)> rec = [&](int m, int wsum, int balance, Rational coef) {
            if (m > M) {
                if (balance == 0) local.add(e, coef);
                return;
            }
            const int n = m * delta;
            for (int as = 0; as <= caps[n - 1]; ++as) {
                int w1 = wsum + n * as;
                if (w1 > D) break;
                for (int bt = 0; bt <= caps[k + n - 1]; ++bt) {
                    int w2 = w1 + n * bt;
                    if (w2 > D) break;
                    e[n - 1] = as;
                    e[k + n - 1] = bt;
                    Rational c = coef / (Rational(ipow(m, as + bt)) * Rational(fact[as] * fact[bt]));
                    rec(m + 1, w2, balance + m * (as - bt), c);
                }
            }
            e[n - 1] = 0;
            e[k + n - 1] = 0;
        };
        rec(1, 0, 0, Rational(1));
        Rational E(irreducible_count(q, delta));
        total = total.mul(local.pow(E, budget.terms), budget.terms);
    }
    return total;
}

}  // namespace

Rational x_mixed_moment(int q, const XMomentSpec& spec, const Budget& budget) {
    if (spec.p.size() != spec.pbar.size()) throw DomainError("x_mixed_moment: p and pbar lengths differ");
    int k = static_cast<int>(spec.p.size());
    while (k > 0 && spec.p[k - 1] == 0 && spec.pbar[k - 1] == 0) --k;
    if (k == 0) return 1;
    int bal = 0, D = 0;
    for (int n = 1; n <= k; ++n) {
        if (spec.p[n - 1] < 0 || spec.pbar[n - 1] < 0) throw DomainError("x_mixed_moment: negative exponent");
        bal += n * (spec.p[n - 1] - spec.pbar[n - 1]);
        D += n * (spec.p[n - 1] + spec.pbar[n - 1]);
    }
    if (bal != 0) return 0;  // rotation theta -> theta + phi deg maps X_n to e^{in phi} X_n
    std::vector<int> cs(spec.p.begin(), spec.p.begin() + k), ct(spec.pbar.begin(), spec.pbar.begin() + k);
    Series<Rational> G = x_series(q, k, cs, ct, D, budget);
    std::vector<int> e(cs);
    e.insert(e.end(), ct.begin(), ct.end());
    Rational c = G.coeff(e);
    Integer f = 1;
    for (int v : e)
        for (int i = 2; i <= v; ++i) f *= i;
    Rational r = c * Rational(f);
    r.canonicalize();
    return r;
}

Series<Rational> x_moment_series(int q, int k, int D, const Budget& budget) {
    std::vector<int> caps(k);
    for (int n = 1; n <= k; ++n) caps[n - 1] = std::min(255, D / n);
    return x_series(q, k, caps, caps, D, budget);
}

Integer ExpectationEngine::count(MonomialSpec spec) {
    std::sort(spec.hol.begin(), spec.hol.end());
    std::sort(spec.anti.begin(), spec.anti.end());
    if (spec.anti < spec.hol) std::swap(spec.hol, spec.anti);  // the count is symmetric
    auto key = std::make_pair(spec.hol, spec.anti);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    Integer v = monomial_expectation(q_, spec, budget_);
    std::lock_guard<std::mutex> lk(mu_);
    cache_.emplace(std::move(key), v);
    return v;
}

}  // namespace ffm

namespace ffm {

std::vector<MCResult> xi_moment_battery(int q, const std::vector<MonomialSpec>& c_monos,
                                        const std::vector<XMomentSpec>& x_monos, int nsamples, std::uint64_t seed) {
    if (nsamples < 2) throw DomainError("xi_moment_battery: need at least 2 samples");
    int dmax = 1;
    for (const auto& m : c_monos) {
        for (int d : m.hol) dmax = std::max(dmax, d);
        for (int d : m.anti) dmax = std::max(dmax, d);
    }
    for (const auto& m : x_monos) dmax = std::max<int>(dmax, static_cast<int>(std::max(m.p.size(), m.pbar.size())));
    const PrimeTable table = PrimeTable::counts(q, dmax);
    const std::size_t M = c_monos.size() + x_monos.size();
    std::vector<cplx> sum(M, 0.0);
    std::vector<double> sq(M, 0.0);
    for (int s = 0; s < nsamples; ++s) {
        XiSample xi = sample_xi(table, seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(s), dmax);
        auto c = lxi_coeffs(xi, dmax);
        auto X = xn_values(xi, dmax).X;
        std::size_t i = 0;
        for (const auto& m : c_monos) {
            cplx v = 1;
            for (int d : m.hol) v *= c[d];
            for (int d : m.anti) v *= std::conj(c[d]);
            sum[i] += v;
            sq[i++] += std::norm(v);
        }
        for (const auto& m : x_monos) {
            cplx v = 1;
            for (std::size_t n = 0; n < m.p.size(); ++n)
                for (int t = 0; t < m.p[n]; ++t) v *= X[n + 1];
            for (std::size_t n = 0; n < m.pbar.size(); ++n)
                for (int t = 0; t < m.pbar[n]; ++t) v *= std::conj(X[n + 1]);
            sum[i] += v;
            sq[i++] += std::norm(v);
        }
    }
    std::vector<MCResult> out;
    const double n = nsamples;
    for (std::size_t i = 0; i < M; ++i) {
        MCResult r;
        r.mean = sum[i] / n;
        double var = (sq[i] / n - std::norm(r.mean)) * n / (n - 1);
        r.stderr_ = std::sqrt(std::max(var, 0.0) / n);
        if (i < c_monos.size()) {
            r.exact = monomial_expectation(q, c_monos[i]).get_d();
        } else {
            XMomentSpec m = x_monos[i - c_monos.size()];
            std::size_t len = std::max(m.p.size(), m.pbar.size());
            m.p.resize(len, 0);
            m.pbar.resize(len, 0);
            r.exact = x_mixed_moment(q, m).get_d();
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace ffm
