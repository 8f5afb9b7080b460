#include "ffm/ffpoly.hpp"

#include <algorithm>

namespace ffm {

FieldParams::FieldParams(int q_) : q(q_), density_ok(q_ > 2), pointwise_ok(q_ > 5), hf_ok(q_ > 11) {
    if (q_ < 2 || !is_prime(static_cast<std::uint64_t>(q_)))
        throw DomainError("q must be prime, got " + std::to_string(q_));
}

MonicPoly::MonicPoly(std::vector<std::uint32_t> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty() || c_.back() != 1) throw DomainError("MonicPoly: leading coefficient must be 1");
}

MonicPoly MonicPoly::from_index(int q, int d, std::uint64_t idx) {
    std::vector<std::uint32_t> c(static_cast<std::size_t>(d) + 1, 0);
    for (int j = 0; j < d; ++j) {
        c[j] = static_cast<std::uint32_t>(idx % static_cast<std::uint64_t>(q));
        idx /= static_cast<std::uint64_t>(q);
    }
    c[d] = 1;
    return MonicPoly(std::move(c));
}

std::uint64_t MonicPoly::index(int q) const {
    std::uint64_t idx = 0;
    for (int j = degree() - 1; j >= 0; --j) idx = idx * static_cast<std::uint64_t>(q) + c_[j];
    return idx;
}

std::string MonicPoly::to_string() const {
    std::string s;
    for (int j = degree(); j >= 0; --j) {
        std::uint32_t a = c_[j];
        if (a == 0) continue;
        if (!s.empty()) s += "+";
        if (j == 0) {
            s += std::to_string(a);
            continue;
        }
        if (a != 1) s += std::to_string(a);
        s += "u";
        if (j > 1) s += "^" + std::to_string(j);
    }
    return s.empty() ? "0" : s;
}

MonicPoly mul(const MonicPoly& f, const MonicPoly& g, int q) {
    const auto& a = f.coeffs();
    const auto& b = g.coeffs();
    std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<std::uint64_t>(a[i]) * b[j];
    }
    std::vector<std::uint32_t> c(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) c[i] = static_cast<std::uint32_t>(acc[i] % q);
    return MonicPoly(std::move(c));
}

std::vector<std::uint32_t> poly_mod(const std::vector<std::uint32_t>& f, const MonicPoly& g, int q) {
    std::vector<std::uint32_t> r = f;
    const auto& gc = g.coeffs();
    int dg = g.degree();
    for (int i = static_cast<int>(r.size()) - 1; i >= dg; --i) {
        std::uint32_t lead = r[i] % q;
        if (!lead) continue;
        for (int j = 0; j <= dg; ++j) {
            std::uint64_t sub = static_cast<std::uint64_t>(lead) * gc[j] % q;
            r[i - dg + j] = static_cast<std::uint32_t>((r[i - dg + j] + q - sub) % q);
        }
    }
    r.resize(std::min<std::size_t>(r.size(), static_cast<std::size_t>(dg)));
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

bool divides(const MonicPoly& g, const MonicPoly& f, int q) {
    if (g.degree() > f.degree()) return false;
    return poly_mod(f.coeffs(), g, q).empty();
}

bool has_root(const MonicPoly& f, int q) {
    for (int x = 0; x < q; ++x) {
        std::uint64_t v = 0;
        for (int j = f.degree(); j >= 0; --j) v = (v * x + f.coeffs()[j]) % q;
        if (v == 0) return true;
    }
    return false;
}

namespace {

std::uint64_t checked_pow(int q, int d, std::uint64_t cap, const char* what) {
    std::uint64_t n = 1;
    for (int i = 0; i < d; ++i) {
        n *= static_cast<std::uint64_t>(q);
        if (n > cap)
            throw BudgetExceeded(std::string(what) + ": q^" + std::to_string(d) + " exceeds enumeration cap " +
                                 std::to_string(cap));
    }
    return n;
}

}  // namespace

std::vector<MonicPoly> enumerate_monic(int q, int d, const Budget& budget) {
    if (d < 0) throw DomainError("enumerate_monic: negative degree");
    std::uint64_t n = checked_pow(q, d, budget.enumeration, "enumerate_monic");
    std::vector<MonicPoly> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(MonicPoly::from_index(q, d, i));
    return out;
}

int mobius(int n) {
    int mu = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

std::vector<int> divisors(int n) {
    std::vector<int> out;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

Integer irreducible_count(int q, int d) {
    if (d < 1) throw DomainError("irreducible_count: degree must be >= 1");
    Integer s = 0;
    for (int e : divisors(d)) {
        int mu = mobius(e);
        if (mu) s += mu * ipow(q, d / e);
    }
    return s / d;
}

bool is_irreducible_bruteforce(const MonicPoly& f, int q) {
    int d = f.degree();
    if (d < 1) return false;
    for (int e = 1; 2 * e <= d; ++e) {
        std::uint64_t n = 1;
        for (int i = 0; i < e; ++i) n *= q;
        for (std::uint64_t i = 0; i < n; ++i)
            if (divides(MonicPoly::from_index(q, e, i), f, q)) return false;
    }
    return true;
}

ABETriple abe_triple(int q, int n) {
    if (n < 1) throw DomainError("abe_triple: n must be >= 1");
    ABETriple t;
    t.A = 0;
    t.B = 0;
    for (int d : divisors(n)) {
        if (d == n) continue;
        Integer Ed = irreducible_count(q, d);
        t.A += Rational(Ed);
        t.B += Rational(Ed * d, n);
    }
    t.A.canonicalize();
    t.B.canonicalize();
    t.E = irreducible_count(q, n);
    return t;
}

PrimeTable PrimeTable::counts(int q, int dmax) {
    FieldParams fp(q);
    PrimeTable t;
    t.q_ = q;
    t.dmax_ = dmax;
    t.E_.assign(static_cast<std::size_t>(dmax) + 1, 0);
    for (int d = 1; d <= dmax; ++d) t.E_[d] = irreducible_count(q, d);
    return t;
}

PrimeTable PrimeTable::build(int q, int dmax, const Budget& budget) {
    PrimeTable t = counts(q, dmax);
    checked_pow(q, dmax, budget.enumeration, "PrimeTable::build");
    t.primes_.assign(static_cast<std::size_t>(dmax) + 1, {});
    for (int d = 1; d <= dmax; ++d) {
        std::uint64_t n = checked_pow(q, d, budget.enumeration, "PrimeTable::build");
        for (std::uint64_t i = 0; i < n; ++i) {
            MonicPoly f = MonicPoly::from_index(q, d, i);
            bool irreducible = true;
            for (int e = 1; 2 * e <= d && irreducible; ++e)
                for (const auto& p : t.primes_[e])
                    if (divides(p, f, q)) {
                        irreducible = false;
                        break;
                    }
            if (irreducible) t.primes_[d].push_back(std::move(f));
        }
        if (Integer(static_cast<unsigned long>(t.primes_[d].size())) != t.E_[d])
            throw IdentityFailure("prime-count", "degree " + std::to_string(d) + ": enumeration found " +
                                                     std::to_string(t.primes_[d].size()) + ", necklace formula " +
                                                     t.E_[d].get_str());
    }
    return t;
}

std::uint64_t PrimeTable::count(int d) const {
    const Integer& e = E_.at(d);
    if (!e.fits_ulong_p()) throw BudgetExceeded("E_" + std::to_string(d) + " does not fit a machine word");
    return e.get_ui();
}

Rational PrimeTable::A(int n) const { return abe_triple(q_, n).A; }
Rational PrimeTable::B(int n) const { return abe_triple(q_, n).B; }

std::vector<PrimeTable::Factor> PrimeTable::factor(const MonicPoly& f) const {
    if (!enumerated()) throw DomainError("PrimeTable::factor needs an enumerated table");
    std::vector<Factor> out;
    MonicPoly rest = f;
    for (int d = 1; d <= dmax_ && rest.degree() > 0; ++d) {
        if (d > rest.degree()) break;
        for (std::size_t i = 0; i < primes_[d].size() && rest.degree() >= d; ++i) {
            const MonicPoly& p = primes_[d][i];
            int m = 0;
            while (rest.degree() >= d && divides(p, rest, q_)) {
                // exact division by a monic divisor
                std::vector<std::uint32_t> r = rest.coeffs();
                int dr = rest.degree();
                std::vector<std::uint32_t> quo(static_cast<std::size_t>(dr - d) + 1, 0);
                for (int k = dr; k >= d; --k) {
                    std::uint32_t lead = r[k];
                    quo[k - d] = lead;
                    if (!lead) continue;
                    for (int j = 0; j <= d; ++j) {
                        std::uint64_t sub = static_cast<std::uint64_t>(lead) * p.coeffs()[j] % q_;
                        r[k - d + j] = static_cast<std::uint32_t>((r[k - d + j] + q_ - sub) % q_);
                    }
                }
                rest = MonicPoly(std::move(quo));
                ++m;
            }
            if (m) out.push_back({d, i, m});
        }
    }
    if (rest.degree() > 0)
        throw DomainError("PrimeTable::factor: irreducible factor of degree " + std::to_string(rest.degree()) +
                          " exceeds table dmax " + std::to_string(dmax_));
    return out;
}

}  // namespace ffm
