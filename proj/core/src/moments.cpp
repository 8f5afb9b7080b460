#include "ffm/moments.hpp"

#include <algorithm>
#include <numeric>

#include "ffm/charfamily.hpp"

namespace ffm {

QSqrtScalar psi_ep_direct(const ETuple& e, ExpectationEngine& engine, const Budget& budget) {
    const int q = engine.q();
    QSqrtScalar total = QSqrtScalar::zero(q);
    const CoeffPolynomial psi = psi_e(e, q, budget);
    for (const auto& [m, coef] : psi.terms()) {
        int hol = std::accumulate(m.hol.begin(), m.hol.end(), 0);
        int anti = std::accumulate(m.anti.begin(), m.anti.end(), 0);
        if (hol != anti) continue;  // orthogonality of the phases
        Integer n = engine.count(MonomialSpec{m.hol, m.anti});
        if (n == 0) continue;
        total += coef * Rational(n);
    }
    return total;
}

QSqrtScalar psi_ep_direct(const ETuple& e, int q, const Budget& budget) {
    ExpectationEngine engine(q, budget);
    return psi_ep_direct(e, engine, budget);
}

QSqrtScalar psi_ep_via_ms(const ETuple& e, ExpectationEngine& engine) {
    const int q = engine.q();
    const int n = e.size();
    if (static_cast<int>(e.e.size()) != n) throw DomainError("psi_ep_via_ms: e needs r + rt entries");
    if (n > 8) throw BudgetExceeded("psi_ep_via_ms: more than 8 variables");
    // target exponent of q^{alpha_i}
    std::vector<int> T(n);
    for (int i = 0; i < n; ++i) T[i] = i < e.rt ? i + e.N - e.e[i] : i - e.e[i];
    const int binom = n * (n - 1) / 2;
    if (std::accumulate(T.begin(), T.end(), 0) != binom) return QSqrtScalar::zero(q);

    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    Rational total = 0;
    do {
        // Vandermonde term: prod_i q^{alpha_i (n-1-sigma(i))}
        int inv = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (sigma[a] > sigma[b]) ++inv;
        std::vector<int> hol, anti;
        bool ok = true;
        int D = 0, H = 0;
        for (int i = 0; i < n && ok; ++i) {
            int V = n - 1 - sigma[i];
            // |f|^{-1/2+alpha} on conjugate rows, |f|^{-1/2-alpha} on the others
            int d = i < e.rt ? T[i] - V : V - T[i];
            if (d < 0) ok = false;
            else if (i < e.rt) D += d, anti.push_back(d);
            else H += d, hol.push_back(d);
        }
        if (!ok || D != H) continue;
        hol.erase(std::remove(hol.begin(), hol.end(), 0), hol.end());
        anti.erase(std::remove(anti.begin(), anti.end(), 0), anti.end());
        Integer cnt = engine.count(MonomialSpec{hol, anti});
        if (cnt == 0) continue;
        Rational term(cnt, ipow(q, D));
        term.canonicalize();
        total += inv % 2 ? -term : term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    int sgn = std::accumulate(e.e.begin(), e.e.end(), 0) + binom + e.N * e.rt;
    if ((sgn % 2 + 2) % 2) total = -total;
    return QSqrtScalar(q, total);
}

QSqrtScalar psi_ep_via_ms(const ETuple& e, int q, const Budget& budget) {
    ExpectationEngine engine(q, budget);
    return psi_ep_via_ms(e, engine);
}

std::vector<cplx> MomentSpec::resolved_alpha() const {
    if (alpha.empty()) return std::vector<cplx>(r + rt, 0.0);
    if (static_cast<int>(alpha.size()) != r + rt) throw DomainError("moment: alpha needs r + rt entries");
    for (cplx a : alpha)
        if (std::abs(a.real()) > 1e-15) throw DomainError("moment: alpha must be purely imaginary");
    return alpha;
}

int MomentSpec::resolved_K() const {
    if (K >= 0) return K;
    if (!(tol > 0 && tol < 1)) throw DomainError("moment: tol must lie in (0, 1)");
    int k = static_cast<int>(std::ceil(std::log(1 / tol) / std::log(static_cast<double>(q)) - 1e-12));
    return std::max(16, 4 * k);
}

MomentReport mt_rep_sum(const MomentSpec& spec, const Budget& budget) {
    if (spec.q < 2 || spec.N < 1 || spec.r < 0 || spec.rt < 0 || spec.r + spec.rt < 1)
        throw DomainError("moment: need q >= 2, N >= 1, r + rt >= 1");
    const auto alpha = spec.resolved_alpha();
    MomentReport rep;
    rep.K = spec.resolved_K();
    auto es = enumerate_e(spec.N, spec.r, spec.rt, true, rep.K);
    if (es.size() > budget.enumeration) throw BudgetExceeded("moment: too many e-tuples below the cutoff");
    ExpectationEngine engine(spec.q, budget);
    rep.shells.resize(rep.K + 1);
    for (int w = 0; w <= rep.K; ++w) rep.shells[w].norm = w;
    for (const auto& e : es) {
        Shell& sh = rep.shells[e.weight_norm()];
        ++sh.terms;
        QSqrtScalar v = psi_ep_via_ms(e, engine);
        if (v.is_zero()) continue;
        ++sh.nonzero;
        cplx t = kappa(e, alpha, spec.q) * v.to_double();
        sh.partial += t;  // shell sum for now
        sh.l1 += std::abs(t);
    }
    cplx run = 0;
    for (auto& sh : rep.shells) {
        run += sh.partial;
        sh.partial = run;
    }
    rep.mt = run;
    rep.truncation_estimate = rep.shells[rep.K].l1 + (rep.K > 0 ? rep.shells[rep.K - 1].l1 : 0.0);
    return rep;
}

MomentReport compare_moment(const MomentSpec& spec, const CompareOptions& opt, const Budget& budget) {
    MomentReport rep = mt_rep_sum(spec, budget);
    const auto alpha = spec.resolved_alpha();
    if (opt.chimera) {
        if (spec.q <= 11) rep.warnings.push_back("q <= 11: outside the regime where the chimera bound is proved");
        ChimeraConfig cfg;
        cfg.q = spec.q;
        cfg.N = spec.N;
        cfg.beta = spec.beta;
        cfg.samples = opt.samples;
        cfg.seed = opt.seed;
        cfg.mode = opt.mode;
        cfg.cutoff = opt.cutoff;
        cfg.threads = opt.threads;
        cfg.density.budget = budget;
        auto res = chimera_expectation({phi_moment(spec.q, spec.r, spec.rt, alpha)}, cfg);
        rep.diff_chimera_mt = std::abs(res.estimates[0] - rep.mt);
        rep.chimera = std::move(res);
    }
    if (opt.family) {
        double size = std::pow(static_cast<double>(spec.q), spec.N + 2);
        if (size <= static_cast<double>(budget.enumeration) && size <= 2e6) {
            rep.family = family_moment(spec.q, spec.N, spec.r, spec.rt, alpha, budget);
            rep.diff_family_mt = std::abs(*rep.family - rep.mt);
        } else {
            rep.warnings.push_back("family skipped: q^{N+2} too large to enumerate");
        }
    }
    return rep;
}

}  // namespace ffm
