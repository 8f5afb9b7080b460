#include "ffm/acceptance.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "ffm/charfamily.hpp"
#include "ffm/density.hpp"
#include "ffm/eulerprod.hpp"
#include "ffm/ffpoly.hpp"
#include "ffm/moments.hpp"
#include "ffm/repr.hpp"
#include "ffm/unitary.hpp"

namespace ffm {

namespace {

struct Check {
    bool ok = true;
    std::ostringstream msg;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) msg << "first failure: " << what << "; ";
        ok = ok && cond;
    }
};

// --- 1: necklace formula against exhaustive irreducibility tests
void c1(Check& ck, std::uint64_t) {
    int checked = 0;
    for (auto [q, dmax] : {std::pair{2, 8}, std::pair{3, 6}, std::pair{5, 5}}) {
        for (int d = 1; d <= dmax; ++d) {
            Integer brute = 0;
            for (const auto& f : enumerate_monic(q, d))
                if (is_irreducible_bruteforce(f, q)) ++brute;
            ck.require(brute == irreducible_count(q, d), "E_d mismatch at q=" + std::to_string(q) + " d=" + std::to_string(d));
            ++checked;
        }
    }
    ck.msg << checked << " (q,d) pairs equal";
}

// --- 2: B_n + E_n = q^n / n
void c2(Check& ck, std::uint64_t) {
    int checked = 0;
    for (int q : {2, 3, 5, 7, 11, 13})
        for (int n = 1; n <= 12; ++n) {
            auto t = abe_triple(q, n);
            Rational rhs(ipow(q, n), Integer(n));
            rhs.canonicalize();
            ck.require(t.B + Rational(t.E) == rhs, "q=" + std::to_string(q) + " n=" + std::to_string(n));
            ++checked;
        }
    ck.msg << checked << " identities exact";
}

// --- 3: circle_factor against the I_0 / J_0 power series
void c3(Check& ck, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0, 2 * kPi);
    double worst = 0;
    for (int i = 0; i <= 16; ++i) {
        double r = 0.25 * i;
        cplx dir = std::polar(1.0, ang(rng));
        double i0 = 0, j0 = 0, term = 1;
        for (int k = 0; k < 60; ++k) {
            if (k > 0) term *= (r / 2) * (r / 2) / (static_cast<double>(k) * k);
            i0 += term;
            j0 += (k % 2 ? -term : term);
        }
        cplx a = circle_factor({r * dir}, {});
        cplx b = circle_factor({}, {r * dir});
        worst = std::max({worst, std::abs(a - i0) / std::max(1.0, i0), std::abs(b - j0)});
    }
    ck.require(worst <= 1e-10, "deviation " + std::to_string(worst));
    ck.msg << "max deviation " << worst;
}

// --- 4: exact expectations against xi Monte Carlo
void c4(Check& ck, std::uint64_t seed) {
    std::vector<MonomialSpec> cm = {
        {{1}, {1}},       {{2}, {2}},       {{2}, {1, 1}},    {{1, 1}, {1, 1}}, {{3}, {3}},    {{3}, {1, 2}},
        {{1, 2}, {1, 2}}, {{1}, {}},        {{2}, {1}},       {{4}, {4}},       {{1, 1, 1}, {3}}, {{2, 2}, {4}},
    };
    std::vector<XMomentSpec> xm = {
        {{1}, {1}},       {{0, 1}, {0, 1}}, {{2}, {0, 1}}, {{2}, {2}},
        {{0, 0, 1}, {0, 0, 1}}, {{1, 1}, {0, 0, 1}}, {{1}, {}}, {{1, 1}, {1, 1}},
    };
    auto res = xi_moment_battery(3, cm, xm, 100000, seed);
    double zmax = 0;
    for (const auto& r : res) zmax = std::max(zmax, r.z());
    ck.require(zmax <= 4, "max |z| " + std::to_string(zmax));
    ck.msg << res.size() << " monomials, max |z| = " << zmax;
}

// --- 5: Hermite table
void c5(Check& ck, std::uint64_t seed) {
    const int q = 5, k = 2, D = 24;
    auto T = hermite_coeffs(k, q, D);
    auto h0 = T.h(HermiteIndex(2 * k, 0));
    ck.require(h0.first == 1 && h0.second == 0, "h_0 != 1");
    int low = 0;
    // every index of weighted degree 1 or 2
    std::function<void(HermiteIndex&, int, int)> rec = [&](HermiteIndex& a, int pos, int left) {
        if (pos == 2 * k) {
            int w = HermiteTable::weighted_degree(a);
            if (w >= 1 && w <= 2) {
                ++low;
                ck.require(T.g(a) == 0, "nonzero low-degree coefficient");
            }
            return;
        }
        int n = pos / 2 + 1;
        for (int e = 0; e * n <= left; ++e) {
            a[pos] = e;
            rec(a, pos + 1, left - e * n);
        }
        a[pos] = 0;
    };
    HermiteIndex a(2 * k, 0);
    rec(a, 0, 2);
    const PrimeTable table = PrimeTable::counts(q, k);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0, 1);
    double worst = 0;
    for (int t = 0; t < 24; ++t) {
        std::vector<cplx> w{{nd(rng), nd(rng)}, {nd(rng), nd(rng)}};
        double norm = std::sqrt(std::norm(w[0]) + std::norm(w[1]));
        double rad = 0.5 * (t < 4 ? 1.0 : ud(rng));
        for (auto& x : w) x *= rad / norm;
        worst = std::max(worst, std::abs(T.charfn(w, D) - laplace_transform({}, w, table)));
    }
    ck.require(worst <= 1e-6, "round trip " + std::to_string(worst));
    ck.msg << T.g().size() << " terms at D=" << D << ", " << low << " low-degree indices zero, round-trip max error " << worst;
}

// --- 6: Haar trace moments
void c6(Check& ck, std::uint64_t seed) {
    std::vector<std::vector<int>> parts;  // multiplicity vectors a_1..a_6 with sum j a_j <= 6
    std::function<void(std::vector<int>&, int, int)> rec = [&](std::vector<int>& m, int j, int left) {
        if (j > 6) {
            parts.push_back(m);
            return;
        }
        for (int c = 0; c * j <= left; ++c) {
            m[j - 1] = c;
            rec(m, j + 1, left - c * j);
        }
        m[j - 1] = 0;
    };
    std::vector<int> m(6, 0);
    rec(m, 1, 6);
    std::vector<TraceMonomial> ms;
    for (const auto& a : parts)
        for (const auto& b : parts) ms.push_back({a, b});
    auto res = ds_moment_battery(8, ms, 100000, seed);
    double zmax = 0;
    for (const auto& r : res) zmax = std::max(zmax, r.z());
    ck.require(zmax <= 4, "max |z| " + std::to_string(zmax));
    ck.msg << ms.size() << " monomials, max |z| = " << zmax;
}

// --- 7: psi_e(L_M) against the character on the eigenvalues
void c7(Check& ck, std::uint64_t seed) {
    double worst = 0;
    int count = 0;
    const int q = 3;
    for (int N = 1; N <= 6; ++N) {
        std::vector<UnitarySample> Ms;
        for (int i = 0; i < 20; ++i) Ms.push_back(haar_sample(N, seed + 1000 * N + i, q));
        for (int n = 1; n <= 3; ++n)
            for (int rt = 0; rt <= n; ++rt)
                for (const auto& e : enumerate_e(N, n - rt, rt, false, 6)) {
                    auto psi = psi_e(e, q);
                    std::vector<int> ec = conjugate_partition(e.e);
                    ec.resize(N, 0);
                    for (const auto& s : Ms) {
                        cplx det = 1;
                        for (cplx l : s.eig) det *= l;
                        cplx rhs = schur_eval(ec, s.eig) * std::pow(det, -e.rt);
                        cplx lhs = psi.eval(s.c);
                        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
                        ++count;
                    }
                }
    }
    ck.require(worst <= 1e-8, "relative error " + std::to_string(worst));
    ck.msg << count << " evaluations, max relative error " << worst;
}

// --- 8: two routes to E[psi_e]
void c8(Check& ck, std::uint64_t) {
    int count = 0, nonzero = 0;
    for (int q : {2, 3}) {
        ExpectationEngine engine(q);
        for (int N = 1; N <= 4; ++N)
            for (int n = 1; n <= 3; ++n)
                for (int rt = 0; rt <= n; ++rt)
                    for (const auto& e : enumerate_e(N, n - rt, rt, true, 6)) {
                        auto a = psi_ep_direct(e, engine);
                        auto b = psi_ep_via_ms(e, engine);
                        ++count;
                        if (!a.is_zero()) ++nonzero;
                        if (!(a == b)) {
                            std::ostringstream os;
                            os << "q=" << q << " N=" << N << " rt=" << rt << " " << a.to_string() << " vs " << b.to_string();
                            ck.require(false, os.str());
                        }
                    }
    }
    ck.msg << count << " e-tuples equal (" << nonzero << " nonzero)";
}

// --- 9: representation-sum main term
void c9(Check& ck, std::uint64_t) {
    MomentSpec s;
    s.q = 5;
    s.N = 6;
    s.r = 1;
    s.rt = 0;
    auto a = mt_rep_sum(s).mt;
    s.r = 0;
    s.rt = 1;
    auto b = mt_rep_sum(s).mt;
    ck.require(a == cplx(1, 0) && b == cplx(1, 0), "degenerate cases not exactly 1");
    s.r = s.rt = 1;
    s.K = 16;
    auto m16 = mt_rep_sum(s);
    s.K = 24;
    auto m24 = mt_rep_sum(s);
    bool mono = true;
    for (int w = 9; w <= 24; ++w) mono = mono && m24.shells[w].l1 <= m24.shells[w - 1].l1 + 1e-15;
    double change = std::abs(m24.mt - m16.mt);
    ck.require(mono, "shell l1 not non-increasing beyond norm 8");
    ck.require(change <= 1e-3 * std::abs(m24.mt), "K=16 -> 24 change " + std::to_string(change));
    ck.msg << "r=1,rt=0: " << a.real() << "; r=0,rt=1: " << b.real() << "; r=rt=1: MT = " << m24.mt.real()
           << ", K=16->24 change " << change << ", last-shells l1 " << m24.truncation_estimate;
}

// --- 10: Cauchy reconstruction
void c10(Check& ck, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(-1, 1);
    double worst = 0;
    int count = 0;
    const int q = 5;
    for (int N = 1; N <= 5; ++N)
        for (int n = 1; n <= 3; ++n)
            for (int rt = 0; rt <= n; ++rt)
                for (int t = 0; t < 20; ++t) {
                    auto s = haar_sample(N, seed + 7919 * count, q);
                    std::vector<cplx> alpha(n);
                    for (auto& x : alpha) x = cplx(0, ud(rng));
                    worst = std::max(worst, cauchy_reconstruction_error(q, N, n - rt, rt, alpha, s.c));
                    ++count;
                }
    ck.require(worst <= 1e-8, "relative error " + std::to_string(worst));
    ck.msg << count << " draws, max relative error " << worst;
}

// --- 11: Dirichlet family
void c11(Check& ck, std::uint64_t) {
    int fams = 0;
    double worst_root = 0;
    for (auto [q, N] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{3, 3}, std::pair{2, 1}, std::pair{2, 2}}) {
        UnitGroup G(q, N);
        auto fam = enumerate_family(G);
        Integer expect = ipow(q, N + 1) - ipow(q, N);
        ck.require(Integer(static_cast<unsigned long>(fam.size())) == expect, "family size");
        std::vector<LPolynomial> Ls;
        try {
            Ls = family_l_polynomials(G);
        } catch (const IdentityFailure& e) {
            ck.require(false, e.what());
            continue;
        }
        const double target = 1 / std::sqrt(static_cast<double>(q));
        for (const auto& L : Ls)
            for (cplx z : l_roots(L)) worst_root = std::max(worst_root, std::abs(std::abs(z) - target));
        ck.require(family_moment(Ls, 1, 0, {cplx(0, 0.37)}) == cplx(1, 0), "first moment not exactly 1");
        ck.require(family_moment(Ls, 0, 1, {cplx(0, -0.21)}) == cplx(1, 0), "conjugate first moment not exactly 1");
        cplx c1 = 0;
        for (const auto& L : Ls) c1 += L.c[1];
        ck.require(std::abs(c1 - ipow(q, N).get_d() * (q - 1)) < 1e-9, "sum of c_1 over the family");
        ++fams;
    }
    ck.require(worst_root <= 1e-8, "zero off the circle by " + std::to_string(worst_root));
    ck.msg << fams << " families, max |  |u| - q^{-1/2} | = " << worst_root;
}

// --- 12: chimera second moment against the main term (soft)
void c12(Check& ck, std::uint64_t seed) {
    ChimeraConfig cfg;
    cfg.q = 13;
    cfg.N = 12;
    cfg.beta = 0.45;
    cfg.samples = 20000;
    cfg.seed = seed;
    cfg.mode = WeightMode::hermite;
    cfg.cutoff = 12;
    auto res = chimera_expectation({phi_moment(13, 1, 1, {0.0, 0.0})}, cfg);
    MomentSpec s;
    s.q = 13;
    s.N = 12;
    double mt = mt_rep_sum(s).mt.real();
    double est = res.estimates[0].real();
    double tol = std::max(4 * res.stderrs[0], 0.2 * std::abs(mt));
    ck.require(std::abs(est - mt) <= tol, "moment gap");
    ck.require(std::abs(res.gamma_hat - 1) <= 0.15, "gamma_hat");
    ck.msg << "k=" << res.k << ", E|L(1/2)|^2 = " << est << " +- " << res.stderrs[0] << " vs MT " << mt
           << ", gamma_hat = " << res.gamma_hat << ", ESS " << res.ess;
}

// --- 13: support of retained chimera samples (soft)
void c13(Check& ck, std::uint64_t seed) {
    for (int q : {3, 13}) {
        auto rep = support_probe(q, 12, 10000, seed + q, 1);
        ck.require(rep.violations == 0, "q=" + std::to_string(q) + " violations");
        ck.msg << "q=" << q << ": " << rep.retained << " retained, " << rep.violations << " outside, zero-weight fraction "
               << rep.zero_fraction << "; ";
    }
}

struct Entry {
    const char* title;
    bool soft;
    double limit;
    void (*fn)(Check&, std::uint64_t);
};

const Entry kEntries[] = {
    {"prime counting: necklace formula equals enumeration", false, 5, c1},
    {"B_n + E_n = q^n/n exactly", false, 1, c2},
    {"circle factor against the Bessel series", false, 1, c3},
    {"exact expectations against xi Monte Carlo", false, 60, c4},
    {"Hermite table: h_0, low-degree zeros, round trip", false, 60, c5},
    {"Haar trace moments against Gaussian values", false, 120, c6},
    {"psi_e(L_M) equals the character value", false, 10, c7},
    {"E[psi_e]: direct expansion equals the matrix-integral coefficient", false, 300, c8},
    {"representation-sum main term: exact cases and shell convergence", false, 120, c9},
    {"Cauchy-identity reconstruction", false, 30, c10},
    {"Dirichlet family: size, degree, zeros, first moment", false, 120, c11},
    {"chimera second moment against MT (soft)", true, 900, c12},
    {"chimera support (soft)", true, 300, c13},
};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
    if (id < 1 || id > 13) throw DomainError("criterion id must be in 1..13");
    const Entry& en = kEntries[id - 1];
    CriterionResult r;
    r.id = id;
    r.title = en.title;
    r.soft = en.soft;
    r.time_limit = en.limit;
    Check ck;
    auto t0 = std::chrono::steady_clock::now();
    try {
        en.fn(ck, seed);
    } catch (const std::exception& e) {
        ck.require(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ck.require(r.seconds <= r.time_limit, "over time limit");
    r.pass = ck.ok;
    r.detail = ck.msg.str();
    return r;
}

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, std::uint64_t seed) {
    std::vector<CriterionResult> out;
    for (int id : ids) out.push_back(run_criterion(id, seed));
    return out;
}

std::vector<int> criteria_group(const std::string& name) {
    if (name == "core") return {1, 2, 3, 5, 7, 8, 9, 10, 11};
    if (name == "mc") return {4, 6};
    if (name == "soft") return {12, 13};
    if (name == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
    throw DomainError("unknown verify group '" + name + "' (core, mc, soft, all)");
}

}  // namespace ffm
