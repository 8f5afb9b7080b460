#include "ffm/unitary.hpp"

#include <Eigen/Eigenvalues>
#include <exception>
#include <memory>
#include <thread>

namespace ffm {

Eigen::MatrixXcd haar_matrix(int N, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd Z(N, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) Z(i, j) = cplx(nd(rng), nd(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
    Eigen::MatrixXcd Q = qr.householderQ();
    const auto& R = qr.matrixQR();
    for (int j = 0; j < N; ++j) {
        cplx d = R(j, j);
        double a = std::abs(d);
        Q.col(j) *= a > 0 ? d / a : cplx(1, 0);
    }
    return Q;
}

std::vector<cplx> power_sums(const std::vector<cplx>& eig, int jmax) {
    std::vector<cplx> p(static_cast<std::size_t>(jmax) + 1, 0.0);
    p[0] = static_cast<double>(eig.size());
    for (cplx l : eig) {
        cplx z = 1;
        for (int j = 1; j <= jmax; ++j) {
            z *= l;
            p[j] += z;
        }
    }
    return p;
}

std::vector<cplx> secular_coeffs(const std::vector<cplx>& eig, int q) {
    const int N = static_cast<int>(eig.size());
    // elementary symmetric functions by multiplying out prod (1 + l x)
    std::vector<cplx> e(static_cast<std::size_t>(N) + 1, 0.0);
    e[0] = 1;
    for (int i = 0; i < N; ++i)
        for (int d = i + 1; d >= 1; --d) e[d] += eig[i] * e[d - 1];
    const double sq = -std::sqrt(static_cast<double>(q));
    double f = 1;
    for (int d = 0; d <= N; ++d) {
        e[d] *= f;
        f *= sq;
    }
    return e;
}

std::vector<cplx> traces_from_secular(const std::vector<cplx>& c, int q, int jmax) {
    const int N = static_cast<int>(c.size()) - 1;
    std::vector<cplx> e(c.size());
    const double sq = -std::sqrt(static_cast<double>(q));
    double f = 1;
    for (int d = 0; d <= N; ++d) {
        e[d] = c[d] / f;
        f *= sq;
    }
    std::vector<cplx> p(static_cast<std::size_t>(jmax) + 1, 0.0);
    p[0] = static_cast<double>(N);
    for (int n = 1; n <= jmax; ++n) {
        cplx s = 0;
        for (int i = 1; i < n; ++i)
            if (i <= N) s += (i % 2 ? 1.0 : -1.0) * e[i] * p[n - i];
        if (n <= N) s += (n % 2 ? 1.0 : -1.0) * static_cast<double>(n) * e[n];
        p[n] = s;
    }
    return p;
}

UnitarySample sample_from_matrix(const Eigen::MatrixXcd& M, int q, int jmax) {
    UnitarySample s;
    s.N = static_cast<int>(M.rows());
    if (jmax < 0) jmax = s.N;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    s.eig.assign(es.eigenvalues().data(), es.eigenvalues().data() + s.N);
    s.traces = power_sums(s.eig, jmax);
    if (q > 0) s.c = secular_coeffs(s.eig, q);
    s.b.assign(static_cast<std::size_t>(jmax) + 1, 0.0);
    for (int n = 1; n <= jmax; ++n) s.b[n] = -s.traces[n] / std::sqrt(static_cast<double>(n));
    return s;
}

UnitarySample haar_sample(int N, std::uint64_t seed, int q, int jmax) {
    if (N < 1) throw DomainError("haar_sample: N must be >= 1");
    auto rng = chunk_rng(seed, 0);
    return sample_from_matrix(haar_matrix(N, rng), q, jmax);
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(ss);
}

int TraceMonomial::degree_a() const {
    int d = 0;
    for (std::size_t j = 0; j < a.size(); ++j) d += static_cast<int>(j + 1) * a[j];
    return d;
}
int TraceMonomial::degree_b() const {
    int d = 0;
    for (std::size_t j = 0; j < b.size(); ++j) d += static_cast<int>(j + 1) * b[j];
    return d;
}

cplx TraceMonomial::eval(const std::vector<cplx>& traces) const {
    cplx v = 1;
    for (std::size_t j = 0; j < a.size(); ++j)
        for (int t = 0; t < a[j]; ++t) v *= traces[j + 1];
    for (std::size_t j = 0; j < b.size(); ++j)
        for (int t = 0; t < b[j]; ++t) v *= std::conj(traces[j + 1]);
    return v;
}

Integer ds_exact(const TraceMonomial& m) {
    std::size_t L = std::max(m.a.size(), m.b.size());
    Integer v = 1;
    for (std::size_t j = 0; j < L; ++j) {
        int aj = j < m.a.size() ? m.a[j] : 0, bj = j < m.b.size() ? m.b[j] : 0;
        if (aj != bj) return 0;
        v *= ipow(static_cast<int>(j + 1), aj);
        for (int t = 2; t <= aj; ++t) v *= t;
    }
    return v;
}

namespace {

// Kahan-compensated running sum
struct Kahan {
    double s = 0, c = 0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

// Runs body(chunk_index, rng, begin, end) over fixed chunks of kChunk samples.
void for_chunks(int nsamples, std::uint64_t seed, int threads,
                const std::function<void(std::mt19937_64&, int, int)>& body) {
    const int nchunks = (nsamples + kChunk - 1) / kChunk;
    auto run = [&](int c0, int stride) {
        for (int c = c0; c < nchunks; c += stride) {
            auto rng = chunk_rng(seed, static_cast<std::uint64_t>(c));
            body(rng, c * kChunk, std::min(nsamples, (c + 1) * kChunk));
        }
    };
    threads = std::max(1, std::min(threads, nchunks));
    if (threads == 1) {
        run(0, 1);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                run(t, threads);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<MCResult> ds_moment_battery(int N, const std::vector<TraceMonomial>& ms, int nsamples,
                                        std::uint64_t seed) {
    int jmax = 1;
    for (const auto& m : ms) {
        if (m.degree_a() > N || m.degree_b() > N)
            throw DomainError("ds_moment_check: weighted degree exceeds N");
        jmax = std::max<int>(jmax, static_cast<int>(std::max(m.a.size(), m.b.size())));
    }
    std::vector<std::vector<cplx>> vals(ms.size(), std::vector<cplx>(nsamples));
    for_chunks(nsamples, seed, 1, [&](std::mt19937_64& rng, int i0, int i1) {
        for (int i = i0; i < i1; ++i) {
            auto s = sample_from_matrix(haar_matrix(N, rng), 0, jmax);
            for (std::size_t m = 0; m < ms.size(); ++m) vals[m][i] = ms[m].eval(s.traces);
        }
    });
    std::vector<MCResult> out;
    for (std::size_t m = 0; m < ms.size(); ++m) {
        Kahan re, im;
        for (cplx v : vals[m]) {
            re.add(v.real());
            im.add(v.imag());
        }
        cplx mean(re.s / nsamples, im.s / nsamples);
        double var = 0;
        for (cplx v : vals[m]) var += std::norm(v - mean);
        var /= std::max(1, nsamples - 1);
        out.push_back({mean, std::sqrt(var / nsamples), cplx(ds_exact(ms[m]).get_d(), 0)});
    }
    return out;
}

MCResult ds_moment_check(int N, const TraceMonomial& m, int nsamples, std::uint64_t seed) {
    return ds_moment_battery(N, {m}, nsamples, seed).front();
}

std::vector<cplx> chimera_coords(const UnitarySample& s, int q, int k) {
    std::vector<cplx> x(k);
    for (int n = 1; n <= k; ++n)
        x[n - 1] = -std::pow(static_cast<double>(q), n / 2.0) * s.traces.at(n) / static_cast<double>(n);
    return x;
}

Functional phi_one() {
    return [](const std::vector<cplx>&) { return cplx(1, 0); };
}

Functional phi_coeff(int d, bool conj) {
    return [d, conj](const std::vector<cplx>& c) {
        cplx v = d < static_cast<int>(c.size()) ? c[d] : cplx{};
        return conj ? std::conj(v) : v;
    };
}

Functional phi_abs2(int d) {
    return [d](const std::vector<cplx>& c) {
        return cplx(d < static_cast<int>(c.size()) ? std::norm(c[d]) : 0.0, 0);
    };
}

Functional phi_moment(int q, int r, int rt, const std::vector<cplx>& alpha) {
    if (static_cast<int>(alpha.size()) != r + rt) throw DomainError("phi_moment: alpha needs r + rt entries");
    const double lq = std::log(static_cast<double>(q));
    return [=](const std::vector<cplx>& c) {
        cplx v = 1;
        for (int j = 0; j < r + rt; ++j) {
            cplx L = 0;
            for (std::size_t d = 0; d < c.size(); ++d)
                L += c[d] * std::exp(-static_cast<double>(d) * (0.5 + alpha[j]) * lq);
            v *= j < r ? L : std::conj(L);
        }
        return v;
    };
}

int ChimeraConfig::resolved_k() const {
    if (k >= 1) return k;
    if (!(beta > 0.25 && beta < 0.5)) throw DomainError("chimera: beta must lie in (1/4, 1/2)");
    int kk = static_cast<int>(std::floor(std::pow(static_cast<double>(N), beta) + 1e-12));
    if (kk < 1) throw DomainError("chimera: floor(N^beta) is 0");
    return kk;
}

std::function<double(const std::vector<cplx>&)> make_weight(const ChimeraConfig& cfg) {
    const int k = cfg.resolved_k();
    if (cfg.mode == WeightMode::fourier) {
        auto eng = std::make_shared<DensityEngine>(PrimeTable::counts(cfg.q, k), k, cfg.density);
        return [eng](const std::vector<cplx>& x) { return eng->weight(x); };
    }
    auto tbl = std::make_shared<HermiteTable>(hermite_coeffs(k, cfg.q, cfg.cutoff, cfg.density.budget));
    int cutoff = cfg.cutoff;
    return [tbl, cutoff](const std::vector<cplx>& x) { return hermite_sampling_weight(*tbl, x, cutoff); };
}

ChimeraResult chimera_expectation(const std::vector<Functional>& phis, const ChimeraConfig& cfg) {
    if (cfg.samples < 16) throw DomainError("chimera: need at least 16 samples");
    const int k = cfg.resolved_k();
    if (k > cfg.N) throw DomainError("chimera: k exceeds N");
    auto weight = make_weight(cfg);
    const int n = cfg.samples;
    const std::size_t F = phis.size();
    std::vector<double> w(n);
    std::vector<cplx> val(static_cast<std::size_t>(n) * F);
    for_chunks(n, cfg.seed, cfg.threads, [&](std::mt19937_64& rng, int i0, int i1) {
        for (int i = i0; i < i1; ++i) {
            auto s = sample_from_matrix(haar_matrix(cfg.N, rng), cfg.q, k);
            w[i] = weight(chimera_coords(s, cfg.q, k));
            if (!std::isfinite(w[i]) || w[i] < 0) throw IdentityFailure("weight-finite", "non-finite chimera weight");
            for (std::size_t f = 0; f < F; ++f) val[i * F + f] = phis[f](s.c);
        }
    });

    ChimeraResult res;
    res.k = k;
    res.samples = n;
    Kahan sw, sw2;
    for (double x : w) {
        sw.add(x);
        sw2.add(x * x);
    }
    if (!(sw.s > 0)) throw IdentityFailure("effective-sample-size", "all chimera weights vanish");
    res.gamma_hat = sw.s / n;
    res.ess = sw.s * sw.s / sw2.s;
    if (res.ess < 10) throw IdentityFailure("effective-sample-size", "ESS " + std::to_string(res.ess) + " < 10");

    constexpr int B = 16;
    std::vector<double> gb(B);
    for (int b = 0; b < B; ++b) {
        Kahan s;
        int i0 = static_cast<int>(static_cast<long long>(n) * b / B), i1 = static_cast<int>(static_cast<long long>(n) * (b + 1) / B);
        for (int i = i0; i < i1; ++i) s.add(w[i]);
        gb[b] = s.s / (i1 - i0);
    }
    auto batch_se = [&](const std::vector<cplx>& v) {
        cplx m = 0;
        for (cplx x : v) m += x;
        m /= static_cast<double>(v.size());
        double var = 0;
        for (cplx x : v) var += std::norm(x - m);
        return std::sqrt(var / (v.size() - 1) / v.size());
    };
    {
        std::vector<cplx> g(gb.begin(), gb.end());
        res.gamma_stderr = batch_se(g);
    }
    for (std::size_t f = 0; f < F; ++f) {
        Kahan re, im;
        for (int i = 0; i < n; ++i) {
            re.add(w[i] * val[i * F + f].real());
            im.add(w[i] * val[i * F + f].imag());
        }
        res.estimates.emplace_back(re.s / sw.s, im.s / sw.s);
        std::vector<cplx> batches;
        for (int b = 0; b < B; ++b) {
            Kahan bre, bim, bw;
            int i0 = static_cast<int>(static_cast<long long>(n) * b / B), i1 = static_cast<int>(static_cast<long long>(n) * (b + 1) / B);
            for (int i = i0; i < i1; ++i) {
                bre.add(w[i] * val[i * F + f].real());
                bim.add(w[i] * val[i * F + f].imag());
                bw.add(w[i]);
            }
            // an all-zero batch carries no information about the ratio
            if (bw.s > 0) batches.emplace_back(bre.s / bw.s, bim.s / bw.s);
        }
        res.stderrs.push_back(batches.size() > 1 ? batch_se(batches) : INFINITY);
    }
    return res;
}

SupportReport support_probe(int q, int N, int nsamples, std::uint64_t seed, int k) {
    if (k < 1) throw DomainError("support_probe: k must be >= 1");
    ChimeraConfig cfg;
    cfg.q = q;
    cfg.N = N;
    cfg.k = k;
    cfg.mode = k <= 2 ? WeightMode::fourier : WeightMode::hermite;
    auto weight = make_weight(cfg);
    SupportReport rep;
    rep.k = k;
    int zero = 0;
    for_chunks(nsamples, seed, 1, [&](std::mt19937_64& rng, int i0, int i1) {
        for (int i = i0; i < i1; ++i) {
            auto s = sample_from_matrix(haar_matrix(N, rng), 0, k);
            auto x = chimera_coords(s, q, k);
            double w = weight(x);
            if (w < 1e-12) {
                ++zero;
                continue;
            }
            ++rep.retained;
            double a = std::abs(x[0]);
            rep.max_retained_x1 = std::max(rep.max_retained_x1, a);
            if (a > q + 0.1) ++rep.violations;
        }
    });
    rep.zero_fraction = static_cast<double>(zero) / nsamples;
    return rep;
}

}  // namespace ffm
