#include "ffm/density.hpp"

#include <math.h>  // POSIX j0

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace ffm {

namespace {

cplx circle_trapezoid(const std::vector<cplx>& v, const std::vector<cplx>& w, int M) {
    const std::size_t m_max = std::max(v.size(), w.size());
    cplx acc = 0;
    for (int j = 0; j < M; ++j) {
        double th = 2 * kPi * j / M;
        cplx ex = 0;
        for (std::size_t m = 1; m <= m_max; ++m) {
            cplx e = std::polar(1.0, static_cast<double>(m) * th);
            double re = m <= v.size() ? dot2(e, v[m - 1]) : 0.0;
            double im = m <= w.size() ? dot2(e, w[m - 1]) : 0.0;
            ex += cplx(re, im) / static_cast<double>(m);
        }
        acc += std::exp(ex);
    }
    return acc / static_cast<double>(M);
}

}  // namespace

cplx circle_factor(const std::vector<cplx>& v, const std::vector<cplx>& w, double tol) {
    int M = 16;
    cplx prev = circle_trapezoid(v, w, M);
    while (M < (1 << 16)) {
        M *= 2;
        cplx cur = circle_trapezoid(v, w, M);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw IdentityFailure("circle-factor-convergence", "trapezoid rule did not settle by M = 65536");
}

cplx laplace_transform(const std::vector<cplx>& v, const std::vector<cplx>& w, const PrimeTable& table) {
    const int k = static_cast<int>(std::max(v.size(), w.size()));
    if (k > table.dmax()) throw DomainError("laplace_transform: table too short for k");
    cplx out = 1;
    for (int d = 1; d <= k; ++d) {
        std::vector<cplx> vd, wd;
        bool any = false;
        for (int m = 1; m * d <= k; ++m) {
            int n = m * d;
            vd.push_back(n <= static_cast<int>(v.size()) ? v[n - 1] : cplx{});
            wd.push_back(n <= static_cast<int>(w.size()) ? w[n - 1] : cplx{});
            any = any || vd.back() != cplx{} || wd.back() != cplx{};
        }
        if (!any) continue;
        cplx cf = circle_factor(vd, wd);
        out *= std::pow(cf, static_cast<double>(table.count(d)));
    }
    return out;
}

double probe_ov_value(double t) {
    double cf = circle_factor({cplx(t, 0)}, {}).real();
    return (t * t / 4 - std::log(cf)) / std::min(std::pow(t, 4), t * t);
}

double probe_ov_ratio(const std::vector<double>& grid) {
    double best = INFINITY;
    for (double t : grid) {
        if (!(t > 0) || !std::isfinite(t)) throw DomainError("probe_ov_ratio: grid must be positive and finite");
        best = std::min(best, probe_ov_value(t));
    }
    return best;
}

double gaussian_density(const std::vector<cplx>& x, int q) {
    double g = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double n = static_cast<double>(i + 1);
        double qn = std::pow(static_cast<double>(q), n);
        g *= n / (qn * kPi) * std::exp(-n * std::norm(x[i]) / qn);
    }
    return g;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        weights[i] = 2 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
}

// Golub-Welsch start, then Newton on He_n and Christoffel weights from the
// orthonormal recurrence; the eigenvector weights alone lose ~1e-9 at n = 40.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(static_cast<double>(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    nodes.resize(n);
    weights.resize(n);
    // psi_k = He_k / sqrt(k!); returns psi_n, psi_{n-1} and sum_{k<n} psi_k^2
    auto orth = [n](double x, double& prev, double& sumsq) {
        double pm = 0, p = 1;
        sumsq = 0;
        for (int k = 0; k < n; ++k) {
            sumsq += p * p;
            double next = (x * p - std::sqrt(static_cast<double>(k)) * pm) / std::sqrt(k + 1.0);
            pm = p;
            p = next;
        }
        prev = pm;
        return p;
    };
    for (int i = 0; i < n; ++i) {
        double x = es.eigenvalues()(i), prev = 0, sumsq = 0;
        for (int it = 0; it < 3; ++it) {
            double p = orth(x, prev, sumsq);
            x -= p / (std::sqrt(static_cast<double>(n)) * prev);
        }
        orth(x, prev, sumsq);
        nodes[i] = x;
        weights[i] = 1 / sumsq;
    }
}

std::vector<double> hermite_he(int n, double x) {
    std::vector<double> he(static_cast<std::size_t>(std::max(n, 1)) + 1);
    he[0] = 1;
    he[1] = x;
    for (int m = 1; m < n; ++m) he[m + 1] = x * he[m] - m * he[m - 1];
    he.resize(n + 1);
    return he;
}

// ---------------------------------------------------------------------------
// Fourier inversion

namespace {

// window flat to fourth order: e^{-a}(1 + a), a = s^2 rho^2 / 2
double flat_window(double s, double rho2) {
    double a = s * s * rho2 / 2;
    return std::exp(-a) * (1 + a);
}

// radius beyond which flat_window < 1e-9
double flat_radius(double s) { return 6.83 / s; }

}  // namespace

DensityEngine::DensityEngine(const PrimeTable& table, int k, DensityConfig cfg) : q_(table.q()), k_(k), cfg_(cfg) {
    if (k < 1 || k > 3) throw DomainError("density: k must be 1, 2 or 3");
    if (q_ <= 2) throw DomainError("density: q must exceed 2");
    if (table.dmax() < k) throw DomainError("density: table too short for k");
    const double q = q_;
    if (k == 1) {
        const double s = cfg_.radial_window;
        double rho_max = std::sqrt(2 * 39.0) / s;  // window below 1e-17
        // |J0(rho)| <= 0.8/sqrt(rho): stop once rho * (0.8/sqrt rho)^q < 1e-15
        if (q > 2) {
            double rho_env = std::pow(1e-15 / std::pow(0.8, q), 1.0 / (1.0 - q / 2));
            rho_max = std::min(rho_max, std::max(rho_env, 20.0));
        }
        std::vector<double> x, wq;
        gauss_legendre(cfg_.panel_nodes, x, wq);
        const double h = cfg_.panel_width;
        const double E1 = static_cast<double>(table.count(1));
        for (double a = 0; a < rho_max; a += h)
            for (int j = 0; j < cfg_.panel_nodes; ++j) {
                double rho = a + h * (x[j] + 1) / 2;
                double f = std::pow(::j0(rho), E1) * std::exp(-s * s * rho * rho / 2);
                rho_.push_back(rho);
                wt_.push_back(h / 2 * wq[j] * rho * f / (2 * kPi));
            }
        return;
    }
    if (k == 3) {
        // a 6-dimensional tensor grid at any useful resolution exceeds the budget
        double n = 2 * flat_radius(cfg_.grid_window1) / (2 * kPi / (2 * (q + 5 * cfg_.grid_window1)));
        double cost = std::pow(n, 6);
        throw BudgetExceeded("density: k = 3 Fourier inversion needs about " + std::to_string(cost) +
                             " characteristic-function evaluations");
    }
    // k = 2
    const double s1 = cfg_.grid_window1, s2 = cfg_.grid_window2;
    const double P1 = 2 * (q + 5 * s1), P2 = 2 * (q * q / 2 + 5 * s2);
    const double dw1 = 2 * kPi / P1, dw2 = 2 * kPi / P2;
    const int h1 = static_cast<int>(std::ceil(flat_radius(s1) / dw1));
    const int h2 = static_cast<int>(std::ceil(flat_radius(s2) / dw2));
    const int n1 = 2 * h1 + 1, n2 = 2 * h2 + 1;
    const double evals = static_cast<double>(n1) * (h1 + 1) * n2 * n2;
    if (evals > static_cast<double>(cfg_.budget.terms))
        throw BudgetExceeded("density: k = 2 grid needs " + std::to_string(evals) + " evaluations");
    g1_.resize(n1);
    g2_.resize(n2);
    for (int i = 0; i < n1; ++i) g1_[i] = dw1 * (i - h1);
    for (int i = 0; i < n2; ++i) g2_[i] = dw2 * (i - h2);
    cell_ = dw1 * dw1 * dw2 * dw2 / std::pow(2 * kPi, 4);
    G_.assign(static_cast<std::size_t>(n1) * n2 * n2, 0.0);
    const double E1 = static_cast<double>(table.count(1)), E2 = static_cast<double>(table.count(2));

    std::vector<double> j0w2(static_cast<std::size_t>(n2) * n2);
    for (int j = 0; j < n2; ++j)
        for (int l = 0; l < n2; ++l) {
            double r2 = std::hypot(g2_[j], g2_[l]);
            j0w2[j * n2 + l] = std::pow(::j0(r2), E2) * flat_window(s2, r2 * r2);
        }
    std::vector<double> ct, st, c2t, s2t;
    for (int i = 0; i < n1; ++i)
        for (int iy = h1; iy < n1; ++iy) {
            const double ax = g1_[i], ay = g1_[iy];
            const double r1sq = ax * ax + ay * ay;
            const double win1 = flat_window(s1, r1sq);
            if (win1 < 1e-16) continue;
            for (int j = 0; j < n2; ++j)
                for (int l = 0; l < n2; ++l) {
                    const double bx = g2_[j], by = g2_[l];
                    const double outer = win1 * j0w2[j * n2 + l];
                    if (outer < 1e-16) continue;
                    const double band = std::sqrt(r1sq) + std::hypot(bx, by) / 2;
                    const int M = 2 * static_cast<int>(std::ceil(band)) + 24;
                    if (static_cast<int>(ct.size()) != M) {
                        ct.resize(M);
                        st.resize(M);
                        c2t.resize(M);
                        s2t.resize(M);
                        for (int t = 0; t < M; ++t) {
                            double th = 2 * kPi * t / M;
                            ct[t] = std::cos(th);
                            st[t] = std::sin(th);
                            c2t[t] = std::cos(2 * th);
                            s2t[t] = std::sin(2 * th);
                        }
                    }
                    cplx acc = 0;
                    for (int t = 0; t < M; ++t)
                        acc += std::polar(1.0, ct[t] * ax + st[t] * ay + (c2t[t] * bx + s2t[t] * by) / 2);
                    acc /= static_cast<double>(M);
                    cplx val = std::exp(E1 * std::log(acc)) * outer;
                    G_[(static_cast<std::size_t>(i) * n2 + j) * n2 + l] += val;
                    // conjugation symmetry: (w1x, -w1y, w2x, -w2y) carries the same value
                    if (iy != h1) G_[(static_cast<std::size_t>(i) * n2 + j) * n2 + (n2 - 1 - l)] += val;
                }
        }
}

double DensityEngine::raw_radial(double r) const {
    double acc = 0;
    for (std::size_t j = 0; j < rho_.size(); ++j) acc += wt_[j] * ::j0(rho_[j] * r);
    return acc;
}

double DensityEngine::raw_grid(const std::vector<cplx>& x) const {
    const double r1 = std::abs(x[0]);
    // rotate so that x_1 lies on the positive real axis
    const cplx x2 = r1 > 0 ? x[1] * std::conj(x[0] * x[0]) / (r1 * r1) : x[1];
    const std::size_t n1 = g1_.size(), n2 = g2_.size();
    std::vector<cplx> p1(n1), p2x(n2), p2y(n2);
    for (std::size_t i = 0; i < n1; ++i) p1[i] = std::polar(1.0, -r1 * g1_[i]);
    for (std::size_t j = 0; j < n2; ++j) {
        p2x[j] = std::polar(1.0, -x2.real() * g2_[j]);
        p2y[j] = std::polar(1.0, -x2.imag() * g2_[j]);
    }
    cplx total = 0;
    for (std::size_t i = 0; i < n1; ++i) {
        cplx si = 0;
        const cplx* row = &G_[i * n2 * n2];
        for (std::size_t j = 0; j < n2; ++j) {
            cplx sj = 0;
            for (std::size_t l = 0; l < n2; ++l) sj += row[j * n2 + l] * p2y[l];
            si += sj * p2x[j];
        }
        total += si * p1[i];
    }
    return total.real() * cell_;
}

double DensityEngine::raw(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != k_) throw DomainError("density: x must have k entries");
    return k_ == 1 ? raw_radial(std::abs(x[0])) : raw_grid(x);
}

double DensityEngine::finish(double v) const {
    if (v < 0) {
        // the k = 2 window has negative side lobes near the support boundary
        if (v >= -cfg_.negative_tol || k_ == 2) return 0;
        throw IdentityFailure("negative-density", "quadrature returned " + std::to_string(v));
    }
    return v < cfg_.noise_floor ? 0 : v;
}

double DensityEngine::density(const std::vector<cplx>& x) const { return finish(raw(x)); }

double DensityEngine::weight(const std::vector<cplx>& x) const {
    double f = density(x);
    if (f == 0) return 0;
    return f / gaussian_density(x, q_);
}

double density_F(const std::vector<cplx>& x, const PrimeTable& table, const DensityConfig& cfg) {
    return DensityEngine(table, static_cast<int>(x.size()), cfg).density(x);
}

double weight_ratio(const std::vector<cplx>& x, const PrimeTable& table, const DensityConfig& cfg) {
    return DensityEngine(table, static_cast<int>(x.size()), cfg).weight(x);
}

// ---------------------------------------------------------------------------
// Hermite table

namespace {

struct CRat {
    Rational re, im;
};

using CPoly = std::map<std::vector<int>, CRat>;

void cadd(CPoly& p, const std::vector<int>& key, const Rational& re, const Rational& im) {
    auto& c = p[key];
    c.re += re;
    c.im += im;
}

// (u1 - i u2)^p (u1 + i u2)^pb / 2^(p+pb) as a polynomial in (u1, u2)
std::map<std::pair<int, int>, CRat> st_to_u(int p, int pb) {
    // coefficients of (u1 + c u2)^m: binom(m, j) c^j u1^{m-j} u2^j
    auto expand = [](int m, int sign) {
        std::map<std::pair<int, int>, CRat> out;
        Integer b = 1;
        for (int j = 0; j <= m; ++j) {
            // (sign * i)^j
            Rational re = 0, im = 0;
            int jm = j % 4;
            int s = (sign < 0 && j % 2) ? -1 : 1;
            if (jm == 0) re = s;
            if (jm == 1) im = s;
            if (jm == 2) re = -s;
            if (jm == 3) im = -s;
            out[{m - j, j}] = {re * Rational(b), im * Rational(b)};
            b = b * (m - j) / (j + 1);
        }
        return out;
    };
    auto A = expand(p, -1), B = expand(pb, +1);
    std::map<std::pair<int, int>, CRat> out;
    Rational scale(1, 1);
    scale /= Rational(ipow(2, p + pb));
    for (auto& [ka, ca] : A)
        for (auto& [kb, cb] : B) {
            auto& c = out[{ka.first + kb.first, ka.second + kb.second}];
            c.re += (ca.re * cb.re - ca.im * cb.im) * scale;
            c.im += (ca.re * cb.im + ca.im * cb.re) * scale;
        }
    return out;
}

}  // namespace

int HermiteTable::weighted_degree(const HermiteIndex& a) {
    int w = 0;
    for (std::size_t i = 0; i < a.size(); ++i) w += static_cast<int>(i / 2 + 1) * a[i];
    return w;
}

Rational HermiteTable::g(const HermiteIndex& a) const {
    auto it = g_.find(a);
    return it == g_.end() ? Rational(0) : it->second;
}

std::pair<Rational, Rational> HermiteTable::h(const HermiteIndex& a) const {
    Rational v = g(a);
    int s = 0;
    for (int e : a) s += e;
    switch (s % 4) {
        case 0: return {v, 0};
        case 1: return {0, v};
        case 2: return {-v, 0};
        default: return {0, -v};
    }
}

HermiteTable hermite_coeffs(int k, int q, int D, const Budget& budget) {
    if (k < 1 || k > 4) throw DomainError("hermite_coeffs: k must be in 1..4");
    if (D < 0) throw DomainError("hermite_coeffs: D must be nonnegative");
    Series<Rational> S = x_moment_series(q, k, D, budget);

    // moment generating function in the real coordinates u
    CPoly mgf;
    std::map<std::pair<int, int>, std::map<std::pair<int, int>, CRat>> conv;
    for (const auto& [key, c] : S.sorted_terms()) {
        CPoly term;
        term[std::vector<int>(2 * k, 0)] = {c, 0};
        for (int n = 1; n <= k; ++n) {
            int p = Series<Rational>::exponent(key, n - 1), pb = Series<Rational>::exponent(key, k + n - 1);
            if (p == 0 && pb == 0) continue;
            auto it = conv.find({p, pb});
            if (it == conv.end()) it = conv.emplace(std::make_pair(p, pb), st_to_u(p, pb)).first;
            CPoly next;
            for (const auto& [tk, tc] : term)
                for (const auto& [uk, uc] : it->second) {
                    std::vector<int> e = tk;
                    e[2 * (n - 1)] += uk.first;
                    e[2 * (n - 1) + 1] += uk.second;
                    cadd(next, e, tc.re * uc.re - tc.im * uc.im, tc.re * uc.im + tc.im * uc.re);
                }
            term.swap(next);
        }
        for (const auto& [tk, tc] : term) cadd(mgf, tk, tc.re, tc.im);
    }

    // multiply by exp(-sum q^n (u1^2 + u2^2) / (4n)), one coordinate at a time
    CPoly cur = mgf;
    for (int coord = 0; coord < 2 * k; ++coord) {
        const int n = coord / 2 + 1;
        Rational c = -Rational(ipow(q, n)) / Rational(4 * n);
        c.canonicalize();
        CPoly next;
        for (const auto& [tk, tc] : cur) {
            int w = HermiteTable::weighted_degree(tk);
            Rational f = 1;
            for (int j = 0; w + 2 * j * n <= D; ++j) {
                std::vector<int> e = tk;
                e[coord] += 2 * j;
                cadd(next, e, tc.re * f, tc.im * f);
                f *= c;
                f /= j + 1;
            }
        }
        cur.swap(next);
    }

    HermiteTable t;
    t.k_ = k;
    t.q_ = q;
    t.D_ = D;
    for (auto& [key, c] : cur) {
        c.re.canonicalize();
        c.im.canonicalize();
        if (c.im != 0) throw IdentityFailure("hermite-real", "imaginary Hermite coefficient at weighted degree " +
                                                                 std::to_string(HermiteTable::weighted_degree(key)));
        if (c.re != 0) t.g_.emplace(key, c.re);
    }
    for (const auto& [key, c] : t.g_) {
        t.gd_.emplace_back(key, c.get_d());
        t.wdeg_.push_back(HermiteTable::weighted_degree(key));
    }
    return t;
}

double HermiteTable::eval(const std::vector<cplx>& x, int cutoff) const {
    if (cutoff > D_) throw DomainError("hermite: cutoff exceeds table degree");
    if (static_cast<int>(x.size()) != k_) throw DomainError("hermite: x must have k entries");
    // He_m(x s) s^m per coordinate
    std::vector<std::vector<double>> he(2 * k_);
    for (int c = 0; c < 2 * k_; ++c) {
        int n = c / 2 + 1;
        double s = std::sqrt(2.0 * n / std::pow(static_cast<double>(q_), n));
        double xc = c % 2 ? x[n - 1].imag() : x[n - 1].real();
        he[c] = hermite_he(D_ / n, xc * s);
        double sp = 1;
        for (double& v : he[c]) {
            v *= sp;
            sp *= s;
        }
    }
    double acc = 0;
    for (std::size_t t = 0; t < gd_.size(); ++t) {
        if (wdeg_[t] > cutoff) continue;
        double term = gd_[t].second;
        const auto& a = gd_[t].first;
        for (int c = 0; c < 2 * k_; ++c)
            if (a[c]) term *= he[c][a[c]];
        acc += term;
    }
    return acc;
}

cplx HermiteTable::charfn(const std::vector<cplx>& w, int cutoff) const {
    if (cutoff > D_) throw DomainError("hermite: cutoff exceeds table degree");
    std::vector<double> wc(2 * k_, 0.0);
    double gauss = 0;
    for (int n = 1; n <= k_; ++n) {
        cplx v = n <= static_cast<int>(w.size()) ? w[n - 1] : cplx{};
        wc[2 * (n - 1)] = v.real();
        wc[2 * (n - 1) + 1] = v.imag();
        gauss += std::pow(static_cast<double>(q_), n) * std::norm(v) / (4.0 * n);
    }
    static const cplx ipow4[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx acc = 0;
    for (std::size_t t = 0; t < gd_.size(); ++t) {
        if (wdeg_[t] > cutoff) continue;
        const auto& a = gd_[t].first;
        double m = gd_[t].second;
        int s = 0;
        for (int c = 0; c < 2 * k_; ++c) {
            if (a[c]) m *= std::pow(wc[c], a[c]);
            s += a[c];
        }
        acc += ipow4[s % 4] * m;
    }
    return acc * std::exp(-gauss);
}

double hermite_weight_eval(const HermiteTable& tbl, const std::vector<cplx>& x, int cutoff) {
    return tbl.eval(x, cutoff);
}

double hermite_sampling_weight(const HermiteTable& tbl, const std::vector<cplx>& x, int cutoff) {
    for (int n = 1; n <= tbl.k(); ++n)
        if (std::abs(x[n - 1]) > std::pow(static_cast<double>(tbl.q()), n) / n) return 0;
    return std::max(0.0, tbl.eval(x, cutoff));
}

}  // namespace ffm
