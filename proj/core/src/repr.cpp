#include "ffm/repr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <numeric>

#include "ffm/unitary.hpp"

namespace ffm {

int ETuple::weight_norm() const {
    int w = 0;
    for (int i = 0; i < size(); ++i) w += i < rt ? N - e[i] : e[i];
    return w;
}

bool ETuple::in_extended_range() const {
    if (static_cast<int>(e.size()) != size()) return false;
    for (int i = 0; i < rt; ++i) {
        if (e[i] > N) return false;
        if (i > 0 && e[i] > e[i - 1]) return false;
    }
    for (int i = rt; i < size(); ++i) {
        if (e[i] < 0) return false;
        if (i > rt && e[i] > e[i - 1]) return false;
    }
    return true;
}

bool ETuple::in_original_range() const {
    if (!in_extended_range()) return false;
    for (int i = 0; i < size(); ++i)
        if (e[i] < 0 || e[i] > N || (i > 0 && e[i] > e[i - 1])) return false;
    return true;
}

std::vector<ETuple> enumerate_e(int N, int r, int rt, bool extended, int max_norm) {
    if (r < 0 || rt < 0 || N < 0) throw DomainError("enumerate_e: negative parameter");
    const int n = r + rt;
    std::vector<ETuple> out;
    std::vector<int> e(n);
    // conjugate rows: a_i = N - e_i non-decreasing; other rows non-increasing
    std::function<void(int, int)> rec = [&](int i, int used) {
        if (i == n) {
            ETuple t{e, r, rt, N};
            if (extended || t.in_original_range()) out.push_back(std::move(t));
            return;
        }
        if (i < rt) {
            int lo = i == 0 ? 0 : N - e[i - 1];
            for (int a = lo; used + a <= max_norm; ++a) {
                if (!extended && a > N) break;
                e[i] = N - a;
                rec(i + 1, used + a);
            }
        } else {
            int hi = i == rt ? max_norm - used : std::min(e[i - 1], max_norm - used);
            if (!extended) hi = std::min(hi, N);
            for (int b = 0; b <= hi; ++b) {
                e[i] = b;
                rec(i + 1, used + b);
            }
        }
    };
    rec(0, 0);
    std::stable_sort(out.begin(), out.end(), [](const ETuple& a, const ETuple& b) {
        if (a.weight_norm() != b.weight_norm()) return a.weight_norm() < b.weight_norm();
        return a.e < b.e;
    });
    return out;
}

int CoeffMonomial::degree() const {
    return std::accumulate(hol.begin(), hol.end(), 0) + std::accumulate(anti.begin(), anti.end(), 0);
}

void CoeffPolynomial::add(CoeffMonomial m, const QSqrtScalar& c) {
    std::sort(m.hol.begin(), m.hol.end());
    std::sort(m.anti.begin(), m.anti.end());
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (!c.is_zero()) terms_.emplace(std::move(m), c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

int CoeffPolynomial::degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

cplx CoeffPolynomial::eval(const std::vector<cplx>& c) const {
    auto at = [&](int d) { return d < static_cast<int>(c.size()) ? c[d] : cplx{}; };
    cplx acc = 0;
    for (const auto& [m, coef] : terms_) {
        cplx v = coef.to_double();
        for (int d : m.hol) v *= at(d);
        for (int d : m.anti) v *= std::conj(at(d));
        acc += v;
    }
    return acc;
}

std::string CoeffPolynomial::to_string() const {
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + ffm::to_string(c.a());
        if (!c.is_rational()) s += " + " + ffm::to_string(c.b()) + "*sqrt(" + std::to_string(q_) + ")";
        s += ")";
        for (int d : m.hol) s += "*c" + std::to_string(d);
        for (int d : m.anti) s += "*cbar" + std::to_string(d);
    }
    return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------
// Schur functions

namespace {

cplx det(Eigen::MatrixXcd A) {
    if (A.rows() == 0) return 1;
    return A.partialPivLu().determinant();
}

cplx vandermonde(const std::vector<cplx>& x) {
    cplx v = 1;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) v *= x[i] - x[j];
    return v;
}

cplx ipow_c(cplx z, int m) {
    if (m < 0) return 1.0 / ipow_c(z, -m);
    cplx r = 1;
    while (m) {
        if (m & 1) r *= z;
        z *= z;
        m >>= 1;
    }
    return r;
}

}  // namespace

cplx schur_bialternant(const std::vector<int>& e, const std::vector<cplx>& x) {
    const int n = static_cast<int>(x.size());
    if (static_cast<int>(e.size()) != n) throw DomainError("schur: need one part per variable");
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = ipow_c(x[j], e[i] + n - 1 - i);
    return det(A) / vandermonde(x);
}

cplx schur_jacobi_trudi(const std::vector<int>& e, const std::vector<cplx>& x) {
    const int n = static_cast<int>(x.size());
    if (static_cast<int>(e.size()) != n) throw DomainError("schur: need one part per variable");
    if (n == 0) return 1;
    int shift = std::max(0, -*std::min_element(e.begin(), e.end()));
    int top = *std::max_element(e.begin(), e.end()) + shift + n;
    // complete homogeneous h_0..h_top
    std::vector<cplx> h(static_cast<std::size_t>(top) + 1, 0.0);
    h[0] = 1;
    for (cplx xv : x)
        for (int m = 1; m <= top; ++m) h[m] += xv * h[m - 1];
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int m = e[i] + shift - i + j;
            A(i, j) = m < 0 ? cplx{} : h[m];
        }
    cplx prod = 1;
    for (cplx xv : x) prod *= xv;
    return det(A) * ipow_c(prod, -shift);
}

cplx schur_eval(const std::vector<int>& e, const std::vector<cplx>& x) {
    const int n = static_cast<int>(x.size());
    double scale = 1;
    for (cplx v : x) scale = std::max(scale, std::abs(v));
    scale = std::pow(scale, n * (n - 1) / 2.0);
    if (std::abs(vandermonde(x)) < 1e-8 * scale) return schur_jacobi_trudi(e, x);
    return schur_bialternant(e, x);
}

std::vector<int> conjugate_partition(const std::vector<int>& e) {
    int m = e.empty() ? 0 : *std::max_element(e.begin(), e.end());
    std::vector<int> c(std::max(m, 0), 0);
    for (int part : e)
        for (int j = 0; j < part; ++j) ++c[j];
    return c;
}

cplx kappa(const ETuple& e, const std::vector<cplx>& alpha, int q) {
    const int n = e.size();
    if (static_cast<int>(alpha.size()) != n) throw DomainError("kappa: alpha needs r + rt entries");
    const double lq = std::log(static_cast<double>(q));
    std::vector<cplx> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::exp(-alpha[i] * lq);
    int sgn = e.N * e.rt + std::accumulate(e.e.begin(), e.e.end(), 0);
    cplx v = schur_eval(e.e, x) * ((sgn % 2 + 2) % 2 ? -1.0 : 1.0);
    for (int i = e.r; i < n; ++i) v *= std::exp(static_cast<double>(e.N) * alpha[i] * lq);
    return v;
}

CoeffPolynomial psi_e(const ETuple& t, int q, const Budget& budget) {
    const int n = t.size();
    if (static_cast<int>(t.e.size()) != n) throw DomainError("psi_e: e needs r + rt entries");
    if (n > 8) throw BudgetExceeded("psi_e: determinant larger than 8 x 8");
    CoeffPolynomial out(q);
    auto index = [&](int i, int j) {  // 0-based row/column
        return i < t.rt ? t.N - t.e[i] + i - j : t.e[i] + j - i;
    };
    std::vector<int> col(n, -1);
    std::vector<bool> used(n, false);
    std::uint64_t count = 0;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            if (++count > budget.terms) throw BudgetExceeded("psi_e: Leibniz expansion exceeds term budget");
            int inv = 0;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    if (col[a] > col[b]) ++inv;
            CoeffMonomial m;
            int total = 0;
            for (int a = 0; a < n; ++a) {
                int d = index(a, col[a]);
                total += d;
                if (d == 0) continue;
                (a < t.rt ? m.anti : m.hol).push_back(d);
            }
            QSqrtScalar c = QSqrtScalar::neg_inv_sqrt_pow(q, total);
            out.add(std::move(m), inv % 2 ? -c : c);
            return;
        }
        for (int j = 0; j < n; ++j) {
            if (used[j] || index(i, j) < 0) continue;  // c_d = 0 for d < 0
            used[j] = true;
            col[i] = j;
            rec(i + 1);
            used[j] = false;
        }
    };
    rec(0);
    return out;
}

double trace_identity_check(const ETuple& e, const std::vector<cplx>& eig, int q) {
    if (!e.in_original_range()) throw DomainError("trace_identity_check: e outside the original range");
    const int N = static_cast<int>(eig.size());
    if (N != e.N) throw DomainError("trace_identity_check: eigenvalue count differs from N");
    cplx lhs = psi_e(e, q).eval(secular_coeffs(eig, q));
    std::vector<int> ec = conjugate_partition(e.e);
    ec.resize(N, 0);
    cplx detM = 1;
    for (cplx l : eig) detM *= l;
    cplx rhs = schur_eval(ec, eig) * ipow_c(detM, -e.rt);
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

cplx moment_product(const std::vector<cplx>& c, int q, int r, int rt, const std::vector<cplx>& alpha) {
    return phi_moment(q, r, rt, alpha)(c);
}

Decomposition moment_decomposition(int q, int N, int r, int rt, const std::vector<cplx>& alpha, int k,
                                   const Budget& budget) {
    Decomposition d;
    for (auto& e : enumerate_e(N, r, rt, false, N * (r + rt))) {
        int w = e.weight_norm();
        if (w <= k) {
            ReprTerm term{e, kappa(e, alpha, q), psi_e(e, q, budget), w};
            d.lf.push_back(std::move(term));
        } else {
            ++d.hf_count;
            d.hf_max_norm = std::max(d.hf_max_norm, w);
            d.hf_min_norm = d.hf_min_norm < 0 ? w : std::min(d.hf_min_norm, w);
        }
    }
    return d;
}

double cauchy_reconstruction_error(int q, int N, int r, int rt, const std::vector<cplx>& alpha,
                                   const std::vector<cplx>& c) {
    cplx sum = 0;
    for (auto& e : enumerate_e(N, r, rt, false, N * (r + rt))) sum += kappa(e, alpha, q) * psi_e(e, q).eval(c);
    cplx target = moment_product(c, q, r, rt, alpha);
    return std::abs(sum - target) / std::max(1.0, std::abs(target));
}

}  // namespace ffm
