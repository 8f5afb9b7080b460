#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ffm/common.hpp"
#include "ffm/qsqrt.hpp"

namespace ffm {

/// Index e = (e_1..e_{r+rt}) of a term in the representation sum. Rows
/// i <= rt are the conjugate rows of the determinant psi_e.
struct ETuple {
    std::vector<int> e;
    int r = 0;
    int rt = 0;
    int N = 0;

    int size() const { return r + rt; }
    /// sum_{i<=rt} (N - e_i) + sum_{i>rt} e_i
    int weight_norm() const;
    /// N >= e_1 >= ... >= e_{r+rt} >= 0
    bool in_original_range() const;
    /// N >= e_1 >= ... >= e_rt and e_{rt+1} >= ... >= e_{r+rt} >= 0
    bool in_extended_range() const;
};

/// All e in the original (or extended) range with weight_norm <= max_norm.
std::vector<ETuple> enumerate_e(int N, int r, int rt, bool extended, int max_norm);

/// Monomial prod c_{hol_i} prod conj(c_{anti_j}); both sorted, no zero entries (c_0 = 1).
struct CoeffMonomial {
    std::vector<int> hol;
    std::vector<int> anti;
    int degree() const;
    auto operator<=>(const CoeffMonomial&) const = default;
};

/// Sparse polynomial in c_d and conj(c_d) with coefficients in Q(sqrt q).
class CoeffPolynomial {
public:
    explicit CoeffPolynomial(int q = 0) : q_(q) {}
    int q() const { return q_; }
    void add(CoeffMonomial m, const QSqrtScalar& c);
    const std::map<CoeffMonomial, QSqrtScalar>& terms() const { return terms_; }
    int degree() const;
    /// Value at the coefficient list c_0..c_n (c_d = 0 for d > n).
    cplx eval(const std::vector<cplx>& c) const;
    std::string to_string() const;

private:
    int q_;
    std::map<CoeffMonomial, QSqrtScalar> terms_;
};

/// Bialternant a_{e+delta}(x)/a_delta(x) for any integer sequence e; falls back
/// to schur_jacobi_trudi when the Vandermonde is below 1e-8 relative.
cplx schur_eval(const std::vector<int>& e, const std::vector<cplx>& x);
cplx schur_bialternant(const std::vector<int>& e, const std::vector<cplx>& x);
/// det[h_{e_i - i + j}(x)], entries shifted to non-negative exponents first.
cplx schur_jacobi_trudi(const std::vector<int>& e, const std::vector<cplx>& x);
/// Conjugate partition of e (a partition).
std::vector<int> conjugate_partition(const std::vector<int>& e);

/// kappa_e = (-1)^{N rt + |e|} s_e(q^{-alpha_1}, ...) prod_{i>r} q^{N alpha_i},
/// alpha_1..alpha_r belonging to L and alpha_{r+1}.. to conj L.
cplx kappa(const ETuple& e, const std::vector<cplx>& alpha, int q);

/// Determinant with rows (-q^{-1/2})^{e_i+j-i} c_{e_i+j-i} for i > rt and
/// (-q^{-1/2})^{N-e_i+i-j} conj c_{N-e_i+i-j} for i <= rt; c_d = 0 for d < 0.
CoeffPolynomial psi_e(const ETuple& e, int q, const Budget& budget = {});

/// |psi_e(L_M) - det(M)^{-rt} s_{e'}(eigenvalues)| / max(1, |rhs|), e in the original range.
double trace_identity_check(const ETuple& e, const std::vector<cplx>& eig, int q);

/// prod_{j<=r} L(1/2+alpha_j) prod_{j>r} conj L(1/2+alpha_j) for L_M with
/// secular coefficients c.
cplx moment_product(const std::vector<cplx>& c, int q, int r, int rt, const std::vector<cplx>& alpha);

struct ReprTerm {
    ETuple e;
    cplx kappa;
    CoeffPolynomial psi;
    int weight_norm = 0;
};

struct Decomposition {
    std::vector<ReprTerm> lf;  // weight_norm <= k
    int hf_count = 0;
    int hf_max_norm = -1;
    int hf_min_norm = -1;
};

/// Split of the original-range sum into weight_norm <= k and the rest.
Decomposition moment_decomposition(int q, int N, int r, int rt, const std::vector<cplx>& alpha, int k,
                                   const Budget& budget = {});

/// |sum_e kappa_e psi_e(L_M) - moment_product| / max(1, |moment_product|) over the original range.
double cauchy_reconstruction_error(int q, int N, int r, int rt, const std::vector<cplx>& alpha,
                                   const std::vector<cplx>& c);

}  // namespace ffm
