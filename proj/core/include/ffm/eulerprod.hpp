#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "ffm/common.hpp"
#include "ffm/ffpoly.hpp"
#include "ffm/series.hpp"

namespace ffm {

/// Random completely multiplicative xi: one angle per prime of degree <= dmax.
/// angles[d][i] belongs to the i-th prime of degree d (enumeration order of
/// PrimeTable::build when the table is enumerated).
struct XiSample {
    int q = 0;
    int dmax = 0;
    std::vector<std::vector<double>> angles;

    cplx at(int d, std::size_t i) const { return std::polar(1.0, angles[d][i]); }
};

/// Independent uniform angles, deterministic in the seed.
XiSample sample_xi(const PrimeTable& table, std::uint64_t seed, int dmax = -1);
/// Diagnostic sample with every angle 0 (xi identically 1).
XiSample constant_xi(const PrimeTable& table, int dmax = -1);

/// xi(f) through the factorisation of f; needs an enumerated table.
cplx xi_of(const XiSample& xi, const PrimeTable& table, const MonicPoly& f);

struct LogCoeffVector {
    std::vector<cplx> X;  // X[n], n = 1..k; X[0] unused
    std::vector<cplx> b;  // b[n] = sqrt(n/q^n) X[n]
};

LogCoeffVector xn_values(const XiSample& xi, int k);

/// c_0..c_dmax of L_xi from the truncated Euler product.
std::vector<cplx> lxi_coeffs(const XiSample& xi, int dmax);

/// Coefficients of exp(sum_{n>=1} X[n] x^n) up to x^dmax.
std::vector<cplx> exp_series(const std::vector<cplx>& X, int dmax);

/// Monomial prod c_{hol_i} * prod conj(c_{anti_j}).
struct MonomialSpec {
    std::vector<int> hol;
    std::vector<int> anti;
};

/// Monomial prod_n X_n^{p[n-1]} conj(X_n)^{pbar[n-1]}.
struct XMomentSpec {
    std::vector<int> p;
    std::vector<int> pbar;
};

/// #{(f_i),(g_j) monic: deg f_i = hol_i, deg g_j = anti_j, prod f_i = prod g_j}
/// = E[prod c prod conj c] under the Euler-product measure.
/// Counted with the multiplicative generating function
///   prod_delta ( sum_k h_k(x^delta) h_k(y^delta) )^{E_delta}
/// in exact arithmetic.
Integer monomial_expectation(int q, const MonomialSpec& spec, const Budget& budget = {});

/// Same count by explicit enumeration: index every product of the left
/// factors, then look up every product of the right factors.
Integer monomial_expectation_hashjoin(int q, const MonomialSpec& spec, const Budget& budget = {});

/// Exact E[prod X_n^{p_n} conj(X_n)^{pbar_n}].
Rational x_mixed_moment(int q, const XMomentSpec& spec, const Budget& budget = {});

/// Exact series E[exp(sum_n s_n X_n + t_n conj X_n)] in variables
/// (s_1..s_k, t_1..t_k), variable n weighted n, truncated at weighted degree D.
/// Coefficients are E[prod X^p conj X^pbar] / prod(p! pbar!).
Series<Rational> x_moment_series(int q, int k, int D, const Budget& budget = {});

/// MC means over independent xi draws (one seed per draw, derived from seed)
/// for c-monomials and X-monomials, against their exact values.
std::vector<MCResult> xi_moment_battery(int q, const std::vector<MonomialSpec>& c_monos,
                                        const std::vector<XMomentSpec>& x_monos, int nsamples, std::uint64_t seed);

/// Memoising front end for repeated monomial counts.
class ExpectationEngine {
public:
    explicit ExpectationEngine(int q, Budget budget = {}) : q_(q), budget_(budget) {}
    int q() const { return q_; }
    Integer count(MonomialSpec spec);

private:
    int q_;
    Budget budget_;
    std::mutex mu_;
    std::map<std::pair<std::vector<int>, std::vector<int>>, Integer> cache_;
};

}  // namespace ffm
