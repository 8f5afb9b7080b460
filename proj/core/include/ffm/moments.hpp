#pragma once

#include <optional>
#include <vector>

#include "ffm/common.hpp"
#include "ffm/eulerprod.hpp"
#include "ffm/qsqrt.hpp"
#include "ffm/repr.hpp"
#include "ffm/unitary.hpp"

namespace ffm {

/// E[psi_e] under the Euler-product measure: expand psi_e and count each
/// monomial exactly.
QSqrtScalar psi_ep_direct(const ETuple& e, ExpectationEngine& engine, const Budget& budget = {});
QSqrtScalar psi_ep_direct(const ETuple& e, int q, const Budget& budget = {});

/// The same value read off as a coefficient of
/// Vandermonde(q^{alpha}) * sum_{prod f_{i<=rt} = prod f_{i>rt}} prod |f_i|^{-1/2 -+ alpha_i}.
QSqrtScalar psi_ep_via_ms(const ETuple& e, ExpectationEngine& engine);
QSqrtScalar psi_ep_via_ms(const ETuple& e, int q, const Budget& budget = {});

struct MomentSpec {
    int q = 5;
    int N = 6;
    int r = 1;
    int rt = 1;
    std::vector<cplx> alpha;  // imaginary, length r + rt; empty means all zero
    int K = -1;               // weight-norm cutoff; < 0 picks the default from tol
    double tol = 1e-10;
    double beta = 0.45;

    std::vector<cplx> resolved_alpha() const;
    /// max(16, 4 ceil(log_q(1/tol))) unless K >= 0.
    int resolved_K() const;
};

struct Shell {
    int norm = 0;
    int terms = 0;     // e-tuples with this weight norm
    int nonzero = 0;   // of which E[psi_e] != 0
    double l1 = 0;     // sum |kappa_e E[psi_e]|
    cplx partial;      // running sum up to and including this shell
};

struct MomentReport {
    cplx mt;
    double truncation_estimate = 0;  // l1 mass of the last two shells
    int K = 0;
    std::vector<Shell> shells;
    std::optional<ChimeraResult> chimera;
    std::optional<cplx> family;
    std::optional<double> diff_chimera_mt;
    std::optional<double> diff_family_mt;
    std::vector<std::string> warnings;
};

/// sum over the extended e-range with weight_norm <= K of kappa_e E[psi_e].
MomentReport mt_rep_sum(const MomentSpec& spec, const Budget& budget = {});

struct CompareOptions {
    bool chimera = true;
    int samples = 20000;
    std::uint64_t seed = 1;
    WeightMode mode = WeightMode::hermite;
    int cutoff = 12;
    int threads = 1;
    bool family = true;  // only when q^{N+1} fits the enumeration budget
};

/// mt_rep_sum alongside the chimera estimate and the family average.
MomentReport compare_moment(const MomentSpec& spec, const CompareOptions& opt, const Budget& budget = {});

}  // namespace ffm
