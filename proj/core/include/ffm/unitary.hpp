#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ffm/common.hpp"
#include "ffm/density.hpp"

namespace ffm {

struct UnitarySample {
    int N = 0;
    std::vector<cplx> eig;     // eigenvalues
    std::vector<cplx> traces;  // traces[j] = tr(M^j), j = 0..jmax
    std::vector<cplx> c;       // secular coefficients c_0..c_N (empty when q = 0)
    std::vector<cplx> b;       // b[n] = -tr(M^n)/sqrt(n), n >= 1
};

/// Haar unitary by QR of a complex Ginibre matrix with the phases of R's
/// diagonal moved into Q.
Eigen::MatrixXcd haar_matrix(int N, std::mt19937_64& rng);
UnitarySample sample_from_matrix(const Eigen::MatrixXcd& M, int q, int jmax);
UnitarySample haar_sample(int N, std::uint64_t seed, int q = 0, int jmax = -1);

/// c_d = (-sqrt q)^d e_d(eig), d = 0..N: the coefficients of det(I - q^{1/2-s} M) in q^{-s}.
std::vector<cplx> secular_coeffs(const std::vector<cplx>& eig, int q);
/// tr(M^n), n = 0..jmax, recovered from secular coefficients by Newton's identities.
std::vector<cplx> traces_from_secular(const std::vector<cplx>& c, int q, int jmax);
/// Power sums p_0..p_jmax of the eigenvalues.
std::vector<cplx> power_sums(const std::vector<cplx>& eig, int jmax);

/// One generator per chunk of samples, so results do not depend on how
/// chunks are scheduled.
std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk);
inline constexpr int kChunk = 1024;

/// prod_j tr(M^j)^{a_j} conj(tr(M^j))^{b_j}, a and b indexed from j = 1.
struct TraceMonomial {
    std::vector<int> a;
    std::vector<int> b;
    int degree_a() const;
    int degree_b() const;
    cplx eval(const std::vector<cplx>& traces) const;
};

/// Gaussian value delta_{ab} prod j^{a_j} a_j!.
Integer ds_exact(const TraceMonomial& m);
MCResult ds_moment_check(int N, const TraceMonomial& m, int nsamples, std::uint64_t seed);
/// Several monomials from the same Haar draws.
std::vector<MCResult> ds_moment_battery(int N, const std::vector<TraceMonomial>& ms, int nsamples,
                                        std::uint64_t seed);

/// x_n = -q^{n/2} tr(M^n)/n, n = 1..k.
std::vector<cplx> chimera_coords(const UnitarySample& s, int q, int k);

/// A functional of the secular coefficients c_0..c_N.
using Functional = std::function<cplx(const std::vector<cplx>& c)>;
Functional phi_one();
Functional phi_coeff(int d, bool conj = false);
Functional phi_abs2(int d);
/// prod_{j<=r} L(1/2+alpha_j) prod_{j>r} conj L(1/2+alpha_j), L(s) = sum_d c_d q^{-ds}.
Functional phi_moment(int q, int r, int rt, const std::vector<cplx>& alpha);

enum class WeightMode { fourier, hermite };

struct ChimeraConfig {
    int q = 13;
    int N = 12;
    double beta = 0.45;
    int k = -1;  // overrides beta when >= 1
    int samples = 20000;
    std::uint64_t seed = 1;
    WeightMode mode = WeightMode::hermite;
    int cutoff = 12;
    int threads = 1;
    DensityConfig density{};

    int resolved_k() const;
};

struct ChimeraResult {
    std::vector<cplx> estimates;  // one per functional
    std::vector<double> stderrs;
    double gamma_hat = 0;
    double gamma_stderr = 0;
    double ess = 0;
    int k = 0;
    int samples = 0;
};

/// Self-normalised importance estimate sum w phi / sum w of each functional
/// under the chimera measure; stderr from 16 batch means.
ChimeraResult chimera_expectation(const std::vector<Functional>& phis, const ChimeraConfig& cfg);

/// Chimera weight evaluator for the configured mode.
std::function<double(const std::vector<cplx>&)> make_weight(const ChimeraConfig& cfg);

struct SupportReport {
    double zero_fraction = 0;  // weight < 1e-12
    int retained = 0;
    int violations = 0;  // retained samples with |x_1| > q + 0.1
    double max_retained_x1 = 0;
    int k = 0;
};

SupportReport support_probe(int q, int N, int nsamples, std::uint64_t seed, int k = 1);

}  // namespace ffm
