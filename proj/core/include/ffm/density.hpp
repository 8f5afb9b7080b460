#pragma once

#include <map>
#include <memory>
#include <vector>

#include "ffm/common.hpp"
#include "ffm/eulerprod.hpp"
#include "ffm/ffpoly.hpp"

namespace ffm {

// Real 2-vectors are carried as complex numbers, (x, y) <-> x + iy, with the
// Euclidean pairing dot(a, b) = Re(a conj b).
inline double dot2(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// (1/2pi) int_0^{2pi} exp(sum_m (e^{im theta}.v_m + i e^{im theta}.w_m)/m) d theta,
/// periodic trapezoid, M doubled until two successive values agree to tol.
cplx circle_factor(const std::vector<cplx>& v, const std::vector<cplx>& w, double tol = 1e-12);

/// E[exp(sum_n X_n.v_n + i sum_n X_n.w_n)] for n = 1..k, k = max(|v|, |w|).
cplx laplace_transform(const std::vector<cplx>& v, const std::vector<cplx>& w, const PrimeTable& table);

/// (|v|^2/4 - log circle_factor(v)) / min(|v|^4, |v|^2) for v = (t, 0).
double probe_ov_value(double t);
/// Minimum of probe_ov_value over the grid.
double probe_ov_ratio(const std::vector<double>& grid);

/// Product of the 2D normal densities n/(q^n pi) exp(-n |x_n|^2 / q^n).
double gaussian_density(const std::vector<cplx>& x, int q);

struct DensityConfig {
    // k = 1: radial Hankel inversion with a Gaussian frequency window of width s.
    double radial_window = 0.01;
    double panel_width = 1.0;
    int panel_nodes = 16;
    // k = 2: trapezoid grid with a window flat to fourth order at the origin.
    double grid_window1 = 0.7;
    double grid_window2 = 1.4;
    // Values whose modulus is below the floor are indistinguishable from 0.
    double noise_floor = 1e-12;
    double negative_tol = 1e-9;
    Budget budget{};
};

/// Density F of (X_1..X_k) by Fourier inversion of the characteristic
/// function. Construction does the x-independent work once.
class DensityEngine {
public:
    DensityEngine(const PrimeTable& table, int k, DensityConfig cfg = {});

    int k() const { return k_; }
    int q() const { return q_; }
    /// F(x), x of length k. Throws IdentityFailure("negative-density") when the
    /// quadrature returns a clearly negative value.
    double density(const std::vector<cplx>& x) const;
    /// F(x) / gaussian_density(x).
    double weight(const std::vector<cplx>& x) const;
    /// Raw (unclamped) quadrature value, for diagnostics.
    double raw(const std::vector<cplx>& x) const;

private:
    double raw_radial(double r) const;
    double raw_grid(const std::vector<cplx>& x) const;
    double finish(double v) const;

    int q_;
    int k_;
    DensityConfig cfg_;
    std::vector<double> rho_, wt_;  // k = 1 nodes and weights
    // k = 2 grid: G[i1][j][l] = sum over w_{1,y} of window * charfn
    std::vector<double> g1_, g2_;
    std::vector<cplx> G_;
    double cell_ = 0;
};

double density_F(const std::vector<cplx>& x, const PrimeTable& table, const DensityConfig& cfg = {});
double weight_ratio(const std::vector<cplx>& x, const PrimeTable& table, const DensityConfig& cfg = {});

/// Index a = (a_{1,1}, a_{1,2}, ..., a_{k,1}, a_{k,2}).
using HermiteIndex = std::vector<int>;

/// Coefficients of the density ratio in Hermite polynomials.
/// g_a are the real coefficients of E[exp(sum X_n.u_n)] exp(-sum q^n|u_n|^2/(4n))
/// in the monomials u^a; h_a = i^{|a|} g_a are the coefficients of
/// E[exp(i sum X_n.w_n)] exp(+sum q^n|w_n|^2/(4n)) in w^a.
class HermiteTable {
public:
    int k() const { return k_; }
    int q() const { return q_; }
    int D() const { return D_; }
    const std::map<HermiteIndex, Rational>& g() const { return g_; }
    Rational g(const HermiteIndex& a) const;
    /// h_a as a complex number with exact real and imaginary parts.
    std::pair<Rational, Rational> h(const HermiteIndex& a) const;
    static int weighted_degree(const HermiteIndex& a);

    /// Truncated expansion sum_{wdeg a <= cutoff} g_a prod He_a(x s) s^a with
    /// s_n = sqrt(2n/q^n).
    double eval(const std::vector<cplx>& x, int cutoff) const;
    /// sum_{wdeg a <= cutoff} h_a w^a exp(-sum q^n|w_n|^2/(4n)).
    cplx charfn(const std::vector<cplx>& w, int cutoff) const;

    friend HermiteTable hermite_coeffs(int k, int q, int D, const Budget& budget);

private:
    int k_ = 0, q_ = 0, D_ = 0;
    std::map<HermiteIndex, Rational> g_;  // nonzero entries only
    std::vector<std::pair<HermiteIndex, double>> gd_;
    std::vector<int> wdeg_;
};

HermiteTable hermite_coeffs(int k, int q, int D, const Budget& budget = {});

/// Truncated expansion of the density ratio F/gaussian at x; cutoff <= tbl.D().
double hermite_weight_eval(const HermiteTable& tbl, const std::vector<cplx>& x, int cutoff);
/// Weight used for sampling: the expansion clamped below at 0 and set to 0
/// outside the support |x_n| <= q^n/n.
double hermite_sampling_weight(const HermiteTable& tbl, const std::vector<cplx>& x, int cutoff);

/// Probabilists' Hermite polynomials He_0..He_n at x.
std::vector<double> hermite_he(int n, double x);
/// Gauss-Hermite rule for the weight exp(-x^2/2)/sqrt(2 pi) (Golub-Welsch).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);
/// Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace ffm
