#pragma once

#include <cstdint>
#include <vector>

#include "ffm/common.hpp"
#include "ffm/ffpoly.hpp"

namespace ffm {

/// The group G = 1 + x F_q[x]/x^{N+2} with an explicit basis. Elements are
/// encoded as sum_{j=1}^{N+1} b_j q^{j-1}, b_j the coefficient of x^j.
class UnitGroup {
public:
    UnitGroup(int q, int N, const Budget& budget = {});

    int q() const { return q_; }
    int N() const { return N_; }
    std::uint64_t size() const { return size_; }
    /// Orders of the basis elements (powers of q), largest first.
    const std::vector<std::uint64_t>& orders() const { return orders_; }
    const std::vector<std::uint64_t>& basis() const { return basis_; }
    /// Group exponent: the largest basis order.
    std::uint64_t exponent() const { return orders_.empty() ? 1 : orders_.front(); }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t pow(std::uint64_t a, std::uint64_t n) const;
    /// Coordinates of g in the basis.
    const std::vector<std::uint32_t>& log(std::uint64_t g) const { return dlog_.at(g); }
    /// f(x^{-1}) x^{deg f} reduced mod x^{N+2}.
    std::uint64_t reversal(const MonicPoly& f) const;

private:
    std::vector<std::uint32_t> decode(std::uint64_t g) const;
    std::uint64_t encode(const std::vector<std::uint32_t>& b) const;

    int q_, N_;
    std::uint64_t size_;
    std::vector<std::uint64_t> basis_;
    std::vector<std::uint64_t> orders_;
    std::vector<std::vector<std::uint32_t>> dlog_;
};

/// Even character nu of (F_q[x]/x^{N+2})^x, given by its exponents k_i on
/// the basis of UnitGroup: nu(b_i) = exp(2 pi i k_i / ord_i).
struct DirichletCharacter {
    std::vector<std::uint64_t> k;
    bool even = true;
    bool primitive = false;
};

/// nu(g) as an exponent t with nu(g) = exp(2 pi i t / exponent).
std::uint64_t character_exponent(const UnitGroup& G, const DirichletCharacter& nu, std::uint64_t g);
cplx character_value(const UnitGroup& G, const DirichletCharacter& nu, std::uint64_t g);

/// Even primitive characters: q^{N+1} - q^N of them.
std::vector<DirichletCharacter> enumerate_family(const UnitGroup& G);
/// Every even character, primitive or not.
std::vector<DirichletCharacter> all_even_characters(const UnitGroup& G);

/// chi(f) = nu(f(x^{-1}) x^{deg f}).
cplx chi_of(const UnitGroup& G, const DirichletCharacter& nu, const MonicPoly& f);

struct LPolynomial {
    int q = 0;
    int N = 0;
    std::vector<cplx> c;  // c_0..c_N
};

/// c_d = sum over monic f of degree d of chi(f), d = 0..N+2; throws
/// IdentityFailure("l-degree") unless c_{N+1} and c_{N+2} vanish.
LPolynomial l_polynomial(const UnitGroup& G, const DirichletCharacter& nu);
/// All L-polynomials of the family, sharing one pass over monic polynomials.
std::vector<LPolynomial> family_l_polynomials(const UnitGroup& G, const Budget& budget = {});

/// Roots of sum_d c_d u^d in u = q^{-s}.
std::vector<cplx> l_roots(const LPolynomial& L);

/// Family average of prod_{j<=r} L(1/2+alpha_j+it) prod_{j>r} conj L(1/2+alpha_j+it),
/// averaged over t exactly (only degree-matched terms survive).
cplx family_moment(int q, int N, int r, int rt, const std::vector<cplx>& alpha, const Budget& budget = {});
cplx family_moment(const std::vector<LPolynomial>& Ls, int r, int rt, const std::vector<cplx>& alpha);

}  // namespace ffm
