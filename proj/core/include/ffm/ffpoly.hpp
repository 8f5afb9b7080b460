#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ffm/common.hpp"

namespace ffm {

/// The field size q together with the regime thresholds that later
/// computations consult.
struct FieldParams {
    int q;
    bool density_ok;    // q > 2
    bool pointwise_ok;  // q > 5
    bool hf_ok;         // q > 11

    explicit FieldParams(int q);
};

/// Monic polynomial over F_q, coefficients low-to-high, last one equal to 1.
class MonicPoly {
public:
    MonicPoly() : c_{1} {}
    explicit MonicPoly(std::vector<std::uint32_t> coeffs);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }

    /// idx-th monic polynomial of degree d in lexicographic order of
    /// (a_{d-1}, ..., a_0); equivalently idx = sum a_j q^j.
    static MonicPoly from_index(int q, int d, std::uint64_t idx);
    std::uint64_t index(int q) const;

    friend bool operator==(const MonicPoly& a, const MonicPoly& b) { return a.c_ == b.c_; }
    std::string to_string() const;

private:
    std::vector<std::uint32_t> c_;
};

MonicPoly mul(const MonicPoly& f, const MonicPoly& g, int q);
/// Remainder of f modulo the monic g, as a low-to-high coefficient vector
/// (empty when zero).
std::vector<std::uint32_t> poly_mod(const std::vector<std::uint32_t>& f, const MonicPoly& g, int q);
bool divides(const MonicPoly& g, const MonicPoly& f, int q);
bool has_root(const MonicPoly& f, int q);

/// All q^d monic polynomials of degree d, lexicographic order.
std::vector<MonicPoly> enumerate_monic(int q, int d, const Budget& budget = {});

int mobius(int n);
std::vector<int> divisors(int n);

/// E_d by the necklace formula (1/d) sum_{e|d} mu(e) q^{d/e}.
Integer irreducible_count(int q, int d);

/// Reference irreducibility test: trial division by every monic polynomial
/// of degree 1..deg/2. Independent of any prime table.
bool is_irreducible_bruteforce(const MonicPoly& f, int q);

struct ABETriple {
    Rational A;
    Rational B;
    Integer E;
};

/// A_n = sum_{d|n,d<n} E_d, B_n = sum_{d|n,d<n} E_d d/n, E_n.
ABETriple abe_triple(int q, int n);

/// Prime counts by degree, and (optionally) the primes themselves.
class PrimeTable {
public:
    /// Counts only, no enumeration; any dmax.
    static PrimeTable counts(int q, int dmax);
    /// Counts plus the explicit primes of each degree up to dmax, found by
    /// trial division against the lower-degree primes.
    static PrimeTable build(int q, int dmax, const Budget& budget = {});

    int q() const { return q_; }
    int dmax() const { return dmax_; }
    bool enumerated() const { return !primes_.empty(); }

    const Integer& E(int d) const { return E_.at(d); }
    /// E_d as a machine integer; throws BudgetExceeded if it does not fit.
    std::uint64_t count(int d) const;
    Rational A(int n) const;
    Rational B(int n) const;

    const std::vector<MonicPoly>& primes(int d) const { return primes_.at(d); }

    /// Factorisation of f into the enumerated primes:
    /// (degree, index within primes(degree), multiplicity).
    struct Factor {
        int degree;
        std::size_t index;
        int multiplicity;
    };
    std::vector<Factor> factor(const MonicPoly& f) const;

private:
    int q_ = 0;
    int dmax_ = 0;
    std::vector<Integer> E_;                     // E_[0] unused
    std::vector<std::vector<MonicPoly>> primes_;  // empty unless enumerated
};

}  // namespace ffm
