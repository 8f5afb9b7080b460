#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace ffm {

using Integer = mpz_class;
using Rational = mpq_class;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a computation would exceed its configured size cap.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A mathematical identity that must hold failed numerically or exactly.
class IdentityFailure : public std::runtime_error {
public:
    IdentityFailure(std::string invariant, const std::string& detail)
        : std::runtime_error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

/// Bad arguments (outside the documented domain of an operation).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Size caps shared by the enumeration and counting engines.
struct Budget {
    std::uint64_t enumeration = 10'000'000;  // monic polynomials / group elements
    std::uint64_t terms = 20'000'000;        // series terms, determinant terms, quadrature nodes

    /// Defaults overridden by FFM_ENUM_BUDGET and FFM_TERM_BUDGET when set.
    static Budget from_env();
};

/// Monte Carlo mean against an exact value.
struct MCResult {
    cplx mean;
    double stderr_ = 0;  // sqrt((Var Re + Var Im)/n)
    cplx exact;
    double z() const { return stderr_ > 0 ? std::abs(mean - exact) / stderr_ : (mean == exact ? 0.0 : INFINITY); }
};

std::string to_string(const Rational& r);  // "num/den", always with a denominator

bool is_prime(std::uint64_t n);

Integer ipow(std::uint64_t base, unsigned exp);

}  // namespace ffm
