#pragma once

#include <string>

#include "ffm/common.hpp"

namespace ffm {

/// Exact element a + b*sqrt(q) of Q(sqrt q), q a prime (hence not a square).
/// A zero-initialised scalar carries q = 0 and adopts the q of whatever it
/// is combined with.
class QSqrtScalar {
public:
    QSqrtScalar() = default;
    QSqrtScalar(int q, Rational a, Rational b = 0);

    static QSqrtScalar zero(int q) { return {q, 0, 0}; }
    static QSqrtScalar one(int q) { return {q, 1, 0}; }
    /// (-q^{-1/2})^d for any integer d.
    static QSqrtScalar neg_inv_sqrt_pow(int q, int d);

    int q() const { return q_; }
    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }
    double to_double() const;

    QSqrtScalar& operator+=(const QSqrtScalar& o);
    QSqrtScalar& operator-=(const QSqrtScalar& o);
    QSqrtScalar& operator*=(const QSqrtScalar& o);
    QSqrtScalar& operator*=(const Rational& r);
    QSqrtScalar operator-() const { return {q_, -a_, -b_}; }

    friend QSqrtScalar operator+(QSqrtScalar x, const QSqrtScalar& y) { return x += y; }
    friend QSqrtScalar operator-(QSqrtScalar x, const QSqrtScalar& y) { return x -= y; }
    friend QSqrtScalar operator*(QSqrtScalar x, const QSqrtScalar& y) { return x *= y; }
    friend QSqrtScalar operator*(QSqrtScalar x, const Rational& r) { return x *= r; }
    friend bool operator==(const QSqrtScalar& x, const QSqrtScalar& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

    std::string to_string() const;

private:
    void adopt(const QSqrtScalar& o);

    int q_ = 0;
    Rational a_ = 0;
    Rational b_ = 0;
};

}  // namespace ffm
