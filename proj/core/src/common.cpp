#include "ffm/common.hpp"
#include "ffm/qsqrt.hpp"

#include <cmath>
#include <cstdlib>

namespace ffm {

namespace {

std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    unsigned long long x = std::strtoull(v, &end, 10);
    if (end == v || *end != '\0' || x == 0) throw DomainError(std::string(name) + " must be a positive integer");
    return x;
}

}  // namespace

Budget Budget::from_env() {
    Budget b;
    b.enumeration = env_u64("FFM_ENUM_BUDGET", b.enumeration);
    b.terms = env_u64("FFM_TERM_BUDGET", b.terms);
    return b;
}

std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

Integer ipow(std::uint64_t base, unsigned exp) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

// ---- QSqrtScalar ----

QSqrtScalar::QSqrtScalar(int q, Rational a, Rational b) : q_(q), a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
}

QSqrtScalar QSqrtScalar::neg_inv_sqrt_pow(int q, int d) {
    // (-1)^d q^{-d/2}: even d gives q^{-d/2}; odd d gives q^{-(d+1)/2} sqrt(q).
    Rational sign = (d % 2 == 0) ? 1 : -1;
    int m = d >= 0 ? d : -d;
    Rational qp;
    if (d % 2 == 0) {
        qp = Rational(ipow(q, m / 2));
        if (d > 0) qp = 1 / qp;
        return {q, sign * qp, 0};
    }
    // odd d: q^{-d/2} = sqrt(q) * q^{-(d+1)/2}, and d+1 is even
    int e = (d + 1) / 2;
    Rational p = e >= 0 ? Rational(1) / Rational(ipow(q, e)) : Rational(ipow(q, -e));
    return {q, 0, sign * p};
}

void QSqrtScalar::adopt(const QSqrtScalar& o) {
    if (q_ == 0) q_ = o.q_;
    else if (o.q_ != 0 && o.q_ != q_ && (b_ != 0 || o.b_ != 0))
        throw DomainError("QSqrtScalar: mixing different q");
}

double QSqrtScalar::to_double() const {
    return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(q_));
}

QSqrtScalar& QSqrtScalar::operator+=(const QSqrtScalar& o) {
    adopt(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

QSqrtScalar& QSqrtScalar::operator-=(const QSqrtScalar& o) {
    adopt(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

QSqrtScalar& QSqrtScalar::operator*=(const QSqrtScalar& o) {
    adopt(o);
    Rational na = a_ * o.a_ + b_ * o.b_ * q_;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
}

QSqrtScalar& QSqrtScalar::operator*=(const Rational& r) {
    a_ *= r;
    b_ *= r;
    return *this;
}

std::string QSqrtScalar::to_string() const {
    return "{\"a\":\"" + ffm::to_string(a_) + "\",\"b\":\"" + ffm::to_string(b_) + "\"}";
}

}  // namespace ffm
