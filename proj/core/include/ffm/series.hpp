#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ffm/common.hpp"

namespace ffm {

/// Truncated multivariate power series in up to 8 variables with exact
/// coefficients. A monomial is kept iff every exponent is within its cap
/// and the weighted degree sum w_i e_i is at most max_weight.
/// Exponents are packed 8 bits per variable.
template <class C>
class Series {
public:
    using Key = std::uint64_t;
    static constexpr int kMaxVars = 8;

    Series(std::vector<int> caps, std::vector<int> weights, int max_weight)
        : caps_(std::move(caps)), weights_(std::move(weights)), max_weight_(max_weight) {
        if (caps_.size() != weights_.size() || caps_.size() > kMaxVars)
            throw DomainError("Series: bad variable layout");
        for (int c : caps_)
            if (c < 0 || c > 255) throw DomainError("Series: exponent cap out of range");
        for (int w : weights_)
            if (w < 1) throw DomainError("Series: weights must be positive");
    }

    int nvars() const { return static_cast<int>(caps_.size()); }
    int max_weight() const { return max_weight_; }
    const std::vector<int>& caps() const { return caps_; }
    const std::vector<int>& weights() const { return weights_; }

    static Key pack(const std::vector<int>& e) {
        Key k = 0;
        for (std::size_t i = 0; i < e.size(); ++i) k |= static_cast<Key>(e[i]) << (8 * i);
        return k;
    }
    static int exponent(Key k, int i) { return static_cast<int>((k >> (8 * i)) & 0xff); }
    std::vector<int> unpack(Key k) const {
        std::vector<int> e(caps_.size());
        for (int i = 0; i < nvars(); ++i) e[i] = exponent(k, i);
        return e;
    }

    int weight(Key k) const {
        int w = 0;
        for (int i = 0; i < nvars(); ++i) w += weights_[i] * exponent(k, i);
        return w;
    }
    bool admissible(const std::vector<int>& e) const {
        int w = 0;
        for (int i = 0; i < nvars(); ++i) {
            if (e[i] < 0 || e[i] > caps_[i]) return false;
            w += weights_[i] * e[i];
        }
        return w <= max_weight_;
    }

    void add(Key k, const C& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    void add(const std::vector<int>& e, const C& c) {
        if (admissible(e)) add(pack(e), c);
    }

    C coeff(Key k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? C(0) : it->second;
    }
    C coeff(const std::vector<int>& e) const { return admissible(e) ? coeff(pack(e)) : C(0); }

    std::size_t size() const { return terms_.size(); }
    const std::unordered_map<Key, C>& terms() const { return terms_; }

    /// Terms sorted by key, for deterministic traversal.
    std::vector<std::pair<Key, C>> sorted_terms() const {
        std::vector<std::pair<Key, C>> v(terms_.begin(), terms_.end());
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return v;
    }

    /// Sum of two admissible keys, or false when the result is truncated away.
    bool add_keys(Key a, Key b, Key& out) const {
        int w = 0;
        out = 0;
        for (int i = 0; i < nvars(); ++i) {
            int e = exponent(a, i) + exponent(b, i);
            if (e > caps_[i]) return false;
            w += weights_[i] * e;
            out |= static_cast<Key>(e) << (8 * i);
        }
        return w <= max_weight_;
    }

    Series mul(const Series& o, std::uint64_t term_budget = ~0ull) const {
        Series r(caps_, weights_, max_weight_);
        std::uint64_t work = 0;
        for (const auto& [ka, ca] : terms_) {
            work += o.terms_.size();
            if (work > term_budget) throw BudgetExceeded("Series::mul work exceeds term budget");
            for (const auto& [kb, cb] : o.terms_) {
                Key k;
                if (add_keys(ka, kb, k)) r.add(k, ca * cb);
            }
        }
        return r;
    }

    /// this^E for a series with constant term 1, by the recurrence obtained
    /// from F P' = E F' P in the grading variable.
    Series pow(const C& E, std::uint64_t term_budget = ~0ull) const {
        if (coeff(Key{0}) != 1) throw DomainError("Series::pow needs constant term 1");
        int G = max_weight_;
        int cap_sum = 0;
        for (int i = 0; i < nvars(); ++i) cap_sum += caps_[i] * weights_[i];
        G = std::min(G, cap_sum);
        std::vector<std::vector<std::pair<Key, C>>> F(G + 1), P(G + 1);
        for (const auto& [k, c] : terms_)
            if (k != 0) F[weight(k)].emplace_back(k, c);
        P[0].emplace_back(Key{0}, C(1));
        std::uint64_t work = 0;
        for (int g = 1; g <= G; ++g) {
            std::unordered_map<Key, C> acc;
            for (int j = 1; j <= g; ++j) {
                if (F[j].empty() || P[g - j].empty()) continue;
                C factor = E * j - (g - j);
                if (factor == 0) continue;
                work += F[j].size() * P[g - j].size();
                if (work > term_budget) throw BudgetExceeded("Series::pow work exceeds term budget");
                for (const auto& [kf, cf] : F[j]) {
                    C cff = factor * cf;
                    for (const auto& [kp, cp] : P[g - j]) {
                        Key k;
                        if (!add_keys(kf, kp, k)) continue;
                        auto [it, ins] = acc.try_emplace(k, cff * cp);
                        if (!ins) it->second += cff * cp;
                    }
                }
            }
            for (auto& [k, c] : acc) {
                if (c == 0) continue;
                P[g].emplace_back(k, c / g);
            }
        }
        Series r(caps_, weights_, max_weight_);
        for (auto& comp : P)
            for (auto& [k, c] : comp) r.add(k, c);
        return r;
    }

private:
    std::vector<int> caps_;
    std::vector<int> weights_;
    int max_weight_;
    std::unordered_map<Key, C> terms_;
};

}  // namespace ffm
