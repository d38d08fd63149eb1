#pragma once

#include <compare>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace opcalc {

// Exponent vector alpha in Z_+^n of a derivative monomial p^alpha.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(int n) : e(static_cast<size_t>(n), 0) {}
    MultiIndex(std::initializer_list<int> v) : e(v) { validate(); }
    explicit MultiIndex(std::vector<int> v) : e(std::move(v)) { validate(); }

    void validate() const {
        for (int a : e)
            if (a < 0) throw std::invalid_argument("multi-index entries must be >= 0");
    }

    int dim() const { return static_cast<int>(e.size()); }
    int order() const { return std::accumulate(e.begin(), e.end(), 0); }

    long long factorial() const {
        long long f = 1;
        for (int a : e)
            for (int k = 2; k <= a; ++k) f *= k;
        return f;
    }

    int operator[](size_t i) const { return e[i]; }
    int& operator[](size_t i) { return e[i]; }

    bool operator==(const MultiIndex& o) const { return e == o.e; }
    auto operator<=>(const MultiIndex& o) const { return e <=> o.e; }

    // componentwise alpha <= beta
    bool leq(const MultiIndex& o) const {
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }

    MultiIndex plus(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
        return r;
    }

    MultiIndex minus(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (size_t i = 0; i < e.size(); ++i) {
            r.e[i] -= o.e[i];
            if (r.e[i] < 0) throw std::invalid_argument("multi-index subtraction underflow");
        }
        return r;
    }

    MultiIndex bump(int i, int by = 1) const {  // 1-based component
        MultiIndex r = *this;
        r.e[static_cast<size_t>(i - 1)] += by;
        if (r.e[static_cast<size_t>(i - 1)] < 0)
            throw std::invalid_argument("multi-index bump underflow");
        return r;
    }

    static MultiIndex unit(int n, int i) {  // 1-based
        MultiIndex r(n);
        r.e[static_cast<size_t>(i - 1)] = 1;
        return r;
    }

    // falling factorial prod_i e_i * (e_i-1) * ... * (e_i - a_i + 1)
    long long falling(const MultiIndex& a) const {
        long long f = 1;
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < a.e[i]; ++k) f *= (e[i] - k);
        return f;
    }
};

// Enumerates all alpha with componentwise alpha <= cap.
inline std::vector<MultiIndex> multi_indices_upto(const MultiIndex& cap) {
    std::vector<MultiIndex> out;
    MultiIndex cur(cap.dim());
    while (true) {
        out.push_back(cur);
        int i = 0;
        for (; i < cap.dim(); ++i) {
            if (cur.e[static_cast<size_t>(i)] < cap.e[static_cast<size_t>(i)]) {
                ++cur.e[static_cast<size_t>(i)];
                break;
            }
            cur.e[static_cast<size_t>(i)] = 0;
        }
        if (i == cap.dim()) break;
    }
    return out;
}

// Enumerates all alpha in Z_+^n with |alpha| <= m.
inline std::vector<MultiIndex> multi_indices_order_upto(int n, int m) {
    std::vector<MultiIndex> out;
    MultiIndex cap(n);
    for (auto& c : cap.e) c = m;
    for (auto& a : multi_indices_upto(cap))
        if (a.order() <= m) out.push_back(a);
    return out;
}

} // namespace opcalc
