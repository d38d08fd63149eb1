#pragma once

#include "opcalc/diffop.hpp"

#include <cstdint>

namespace opcalc::testutil {

// deterministic RNG for randomized property tests (splitmix64)
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    double real(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }
};

// random polynomial in n variables, degree <= deg, small integer coefficients
inline Expr random_poly(Rng& rng, int n, int deg, int terms = 3) {
    Expr e = make_const(static_cast<long long>(rng.below(5)) - 2);
    for (int t = 0; t < terms; ++t) {
        Expr mono = make_const(static_cast<long long>(rng.below(7)) - 3);
        int d = rng.below(deg + 1);
        for (int j = 0; j < d; ++j) mono = mul(mono, make_var(1 + rng.below(n)));
        e = add(e, mono);
    }
    return e;
}

// random operator: order <= m, polynomial coefficients
inline DiffOperator random_operator(Rng& rng, int n, int m, int deg = 3) {
    DiffOperator op(n);
    for (const auto& alpha : multi_indices_order_upto(n, m))
        if (rng.below(3) != 0) op.add_term(alpha, random_poly(rng, n, deg, 2));
    return op;
}

} // namespace opcalc::testutil
