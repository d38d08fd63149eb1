#pragma once

#include "opcalc/expr.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace opcalc {

struct SamplingExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Open domain K of the coefficient functions: per-variable sampling boxes and
// exclusion predicates that must stay bounded away from zero on K.
struct DomainSpec {
    int n = 0;
    std::vector<std::pair<double, double>> box;    // size n; default [-2, 2]
    std::vector<std::pair<double, double>> p_box;  // momentum box; default [-2, 2]
    std::vector<Expr> exclusions;                  // require |value| > exclusion_tol
    std::map<std::string, double> params;
    double exclusion_tol = 1e-6;

    static DomainSpec box_domain(int n, double lo = -2.0, double hi = 2.0);

    std::pair<double, double> var_box(int i) const;    // 1-based
    std::pair<double, double> mom_box(int i) const;    // 1-based
    bool admits(const std::vector<double>& x) const;   // exclusions satisfied
};

// Deterministic uniform sampler over the domain box; redraws points that fall
// inside an excluded region, with a bounded retry budget.
class Sampler {
public:
    Sampler(const DomainSpec& dom, std::uint64_t seed);

    std::vector<double> draw_x();
    std::vector<double> draw_p();
    double uniform(double lo, double hi);

private:
    const DomainSpec& dom_;
    std::uint64_t state_;
    double next01();
};

enum class ZeroKind { SymbolicZero, NumericZero, NonZero };

struct ZeroVerdict {
    ZeroKind kind = ZeroKind::NonZero;
    double max_abs = 0.0;           // largest |value| seen (NumericZero / NonZero)
    std::vector<double> witness;    // first nonzero point (NonZero only)

    bool is_zero() const { return kind != ZeroKind::NonZero; }
};

inline constexpr double kZeroTol = 1e-9;

// Equality test for coefficient functions: symbolic simplification first,
// numeric sampling as the authoritative fallback. The zero tolerance is
// absolute after normalizing by the expression's max sampled magnitude.
ZeroVerdict is_zero(const Expr& e, const DomainSpec& dom, int samples = 20,
                    std::uint64_t seed = 0, double tol = kZeroTol);

} // namespace opcalc
