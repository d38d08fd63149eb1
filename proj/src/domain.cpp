#include "opcalc/domain.hpp"

#include <cmath>

namespace opcalc {

DomainSpec DomainSpec::box_domain(int n, double lo, double hi) {
    DomainSpec d;
    d.n = n;
    d.box.assign(static_cast<size_t>(n), {lo, hi});
    return d;
}

std::pair<double, double> DomainSpec::var_box(int i) const {
    if (i >= 1 && i <= static_cast<int>(box.size())) return box[i - 1];
    return {-2.0, 2.0};
}

std::pair<double, double> DomainSpec::mom_box(int i) const {
    if (i >= 1 && i <= static_cast<int>(p_box.size())) return p_box[i - 1];
    return {-2.0, 2.0};
}

bool DomainSpec::admits(const std::vector<double>& x) const {
    for (const auto& excl : exclusions) {
        try {
            if (std::fabs(evaluate(excl, x, params)) <= exclusion_tol) return false;
        } catch (const EvalError&) {
            return false;
        }
    }
    return true;
}

Sampler::Sampler(const DomainSpec& dom, std::uint64_t seed) : dom_(dom), state_(seed) {}

// splitmix64; fixed here so reports are reproducible across standard libraries
double Sampler::next01() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double Sampler::uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }

std::vector<double> Sampler::draw_x() {
    const int retries = 1000;
    for (int attempt = 0; attempt < retries; ++attempt) {
        std::vector<double> x(static_cast<size_t>(dom_.n));
        for (int i = 1; i <= dom_.n; ++i) {
            auto [lo, hi] = dom_.var_box(i);
            x[static_cast<size_t>(i - 1)] = uniform(lo, hi);
        }
        if (dom_.admits(x)) return x;
    }
    throw SamplingExhaustedError("cannot find a valid domain point after bounded retries");
}

std::vector<double> Sampler::draw_p() {
    std::vector<double> p(static_cast<size_t>(dom_.n));
    for (int i = 1; i <= dom_.n; ++i) {
        auto [lo, hi] = dom_.mom_box(i);
        p[static_cast<size_t>(i - 1)] = uniform(lo, hi);
    }
    return p;
}

ZeroVerdict is_zero(const Expr& e, const DomainSpec& dom, int samples, std::uint64_t seed,
                    double tol) {
    Expr s = simplify(expand(simplify(e)));
    if (is_zero_const(s)) return {ZeroKind::SymbolicZero, 0.0, {}};

    Sampler sampler(dom, seed);
    double max_abs = 0.0;
    double scale = 1.0;
    std::vector<double> witness;
    int evaluated = 0;
    int attempts = 0;
    while (evaluated < samples && attempts < 50 * samples + 100) {
        ++attempts;
        std::vector<double> x = sampler.draw_x();
        double v, mag;
        try {
            v = evaluate(s, x, dom.params);
            mag = evaluate_abs(s, x, dom.params);
        } catch (const EvalError&) {
            continue;  // near a pole; redraw
        }
        ++evaluated;
        scale = std::max(scale, mag);
        if (std::fabs(v) > max_abs) {
            max_abs = std::fabs(v);
            witness = x;
        }
    }
    if (evaluated == 0)
        throw SamplingExhaustedError("no evaluable points found for zero test");
    if (max_abs < tol * scale) return {ZeroKind::NumericZero, max_abs, {}};
    return {ZeroKind::NonZero, max_abs, witness};
}

} // namespace opcalc
