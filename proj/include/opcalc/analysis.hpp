#pragma once

#include "opcalc/ncpoly.hpp"

#include <optional>
#include <string>

namespace opcalc {

inline constexpr double kRankCutoff = 1e-8;       // relative singular-value cutoff
inline constexpr double kResidualTol = 1e-7;      // relative projection residual

struct PhaseSample {
    std::vector<double> x;
    std::vector<double> p;
    bool sampled = false;  // drawn by a seeded sampler vs user-given
};

PhaseSample draw_phase_sample(const DomainSpec& dom, std::uint64_t seed);

struct RankEntry {
    PhaseSample pt;
    std::vector<double> singular_values;
    int rank = 0;
};

struct RankReport {
    int s = 0;  // number of operators
    std::vector<RankEntry> entries;
    bool globally_quasi_independent = false;
    double full_rank_fraction = 0.0;
    double cutoff = kRankCutoff;
    std::uint64_t seed = 0;
};

// Partition of an operator list into multiplication (order-0) operators G and
// the rest F, keeping the original order inside each class. slot[i] maps the
// original index to the position in the (G_1..G_l, F_1..F_r) value/gradient
// vectors used by the commutative polynomials.
struct OpSplit {
    std::vector<DiffOperator> g_ops;
    std::vector<DiffOperator> f_ops;
    std::vector<int> slot;
};
OpSplit split_by_order(const std::vector<DiffOperator>& ops);

// Rows d(MW_i)(pt): the s x 2n Jacobian of the main-part symbols.
std::vector<std::vector<double>> main_part_jacobian(const std::vector<DiffOperator>& w,
                                                    const PhaseSample& pt,
                                                    const std::map<std::string, double>& params);

// Main dimension r_W at one phase point (numeric rank of the Jacobian).
RankEntry main_dimension(const std::vector<DiffOperator>& w, const PhaseSample& pt,
                         const std::map<std::string, double>& params = {},
                         double cutoff = kRankCutoff);

// Sampled global verdict: quasi-independent iff rank = s at >= 90% of samples.
RankReport quasi_independence(const std::vector<DiffOperator>& w, const DomainSpec& dom,
                              int samples = 20, std::uint64_t seed = 0,
                              double cutoff = kRankCutoff);

struct CommutationReport {
    bool all_zero = true;
    // entries (i, j, verdict) for each checked pair, i < j in 0-based indices
    struct Entry {
        int i = 0;
        int j = 0;
        OpZeroVerdict verdict;
    };
    std::vector<Entry> entries;
};

// [W_i, W_j] = 0 for i = 1..k against every j.
CommutationReport check_commutation(const std::vector<DiffOperator>& w, int k,
                                    const DomainSpec& dom, int samples = 20,
                                    std::uint64_t seed = 0);

enum class IntegrableVerdict { IntegrableAtSampledPoints, NotCommuting, NotQuasiIndependent };

struct IntegrableReport {
    IntegrableVerdict verdict = IntegrableVerdict::IntegrableAtSampledPoints;
    bool size_matches = true;  // |W| = 2n - k
    CommutationReport commutation;
    CommutationReport classical;  // {MW_i, MW_j} = 0 for i <= k
    RankReport rank;
};

IntegrableReport check_integrable_set(const std::vector<DiffOperator>& w, int k,
                                      const DomainSpec& dom, int samples = 20,
                                      std::uint64_t seed = 0);

struct CorrelationReport {
    bool valid = false;
    bool nonzero_polynomial = false;
    bool gradient_nonzero = false;   // d(M_W S)_C != 0 at Wbar
    bool substitution_zero = false;  // S(W) = 0 near pt.x
    double gradient_norm = 0.0;
    OpZeroVerdict substitution;
};

// Regular-correlation witness check at a phase point; W is partitioned into
// order-0 and higher-order operators to match the arity (l, r) of S.
CorrelationReport check_regular_correlation(const NCPolynomial& s,
                                            const std::vector<DiffOperator>& w,
                                            const PhaseSample& pt, const DomainSpec& dom,
                                            int samples = 20, std::uint64_t seed = 0,
                                            double tol = kRankCutoff);

struct DependenceReport {
    bool valid = false;
    bool det_nonzero = false;
    double det = 0.0;
    bool substitutions_zero = false;
    std::optional<int> failing_index;  // 0-based S_i whose substitution is nonzero
    bool span_contained = false;       // consequence check: dMW in span dMY
    double span_residual = 0.0;
};

// Algebraic-dependence witness check: S_i(W, Y) = 0 with nondegenerate
// Jacobi minor in the W block at (Wbar, Ybar).
DependenceReport check_algebraic_dependence(const std::vector<NCPolynomial>& s,
                                            const std::vector<DiffOperator>& w,
                                            const std::vector<DiffOperator>& y,
                                            const PhaseSample& pt, const DomainSpec& dom,
                                            int samples = 20, std::uint64_t seed = 0,
                                            double tol = kRankCutoff);

struct SpanReport {
    bool contained = false;
    double max_residual = 0.0;             // worst relative least-squares residual
    std::vector<double> residuals;         // one per W operator
    bool rank_bound_holds = false;         // r_W(pt) <= r_Y(pt)
};

// d(MW_i)(pt) in span{d(MY_h)(pt)} for every i.
SpanReport check_span_containment(const std::vector<DiffOperator>& w,
                                  const std::vector<DiffOperator>& y, const PhaseSample& pt,
                                  const std::map<std::string, double>& params = {},
                                  double tol = kResidualTol);

enum class NecVerdict { PassesNecessaryCondition, ViolatesNecessaryCondition, NotApplicable };

struct NecReport {
    NecVerdict verdict = NecVerdict::NotApplicable;
    int rank = 0;
    std::vector<double> gamma;  // kernel covector of the main-part Jacobian
    std::vector<double> v;      // sum gamma_i d(M'W_i), length 2n
    double residual = 0.0;      // relative projection residual of v onto L
};

// Necessary condition for regular dependence when r_W(pt) = s - 1: the
// covector v must lie in L = span{d(MW_i), d{MW_i, MW_j}+}.
NecReport check_necessary_dependence_condition(const std::vector<DiffOperator>& w,
                                               const PhaseSample& pt,
                                               const std::map<std::string, double>& params = {},
                                               double cutoff = kRankCutoff,
                                               double tol = kResidualTol);

struct Preind2Report {
    bool passes = false;
    double a1_residual = 0.0;
    double a2_residual = 0.0;
    double a3_residual = 0.0;
    std::vector<std::vector<double>> a;  // s x r coefficients shared by all relations
};

// Staged feasibility of the three linear relations between the differentials
// of (MW, M'W, {MW,MW}+) and those of (MY, M'Y, {MY,MY}+).
Preind2Report check_preind2_relations(const std::vector<DiffOperator>& w,
                                      const std::vector<DiffOperator>& y, const PhaseSample& pt,
                                      const std::map<std::string, double>& params = {},
                                      double tol = kResidualTol);

} // namespace opcalc
