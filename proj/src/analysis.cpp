#include "opcalc/analysis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace opcalc {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

int numeric_rank(const Eigen::MatrixXd& m, double cutoff, std::vector<double>* sv = nullptr) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (sv) sv->assign(s.data(), s.data() + s.size());
    if (s.size() == 0) return 0;
    double thresh = cutoff * s(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thresh) ++rank;
    return rank;
}

// relative residual of the least-squares projection of v onto the columns of b
double projection_residual(const Eigen::MatrixXd& b, const Eigen::VectorXd& v,
                           Eigen::VectorXd* coeffs = nullptr) {
    if (b.cols() == 0) return v.norm() / std::max(1.0, v.norm());
    Eigen::VectorXd c = b.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(v);
    if (coeffs) *coeffs = c;
    return (b * c - v).norm() / std::max(1.0, v.norm());
}

// domain restricted to a small box around x, keeping exclusions and params
DomainSpec neighborhood(const DomainSpec& dom, const std::vector<double>& x,
                        double radius = 1e-2) {
    DomainSpec d = dom;
    d.box.clear();
    for (double xi : x) d.box.push_back({xi - radius, xi + radius});
    return d;
}

double main_symbol_value(const DiffOperator& op, const PhaseSample& pt,
                         const std::map<std::string, double>& params) {
    return symbol_eval(main_part(op), pt.x, pt.p, params);
}

} // namespace

PhaseSample draw_phase_sample(const DomainSpec& dom, std::uint64_t seed) {
    Sampler sampler(dom, seed);
    PhaseSample pt;
    pt.x = sampler.draw_x();
    pt.p = sampler.draw_p();
    pt.sampled = true;
    return pt;
}

OpSplit split_by_order(const std::vector<DiffOperator>& ops) {
    OpSplit sp;
    for (const auto& op : ops)
        if (op.order() <= 0)
            sp.g_ops.push_back(op);
        else
            sp.f_ops.push_back(op);
    int gi = 0, fi = 0;
    int l = static_cast<int>(sp.g_ops.size());
    for (const auto& op : ops) sp.slot.push_back(op.order() <= 0 ? gi++ : l + fi++);
    return sp;
}

std::vector<std::vector<double>> main_part_jacobian(const std::vector<DiffOperator>& w,
                                                    const PhaseSample& pt,
                                                    const std::map<std::string, double>& params) {
    std::vector<std::vector<double>> rows;
    for (const auto& op : w) rows.push_back(symbol_gradient(main_part(op), pt.x, pt.p, params));
    return rows;
}

RankEntry main_dimension(const std::vector<DiffOperator>& w, const PhaseSample& pt,
                         const std::map<std::string, double>& params, double cutoff) {
    auto rows = main_part_jacobian(w, pt, params);
    Eigen::MatrixXd j(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i) j.row(static_cast<Eigen::Index>(i)) = to_eigen(rows[i]);
    RankEntry e;
    e.pt = pt;
    e.rank = numeric_rank(j, cutoff, &e.singular_values);
    return e;
}

RankReport quasi_independence(const std::vector<DiffOperator>& w, const DomainSpec& dom,
                              int samples, std::uint64_t seed, double cutoff) {
    RankReport rep;
    rep.s = static_cast<int>(w.size());
    rep.cutoff = cutoff;
    rep.seed = seed;
    Sampler sampler(dom, seed);
    int evaluated = 0;
    int attempts = 0;
    int full = 0;
    while (evaluated < samples && attempts < 50 * samples + 100) {
        ++attempts;
        PhaseSample pt;
        pt.x = sampler.draw_x();
        pt.p = sampler.draw_p();
        pt.sampled = true;
        try {
            RankEntry e = main_dimension(w, pt, dom.params, cutoff);
            if (e.rank == rep.s) ++full;
            rep.entries.push_back(std::move(e));
        } catch (const EvalError&) {
            continue;
        }
        ++evaluated;
    }
    if (evaluated == 0)
        throw SamplingExhaustedError("no evaluable points found for the rank test");
    rep.full_rank_fraction = static_cast<double>(full) / evaluated;
    rep.globally_quasi_independent = rep.full_rank_fraction >= 0.9;
    return rep;
}

CommutationReport check_commutation(const std::vector<DiffOperator>& w, int k,
                                    const DomainSpec& dom, int samples, std::uint64_t seed) {
    if (k < 1 || k > static_cast<int>(w.size()))
        throw std::invalid_argument("central count out of range");
    CommutationReport rep;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < static_cast<int>(w.size()); ++j) {
            OpZeroVerdict v = operator_zero_verdict(
                commutator(w[static_cast<size_t>(i)], w[static_cast<size_t>(j)]), dom, samples,
                seed);
            if (!v.zero) rep.all_zero = false;
            rep.entries.push_back({i, j, std::move(v)});
        }
    return rep;
}

IntegrableReport check_integrable_set(const std::vector<DiffOperator>& w, int k,
                                      const DomainSpec& dom, int samples, std::uint64_t seed) {
    IntegrableReport rep;
    rep.size_matches = static_cast<int>(w.size()) == 2 * dom.n - k;
    rep.commutation = check_commutation(w, k, dom, samples, seed);
    // classical consequence on the main-part symbols
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < static_cast<int>(w.size()); ++j) {
            OpZeroVerdict v = operator_zero_verdict(
                poisson_bracket(main_part(w[static_cast<size_t>(i)]),
                                main_part(w[static_cast<size_t>(j)])),
                dom, samples, seed);
            if (!v.zero) rep.classical.all_zero = false;
            rep.classical.entries.push_back({i, j, std::move(v)});
        }
    rep.rank = quasi_independence(w, dom, samples, seed);
    if (!rep.commutation.all_zero)
        rep.verdict = IntegrableVerdict::NotCommuting;
    else if (!rep.rank.globally_quasi_independent)
        rep.verdict = IntegrableVerdict::NotQuasiIndependent;
    else
        rep.verdict = IntegrableVerdict::IntegrableAtSampledPoints;
    return rep;
}

CorrelationReport check_regular_correlation(const NCPolynomial& s,
                                            const std::vector<DiffOperator>& w,
                                            const PhaseSample& pt, const DomainSpec& dom,
                                            int samples, std::uint64_t seed, double tol) {
    OpSplit sp = split_by_order(w);
    if (static_cast<int>(sp.g_ops.size()) != s.l || static_cast<int>(sp.f_ops.size()) != s.r)
        throw std::invalid_argument("polynomial arity does not match the operator partition");
    CorrelationReport rep;
    rep.nonzero_polynomial = !nc_zero_test(s, samples, seed).zero;
    if (!rep.nonzero_polynomial) return rep;

    DegreeMain dm = degree_and_main(s, weights_of(sp.f_ops), samples, seed);
    CommPoly stilde = abelianize(dm.main);
    std::vector<double> wbar(static_cast<size_t>(s.l + s.r));
    for (size_t i = 0; i < w.size(); ++i)
        wbar[static_cast<size_t>(sp.slot[i])] = main_symbol_value(w[i], pt, dom.params);
    std::vector<double> grad = comm_gradient(stilde, wbar, dom.params);
    rep.gradient_norm = to_eigen(grad).norm();
    rep.gradient_nonzero = rep.gradient_norm > tol;

    DiffOperator sub = substitute(s, sp.g_ops, sp.f_ops);
    rep.substitution = operator_zero_verdict(sub, neighborhood(dom, pt.x), samples, seed);
    rep.substitution_zero = rep.substitution.zero;
    rep.valid = rep.nonzero_polynomial && rep.gradient_nonzero && rep.substitution_zero;
    return rep;
}

DependenceReport check_algebraic_dependence(const std::vector<NCPolynomial>& s,
                                            const std::vector<DiffOperator>& w,
                                            const std::vector<DiffOperator>& y,
                                            const PhaseSample& pt, const DomainSpec& dom,
                                            int samples, std::uint64_t seed, double tol) {
    if (s.size() != w.size())
        throw std::invalid_argument("one correlation polynomial per W operator required");
    std::vector<DiffOperator> all = w;
    all.insert(all.end(), y.begin(), y.end());
    OpSplit sp = split_by_order(all);
    const int l = static_cast<int>(sp.g_ops.size());
    const int r = static_cast<int>(sp.f_ops.size());
    for (const auto& si : s)
        if (si.l != l || si.r != r)
            throw std::invalid_argument("polynomial arity does not match the operator partition");

    std::vector<double> wbar(static_cast<size_t>(l + r));
    for (size_t i = 0; i < all.size(); ++i)
        wbar[static_cast<size_t>(sp.slot[i])] = main_symbol_value(all[i], pt, dom.params);

    DependenceReport rep;
    WeightVector wt = weights_of(sp.f_ops);
    Eigen::MatrixXd jac(s.size(), w.size());
    for (size_t i = 0; i < s.size(); ++i) {
        CommPoly stilde = abelianize(degree_and_main(s[i], wt, samples, seed).main);
        std::vector<double> grad = comm_gradient(stilde, wbar, dom.params);
        for (size_t j = 0; j < w.size(); ++j)
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                grad[static_cast<size_t>(sp.slot[j])];
    }
    rep.det = jac.determinant();
    rep.det_nonzero = std::fabs(rep.det) > tol;

    rep.substitutions_zero = true;
    DomainSpec near = neighborhood(dom, pt.x);
    for (size_t i = 0; i < s.size(); ++i) {
        OpZeroVerdict v =
            operator_zero_verdict(substitute(s[i], sp.g_ops, sp.f_ops), near, samples, seed);
        if (!v.zero) {
            rep.substitutions_zero = false;
            rep.failing_index = static_cast<int>(i);
            break;
        }
    }

    SpanReport span = check_span_containment(w, y, pt, dom.params);
    rep.span_contained = span.contained;
    rep.span_residual = span.max_residual;
    rep.valid = rep.det_nonzero && rep.substitutions_zero;
    return rep;
}

SpanReport check_span_containment(const std::vector<DiffOperator>& w,
                                  const std::vector<DiffOperator>& y, const PhaseSample& pt,
                                  const std::map<std::string, double>& params, double tol) {
    auto wrows = main_part_jacobian(w, pt, params);
    auto yrows = main_part_jacobian(y, pt, params);
    const int dim = wrows.empty() ? (yrows.empty() ? 0 : static_cast<int>(yrows.front().size()))
                                  : static_cast<int>(wrows.front().size());
    Eigen::MatrixXd b(dim, yrows.size());
    for (size_t h = 0; h < yrows.size(); ++h)
        b.col(static_cast<Eigen::Index>(h)) = to_eigen(yrows[h]);
    SpanReport rep;
    rep.contained = true;
    for (const auto& row : wrows) {
        double res = projection_residual(b, to_eigen(row));
        rep.residuals.push_back(res);
        rep.max_residual = std::max(rep.max_residual, res);
        if (res >= tol) rep.contained = false;
    }
    Eigen::MatrixXd jw(wrows.size(), dim), jy(yrows.size(), dim);
    for (size_t i = 0; i < wrows.size(); ++i) jw.row(static_cast<Eigen::Index>(i)) = to_eigen(wrows[i]);
    for (size_t i = 0; i < yrows.size(); ++i) jy.row(static_cast<Eigen::Index>(i)) = to_eigen(yrows[i]);
    rep.rank_bound_holds = numeric_rank(jw, kRankCutoff) <= numeric_rank(jy, kRankCutoff);
    return rep;
}

NecReport check_necessary_dependence_condition(const std::vector<DiffOperator>& w,
                                               const PhaseSample& pt,
                                               const std::map<std::string, double>& params,
                                               double cutoff, double tol) {
    const int s = static_cast<int>(w.size());
    auto rows = main_part_jacobian(w, pt, params);
    const int dim = static_cast<int>(rows.front().size());
    Eigen::MatrixXd j(s, dim);
    for (int i = 0; i < s; ++i) j.row(i) = to_eigen(rows[static_cast<size_t>(i)]);

    NecReport rep;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    double thresh = sv.size() ? cutoff * sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rep.rank;
    if (rep.rank != s - 1) {
        rep.verdict = NecVerdict::NotApplicable;
        return rep;
    }

    // kernel covector of the Jacobian: sum gamma_i d(MW_i) = 0
    Eigen::VectorXd gamma = svd.matrixU().col(s - 1);
    for (int i = 0; i < s; ++i)
        if (std::fabs(gamma(i)) > 1e-12) {
            if (gamma(i) < 0) gamma = -gamma;
            break;
        }
    rep.gamma.assign(gamma.data(), gamma.data() + s);

    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < s; ++i)
        v += gamma(i) *
             to_eigen(symbol_gradient(second_main_part(w[static_cast<size_t>(i)]), pt.x, pt.p,
                                      params));
    rep.v.assign(v.data(), v.data() + dim);

    Eigen::MatrixXd basis(dim, s + s * s);
    for (int i = 0; i < s; ++i) basis.col(i) = j.row(i).transpose();
    int col = s;
    for (int i = 0; i < s; ++i)
        for (int k = 0; k < s; ++k)
            basis.col(col++) =
                to_eigen(symbol_gradient(poisson_semibracket(main_part(w[static_cast<size_t>(i)]),
                                                             main_part(w[static_cast<size_t>(k)])),
                                         pt.x, pt.p, params));
    rep.residual = projection_residual(basis, v);
    rep.verdict = rep.residual < tol ? NecVerdict::PassesNecessaryCondition
                                     : NecVerdict::ViolatesNecessaryCondition;
    return rep;
}

Preind2Report check_preind2_relations(const std::vector<DiffOperator>& w,
                                      const std::vector<DiffOperator>& y, const PhaseSample& pt,
                                      const std::map<std::string, double>& params, double tol) {
    const int s = static_cast<int>(w.size());
    const int r = static_cast<int>(y.size());
    const int dim = 2 * static_cast<int>(pt.x.size());

    auto grad_of = [&](const DiffOperator& op) {
        return to_eigen(symbol_gradient(op, pt.x, pt.p, params));
    };
    auto differentials = [&](const std::vector<DiffOperator>& ops) {
        std::vector<Eigen::VectorXd> dm, dm2;
        std::vector<std::vector<Eigen::VectorXd>> dplus;
        for (const auto& op : ops) {
            dm.push_back(grad_of(main_part(op)));
            dm2.push_back(grad_of(second_main_part(op)));
        }
        for (const auto& a : ops) {
            std::vector<Eigen::VectorXd> row;
            for (const auto& b : ops)
                row.push_back(grad_of(poisson_semibracket(main_part(a), main_part(b))));
            dplus.push_back(std::move(row));
        }
        return std::tuple{dm, dm2, dplus};
    };
    auto [dmw, dmw2, dwplus] = differentials(w);
    auto [dmy, dmy2, dyplus] = differentials(y);

    Eigen::MatrixXd ymat(dim, r);
    for (int h = 0; h < r; ++h) ymat.col(h) = dmy[static_cast<size_t>(h)];
    Eigen::MatrixXd yplusmat(dim, r * r);
    for (int h = 0; h < r; ++h)
        for (int k = 0; k < r; ++k)
            yplusmat.col(h * r + k) = dyplus[static_cast<size_t>(h)][static_cast<size_t>(k)];

    Preind2Report rep;
    Eigen::MatrixXd a(s, r);
    for (int i = 0; i < s; ++i) {
        Eigen::VectorXd coeffs;
        rep.a1_residual = std::max(
            rep.a1_residual, projection_residual(ymat, dmw[static_cast<size_t>(i)], &coeffs));
        a.row(i) = coeffs.transpose();
    }
    rep.a.assign(static_cast<size_t>(s), std::vector<double>(static_cast<size_t>(r)));
    for (int i = 0; i < s; ++i)
        for (int h = 0; h < r; ++h) rep.a[static_cast<size_t>(i)][static_cast<size_t>(h)] = a(i, h);

    // (b, c) feasibility with a fixed
    Eigen::MatrixXd bc(dim, r + r * r);
    bc << ymat, yplusmat;
    for (int i = 0; i < s; ++i) {
        Eigen::VectorXd target = dmw2[static_cast<size_t>(i)];
        for (int h = 0; h < r; ++h) target -= a(i, h) * dmy2[static_cast<size_t>(h)];
        rep.a2_residual = std::max(rep.a2_residual, projection_residual(bc, target));
    }

    // d feasibility
    for (int i = 0; i < s; ++i)
        for (int jj = 0; jj < s; ++jj) {
            Eigen::VectorXd target = dwplus[static_cast<size_t>(i)][static_cast<size_t>(jj)];
            for (int h = 0; h < r; ++h)
                for (int k = 0; k < r; ++k)
                    target -= a(i, h) * a(jj, k) *
                              dyplus[static_cast<size_t>(h)][static_cast<size_t>(k)];
            rep.a3_residual = std::max(rep.a3_residual, projection_residual(ymat, target));
        }

    rep.passes = rep.a1_residual < tol && rep.a2_residual < tol && rep.a3_residual < tol;
    return rep;
}

} // namespace opcalc
