#include "opcalc/cli.hpp"

#include "opcalc/analysis.hpp"
#include "opcalc/homog.hpp"
#include "opcalc/oracle.hpp"

#include "json.hpp"

#include <cmath>

namespace opcalc {

namespace {

using nlohmann::json;

json op_json(const std::string& name, const DiffOperator& a) {
    json terms = json::array();
    for (const auto& [alpha, c] : a.coeffs())
        terms.push_back({{"alpha", alpha.e}, {"coeff", to_string(c)}});
    return {{"name", name}, {"order", a.order()}, {"terms", terms}, {"n", a.dim()}};
}

const char* zero_kind_name(ZeroKind k) {
    switch (k) {
        case ZeroKind::SymbolicZero:
            return "symbolic-zero";
        case ZeroKind::NumericZero:
            return "numeric-zero";
        case ZeroKind::NonZero:
            return "nonzero";
    }
    return "?";
}

json verdict_json(const OpZeroVerdict& v) {
    return {{"zero", v.zero},
            {"kind", zero_kind_name(v.worst.kind)},
            {"max_abs", v.worst.max_abs}};
}

// Named operator lists to analyze: the file's sets, or one implicit set of
// all operators with k = 1.
struct NamedSet {
    std::string name;
    std::vector<DiffOperator> ops;
    int k = 1;
};

std::vector<NamedSet> gather_sets(const SystemFile& sf) {
    std::vector<NamedSet> out;
    for (const auto& [name, def] : sf.sets)
        out.push_back({name, sf.resolve(def), def.central});
    if (out.empty() && !sf.ops.empty()) {
        NamedSet all{"all", {}, 1};
        for (const auto& [name, op] : sf.ops) all.ops.push_back(op);
        out.push_back(std::move(all));
    }
    if (out.empty()) throw std::invalid_argument("the file defines no operators");
    return out;
}

const char* integrable_name(IntegrableVerdict v) {
    switch (v) {
        case IntegrableVerdict::IntegrableAtSampledPoints:
            return "integrable-at-sampled-points";
        case IntegrableVerdict::NotCommuting:
            return "not-commuting";
        case IntegrableVerdict::NotQuasiIndependent:
            return "not-quasi-independent";
    }
    return "?";
}

const char* nec_name(NecVerdict v) {
    switch (v) {
        case NecVerdict::PassesNecessaryCondition:
            return "passes-necessary-condition";
        case NecVerdict::ViolatesNecessaryCondition:
            return "violates-necessary-condition";
        case NecVerdict::NotApplicable:
            return "not-applicable";
    }
    return "?";
}

json commutation_json(const CommutationReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"i", e.i}, {"j", e.j}, {"verdict", verdict_json(e.verdict)}});
    return {{"all_zero", rep.all_zero}, {"entries", entries}};
}

json rank_json(const RankReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"x", e.pt.x}, {"p", e.pt.p}, {"rank", e.rank}});
    return {{"s", rep.s},
            {"globally_quasi_independent", rep.globally_quasi_independent},
            {"full_rank_fraction", rep.full_rank_fraction},
            {"entries", entries}};
}

// Oracle cross-checks: symbols against the exponential action, and the
// bridge between commutators and poisson brackets of main parts.
json oracle_checks(const SystemFile& sf, const CliOptions& opt, bool* ok) {
    json out;
    json symbol_checks = json::array();
    Sampler sampler(sf.dom, opt.seed + 0x9e3779b97f4a7c15ULL);
    for (const auto& [name, op] : sf.ops) {
        double worst = 0.0;
        bool pass = true;
        for (int t = 0; t < opt.samples; ++t) {
            std::vector<double> x, lam;
            try {
                x = sampler.draw_x();
                lam = sampler.draw_p();
                double a = apply_to_exponential(op, lam, x, sf.dom.params);
                double b = symbol_eval(op, x, lam, sf.dom.params);
                double resid = std::fabs(a - b) / std::max(1.0, std::fabs(b));
                worst = std::max(worst, resid);
                if (resid > opt.tol) pass = false;
            } catch (const EvalError&) {
                continue;
            }
        }
        if (!pass) *ok = false;
        symbol_checks.push_back({{"name", name}, {"pass", pass}, {"max_residual", worst}});
    }
    out["exponential_symbol"] = symbol_checks;

    json bridges = json::array();
    for (const auto& set : gather_sets(sf)) {
        for (size_t i = 0; i < set.ops.size(); ++i) {
            for (size_t j = i + 1; j < set.ops.size(); ++j) {
                const DiffOperator& a = set.ops[i];
                const DiffOperator& b = set.ops[j];
                if (a.is_zero_op() || b.is_zero_op()) continue;
                int g = a.order() + b.order() - 1;
                DiffOperator lhs = homogeneous_part(commutator(a, b), g);
                DiffOperator rhs = poisson_bracket(main_part(a), main_part(b));
                OpZeroVerdict v = operator_zero_verdict(op_sub(lhs, rhs), sf.dom, opt.samples,
                                                        opt.seed);
                if (!v.zero) *ok = false;
                bridges.push_back({{"set", set.name},
                                   {"i", static_cast<int>(i)},
                                   {"j", static_cast<int>(j)},
                                   {"verdict", verdict_json(v)}});
            }
        }
    }
    out["commutator_bridge"] = bridges;
    return out;
}

} // namespace

SystemFile to_system_file(const System& sys) {
    SystemFile sf;
    sf.n = sys.dom.n;
    sf.dom = sys.dom;
    for (size_t i = 0; i < sys.ops.size(); ++i) sf.ops.emplace_back(sys.op_names[i], sys.ops[i]);
    SetDef def;
    def.members = sys.op_names;
    def.central = sys.k;
    sf.sets.emplace_back(sys.name, def);
    return sf;
}

CliResult run_subcommand(const std::string& subcommand, const SystemFile& sf,
                         const CliOptions& opt) {
    json report = {{"schema_version", 1},
                   {"subcommand", subcommand},
                   {"seed", opt.seed},
                   {"samples", opt.samples},
                   {"tol", opt.tol}};
    int exit_code = 0;
    try {
        if (subcommand == "normalize") {
            json ops = json::array();
            for (const auto& [name, op] : sf.ops) ops.push_back(op_json(name, op));
            report["operators"] = ops;
        } else if (subcommand == "symbol") {
            json ops = json::array();
            for (const auto& [name, op] : sf.ops)
                ops.push_back({{"name", name}, {"symbol", operator_to_text(op)}});
            report["symbols"] = ops;
        } else if (subcommand == "mainpart") {
            json ops = json::array();
            for (const auto& [name, op] : sf.ops)
                ops.push_back({{"name", name},
                               {"main", op_json(name, main_part(op))["terms"]},
                               {"second_main", op_json(name, second_main_part(op))["terms"]}});
            report["main_parts"] = ops;
        } else if (subcommand == "commute") {
            json sets = json::array();
            for (const auto& set : gather_sets(sf)) {
                CommutationReport rep =
                    check_commutation(set.ops, set.k, sf.dom, opt.samples, opt.seed);
                if (!rep.all_zero) exit_code = 1;
                sets.push_back({{"set", set.name}, {"k", set.k},
                                {"report", commutation_json(rep)}});
            }
            report["commutation"] = sets;
        } else if (subcommand == "poisson") {
            json sets = json::array();
            for (const auto& set : gather_sets(sf)) {
                json pairs = json::array();
                for (size_t i = 0; i < set.ops.size(); ++i)
                    for (size_t j = i + 1; j < set.ops.size(); ++j) {
                        DiffOperator pb = poisson_bracket(main_part(set.ops[i]),
                                                          main_part(set.ops[j]));
                        pairs.push_back({{"i", static_cast<int>(i)},
                                         {"j", static_cast<int>(j)},
                                         {"bracket", operator_to_text(pb)}});
                    }
                sets.push_back({{"set", set.name}, {"pairs", pairs}});
            }
            report["poisson"] = sets;
        } else if (subcommand == "rank") {
            json sets = json::array();
            for (const auto& set : gather_sets(sf)) {
                RankReport rep = quasi_independence(set.ops, sf.dom, opt.samples, opt.seed);
                if (!rep.globally_quasi_independent) exit_code = 1;
                sets.push_back({{"set", set.name}, {"report", rank_json(rep)}});
            }
            report["rank"] = sets;
        } else if (subcommand == "check-integrable") {
            json sets = json::array();
            for (const auto& set : gather_sets(sf)) {
                IntegrableReport rep =
                    check_integrable_set(set.ops, set.k, sf.dom, opt.samples, opt.seed);
                if (rep.verdict != IntegrableVerdict::IntegrableAtSampledPoints) exit_code = 1;
                sets.push_back({{"set", set.name},
                                {"k", set.k},
                                {"verdict", integrable_name(rep.verdict)},
                                {"size_matches", rep.size_matches},
                                {"commutation", commutation_json(rep.commutation)},
                                {"classical", commutation_json(rep.classical)},
                                {"rank", rank_json(rep.rank)}});
            }
            report["integrable"] = sets;
        } else if (subcommand == "check-correlation") {
            if (sf.ncpolys.empty())
                throw std::invalid_argument("check-correlation needs an ncpoly statement");
            std::vector<NamedSet> sets = gather_sets(sf);
            PhaseSample pt = draw_phase_sample(sf.dom, opt.seed);
            json checks = json::array();
            for (const auto& [name, def] : sf.ncpolys) {
                CorrelationReport rep = check_regular_correlation(
                    def.poly, sets.front().ops, pt, sf.dom, opt.samples, opt.seed);
                if (!rep.valid) exit_code = 1;
                checks.push_back({{"ncpoly", name},
                                  {"set", sets.front().name},
                                  {"valid", rep.valid},
                                  {"nonzero_polynomial", rep.nonzero_polynomial},
                                  {"gradient_nonzero", rep.gradient_nonzero},
                                  {"substitution_zero", rep.substitution_zero},
                                  {"gradient_norm", rep.gradient_norm}});
            }
            report["correlation"] = checks;
        } else if (subcommand == "check-dependence") {
            if (sf.ncpolys.empty())
                throw std::invalid_argument("check-dependence needs ncpoly statements");
            std::vector<NamedSet> sets = gather_sets(sf);
            if (sets.size() < 2)
                throw std::invalid_argument(
                    "check-dependence needs two sets: the dependent W and the base Y");
            std::vector<NCPolynomial> s;
            for (const auto& [name, def] : sf.ncpolys) s.push_back(def.poly);
            PhaseSample pt = draw_phase_sample(sf.dom, opt.seed);
            DependenceReport rep = check_algebraic_dependence(
                s, sets[0].ops, sets[1].ops, pt, sf.dom, opt.samples, opt.seed);
            if (!rep.valid) exit_code = 1;
            report["dependence"] = {{"w_set", sets[0].name},
                                    {"y_set", sets[1].name},
                                    {"valid", rep.valid},
                                    {"det", rep.det},
                                    {"det_nonzero", rep.det_nonzero},
                                    {"substitutions_zero", rep.substitutions_zero},
                                    {"span_contained", rep.span_contained},
                                    {"span_residual", rep.span_residual}};
        } else if (subcommand == "check-nec") {
            json sets = json::array();
            PhaseSample pt = draw_phase_sample(sf.dom, opt.seed);
            for (const auto& set : gather_sets(sf)) {
                NecReport rep =
                    check_necessary_dependence_condition(set.ops, pt, sf.dom.params);
                if (rep.verdict == NecVerdict::ViolatesNecessaryCondition) exit_code = 1;
                sets.push_back({{"set", set.name},
                                {"verdict", nec_name(rep.verdict)},
                                {"rank", rep.rank},
                                {"gamma", rep.gamma},
                                {"v", rep.v},
                                {"residual", rep.residual}});
            }
            report["necessary_condition"] = sets;
        } else if (subcommand == "homogenize") {
            json ops = json::array();
            for (const auto& [name, op] : sf.ops) {
                if (op.is_zero_op()) continue;
                ops.push_back(op_json(name, phi_embed(op)));
            }
            report["homogenized"] = ops;
        } else if (subcommand == "verify") {
            bool ok = true;
            report["oracle"] = oracle_checks(sf, opt, &ok);
            if (!ok) exit_code = 1;
        } else {
            report["error"] = "unknown subcommand '" + subcommand + "'";
            return {2, report.dump(2) + "\n"};
        }
        if (opt.verify && subcommand != "verify") {
            bool ok = true;
            report["oracle"] = oracle_checks(sf, opt, &ok);
            if (!ok && exit_code == 0) exit_code = 1;
        }
    } catch (const std::exception& e) {
        report["error"] = e.what();
        return {2, report.dump(2) + "\n"};
    }
    report["exit_code"] = exit_code;
    return {exit_code, report.dump(2) + "\n"};
}

} // namespace opcalc
