#pragma once

#include "opcalc/ncpoly.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opcalc {

struct ParseError : std::runtime_error {
    int line = 0;
    int col = 0;
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                             ": " + msg),
          line(line),
          col(col) {}
};

struct SetDef {
    std::vector<std::string> members;
    int central = 1;
};

struct NCDef {
    int r = 0;  // F arity
    int l = 0;  // G arity
    NCPolynomial poly;
};

// Parsed system-definition file. Statement grammar (one per line, # comments):
//   vars x1 x2 ... xn
//   param NAME
//   box i LO HI
//   exclude EXPR
//   op NAME = OPERATOR-EXPR
//   set NAME = [ OP ... ] central K
//   ncpoly NAME (F: R, G: L) = NC-EXPR
// Operator expressions use x1..xn, p1..pn, parameters, rational literals and
// sin/cos/tan/cot/exp/sqrt; `*` composes noncommutatively once a p token is
// involved, while pure coefficient subexpressions multiply as functions.
struct SystemFile {
    int n = 0;
    std::vector<std::string> params;
    DomainSpec dom;
    std::vector<std::pair<std::string, DiffOperator>> ops;
    std::vector<std::pair<std::string, SetDef>> sets;
    std::vector<std::pair<std::string, NCDef>> ncpolys;

    const DiffOperator* find_op(const std::string& name) const;
    const SetDef* find_set(const std::string& name) const;
    std::vector<DiffOperator> resolve(const SetDef& set) const;
};

SystemFile parse_system(const std::string& text);
std::string export_system(const SystemFile& sf);

// Standalone entry points (used by the file parser and by tests).
DiffOperator parse_operator(const std::string& text, int n,
                            const std::vector<std::string>& params);
Expr parse_coeff(const std::string& text, int n, const std::vector<std::string>& params);
NCPolynomial parse_ncpoly(const std::string& text, int l, int r);

std::string operator_to_text(const DiffOperator& a);
std::string ncpoly_to_text(const NCPolynomial& s);

} // namespace opcalc
