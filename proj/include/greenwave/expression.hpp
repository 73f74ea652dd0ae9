#pragma once

#include <memory>
#include <string>

#include "greenwave/problem.hpp"
#include "greenwave/time_signal.hpp"

namespace greenwave {

/// Small expression language for configuration files:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := unary ('^' factor)?          (right associative)
///   unary  := ('-'|'+') unary | primary
///   primary:= NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
/// Identifiers: variables x, t, u, ux, ut; constant pi; functions sin, cos, exp.
class Expression {
  public:
    /// Parses the text; throws std::invalid_argument with position info.
    static Expression parse(const std::string& text);

    double eval(double x, double t, double u = 0.0, double ux = 0.0, double ut = 0.0) const;

    /// Symbolic d/d<var> ("x" or "t"); derivatives of u, ux, ut are rejected.
    Expression derivative(const std::string& var) const;

    /// True when the expression references any of u, ux, ut.
    bool depends_on_state() const;
    bool depends_on(const std::string& var) const;

    std::string str() const;

    struct Node;

  private:
    std::shared_ptr<const Node> root_;
};

/// Source callable from an expression in (x, t, u, ux, ut).
SourceFn source_from_expression(const std::string& text);

/// Space profile from an expression in x (t et al. rejected).
SpaceFn space_fn_from_expression(const std::string& text);

/// Boundary signal from an expression in t, with exact symbolic derivatives.
TimeSignal time_signal_from_expression(const std::string& text);

}  // namespace greenwave
