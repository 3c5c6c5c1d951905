#pragma once

#include "pencil/jet.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pencil {

enum class NodeKind { Number, Pi, Variable, Negate, Binary, Call };

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

enum class Function { Sin, Cos, Tan, Asin, Acos, Atan, Sinh, Cosh, Tanh, Exp, Ln, Sqrt, Abs };

/// Name as written in source, e.g. "ln" for Function::Ln.
std::string_view function_name(Function fn);

/// One node of an immutable expression tree. `lhs` holds the operand of
/// Negate and Call nodes.
struct Node
{
    NodeKind kind = NodeKind::Number;
    double number = 0.0;
    std::string name;
    BinaryOp op = BinaryOp::Add;
    Function fn = Function::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

using Bindings = std::map<std::string, double, std::less<>>;

/// Parsed expression over a fixed set of named variables.
///
/// Grammar (whitespace insignificant):
///
///     expr   := term (('+'|'-') term)*
///     term   := factor (('*'|'/') factor)*
///     factor := ('-')? power
///     power  := atom ('^' power)?
///     atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
///
/// `pi` is a constant unless listed as an allowed variable. Instances are
/// immutable and cheap to copy; evaluation is thread safe.
class Expression
{
public:
    /// The constant 0.
    Expression();

    static Expression parse(std::string_view source, std::span<const std::string> allowed_vars);
    static Expression parse(std::string_view source, std::initializer_list<std::string> allowed_vars);

    const Node& root() const { return *root_; }
    const std::set<std::string>& free_vars() const { return free_vars_; }
    bool depends_on(std::string_view name) const { return free_vars_.count(std::string(name)) != 0; }

    /// Canonical text. Parsing it again gives a structurally equal tree.
    std::string to_string() const;

    double evaluate(const Bindings& bindings) const;

    /// Value and derivatives with respect to `active_var` at `point`; all
    /// other free variables are taken from `fixed`.
    Jet3 evaluate_jet3(std::string_view active_var, double point, const Bindings& fixed = {}) const;

    bool structurally_equal(const Expression& other) const;

private:
    std::shared_ptr<const Node> root_;
    std::set<std::string> free_vars_;
};

std::string to_string(const Node& node);
bool structurally_equal(const Node& a, const Node& b);

inline Expression parse_expression(std::string_view source, std::span<const std::string> allowed_vars)
{
    return Expression::parse(source, allowed_vars);
}

inline double evaluate(const Expression& e, const Bindings& bindings)
{
    return e.evaluate(bindings);
}

inline Jet3 evaluate_jet3(const Expression& e, std::string_view active_var, double point, const Bindings& fixed = {})
{
    return e.evaluate_jet3(active_var, point, fixed);
}

} // namespace pencil
