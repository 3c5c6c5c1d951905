#include "pencil/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <type_traits>
#include <utility>

namespace pencil {

namespace {

using NodePtr = std::shared_ptr<const Node>;

constexpr std::array<std::pair<std::string_view, Function>, 13> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"asin", Function::Asin},
    {"acos", Function::Acos},
    {"atan", Function::Atan},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
    {"tanh", Function::Tanh},
    {"exp", Function::Exp},
    {"ln", Function::Ln},
    {"sqrt", Function::Sqrt},
    {"abs", Function::Abs},
}};

std::optional<Function> lookup_function(std::string_view name)
{
    for (const auto& [n, fn] : kFunctions) {
        if (n == name) return fn;
    }
    return std::nullopt;
}

NodePtr make_number(double v)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Number;
    n->number = v;
    return n;
}

NodePtr make_named(NodeKind kind, std::string name)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->name = std::move(name);
    return n;
}

NodePtr make_negate(NodePtr operand)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Negate;
    n->lhs = std::move(operand);
    return n;
}

NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Binary;
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_call(Function fn, NodePtr arg)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->fn = fn;
    n->name = std::string(function_name(fn));
    n->lhs = std::move(arg);
    return n;
}

class Parser
{
public:
    Parser(std::string_view src, std::span<const std::string> allowed)
        : src_(src)
        , allowed_(allowed)
    {}

    NodePtr parse()
    {
        NodePtr root = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return root;
    }

    std::set<std::string> take_free_vars() { return std::move(free_vars_); }

private:
    [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(pos_, message); }

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek()
    {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(BinaryOp::Add, lhs, term());
            } else if (accept('-')) {
                lhs = make_binary(BinaryOp::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term()
    {
        NodePtr lhs = factor();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(BinaryOp::Mul, lhs, factor());
            } else if (accept('/')) {
                lhs = make_binary(BinaryOp::Div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr factor()
    {
        if (accept('-')) return make_negate(power());
        return power();
    }

    NodePtr power()
    {
        NodePtr base = atom();
        if (accept('^')) return make_binary(BinaryOp::Pow, base, power());
        return base;
    }

    NodePtr atom()
    {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (c == '\0') fail("expected expression, found end of input");
        fail("expected expression, found '" + std::string(1, c) + "'");
    }

    NodePtr number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            pos_ = start;
            fail("malformed number");
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            const std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) {
                pos_ = mark;
                fail("malformed exponent");
            }
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || ptr != src_.data() + pos_) {
            pos_ = start;
            fail("number out of range");
        }
        return make_number(value);
    }

    NodePtr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size()
               && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        std::string name(src_.substr(start, pos_ - start));
        if (peek() == '(') {
            auto fn = lookup_function(name);
            if (!fn) throw UnknownFunction(name);
            ++pos_;
            NodePtr arg = expr();
            if (!accept(')')) fail("expected ')'");
            return make_call(*fn, arg);
        }
        for (const auto& v : allowed_) {
            if (v == name) {
                free_vars_.insert(name);
                return make_named(NodeKind::Variable, std::move(name));
            }
        }
        if (name == "pi") return make_named(NodeKind::Pi, std::move(name));
        throw UnknownVariable(name);
    }

    std::string_view src_;
    std::span<const std::string> allowed_;
    std::size_t pos_ = 0;
    std::set<std::string> free_vars_;
};

// Printing --------------------------------------------------------------------

int precedence(const Node& n)
{
    switch (n.kind) {
    case NodeKind::Negate: return 3;
    case NodeKind::Binary:
        switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
        }
        break;
    default: break;
    }
    return 5;
}

void print(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out)
{
    if (precedence(child) < min_prec) {
        out += '(';
        print(child, out);
        out += ')';
    } else {
        print(child, out);
    }
}

void print(const Node& n, std::string& out)
{
    switch (n.kind) {
    case NodeKind::Number: {
        char buf[32];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, n.number);
        out.append(buf, ptr);
        return;
    }
    case NodeKind::Pi:
    case NodeKind::Variable: out += n.name; return;
    case NodeKind::Negate:
        out += '-';
        print_child(*n.lhs, 4, out);
        return;
    case NodeKind::Call:
        out += function_name(n.fn);
        out += '(';
        print(*n.lhs, out);
        out += ')';
        return;
    case NodeKind::Binary: {
        const int p = precedence(n);
        if (n.op == BinaryOp::Pow) {
            print_child(*n.lhs, 5, out);
            out += '^';
            print_child(*n.rhs, 4, out);
            return;
        }
        print_child(*n.lhs, p, out);
        switch (n.op) {
        case BinaryOp::Add: out += " + "; break;
        case BinaryOp::Sub: out += " - "; break;
        case BinaryOp::Mul: out += '*'; break;
        case BinaryOp::Div: out += '/'; break;
        case BinaryOp::Pow: break;
        }
        print_child(*n.rhs, p + 1, out);
        return;
    }
    }
}

// Evaluation ------------------------------------------------------------------

double apply(Function fn, double x)
{
    switch (fn) {
    case Function::Sin: return std::sin(x);
    case Function::Cos: return std::cos(x);
    case Function::Tan: {
        const double t = std::tan(x);
        if (!std::isfinite(t)) throw DomainError("tan at a pole");
        return t;
    }
    case Function::Asin:
        if (x < -1.0 || x > 1.0) throw DomainError("asin outside [-1, 1]");
        return std::asin(x);
    case Function::Acos:
        if (x < -1.0 || x > 1.0) throw DomainError("acos outside [-1, 1]");
        return std::acos(x);
    case Function::Atan: return std::atan(x);
    case Function::Sinh: return std::sinh(x);
    case Function::Cosh: return std::cosh(x);
    case Function::Tanh: return std::tanh(x);
    case Function::Exp: return std::exp(x);
    case Function::Ln:
        if (x <= 0.0) throw DomainError("ln of a non-positive value");
        return std::log(x);
    case Function::Sqrt:
        if (x < 0.0) throw DomainError("sqrt of a negative value");
        return std::sqrt(x);
    case Function::Abs: return std::abs(x);
    }
    return 0.0;
}

Jet3 apply(Function fn, const Jet3& x)
{
    switch (fn) {
    case Function::Sin: return jet::sin(x);
    case Function::Cos: return jet::cos(x);
    case Function::Tan: return jet::tan(x);
    case Function::Asin: return jet::asin(x);
    case Function::Acos: return jet::acos(x);
    case Function::Atan: return jet::atan(x);
    case Function::Sinh: return jet::sinh(x);
    case Function::Cosh: return jet::cosh(x);
    case Function::Tanh: return jet::tanh(x);
    case Function::Exp: return jet::exp(x);
    case Function::Ln: return jet::log(x);
    case Function::Sqrt: return jet::sqrt(x);
    case Function::Abs: return jet::abs(x);
    }
    return {};
}

double apply(BinaryOp op, double a, double b)
{
    switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div:
        if (b == 0.0) throw DomainError("division by zero");
        return a / b;
    case BinaryOp::Pow:
        if (a < 0.0 && std::trunc(b) != b) throw DomainError("pow of a negative base with fractional exponent");
        if (a == 0.0 && b < 0.0) throw DomainError("division by zero");
        return std::pow(a, b);
    }
    return 0.0;
}

Jet3 apply(BinaryOp op, const Jet3& a, const Jet3& b)
{
    switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div: return a / b;
    case BinaryOp::Pow: return jet::pow(a, b);
    }
    return {};
}

[[noreturn]] void rethrow_at(const Node& n, const DomainError& e)
{
    throw DomainError(std::string(e.what()) + " in '" + to_string(n) + "'");
}

template <typename Scalar>
Scalar lift(double v)
{
    if constexpr (std::is_same_v<Scalar, Jet3>) {
        return Jet3::constant(v);
    } else {
        return v;
    }
}

template <typename Scalar, typename Lookup>
Scalar eval(const Node& n, const Lookup& lookup)
{
    switch (n.kind) {
    case NodeKind::Number: return lift<Scalar>(n.number);
    case NodeKind::Pi: return lift<Scalar>(std::numbers::pi);
    case NodeKind::Variable: return lookup(n.name);
    case NodeKind::Negate: return -eval<Scalar>(*n.lhs, lookup);
    case NodeKind::Call: {
        const Scalar arg = eval<Scalar>(*n.lhs, lookup);
        try {
            return apply(n.fn, arg);
        } catch (const DomainError& e) {
            rethrow_at(n, e);
        }
    }
    case NodeKind::Binary: {
        const Scalar a = eval<Scalar>(*n.lhs, lookup);
        const Scalar b = eval<Scalar>(*n.rhs, lookup);
        try {
            return apply(n.op, a, b);
        } catch (const DomainError& e) {
            rethrow_at(n, e);
        }
    }
    }
    return Scalar{};
}

} // namespace

std::string_view function_name(Function fn)
{
    for (const auto& [n, f] : kFunctions) {
        if (f == fn) return n;
    }
    return "?";
}

std::string to_string(const Node& node)
{
    std::string out;
    print(node, out);
    return out;
}

bool structurally_equal(const Node& a, const Node& b)
{
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case NodeKind::Number: return a.number == b.number;
    case NodeKind::Pi: return true;
    case NodeKind::Variable: return a.name == b.name;
    case NodeKind::Negate: return structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Call: return a.fn == b.fn && structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Binary:
        return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
    return false;
}

Expression::Expression()
    : root_(make_number(0.0))
{}

Expression Expression::parse(std::string_view source, std::span<const std::string> allowed_vars)
{
    Parser parser(source, allowed_vars);
    Expression e;
    e.root_ = parser.parse();
    e.free_vars_ = parser.take_free_vars();
    return e;
}

Expression Expression::parse(std::string_view source, std::initializer_list<std::string> allowed_vars)
{
    return parse(source, std::span<const std::string>(allowed_vars.begin(), allowed_vars.size()));
}

std::string Expression::to_string() const
{
    return pencil::to_string(*root_);
}

double Expression::evaluate(const Bindings& bindings) const
{
    return eval<double>(*root_, [&](const std::string& name) {
        auto it = bindings.find(name);
        if (it == bindings.end()) throw UnknownVariable(name);
        return it->second;
    });
}

Jet3 Expression::evaluate_jet3(std::string_view active_var, double point, const Bindings& fixed) const
{
    return eval<Jet3>(*root_, [&](const std::string& name) {
        if (name == active_var) return Jet3::variable(point);
        auto it = fixed.find(name);
        if (it == fixed.end()) throw UnknownVariable(name);
        return Jet3::constant(it->second);
    });
}

bool Expression::structurally_equal(const Expression& other) const
{
    return pencil::structurally_equal(*root_, *other.root_);
}

} // namespace pencil
