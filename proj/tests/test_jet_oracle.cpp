// Jets are checked against finite differences of an independent 50-digit
// evaluator that walks the parsed tree, so neither the double evaluator nor the
// jet arithmetic takes part in producing the reference.
#include <doctest.h>

#include "pencil/errors.hpp"
#include "pencil/expr.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>

using namespace pencil;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

std::optional<Big> big_eval(const Node& n, const Big& x)
{
    using namespace boost::multiprecision;
    switch (n.kind) {
    case NodeKind::Number: return Big(n.number);
    case NodeKind::Pi: return boost::math::constants::pi<Big>();
    case NodeKind::Variable: return x;
    case NodeKind::Negate: {
        auto a = big_eval(*n.lhs, x);
        if (!a) return std::nullopt;
        return Big(-*a);
    }
    case NodeKind::Binary: {
        auto a = big_eval(*n.lhs, x);
        auto b = big_eval(*n.rhs, x);
        if (!a || !b) return std::nullopt;
        switch (n.op) {
        case BinaryOp::Add: return Big(*a + *b);
        case BinaryOp::Sub: return Big(*a - *b);
        case BinaryOp::Mul: return Big(*a * *b);
        case BinaryOp::Div:
            if (*b == 0) return std::nullopt;
            return Big(*a / *b);
        case BinaryOp::Pow:
            if (*a <= 0) return std::nullopt;
            return Big(pow(*a, *b));
        }
        return std::nullopt;
    }
    case NodeKind::Call: {
        auto a = big_eval(*n.lhs, x);
        if (!a) return std::nullopt;
        const Big& v = *a;
        switch (n.fn) {
        case Function::Sin: return Big(sin(v));
        case Function::Cos: return Big(cos(v));
        case Function::Tan: return Big(tan(v));
        case Function::Asin:
            if (abs(v) >= 1) return std::nullopt;
            return Big(asin(v));
        case Function::Acos:
            if (abs(v) >= 1) return std::nullopt;
            return Big(acos(v));
        case Function::Atan: return Big(atan(v));
        case Function::Sinh: return Big(sinh(v));
        case Function::Cosh: return Big(cosh(v));
        case Function::Tanh: return Big(tanh(v));
        case Function::Exp: return Big(exp(v));
        case Function::Ln:
            if (v <= 0) return std::nullopt;
            return Big(log(v));
        case Function::Sqrt:
            if (v <= 0) return std::nullopt;
            return Big(sqrt(v));
        case Function::Abs:
            if (v == 0) return std::nullopt;
            return Big(abs(v));
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

/// Value and first three derivatives from 5- and 7-point central stencils.
std::optional<std::array<double, 4>> fd_derivatives(const Expression& e, double x0)
{
    const Big h("1e-8");
    const Big x(x0);
    std::array<Big, 7> f;
    for (int k = -3; k <= 3; ++k) {
        auto v = big_eval(e.root(), x + h * k);
        if (!v) return std::nullopt;
        f[static_cast<std::size_t>(k + 3)] = *v;
    }
    auto at = [&](int k) -> const Big& { return f[static_cast<std::size_t>(k + 3)]; };
    const Big d1 = (at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / (12 * h);
    const Big d2 = (-at(-2) + 16 * at(-1) - 30 * at(0) + 16 * at(1) - at(2)) / (12 * h * h);
    const Big d3 = (at(-3) - 8 * at(-2) + 13 * at(-1) - 13 * at(1) + 8 * at(2) - at(3)) / (8 * h * h * h);
    return std::array<double, 4>{
        static_cast<double>(at(0)), static_cast<double>(d1), static_cast<double>(d2), static_cast<double>(d3)};
}

class Generator
{
public:
    explicit Generator(unsigned seed) : rng_(seed) {}

    std::string expr(int depth)
    {
        if (depth == 0 || pick(4) == 0) return leaf();
        switch (pick(9)) {
        case 0: return expr(depth - 1) + " + " + expr(depth - 1);
        case 1: return expr(depth - 1) + " - " + expr(depth - 1);
        case 2: return "(" + expr(depth - 1) + ")*(" + expr(depth - 1) + ")";
        case 3: return "(" + expr(depth - 1) + ")/(" + positive(depth - 1) + ")";
        case 4: return "(" + positive(depth - 1) + ")^" + std::to_string(pick(4) + 1);
        case 5: return "(" + positive(depth - 1) + ")^(" + expr(depth - 1) + ")";
        case 6: return "-(" + expr(depth - 1) + ")";
        default: return call(depth - 1);
        }
    }

private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    std::string leaf()
    {
        if (pick(3) == 0) {
            const double c = std::uniform_real_distribution<double>(-3.0, 3.0)(rng_);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", c);
            return std::string(c < 0 ? "(" : "") + buf + (c < 0 ? ")" : "");
        }
        return pick(5) == 0 ? "pi*x" : "x";
    }

    /// Strictly positive sub-expression, keeping ln/sqrt/pow in their domains.
    std::string positive(int depth) { return "(1.5 + sin(" + expr(depth) + "))"; }

    std::string call(int depth)
    {
        const std::string a = expr(depth);
        switch (pick(13)) {
        case 0: return "sin(" + a + ")";
        case 1: return "cos(" + a + ")";
        case 2: return "tan(0.5*sin(" + a + "))";
        case 3: return "asin(0.9*sin(" + a + "))";
        case 4: return "acos(0.9*cos(" + a + "))";
        case 5: return "atan(" + a + ")";
        case 6: return "sinh(sin(" + a + "))";
        case 7: return "cosh(sin(" + a + "))";
        case 8: return "tanh(" + a + ")";
        case 9: return "exp(sin(" + a + "))";
        case 10: return "ln(" + positive(depth) + ")";
        case 11: return "sqrt(" + positive(depth) + ")";
        default: return "abs(" + a + ")";
        }
    }

    std::mt19937 rng_;
};

bool close(double jet, double ref, double rel)
{
    return std::abs(jet - ref) <= rel * std::max(1.0, std::abs(ref));
}

} // namespace

TEST_CASE("jets agree with high-precision finite differences on random expressions")
{
    Generator gen(20240917u);
    std::mt19937 point_rng(7u);
    std::uniform_real_distribution<double> point(-2.0, 2.0);

    int accepted = 0, attempts = 0;
    while (accepted < 1000) {
        REQUIRE(++attempts < 20000);
        const std::string src = gen.expr(4);
        const Expression e = Expression::parse(src, {"x"});
        const double x0 = point(point_rng);

        const auto ref = fd_derivatives(e, x0);
        if (!ref) continue;
        // Stay away from near-singular points where the stencil is not trustworthy.
        if (std::abs((*ref)[3]) > 1e6 || std::abs((*ref)[0]) > 1e6) continue;
        Jet3 j;
        try {
            j = e.evaluate_jet3("x", x0);
        } catch (const DomainError&) {
            continue;
        }
        ++accepted;
        CAPTURE(src);
        CAPTURE(x0);
        CHECK(close(j.v0, (*ref)[0], 1e-12));
        CHECK(close(j.v1, (*ref)[1], 1e-6));
        CHECK(close(j.v2, (*ref)[2], 1e-6));
        CHECK(close(j.v3, (*ref)[3], 1e-6));
    }
}

TEST_CASE("jets of cubic polynomials are exact")
{
    // p(x) = 2x^3 - 3x^2 + 5x - 7: p' = 6x^2 - 6x + 5, p'' = 12x - 6, p''' = 12
    const Expression e = Expression::parse("2*x^3 - 3*x^2 + 5*x - 7", {"x"});
    for (double x : {-2.0, -0.5, 0.0, 0.25, 1.0, 3.0}) {
        const Jet3 j = e.evaluate_jet3("x", x);
        CHECK(j.v0 == 2 * x * x * x - 3 * x * x + 5 * x - 7);
        CHECK(j.v1 == 6 * x * x - 6 * x + 5);
        CHECK(j.v2 == 12 * x - 6);
        CHECK(j.v3 == 12.0);
    }
    const Jet3 prod = Expression::parse("(x - 1)*(x + 2)*(x - 3)", {"x"}).evaluate_jet3("x", 0.5);
    // (x-1)(x+2)(x-3) = x^3 - 2x^2 - 5x + 6
    CHECK(prod.v0 == doctest::Approx(0.125 - 0.5 - 2.5 + 6).epsilon(1e-15));
    CHECK(prod.v1 == doctest::Approx(0.75 - 2 - 5).epsilon(1e-15));
    CHECK(prod.v2 == doctest::Approx(3.0 - 4.0).epsilon(1e-15));
    CHECK(prod.v3 == 6.0);
}

TEST_CASE("inactive variables are held fixed")
{
    const Expression e = Expression::parse("s^2*t + t^3", {"s", "t"});
    const Jet3 j = e.evaluate_jet3("s", 2.0, {{"t", 3.0}});
    CHECK(j.v0 == 12.0 + 27.0);
    CHECK(j.v1 == 12.0);
    CHECK(j.v2 == 6.0);
    CHECK(j.v3 == 0.0);
}

TEST_CASE("eight-curve component jet at the origin")
{
    // d^k/dq^k of sin(q)cos(q) = sin(2q)/2 at 0: 0, 1, 0, -4
    const Jet3 j = Expression::parse("sin(q)*cos(q)", {"q"}).evaluate_jet3("q", 0.0);
    CHECK(j.v0 == 0.0);
    CHECK(j.v1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(j.v2 == doctest::Approx(0.0));
    CHECK(j.v3 == doctest::Approx(-4.0).epsilon(1e-15));
}

TEST_CASE("non-smooth points raise DomainError")
{
    CHECK_THROWS_AS(Expression::parse("abs(x)", {"x"}).evaluate_jet3("x", 0.0), DomainError);
    CHECK_THROWS_AS(Expression::parse("sqrt(x)", {"x"}).evaluate_jet3("x", 0.0), DomainError);
    CHECK_NOTHROW(Expression::parse("abs(x)", {"x"}).evaluate_jet3("x", -1.0));
    // A constant argument has no derivative to break.
    CHECK(Expression::parse("x + sqrt(0)", {"x"}).evaluate_jet3("x", 1.0).v1 == 1.0);
}
