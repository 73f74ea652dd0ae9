#include "greenwave/expression.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "greenwave/params.hpp"

namespace greenwave {

struct Expression::Node {
    enum class Kind { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Ln };
    Kind kind;
    double value = 0.0;   // Num
    std::string name;     // Var: x, t, u, ux, ut
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr num(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Num;
    n->value = v;
    return n;
}
NodePtr var(std::string name) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Var;
    n->name = std::move(name);
    return n;
}
NodePtr node(Kind k, NodePtr a, NodePtr b = nullptr) {
    // light constant folding keeps derivative trees small
    if (a && a->kind == Kind::Num && (!b || b->kind == Kind::Num)) {
        switch (k) {
            case Kind::Add: return num(a->value + b->value);
            case Kind::Sub: return num(a->value - b->value);
            case Kind::Mul: return num(a->value * b->value);
            case Kind::Div: return num(a->value / b->value);
            case Kind::Pow: return num(std::pow(a->value, b->value));
            case Kind::Neg: return num(-a->value);
            case Kind::Sin: return num(std::sin(a->value));
            case Kind::Cos: return num(std::cos(a->value));
            case Kind::Exp: return num(std::exp(a->value));
            case Kind::Ln: return num(std::log(a->value));
            default: break;
        }
    }
    if (k == Kind::Mul && a && b) {
        if (a->kind == Kind::Num && a->value == 0.0) return num(0.0);
        if (b->kind == Kind::Num && b->value == 0.0) return num(0.0);
        if (a->kind == Kind::Num && a->value == 1.0) return b;
        if (b->kind == Kind::Num && b->value == 1.0) return a;
    }
    if (k == Kind::Add && a && b) {
        if (a->kind == Kind::Num && a->value == 0.0) return b;
        if (b->kind == Kind::Num && b->value == 0.0) return a;
    }
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}
    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << "expression parse error at position " << pos_ << ": " << what;
        throw std::invalid_argument(os.str());
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (eat('+'))
                e = node(Kind::Add, e, term());
            else if (eat('-'))
                e = node(Kind::Sub, e, term());
            else
                return e;
        }
    }
    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            if (eat('*'))
                e = node(Kind::Mul, e, factor());
            else if (eat('/'))
                e = node(Kind::Div, e, factor());
            else
                return e;
        }
    }
    NodePtr factor() {
        NodePtr base = unary();
        if (eat('^')) return node(Kind::Pow, base, factor());
        return base;
    }
    NodePtr unary() {
        if (eat('-')) return node(Kind::Neg, unary());
        if (eat('+')) return unary();
        return primary();
    }
    NodePtr primary() {
        skip_ws();
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return ident();
        if (eat('(')) {
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail("expected number, identifier or '('");
    }
    NodePtr number() {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s_.substr(pos_), &used);
        } catch (const std::exception&) {
            fail("malformed number");
        }
        pos_ += used;
        return num(v);
    }
    NodePtr ident() {
        const size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "pi") return num(constants::pi);
        if (name == "x" || name == "t" || name == "u" || name == "ux" || name == "ut")
            return var(name);
        if (name == "sin" || name == "cos" || name == "exp") {
            if (!eat('(')) fail("expected '(' after " + name);
            NodePtr arg = expr();
            if (!eat(')')) fail("expected ')'");
            const Kind k = name == "sin" ? Kind::Sin : (name == "cos" ? Kind::Cos : Kind::Exp);
            return node(k, arg);
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

double eval_node(const Expression::Node& n, double x, double t, double u, double ux, double ut) {
    switch (n.kind) {
        case Kind::Num: return n.value;
        case Kind::Var:
            if (n.name == "x") return x;
            if (n.name == "t") return t;
            if (n.name == "u") return u;
            if (n.name == "ux") return ux;
            return ut;
        case Kind::Add: return eval_node(*n.a, x, t, u, ux, ut) + eval_node(*n.b, x, t, u, ux, ut);
        case Kind::Sub: return eval_node(*n.a, x, t, u, ux, ut) - eval_node(*n.b, x, t, u, ux, ut);
        case Kind::Mul: return eval_node(*n.a, x, t, u, ux, ut) * eval_node(*n.b, x, t, u, ux, ut);
        case Kind::Div: return eval_node(*n.a, x, t, u, ux, ut) / eval_node(*n.b, x, t, u, ux, ut);
        case Kind::Pow:
            return std::pow(eval_node(*n.a, x, t, u, ux, ut), eval_node(*n.b, x, t, u, ux, ut));
        case Kind::Neg: return -eval_node(*n.a, x, t, u, ux, ut);
        case Kind::Sin: return std::sin(eval_node(*n.a, x, t, u, ux, ut));
        case Kind::Cos: return std::cos(eval_node(*n.a, x, t, u, ux, ut));
        case Kind::Exp: return std::exp(eval_node(*n.a, x, t, u, ux, ut));
        case Kind::Ln: return std::log(eval_node(*n.a, x, t, u, ux, ut));
    }
    return 0.0;
}

NodePtr diff(const NodePtr& n, const std::string& v) {
    switch (n->kind) {
        case Kind::Num: return num(0.0);
        case Kind::Var:
            if (n->name == v) return num(1.0);
            if (n->name == "u" || n->name == "ux" || n->name == "ut")
                throw std::invalid_argument("expression derivative: state variables not allowed");
            return num(0.0);
        case Kind::Add: return node(Kind::Add, diff(n->a, v), diff(n->b, v));
        case Kind::Sub: return node(Kind::Sub, diff(n->a, v), diff(n->b, v));
        case Kind::Mul:
            return node(Kind::Add, node(Kind::Mul, diff(n->a, v), n->b),
                        node(Kind::Mul, n->a, diff(n->b, v)));
        case Kind::Div:
            return node(Kind::Div,
                        node(Kind::Sub, node(Kind::Mul, diff(n->a, v), n->b),
                             node(Kind::Mul, n->a, diff(n->b, v))),
                        node(Kind::Mul, n->b, n->b));
        case Kind::Pow:
            // f^g: f^g (g' ln f + g f'/f); internal-only Ln covers symbolic exponents
            return node(Kind::Mul, node(Kind::Pow, n->a, n->b),
                        node(Kind::Add, node(Kind::Mul, diff(n->b, v), node(Kind::Ln, n->a)),
                             node(Kind::Div, node(Kind::Mul, n->b, diff(n->a, v)), n->a)));
        case Kind::Neg: return node(Kind::Neg, diff(n->a, v));
        case Kind::Sin: return node(Kind::Mul, node(Kind::Cos, n->a), diff(n->a, v));
        case Kind::Cos:
            return node(Kind::Neg, node(Kind::Mul, node(Kind::Sin, n->a), diff(n->a, v)));
        case Kind::Exp: return node(Kind::Mul, node(Kind::Exp, n->a), diff(n->a, v));
        case Kind::Ln: return node(Kind::Div, diff(n->a, v), n->a);
    }
    return num(0.0);
}

bool uses_state(const Expression::Node& n) {
    if (n.kind == Kind::Var) return n.name == "u" || n.name == "ux" || n.name == "ut";
    return (n.a && uses_state(*n.a)) || (n.b && uses_state(*n.b));
}

bool uses_var(const Expression::Node& n, const std::string& v) {
    if (n.kind == Kind::Var) return n.name == v;
    return (n.a && uses_var(*n.a, v)) || (n.b && uses_var(*n.b, v));
}

void print(const Expression::Node& n, std::ostream& os) {
    switch (n.kind) {
        case Kind::Num: os << n.value; return;
        case Kind::Var: os << n.name; return;
        case Kind::Neg:
            os << "(-";
            print(*n.a, os);
            os << ')';
            return;
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
        case Kind::Ln:
            os << (n.kind == Kind::Sin ? "sin" : n.kind == Kind::Cos ? "cos"
                                             : n.kind == Kind::Exp   ? "exp"
                                                                     : "ln")
               << '(';
            print(*n.a, os);
            os << ')';
            return;
        default: {
            const char op = n.kind == Kind::Add   ? '+'
                            : n.kind == Kind::Sub ? '-'
                            : n.kind == Kind::Mul ? '*'
                            : n.kind == Kind::Div ? '/'
                                                  : '^';
            os << '(';
            print(*n.a, os);
            os << op;
            print(*n.b, os);
            os << ')';
            return;
        }
    }
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.root_ = Parser(text).run();
    return e;
}

double Expression::eval(double x, double t, double u, double ux, double ut) const {
    return eval_node(*root_, x, t, u, ux, ut);
}

Expression Expression::derivative(const std::string& v) const {
    if (v != "x" && v != "t")
        throw std::invalid_argument("expression derivative: var must be x or t");
    Expression e;
    e.root_ = diff(root_, v);
    return e;
}

bool Expression::depends_on_state() const { return uses_state(*root_); }

bool Expression::depends_on(const std::string& var) const { return uses_var(*root_, var); }

std::string Expression::str() const {
    std::ostringstream os;
    print(*root_, os);
    return os.str();
}

SourceFn source_from_expression(const std::string& text) {
    auto e = std::make_shared<Expression>(Expression::parse(text));
    return [e](double x, double t, double u, double ux, double ut) {
        return e->eval(x, t, u, ux, ut);
    };
}

SpaceFn space_fn_from_expression(const std::string& text) {
    auto e = std::make_shared<Expression>(Expression::parse(text));
    if (e->depends_on_state() || e->depends_on("t"))
        throw std::invalid_argument("initial-data expression may only use x");
    return [e](double x) { return e->eval(x, 0.0); };
}

TimeSignal time_signal_from_expression(const std::string& text) {
    const Expression e = Expression::parse(text);
    if (e.depends_on_state() || e.depends_on("x"))
        throw std::invalid_argument("boundary-signal expression may only use t");
    auto v = std::make_shared<Expression>(e);
    auto d1 = std::make_shared<Expression>(e.derivative("t"));
    auto d2 = std::make_shared<Expression>(d1->derivative("t"));
    return TimeSignal([v](double t) { return v->eval(0.0, t); },
                      [d1](double t) { return d1->eval(0.0, t); },
                      [d2](double t) { return d2->eval(0.0, t); });
}

}  // namespace greenwave
