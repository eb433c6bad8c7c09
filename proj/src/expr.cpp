#include "semidyn/expr.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace semidyn::fx {

Expr::Expr(Op op, ExprPtr l, ExprPtr r, cplx a, cplx b, int k)
    : op_(op), lhs_(std::move(l)), rhs_(std::move(r)), a_(a), b_(b), k_(k) {
    int d = 0;
    if (lhs_) d = std::max(d, lhs_->depth_);
    if (rhs_) d = std::max(d, rhs_->depth_);
    depth_ = d + 1;
    if (depth_ > kMaxDepth) throw FormulaError("expression tree exceeds depth limit");
}

namespace {
ExprPtr make(Expr::Op op, ExprPtr l = nullptr, ExprPtr r = nullptr, cplx a = {},
             cplx b = {}, int k = 0) {
    struct Access : Expr {
        Access(Op op, ExprPtr l, ExprPtr r, cplx a, cplx b, int k)
            : Expr(op, std::move(l), std::move(r), a, b, k) {}
    };
    return std::make_shared<Access>(op, std::move(l), std::move(r), a, b, k);
}
}  // namespace

ExprPtr Expr::var() { return make(Op::Var); }
ExprPtr Expr::constant(cplx c) { return make(Op::Const, nullptr, nullptr, c); }
ExprPtr Expr::add(ExprPtr l, ExprPtr r) { return make(Op::Add, std::move(l), std::move(r)); }
ExprPtr Expr::mul(ExprPtr l, ExprPtr r) { return make(Op::Mul, std::move(l), std::move(r)); }
ExprPtr Expr::neg(ExprPtr a) { return make(Op::Neg, std::move(a)); }
ExprPtr Expr::sin(ExprPtr a) { return make(Op::Sin, std::move(a)); }
ExprPtr Expr::cos(ExprPtr a) { return make(Op::Cos, std::move(a)); }
ExprPtr Expr::exp(ExprPtr a) { return make(Op::Exp, std::move(a)); }
ExprPtr Expr::pow(ExprPtr a, int k) {
    if (k < 1) throw FormulaError("integer power must be >= 1 for an entire map");
    return make(Op::Pow, std::move(a), nullptr, {}, {}, k);
}
ExprPtr Expr::compose(ExprPtr outer, ExprPtr inner) {
    return make(Op::Compose, std::move(outer), std::move(inner));
}
ExprPtr Expr::affine(cplx a, cplx b, ExprPtr arg) {
    return make(Op::Affine, std::move(arg), nullptr, a, b);
}

cplx Expr::eval(cplx z) const {
    switch (op_) {
        case Op::Var: return z;
        case Op::Const: return a_;
        case Op::Add: return lhs_->eval(z) + rhs_->eval(z);
        case Op::Mul: return lhs_->eval(z) * rhs_->eval(z);
        case Op::Neg: return -lhs_->eval(z);
        case Op::Sin: return std::sin(lhs_->eval(z));
        case Op::Cos: return std::cos(lhs_->eval(z));
        case Op::Exp: return std::exp(lhs_->eval(z));
        case Op::Pow: {
            cplx v = lhs_->eval(z);
            cplx r{1.0, 0.0};
            int k = k_;
            while (k > 0) {
                if (k & 1) r *= v;
                v *= v;
                k >>= 1;
            }
            return r;
        }
        case Op::Compose: return lhs_->eval(rhs_->eval(z));
        case Op::Affine: return a_ * lhs_->eval(z) + b_;
    }
    return {};
}

namespace {

std::string cplx_str(cplx c) {
    std::ostringstream os;
    os.precision(17);
    if (c.imag() == 0.0) { os << c.real(); return os.str(); }
    if (c.real() == 0.0) { os << c.imag() << "i"; return os.str(); }
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    return os.str();
}

}  // namespace

std::string Expr::to_string() const {
    switch (op_) {
        case Op::Var: return "z";
        case Op::Const: return cplx_str(a_);
        case Op::Add: return "(" + lhs_->to_string() + " + " + rhs_->to_string() + ")";
        case Op::Mul: return "(" + lhs_->to_string() + " * " + rhs_->to_string() + ")";
        case Op::Neg: return "-" + lhs_->to_string();
        case Op::Sin: return "sin(" + lhs_->to_string() + ")";
        case Op::Cos: return "cos(" + lhs_->to_string() + ")";
        case Op::Exp: return "exp(" + lhs_->to_string() + ")";
        case Op::Pow: return lhs_->to_string() + "^" + std::to_string(k_);
        case Op::Compose: return lhs_->to_string() + " o " + rhs_->to_string();
        case Op::Affine:
            return "(" + cplx_str(a_) + "*" + lhs_->to_string() + " + " + cplx_str(b_) + ")";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Formula parser

namespace {

class Parser {
  public:
    explicit Parser(const std::string& text) : s_(text) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) {
        throw FormulaError("formula error at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (true) {
            if (eat('+')) e = Expr::add(e, term());
            else if (eat('-')) e = Expr::add(e, Expr::neg(term()));
            else return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (eat('*')) e = Expr::mul(e, factor());
        return e;
    }

    ExprPtr factor() {
        if (eat('-')) return Expr::neg(factor());
        ExprPtr e = primary();
        while (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer exponent after '^'");
            e = Expr::pow(e, std::stoi(s_.substr(start, pos_ - start)));
        }
        return e;
    }

    ExprPtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of formula");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string ident = s_.substr(start, pos_ - start);
            if (ident == "z") return Expr::var();
            if (ident == "i") return Expr::constant(cplx{0.0, 1.0});
            if (ident == "sin" || ident == "cos" || ident == "exp") {
                if (!eat('(')) fail("expected '(' after " + ident);
                ExprPtr a = expr();
                if (!eat(')')) fail("expected ')'");
                if (ident == "sin") return Expr::sin(a);
                if (ident == "cos") return Expr::cos(a);
                return Expr::exp(a);
            }
            fail("unknown identifier '" + ident + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            ++pos_;
        // scientific notation
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        double v = 0;
        try {
            v = std::stod(s_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            fail("bad numeric literal");
        }
        if (pos_ < s_.size() && s_[pos_] == 'i' &&
            !(pos_ + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            return Expr::constant(cplx{0.0, v});
        }
        return Expr::constant(cplx{v, 0.0});
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_formula(const std::string& text) { return Parser(text).parse(); }

ExprPtr word_map(const words::Word& word, const std::vector<ExprPtr>& generators) {
    if (word.letters.empty()) throw Error("word_map: empty word");
    auto gen = [&](words::Letter l) -> ExprPtr {
        if (l < 0 || static_cast<std::size_t>(l) >= generators.size())
            throw Error("word_map: letter " + std::to_string(l) + " has no generator");
        return generators[static_cast<std::size_t>(l)];
    };
    ExprPtr e = gen(word.letters.back());
    for (auto it = word.letters.rbegin() + 1; it != word.letters.rend(); ++it)
        e = Expr::compose(gen(*it), e);
    return e;
}

OrbitVerdict iterate(const Expr& map, cplx z0, int max_steps, double escape_radius) {
    if (max_steps < 1) throw Error("iterate: max_steps must be >= 1");
    if (!(escape_radius > 1.0)) throw Error("iterate: escape_radius must be > 1");
    OrbitVerdict v{};
    if (!std::isfinite(z0.real()) || !std::isfinite(z0.imag())) {
        v.outcome = OrbitVerdict::Outcome::Indeterminate;
        return v;
    }
    cplx z = z0;
    for (int step = 1; step <= max_steps; ++step) {
        z = map.eval(z);
        v.steps_used = step;
        const bool finite = std::isfinite(z.real()) && std::isfinite(z.imag());
        const double mod = finite ? std::abs(z) : std::numeric_limits<double>::infinity();
        if (!finite || mod > escape_radius) {
            v.outcome = OrbitVerdict::Outcome::Escaped;
            v.escape_step = step;
            v.last_modulus = mod;
            v.overflowed = !finite;
            return v;
        }
    }
    v.outcome = OrbitVerdict::Outcome::Bounded;
    v.final_point = z;
    return v;
}

}  // namespace semidyn::fx
