#pragma once

// Entire-function expression language: build/parse expression trees, evaluate
// them as complex maps, realize words as compositions, and run escape-detected
// iteration.

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "semidyn/errors.hpp"
#include "semidyn/words.hpp"

namespace semidyn::fx {

using cplx = std::complex<double>;

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Every node is an entire function of z: no division by non-constants,
// no logarithms, integer powers only.
class Expr {
  public:
    enum class Op { Var, Const, Add, Mul, Neg, Sin, Cos, Exp, Pow, Compose, Affine };

    static ExprPtr var();
    static ExprPtr constant(cplx c);
    static ExprPtr add(ExprPtr l, ExprPtr r);
    static ExprPtr mul(ExprPtr l, ExprPtr r);
    static ExprPtr neg(ExprPtr a);
    static ExprPtr sin(ExprPtr a);
    static ExprPtr cos(ExprPtr a);
    static ExprPtr exp(ExprPtr a);
    static ExprPtr pow(ExprPtr a, int k);  // k >= 1
    static ExprPtr compose(ExprPtr outer, ExprPtr inner);
    static ExprPtr affine(cplx a, cplx b, ExprPtr arg);  // a*arg + b

    Op op() const { return op_; }
    int depth() const { return depth_; }
    std::string to_string() const;

    cplx eval(cplx z) const;

    static constexpr int kMaxDepth = 256;

  protected:
    Expr(Op op, ExprPtr l, ExprPtr r, cplx a, cplx b, int k);

  private:
    Op op_;
    ExprPtr lhs_, rhs_;
    cplx a_{}, b_{};  // Const value / Affine coefficients
    int k_ = 0;       // Pow exponent
    int depth_ = 1;
};

// Plain-text formula syntax:
//   expr    := term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := '-' factor | primary ('^' uint)*
//   primary := 'z' | number | number 'i' | 'i'
//            | '(' expr ')' | ('sin'|'cos'|'exp') '(' expr ')'
// Composition is expressed by nesting, e.g. sin(cos(z)).
ExprPtr parse_formula(const std::string& text);

// f_{a1} o f_{a2} o ... o f_{ak}; evaluation order rightmost-first.
ExprPtr word_map(const words::Word& word, const std::vector<ExprPtr>& generators);

struct OrbitVerdict {
    enum class Outcome { Escaped, Bounded, Indeterminate };
    Outcome outcome;
    int steps_used = 0;
    int escape_step = -1;        // Escaped: first step with |z| > R or non-finite z
    double last_modulus = 0.0;   // Escaped: modulus at that step (inf on overflow)
    cplx final_point{};          // Bounded: the final orbit point
    bool overflowed = false;     // escape detected via non-finite value

    bool escaped() const { return outcome == Outcome::Escaped; }
    bool bounded() const { return outcome == Outcome::Bounded; }
};

// Iterates z <- map(z) up to max_steps; Escaped at the first step with
// |z| > escape_radius or non-finite z, else Bounded with the final point.
OrbitVerdict iterate(const Expr& map, cplx z0, int max_steps, double escape_radius);

}  // namespace semidyn::fx
