#ifndef LF_EXPR_HPP
#define LF_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lf/rational.hpp"
#include "lf/symbol.hpp"

namespace lf {

enum class NodeKind { Number, SymbolRef, Sum, Product, Power, Ln, Exp, Sin, Cos, Abs };

class Expr;

struct ExprNode {
    NodeKind kind = NodeKind::Number;
    Rational value;              // Number
    Symbol symbol;               // SymbolRef
    std::vector<Expr> children;  // Sum/Product: terms/factors; functions & Power: single child
    Rational exponent;           // Power
    std::size_t hash = 0;
};

// Immutable symbolic expression, always held in canonical form: sums and
// products are flattened and sorted under a fixed total order, numeric
// constants merged, products distributed over sums, small integer powers of
// sums expanded, x^0 -> 1, x^1 -> x, and 0 annihilates products. Structural
// equality of canonical forms is decidable; semantic equality beyond that is
// the zero test's job.
class Expr {
  public:
    Expr();  // the literal 0

    static Expr number(const Rational& r);
    static Expr integer(long long n) { return number(Rational(n)); }
    static Expr symbol(const Symbol& s);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr pow(const Expr& base, const Rational& exponent);
    static Expr ln(const Expr& a);
    static Expr exp(const Expr& a);
    static Expr sin(const Expr& a);
    static Expr cos(const Expr& a);
    static Expr abs(const Expr& a);

    NodeKind kind() const { return node_->kind; }
    const Rational& value() const { return node_->value; }
    const Symbol& symbol_ref() const { return node_->symbol; }
    const std::vector<Expr>& children() const { return node_->children; }
    const Expr& base() const { return node_->children.front(); }
    const Rational& exponent() const { return node_->exponent; }
    const Expr& arg() const { return node_->children.front(); }
    std::size_t hash() const { return node_->hash; }

    bool is_number() const { return kind() == NodeKind::Number; }
    bool is_literal_zero() const { return is_number() && value().is_zero(); }
    bool is_literal_one() const { return is_number() && value().is_one(); }

    // Fixed total order used for canonical sorting; returns <0, 0, >0.
    static int compare(const Expr& a, const Expr& b);
    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }

    // Canonical infix form; reparsing yields a structurally equal expression.
    std::string str() const;

    friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr operator-() const;

  private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    static Expr make(ExprNode&& n);

    std::shared_ptr<const ExprNode> node_;

    friend struct Canonicalizer;
};

// Partial derivative treating every other symbol as independent.
Expr diff(const Expr& e, const Symbol& s);

// Simultaneous substitution, then renormalization.
Expr substitute(const Expr& e, const std::map<Symbol, Expr>& bindings);

std::set<Symbol> free_symbols(const Expr& e);
bool contains_kind(const Expr& e, SymbolKind k);
int max_index(const Expr& e, SymbolKind k);

// Convenience builders used throughout the library and tests.
inline Expr t_() { return Expr::symbol(Symbol::time()); }
inline Expr q_(int i) { return Expr::symbol(Symbol::coord(i)); }
inline Expr v_(int i) { return Expr::symbol(Symbol::vel(i)); }
inline Expr a_(int i) { return Expr::symbol(Symbol::accel(i)); }
inline Expr par_(const std::string& name) { return Expr::symbol(Symbol::param(name)); }
inline Expr num_(long long n) { return Expr::integer(n); }
inline Expr frac_(long long n, long long d) { return Expr::number(Rational(n, d)); }

}  // namespace lf

#endif
