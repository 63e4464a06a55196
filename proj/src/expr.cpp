#include "lf/expr.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

#include "lf/errors.hpp"

namespace lf {

namespace {

// Sums larger powers are left unexpanded; the zero test handles them
// semantically, canonicalization only has to catch the easy syntactic zeros.
constexpr long long kExpandPowerMax = 6;
constexpr int kProductRescanLimit = 64;

std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& r) {
    return hash_combine(std::hash<long long>{}(r.num()), std::hash<long long>{}(r.den()));
}

int kind_rank(NodeKind k) {
    switch (k) {
        case NodeKind::Number: return 0;
        case NodeKind::SymbolRef: return 1;
        case NodeKind::Power: return 2;
        case NodeKind::Exp: return 3;
        case NodeKind::Ln: return 4;
        case NodeKind::Sin: return 5;
        case NodeKind::Cos: return 6;
        case NodeKind::Abs: return 7;
        case NodeKind::Product: return 8;
        case NodeKind::Sum: return 9;
    }
    return 10;
}

int compare_rational(const Rational& a, const Rational& b) {
    if (a == b) return 0;
    return a < b ? -1 : 1;
}

int compare_symbol(const Symbol& a, const Symbol& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (a.index != b.index) return a.index < b.index ? -1 : 1;
    return a.name.compare(b.name);
}

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return Expr::compare(a, b) < 0; }
};

}  // namespace

Expr Expr::make(ExprNode&& n) {
    std::size_t h = std::hash<int>{}(kind_rank(n.kind));
    switch (n.kind) {
        case NodeKind::Number: h = hash_combine(h, hash_rational(n.value)); break;
        case NodeKind::SymbolRef:
            h = hash_combine(h, std::hash<int>{}(static_cast<int>(n.symbol.kind)));
            h = hash_combine(h, std::hash<int>{}(n.symbol.index));
            h = hash_combine(h, std::hash<std::string>{}(n.symbol.name));
            break;
        case NodeKind::Power:
            h = hash_combine(h, n.children[0].hash());
            h = hash_combine(h, hash_rational(n.exponent));
            break;
        default:
            for (const Expr& c : n.children) h = hash_combine(h, c.hash());
            break;
    }
    n.hash = h;
    return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr::Expr() { *this = number(Rational(0)); }

Expr Expr::number(const Rational& r) {
    ExprNode n;
    n.kind = NodeKind::Number;
    n.value = r;
    return make(std::move(n));
}

Expr Expr::symbol(const Symbol& s) {
    ExprNode n;
    n.kind = NodeKind::SymbolRef;
    n.symbol = s;
    return make(std::move(n));
}

int Expr::compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case NodeKind::Number: return compare_rational(a.value(), b.value());
        case NodeKind::SymbolRef: return compare_symbol(a.symbol_ref(), b.symbol_ref());
        case NodeKind::Power: {
            int c = compare(a.base(), b.base());
            if (c != 0) return c;
            return compare_rational(a.exponent(), b.exponent());
        }
        default: {
            const auto& ca = a.children();
            const auto& cb = b.children();
            std::size_t m = std::min(ca.size(), cb.size());
            for (std::size_t i = 0; i < m; ++i) {
                int c = compare(ca[i], cb[i]);
                if (c != 0) return c;
            }
            if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
            return 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Canonicalization

struct Canonicalizer {
    // Splits a canonical term into (numeric coefficient, remaining factor).
    static std::pair<Rational, Expr> coefficient_split(const Expr& term) {
        if (term.is_number()) return {term.value(), Expr::integer(1)};
        if (term.kind() == NodeKind::Product && term.children().front().is_number()) {
            const auto& ch = term.children();
            Rational c = ch.front().value();
            if (ch.size() == 2) return {c, ch[1]};
            ExprNode n;
            n.kind = NodeKind::Product;
            n.children.assign(ch.begin() + 1, ch.end());
            return {c, Expr::make(std::move(n))};
        }
        return {Rational(1), term};
    }

    // Rebuilds coef*key without renormalizing; both pieces are canonical and
    // key is never a Number or a Sum.
    static Expr scale(const Rational& coef, const Expr& key) {
        if (key.is_literal_one()) return Expr::number(coef);
        if (coef.is_zero()) return Expr::integer(0);
        if (coef.is_one()) return key;
        ExprNode n;
        n.kind = NodeKind::Product;
        n.children.push_back(Expr::number(coef));
        if (key.kind() == NodeKind::Product)
            n.children.insert(n.children.end(), key.children().begin(), key.children().end());
        else
            n.children.push_back(key);
        return Expr::make(std::move(n));
    }

    static Expr sum(std::vector<Expr> terms) {
        std::map<Expr, Rational, ExprLess> acc;
        std::vector<Expr> queue = std::move(terms);
        for (std::size_t i = 0; i < queue.size(); ++i) {
            const Expr term = queue[i];
            if (term.kind() == NodeKind::Sum) {
                for (const Expr& c : term.children()) queue.push_back(c);
                continue;
            }
            auto [coef, key] = coefficient_split(term);
            auto it = acc.find(key);
            if (it == acc.end())
                acc.emplace(key, coef);
            else
                it->second = it->second + coef;
        }
        std::vector<Expr> out;
        out.reserve(acc.size());
        for (const auto& [key, coef] : acc) {
            if (coef.is_zero()) continue;
            out.push_back(scale(coef, key));
        }
        if (out.empty()) return Expr::integer(0);
        if (out.size() == 1) return out.front();
        std::sort(out.begin(), out.end(), ExprLess{});
        ExprNode n;
        n.kind = NodeKind::Sum;
        n.children = std::move(out);
        return Expr::make(std::move(n));
    }

    // Multiplies two canonical expressions, distributing over sums.
    static Expr expand_mul(const Expr& a, const Expr& b) {
        const bool sa = a.kind() == NodeKind::Sum;
        const bool sb = b.kind() == NodeKind::Sum;
        if (!sa && !sb) return product({a, b});
        std::vector<Expr> terms;
        const std::vector<Expr> one_a = sa ? a.children() : std::vector<Expr>{a};
        const std::vector<Expr> one_b = sb ? b.children() : std::vector<Expr>{b};
        terms.reserve(one_a.size() * one_b.size());
        for (const Expr& x : one_a)
            for (const Expr& y : one_b) terms.push_back(product({x, y}));
        return sum(std::move(terms));
    }

    static Expr product(std::vector<Expr> factors) {
        Rational coef(1);
        std::map<Expr, Rational, ExprLess> bases;
        std::vector<Expr> exp_args;   // arguments of exp factors, merged into one
        std::vector<Expr> sums;       // sum factors, distributed at the end

        std::vector<Expr> queue = std::move(factors);
        for (int pass = 0; pass < kProductRescanLimit; ++pass) {
            for (std::size_t i = 0; i < queue.size(); ++i) {
                const Expr f = queue[i];
                switch (f.kind()) {
                    case NodeKind::Number:
                        coef = coef * f.value();
                        break;
                    case NodeKind::Product:
                        for (const Expr& c : f.children()) queue.push_back(c);
                        break;
                    case NodeKind::Sum:
                        sums.push_back(f);
                        break;
                    case NodeKind::Exp:
                        exp_args.push_back(f.arg());
                        break;
                    case NodeKind::Power: {
                        auto it = bases.find(f.base());
                        if (it == bases.end())
                            bases.emplace(f.base(), f.exponent());
                        else
                            it->second = it->second + f.exponent();
                        break;
                    }
                    default: {
                        auto it = bases.find(f);
                        if (it == bases.end())
                            bases.emplace(f, Rational(1));
                        else
                            it->second = it->second + Rational(1);
                        break;
                    }
                }
                if (coef.is_zero()) return Expr::integer(0);
            }
            // Rebuild each combined base. pow() may fold a piece into a
            // number, a product, an exp, or an expanded sum; if so, everything
            // goes back through the scan.
            queue.clear();
            std::vector<Expr> pieces;
            bool rescan = false;
            for (const auto& [b, e] : bases) {
                if (e.is_zero()) continue;
                Expr p = pow(b, e);
                if (p.is_literal_one()) continue;
                bool untouched_power =
                    p.kind() == NodeKind::Power && p.base() == b && p.exponent() == e;
                bool untouched_atom =
                    e.is_one() && p == b && p.kind() != NodeKind::Sum &&
                    p.kind() != NodeKind::Product && p.kind() != NodeKind::Number &&
                    p.kind() != NodeKind::Exp && p.kind() != NodeKind::Power;
                if (untouched_power || untouched_atom) {
                    pieces.push_back(p);
                } else {
                    queue.push_back(p);
                    rescan = true;
                }
            }
            if (rescan) {
                queue.insert(queue.end(), pieces.begin(), pieces.end());
                bases.clear();
                continue;
            }
            if (!exp_args.empty()) {
                Expr merged = exp(sum(std::move(exp_args)));
                if (!merged.is_literal_one()) pieces.push_back(merged);  // exp node
            }
            Expr atom;
            if (pieces.empty()) {
                atom = Expr::number(coef);
            } else if (pieces.size() == 1 && coef.is_one()) {
                atom = pieces.front();
            } else {
                std::sort(pieces.begin(), pieces.end(), ExprLess{});
                ExprNode n;
                n.kind = NodeKind::Product;
                if (!coef.is_one()) n.children.push_back(Expr::number(coef));
                n.children.insert(n.children.end(), pieces.begin(), pieces.end());
                atom = Expr::make(std::move(n));
            }
            if (sums.empty()) return atom;
            Expr acc = atom;
            for (const Expr& s : sums) acc = expand_mul(acc, s);
            return acc;
        }
        throw Error("product canonicalization did not stabilize");
    }

    static Expr pow(const Expr& base, const Rational& r) {
        if (r.is_zero()) return Expr::integer(1);
        if (r.is_one()) return base;
        if (base.is_literal_one()) return Expr::integer(1);
        if (base.is_literal_zero()) {
            // 0^negative is undefined; keep it symbolic so only eval reports it.
            if (!r.is_negative()) return Expr::integer(0);
        } else if (base.is_number() && r.is_integer()) {
            return Expr::number(base.value().pow_int(r.num()));
        }
        switch (base.kind()) {
            case NodeKind::Power: {
                // (x^s)^r combines only when sound for all real x.
                if (r.is_integer() || base.base().kind() == NodeKind::Abs)
                    return pow(base.base(), base.exponent() * r);
                break;
            }
            case NodeKind::Exp:
                return exp(product({Expr::number(r), base.arg()}));
            case NodeKind::Abs:
                if (r.is_integer() && r.num() % 2 == 0) return pow(base.arg(), r);
                break;
            case NodeKind::Product: {
                if (r.is_integer()) {
                    std::vector<Expr> fs;
                    fs.reserve(base.children().size());
                    for (const Expr& c : base.children()) fs.push_back(pow(c, r));
                    return product(std::move(fs));
                }
                break;
            }
            case NodeKind::Sum: {
                if (r.is_integer() && r.num() >= 2 && r.num() <= kExpandPowerMax) {
                    Expr acc = base;
                    for (long long i = 1; i < r.num(); ++i) acc = expand_mul(acc, base);
                    return acc;
                }
                break;
            }
            default:
                break;
        }
        ExprNode n;
        n.kind = NodeKind::Power;
        n.children.push_back(base);
        n.exponent = r;
        return Expr::make(std::move(n));
    }

    static Expr func(NodeKind k, const Expr& a) {
        switch (k) {
            case NodeKind::Ln:
                if (a.is_literal_one()) return Expr::integer(0);
                if (a.kind() == NodeKind::Exp) return a.arg();
                break;
            case NodeKind::Exp:
                if (a.is_literal_zero()) return Expr::integer(1);
                break;
            case NodeKind::Sin:
                if (a.is_literal_zero()) return Expr::integer(0);
                break;
            case NodeKind::Cos:
                if (a.is_literal_zero()) return Expr::integer(1);
                break;
            case NodeKind::Abs:
                if (a.is_number()) return Expr::number(a.value().abs());
                if (a.kind() == NodeKind::Abs || a.kind() == NodeKind::Exp) return a;
                if (a.kind() == NodeKind::Power) return pow(func(NodeKind::Abs, a.base()), a.exponent());
                if (a.kind() == NodeKind::Product) {
                    std::vector<Expr> fs;
                    fs.reserve(a.children().size());
                    for (const Expr& c : a.children()) fs.push_back(func(NodeKind::Abs, c));
                    return product(std::move(fs));
                }
                break;
            default:
                break;
        }
        ExprNode n;
        n.kind = k;
        n.children.push_back(a);
        return Expr::make(std::move(n));
    }

    static Expr exp(const Expr& a) { return func(NodeKind::Exp, a); }
};

Expr Expr::sum(std::vector<Expr> terms) { return Canonicalizer::sum(std::move(terms)); }
Expr Expr::product(std::vector<Expr> factors) { return Canonicalizer::product(std::move(factors)); }
Expr Expr::pow(const Expr& base, const Rational& exponent) { return Canonicalizer::pow(base, exponent); }
Expr Expr::ln(const Expr& a) { return Canonicalizer::func(NodeKind::Ln, a); }
Expr Expr::exp(const Expr& a) { return Canonicalizer::func(NodeKind::Exp, a); }
Expr Expr::sin(const Expr& a) { return Canonicalizer::func(NodeKind::Sin, a); }
Expr Expr::cos(const Expr& a) { return Canonicalizer::func(NodeKind::Cos, a); }
Expr Expr::abs(const Expr& a) { return Canonicalizer::func(NodeKind::Abs, a); }

Expr operator-(const Expr& a, const Expr& b) {
    return Expr::sum({a, Expr::product({Expr::integer(-1), b})});
}

Expr operator/(const Expr& a, const Expr& b) {
    return Expr::product({a, Expr::pow(b, Rational(-1))});
}

Expr Expr::operator-() const { return Expr::product({Expr::integer(-1), *this}); }

// ---------------------------------------------------------------------------
// Differentiation

Expr diff(const Expr& e, const Symbol& s) {
    switch (e.kind()) {
        case NodeKind::Number:
            return Expr::integer(0);
        case NodeKind::SymbolRef:
            return e.symbol_ref() == s ? Expr::integer(1) : Expr::integer(0);
        case NodeKind::Sum: {
            std::vector<Expr> terms;
            terms.reserve(e.children().size());
            for (const Expr& c : e.children()) terms.push_back(diff(c, s));
            return Expr::sum(std::move(terms));
        }
        case NodeKind::Product: {
            std::vector<Expr> terms;
            const auto& ch = e.children();
            for (std::size_t i = 0; i < ch.size(); ++i) {
                std::vector<Expr> fs = ch;
                fs[i] = diff(ch[i], s);
                terms.push_back(Expr::product(std::move(fs)));
            }
            return Expr::sum(std::move(terms));
        }
        case NodeKind::Power:
            return Expr::product({Expr::number(e.exponent()),
                                  Expr::pow(e.base(), e.exponent() - Rational(1)),
                                  diff(e.base(), s)});
        case NodeKind::Ln:
            return Expr::product({Expr::pow(e.arg(), Rational(-1)), diff(e.arg(), s)});
        case NodeKind::Exp:
            return Expr::product({e, diff(e.arg(), s)});
        case NodeKind::Sin:
            return Expr::product({Expr::cos(e.arg()), diff(e.arg(), s)});
        case NodeKind::Cos:
            return Expr::product({Expr::integer(-1), Expr::sin(e.arg()), diff(e.arg(), s)});
        case NodeKind::Abs:
            // d|u| = u/|u| du; the |u|^-1 factor simplifies against even powers.
            return Expr::product(
                {e.arg(), Expr::pow(Expr::abs(e.arg()), Rational(-1)), diff(e.arg(), s)});
    }
    throw Error("diff: unreachable node kind");
}

// ---------------------------------------------------------------------------
// Substitution and symbol queries

Expr substitute(const Expr& e, const std::map<Symbol, Expr>& bindings) {
    switch (e.kind()) {
        case NodeKind::Number:
            return e;
        case NodeKind::SymbolRef: {
            auto it = bindings.find(e.symbol_ref());
            return it == bindings.end() ? e : it->second;
        }
        case NodeKind::Sum:
        case NodeKind::Product: {
            std::vector<Expr> ch;
            ch.reserve(e.children().size());
            for (const Expr& c : e.children()) ch.push_back(substitute(c, bindings));
            return e.kind() == NodeKind::Sum ? Expr::sum(std::move(ch))
                                             : Expr::product(std::move(ch));
        }
        case NodeKind::Power:
            return Expr::pow(substitute(e.base(), bindings), e.exponent());
        case NodeKind::Ln:
            return Expr::ln(substitute(e.arg(), bindings));
        case NodeKind::Exp:
            return Expr::exp(substitute(e.arg(), bindings));
        case NodeKind::Sin:
            return Expr::sin(substitute(e.arg(), bindings));
        case NodeKind::Cos:
            return Expr::cos(substitute(e.arg(), bindings));
        case NodeKind::Abs:
            return Expr::abs(substitute(e.arg(), bindings));
    }
    throw Error("substitute: unreachable node kind");
}

namespace {
void collect_symbols(const Expr& e, std::set<Symbol>& out) {
    if (e.kind() == NodeKind::SymbolRef) {
        out.insert(e.symbol_ref());
        return;
    }
    for (const Expr& c : e.children()) collect_symbols(c, out);
}
}  // namespace

std::set<Symbol> free_symbols(const Expr& e) {
    std::set<Symbol> out;
    collect_symbols(e, out);
    return out;
}

bool contains_kind(const Expr& e, SymbolKind k) {
    if (e.kind() == NodeKind::SymbolRef) return e.symbol_ref().kind == k;
    for (const Expr& c : e.children())
        if (contains_kind(c, k)) return true;
    return false;
}

int max_index(const Expr& e, SymbolKind k) {
    int m = 0;
    if (e.kind() == NodeKind::SymbolRef && e.symbol_ref().kind == k)
        return e.symbol_ref().index;
    for (const Expr& c : e.children()) m = std::max(m, max_index(c, k));
    return m;
}

// ---------------------------------------------------------------------------
// Canonical printer

namespace {

enum Prec { kPrecSum = 10, kPrecProduct = 20, kPrecPower = 30, kPrecAtom = 40 };

void print_expr(std::ostream& os, const Expr& e, int parent_prec);

bool term_is_negative(const Expr& t) {
    if (t.is_number()) return t.value().is_negative();
    if (t.kind() == NodeKind::Product && t.children().front().is_number())
        return t.children().front().value().is_negative();
    return false;
}

void print_exponent(std::ostream& os, const Rational& r) {
    if (r.is_integer() && !r.is_negative())
        os << "^" << r.num();
    else
        os << "^(" << r.str() << ")";
}

void print_base(std::ostream& os, const Expr& b) {
    bool parens = b.kind() == NodeKind::Sum || b.kind() == NodeKind::Product ||
                  b.kind() == NodeKind::Power ||
                  (b.is_number() && (b.value().is_negative() || !b.value().is_integer()));
    if (parens) {
        os << "(";
        print_expr(os, b, kPrecSum);
        os << ")";
    } else {
        print_expr(os, b, kPrecAtom);
    }
}

void print_pow_factor(std::ostream& os, const Expr& base, const Rational& r) {
    if (r.is_one()) {
        print_expr(os, base, kPrecProduct + 1);
        return;
    }
    print_base(os, base);
    print_exponent(os, r);
}

void print_product(std::ostream& os, const Expr& e, int parent_prec) {
    Rational coef(1);
    std::vector<std::pair<Expr, Rational>> numer, denom;
    auto add_factor = [&](const Expr& f) {
        if (f.is_number()) {
            coef = coef * f.value();
        } else if (f.kind() == NodeKind::Power && f.exponent().is_negative()) {
            // A sum base must keep its literal exponent: "1/(x+y)^3" would
            // reparse through the expanded cube and land on a different form.
            if (f.base().kind() == NodeKind::Sum && f.exponent() != Rational(-1))
                numer.emplace_back(f.base(), f.exponent());
            else
                denom.emplace_back(f.base(), -f.exponent());
        } else if (f.kind() == NodeKind::Power) {
            numer.emplace_back(f.base(), f.exponent());
        } else {
            numer.emplace_back(f, Rational(1));
        }
    };
    if (e.kind() == NodeKind::Product)
        for (const Expr& f : e.children()) add_factor(f);
    else
        add_factor(e);

    bool neg = coef.is_negative();
    Rational mag = coef.abs();
    bool parens = parent_prec > kPrecProduct || (neg && parent_prec > kPrecSum);
    if (parens) os << "(";
    if (neg) os << "-";
    bool printed = false;
    if (!mag.is_one() || numer.empty()) {
        os << mag.str();
        printed = true;
    }
    for (const auto& [b, r] : numer) {
        if (printed) os << "*";
        print_pow_factor(os, b, r);
        printed = true;
    }
    if (!denom.empty()) {
        os << "/";
        if (denom.size() > 1) os << "(";
        bool first = true;
        for (const auto& [b, r] : denom) {
            if (!first) os << "*";
            print_pow_factor(os, b, r);
            first = false;
        }
        if (denom.size() > 1) os << ")";
    }
    if (parens) os << ")";
}

void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
    switch (e.kind()) {
        case NodeKind::Number: {
            const Rational& r = e.value();
            bool parens = (r.is_negative() || !r.is_integer()) && parent_prec > kPrecSum;
            if (parens) os << "(";
            os << r.str();
            if (parens) os << ")";
            break;
        }
        case NodeKind::SymbolRef:
            os << e.symbol_ref().str();
            break;
        case NodeKind::Sum: {
            bool parens = parent_prec > kPrecSum;
            if (parens) os << "(";
            bool first = true;
            for (const Expr& term : e.children()) {
                if (!first) {
                    if (term_is_negative(term)) {
                        os << " - ";
                        print_expr(os, -term, kPrecSum + 1);
                        first = false;
                        continue;
                    }
                    os << " + ";
                }
                print_expr(os, term, first ? kPrecSum : kPrecSum + 1);
                first = false;
            }
            if (parens) os << ")";
            break;
        }
        case NodeKind::Product:
            print_product(os, e, parent_prec);
            break;
        case NodeKind::Power:
            if (e.exponent().is_negative()) {
                print_product(os, e, parent_prec);
            } else {
                print_base(os, e.base());
                print_exponent(os, e.exponent());
            }
            break;
        case NodeKind::Ln:
            os << "ln(";
            print_expr(os, e.arg(), kPrecSum);
            os << ")";
            break;
        case NodeKind::Exp:
            os << "exp(";
            print_expr(os, e.arg(), kPrecSum);
            os << ")";
            break;
        case NodeKind::Sin:
            os << "sin(";
            print_expr(os, e.arg(), kPrecSum);
            os << ")";
            break;
        case NodeKind::Cos:
            os << "cos(";
            print_expr(os, e.arg(), kPrecSum);
            os << ")";
            break;
        case NodeKind::Abs:
            os << "abs(";
            print_expr(os, e.arg(), kPrecSum);
            os << ")";
            break;
    }
}

}  // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print_expr(os, *this, kPrecSum);
    return os.str();
}

}  // namespace lf
