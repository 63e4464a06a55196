#include "lf/eval.hpp"

#include <cmath>

#include "lf/errors.hpp"

namespace lf {

namespace {

double lookup(const Symbol& s, const EvalPoint& p) {
    switch (s.kind) {
        case SymbolKind::Time:
            return p.t;
        case SymbolKind::Coord:
            if (s.index < 1 || static_cast<std::size_t>(s.index) > p.q.size())
                throw UnboundSymbolError(s.str());
            return p.q[s.index - 1];
        case SymbolKind::Vel:
            if (s.index < 1 || static_cast<std::size_t>(s.index) > p.v.size())
                throw UnboundSymbolError(s.str());
            return p.v[s.index - 1];
        case SymbolKind::Accel:
            if (s.index < 1 || static_cast<std::size_t>(s.index) > p.a.size())
                throw UnboundSymbolError(s.str());
            return p.a[s.index - 1];
        case SymbolKind::Param: {
            auto it = p.params.find(s.name);
            if (it == p.params.end()) throw UnboundSymbolError(s.name);
            return it->second;
        }
    }
    throw UnboundSymbolError(s.str());
}

double eval_rec(const Expr& e, const EvalPoint& p) {
    switch (e.kind()) {
        case NodeKind::Number:
            return e.value().to_double();
        case NodeKind::SymbolRef:
            return lookup(e.symbol_ref(), p);
        case NodeKind::Sum: {
            double s = 0.0;
            for (const Expr& c : e.children()) s += eval_rec(c, p);
            return s;
        }
        case NodeKind::Product: {
            double s = 1.0;
            for (const Expr& c : e.children()) s *= eval_rec(c, p);
            return s;
        }
        case NodeKind::Power: {
            double b = eval_rec(e.base(), p);
            const Rational& r = e.exponent();
            if (b == 0.0 && r.is_negative()) throw DomainError("0 raised to a negative power");
            if (!r.is_integer()) {
                if (b < 0.0) throw DomainError("negative base under fractional exponent");
                return std::pow(b, r.to_double());
            }
            return std::pow(b, static_cast<double>(r.num()));
        }
        case NodeKind::Ln: {
            double a = eval_rec(e.arg(), p);
            if (a <= 0.0) throw DomainError("ln of non-positive value");
            return std::log(a);
        }
        case NodeKind::Exp:
            return std::exp(eval_rec(e.arg(), p));
        case NodeKind::Sin:
            return std::sin(eval_rec(e.arg(), p));
        case NodeKind::Cos:
            return std::cos(eval_rec(e.arg(), p));
        case NodeKind::Abs:
            return std::fabs(eval_rec(e.arg(), p));
    }
    throw Error("eval: unreachable node kind");
}

}  // namespace

double eval(const Expr& e, const EvalPoint& p) {
    double x = eval_rec(e, p);
    if (!std::isfinite(x)) throw DomainError("non-finite result");
    return x;
}

}  // namespace lf
