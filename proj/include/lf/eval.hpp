#ifndef LF_EVAL_HPP
#define LF_EVAL_HPP

#include <map>
#include <string>
#include <vector>

#include "lf/expr.hpp"

namespace lf {

// Concrete binding of every symbol an expression may reference. Accelerations
// are bound only when `a` is nonempty.
struct EvalPoint {
    double t = 0.0;
    std::vector<double> q;
    std::vector<double> v;
    std::vector<double> a;
    std::map<std::string, double> params;
};

// IEEE double evaluation. Throws UnboundSymbolError for missing bindings and
// DomainError for ln of non-positive values, negative bases under non-integer
// exponents, zero under negative exponents, and non-finite results.
double eval(const Expr& e, const EvalPoint& p);

}  // namespace lf

#endif
