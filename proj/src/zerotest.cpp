#include "lf/zerotest.hpp"

#include <algorithm>
#include <cmath>

#include "lf/errors.hpp"

namespace lf {

Interval SampleDomain::interval_for(const Symbol& s) const {
    auto it = overrides_.find(s.str());
    if (it != overrides_.end()) return it->second;
    switch (s.kind) {
        case SymbolKind::Time:
            return {0.0, 2.0};
        case SymbolKind::Coord:
        case SymbolKind::Vel:
        case SymbolKind::Accel:
            return {0.5, 2.0};
        case SymbolKind::Param: {
            auto p = params_.find(s.name);
            if (p == params_.end()) throw UnboundSymbolError(s.name);
            return {p->second, p->second};
        }
    }
    return {0.0, 0.0};
}

EvalPoint sample_point(const std::vector<Symbol>& slots, const SampleDomain& domain,
                       std::uint64_t seed, std::uint64_t k) {
    EvalPoint p;
    int nq = 0, nv = 0, na = 0;
    for (const Symbol& s : slots) {
        if (s.kind == SymbolKind::Coord) nq = std::max(nq, s.index);
        if (s.kind == SymbolKind::Vel) nv = std::max(nv, s.index);
        if (s.kind == SymbolKind::Accel) na = std::max(na, s.index);
    }
    p.q.assign(nq, 0.0);
    p.v.assign(nv, 0.0);
    p.a.assign(na, 0.0);
    const std::uint64_t m = slots.size();
    for (std::uint64_t j = 0; j < m; ++j) {
        const Symbol& s = slots[j];
        Interval iv = domain.interval_for(s);
        double x = splitmix64::uniform(seed, k * m + j, iv.lo, iv.hi);
        switch (s.kind) {
            case SymbolKind::Time: p.t = x; break;
            case SymbolKind::Coord: p.q[s.index - 1] = x; break;
            case SymbolKind::Vel: p.v[s.index - 1] = x; break;
            case SymbolKind::Accel: p.a[s.index - 1] = x; break;
            case SymbolKind::Param: p.params[s.name] = x; break;
        }
    }
    return p;
}

namespace {

Witness make_witness(const std::vector<Symbol>& slots, const EvalPoint& p, double value) {
    Witness w;
    w.value = value;
    for (const Symbol& s : slots) {
        double x = 0.0;
        switch (s.kind) {
            case SymbolKind::Time: x = p.t; break;
            case SymbolKind::Coord: x = p.q[s.index - 1]; break;
            case SymbolKind::Vel: x = p.v[s.index - 1]; break;
            case SymbolKind::Accel: x = p.a[s.index - 1]; break;
            case SymbolKind::Param: x = p.params.at(s.name); break;
        }
        w.point[s.str()] = x;
    }
    return w;
}

}  // namespace

ZeroResult is_zero(const Expr& e, const SampleDomain& domain, const ZeroTestConfig& cfg) {
    ZeroResult res;
    if (e.is_literal_zero()) {
        res.kind = ZeroKind::Zero;
        res.structural = true;
        return res;
    }
    // A nonzero constant needs no sampling.
    if (e.is_number()) {
        res.kind = ZeroKind::NonZero;
        res.structural = true;
        res.witness = Witness{{}, e.value().to_double()};
        return res;
    }

    std::set<Symbol> syms = free_symbols(e);
    std::vector<Symbol> slots(syms.begin(), syms.end());
    const std::vector<Expr> terms =
        e.kind() == NodeKind::Sum ? e.children() : std::vector<Expr>{e};

    for (int k = 0; k < cfg.samples; ++k) {
        EvalPoint p = sample_point(slots, domain, cfg.seed, static_cast<std::uint64_t>(k));
        ++res.samples;
        try {
            double value = eval(e, p);
            double scale = 0.0;
            for (const Expr& term : terms) scale = std::max(scale, std::fabs(eval(term, p)));
            if (std::fabs(value) > cfg.tol_abs + cfg.tol_rel * scale) {
                res.kind = ZeroKind::NonZero;
                res.witness = make_witness(slots, p, value);
                return res;
            }
        } catch (const DomainError&) {
            ++res.domain_errors;
        }
    }
    if (res.domain_errors * 2 > res.samples) {
        res.kind = ZeroKind::Inconclusive;
        return res;
    }
    res.kind = ZeroKind::Zero;
    return res;
}

BoxScan min_abs_on_box(const Expr& e, const SampleDomain& domain, const ZeroTestConfig& cfg) {
    BoxScan scan;
    std::set<Symbol> syms = free_symbols(e);
    std::vector<Symbol> slots(syms.begin(), syms.end());
    for (int k = 0; k < cfg.samples; ++k) {
        EvalPoint p = sample_point(slots, domain, cfg.seed, static_cast<std::uint64_t>(k));
        ++scan.samples;
        try {
            double value = eval(e, p);
            if (!scan.argmin || std::fabs(value) < scan.min_abs) {
                scan.min_abs = std::fabs(value);
                scan.argmin = make_witness(slots, p, value);
            }
        } catch (const DomainError&) {
            ++scan.domain_errors;
        }
    }
    return scan;
}

const char* zero_kind_name(ZeroKind k) {
    switch (k) {
        case ZeroKind::Zero: return "Zero";
        case ZeroKind::NonZero: return "NonZero";
        case ZeroKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

}  // namespace lf
