#include "lf/solver.hpp"

#include <algorithm>
#include <set>

#include "lf/errors.hpp"

namespace lf {

AnsatzFamily::AnsatzFamily(int n) : n_(n) {
    if (n < 1 || n > kMaxDimension)
        throw DimensionMismatchError("ansatz dimension must be in [1, " +
                                     std::to_string(kMaxDimension) + "]");
}

void AnsatzFamily::add(int i, int j, const Expr& basis_element) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_) throw AnsatzError("ansatz entry index out of range");
    if (contains_kind(basis_element, SymbolKind::Accel))
        throw AnsatzError("ansatz elements must not contain accelerations");
    if (std::max(max_index(basis_element, SymbolKind::Coord),
                 max_index(basis_element, SymbolKind::Vel)) > n_)
        throw AnsatzError("ansatz element references index beyond n");
    entries_[{i, j}].push_back(basis_element);
    ++total_;
}

HessianCandidate AnsatzFamily::elementary(int u) const {
    int c = 0;
    for (const auto& [key, basis] : entries_) {
        for (const Expr& b : basis) {
            if (c == u) {
                HessianCandidate M(n_);
                M.set(key.first, key.second, b);
                return M;
            }
            ++c;
        }
    }
    throw AnsatzError("unknown index out of range");
}

HessianCandidate AnsatzFamily::assemble(const std::vector<Rational>& theta) const {
    if (static_cast<int>(theta.size()) != total_)
        throw AnsatzError("coefficient vector size mismatch");
    HessianCandidate M(n_);
    int c = 0;
    for (const auto& [key, basis] : entries_) {
        std::vector<Expr> terms;
        for (const Expr& b : basis) terms.push_back(Expr::number(theta[c++]) * b);
        M.set(key.first, key.second, Expr::sum(std::move(terms)));
    }
    return M;
}

std::string AnsatzFamily::unknown_label(int u) const {
    int c = 0;
    for (const auto& [key, basis] : entries_) {
        for (const Expr& b : basis) {
            if (c == u)
                return "M[" + std::to_string(key.first + 1) + "," +
                       std::to_string(key.second + 1) + "]:" + b.str();
            ++c;
        }
    }
    return "?";
}

namespace {

// One scalar residual, affine in the unknowns: constant + sum(coeff_u theta_u).
struct Functional {
    std::string label;
    std::vector<Expr> coeff;
    Expr constant = Expr::integer(0);
};

std::string idx_label(const char* tag, int i, int j, int k = 0) {
    std::string s = std::string(tag) + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1);
    if (k > 0) s += "," + std::to_string(k);
    return s + "]";
}

// H1, H2, H4 and the compatibility relation for every generator, evaluated on
// each elementary candidate. All of them are linear in M.
std::vector<Functional> method1_functionals(const DynamicalSystem& sys,
                                            const std::vector<SymmetryGenerator>& gens,
                                            const AnsatzFamily& ansatz) {
    const int n = sys.n;
    const int K = ansatz.unknowns();
    ExprMatrix A = a_matrix(sys);

    std::vector<Functional> fs;
    auto functional = [&](const std::string& label) -> Functional& {
        fs.push_back({label, std::vector<Expr>(K, Expr::integer(0)), Expr::integer(0)});
        return fs.back();
    };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) functional(idx_label("H1", i, j));
    const int h2_base = static_cast<int>(fs.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) functional(idx_label("H2", i, j));
    const int h4_base = static_cast<int>(fs.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) functional(idx_label("H4", i, j, k + 1));
    const int sym_base = static_cast<int>(fs.size());
    for (std::size_t g = 0; g < gens.size(); ++g)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                functional(idx_label(("SYM" + std::to_string(g + 1)).c_str(), i, j));

    for (int u = 0; u < K; ++u) {
        HessianCandidate E = ansatz.elementary(u);
        ExprMatrix h1 = h1_residual_matrix(E, sys);
        ExprMatrix h2 = h2_residual_matrix(E, sys, A);
        int f = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) fs[f++].coeff[u] = h1.at(i, j);
        f = h2_base;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) fs[f++].coeff[u] = h2.at(i, j);
        f = h4_base;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = j + 1; k < n; ++k)
                    fs[f++].coeff[u] = diff(E.at(i, j), Symbol::vel(k + 1)) -
                                       diff(E.at(i, k), Symbol::vel(j + 1));
        f = sym_base;
        for (const SymmetryGenerator& g : gens) {
            ExprMatrix R = compatibility_residual(E, g);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) fs[f++].coeff[u] = R.at(i, j);
        }
    }
    return fs;
}

std::vector<Symbol> collect_slots(const std::vector<Functional>& fs) {
    std::set<Symbol> syms;
    auto merge = [&syms](const Expr& e) {
        std::set<Symbol> s = free_symbols(e);
        syms.insert(s.begin(), s.end());
    };
    for (const Functional& f : fs) {
        for (const Expr& e : f.coeff) merge(e);
        merge(f.constant);
    }
    return std::vector<Symbol>(syms.begin(), syms.end());
}

Eigen::MatrixXd sample_rows(const std::vector<Functional>& fs, const SolverConfig& cfg,
                            int samples, int K, bool affine) {
    std::vector<Symbol> slots = collect_slots(fs);
    const int cols = K + (affine ? 1 : 0);
    std::vector<double> data;
    int kept = 0;
    for (int k = 0; k < samples; ++k) {
        EvalPoint p = sample_point(slots, cfg.domain, cfg.seed, static_cast<std::uint64_t>(k));
        for (const Functional& f : fs) {
            std::vector<double> row(cols, 0.0);
            bool ok = true;
            try {
                if (affine) row[0] = eval(f.constant, p);
                for (int u = 0; u < K; ++u) row[(affine ? 1 : 0) + u] = eval(f.coeff[u], p);
            } catch (const DomainError&) {
                ok = false;
            }
            if (ok) {
                data.insert(data.end(), row.begin(), row.end());
                ++kept;
            }
        }
    }
    if (kept < 2 * cols)
        throw Error("sampling produced too few valid rows; adjust the box or samples");
    Eigen::MatrixXd A(kept, cols);
    for (int r = 0; r < kept; ++r)
        for (int c = 0; c < cols; ++c) A(r, c) = data[static_cast<std::size_t>(r) * cols + c];
    return A;
}

int default_samples(const SolverConfig& cfg, int K) {
    return cfg.samples > 0 ? cfg.samples : std::max(4 * K, 64);
}

void check_ansatz_independence(const AnsatzFamily& ansatz, const SolverConfig& cfg) {
    const int K = ansatz.unknowns();
    std::vector<Functional> fs;
    int u0 = 0;
    for (const auto& [key, basis] : ansatz.entries()) {
        Functional f;
        f.label = idx_label("GRAM", key.first, key.second);
        f.coeff.assign(K, Expr::integer(0));
        for (std::size_t b = 0; b < basis.size(); ++b) f.coeff[u0 + b] = basis[b];
        u0 += static_cast<int>(basis.size());
        fs.push_back(std::move(f));
    }
    Eigen::MatrixXd B = sample_rows(fs, cfg, default_samples(cfg, K), K, false);
    NullspaceResult ns = nullspace(B, cfg.tol_rank);
    if (ns.rank != K)
        throw AnsatzError("ansatz basis is linearly dependent on the sample box (rank " +
                          std::to_string(ns.rank) + " of " + std::to_string(K) + ")");
}

SolutionFamily finalize_family(const DynamicalSystem& sys, const AnsatzFamily& ansatz,
                               const std::vector<Functional>& fs, const SolverConfig& cfg,
                               bool affine, const NullspaceResult& ns) {
    SolutionFamily fam;
    fam.seed = cfg.seed;
    fam.affine = affine;
    fam.singular_values = ns.singular_values;
    fam.rank_gap = ns.gap;
    fam.dimension = static_cast<int>(ns.basis.cols());
    fam.status = ns.ill_conditioned ? SolveStatus::IllConditioned : SolveStatus::Ok;
    if (fam.dimension == 0) {
        fam.status = SolveStatus::EmptySolution;
        return fam;
    }

    Eigen::MatrixXd R = rref_span(ns.basis.transpose(), 1e-9);
    fam.orthonormal_basis = orthonormal_columns(R);

    ZeroTestConfig verify_cfg = cfg.zero;
    verify_cfg.seed = splitmix64::at(cfg.seed, 7);  // fresh points for re-verification
    const int K = ansatz.unknowns();

    for (int r = 0; r < R.rows(); ++r) {
        if (R.row(r).cwiseAbs().maxCoeff() < 1e-12) continue;
        FamilyMember mem;
        Rational s_snap(1);
        if (affine) s_snap = snap_rational(R(r, 0));
        std::vector<Rational> theta(K, Rational(0));
        for (int u = 0; u < K; ++u) theta[u] = snap_rational(R(r, (affine ? 1 : 0) + u));
        mem.coefficients.reserve(K);
        mem.raw_coefficients.reserve(K);
        for (int u = 0; u < K; ++u) {
            mem.coefficients.push_back(theta[u].to_double());
            mem.raw_coefficients.push_back(R(r, (affine ? 1 : 0) + u));
        }
        mem.homogeneous = affine && s_snap.is_zero();
        if (affine && !mem.homogeneous) fam.has_particular = true;

        mem.M = ansatz.assemble(theta);
        mem.helmholtz = helmholtz_residuals(mem.M, sys, cfg.domain, verify_cfg);
        mem.degenerate = !mem.helmholtz.h5_pass;

        bool imposed_ok = true;
        for (const Functional& f : fs) {
            std::vector<Expr> terms{Expr::number(s_snap) * f.constant};
            for (int u = 0; u < K; ++u) terms.push_back(Expr::number(theta[u]) * f.coeff[u]);
            ZeroResult z = is_zero(Expr::sum(std::move(terms)), cfg.domain, verify_cfg);
            if (!z.is_zero()) imposed_ok = false;
            mem.imposed.push_back({f.label, std::move(z)});
        }
        mem.verified = imposed_ok && mem.helmholtz.first_failure() == nullptr;
        fam.members.push_back(std::move(mem));
    }
    if (affine && !fam.has_particular) fam.status = SolveStatus::EmptySolution;
    return fam;
}

}  // namespace

SolutionFamily method1(const DynamicalSystem& sys, const SymmetryGroupAction& G,
                       const AnsatzFamily& ansatz, const SolverConfig& cfg) {
    if (ansatz.dim() != sys.n) throw DimensionMismatchError("ansatz/system dimension mismatch");
    for (const SymmetryGenerator& g : G.generators)
        if (g.dim() != sys.n)
            throw DimensionMismatchError("generator/system dimension mismatch");
    SolutionFamily empty;
    empty.seed = cfg.seed;
    if (ansatz.unknowns() == 0) {
        empty.status = SolveStatus::EmptySolution;
        return empty;
    }
    check_ansatz_independence(ansatz, cfg);
    std::vector<Functional> fs = method1_functionals(sys, G.generators, ansatz);
    Eigen::MatrixXd A =
        sample_rows(fs, cfg, default_samples(cfg, ansatz.unknowns()), ansatz.unknowns(), false);
    NullspaceResult ns = nullspace(A, cfg.tol_rank);
    return finalize_family(sys, ansatz, fs, cfg, false, ns);
}

SolutionFamily method2(const DynamicalSystem& sys, const SymmetryGenerator& g,
                       const ConstantOfMotion& C, const AnsatzFamily& ansatz,
                       const SolverConfig& cfg) {
    if (ansatz.dim() != sys.n || g.dim() != sys.n)
        throw DimensionMismatchError("method2 dimension mismatch");
    SolutionFamily empty;
    empty.seed = cfg.seed;
    empty.affine = true;
    if (ansatz.unknowns() == 0) {
        empty.status = SolveStatus::EmptySolution;
        return empty;
    }
    check_ansatz_independence(ansatz, cfg);
    std::vector<SymmetryGenerator> gens{g};
    std::vector<Functional> fs = method1_functionals(sys, gens, ansatz);

    // dC/dv^i - M_ij dq^j = 0, affine in the unknowns through the dC/dv term.
    const int K = ansatz.unknowns();
    std::vector<Expr> dq = delta_q(g);
    for (int i = 0; i < sys.n; ++i) {
        Functional f;
        f.label = "CM[" + std::to_string(i + 1) + "]";
        f.constant = diff(C.C, Symbol::vel(i + 1));
        f.coeff.assign(K, Expr::integer(0));
        for (int u = 0; u < K; ++u) {
            HessianCandidate E = ansatz.elementary(u);
            std::vector<Expr> terms;
            for (int j = 0; j < sys.n; ++j) terms.push_back(-(E.at(i, j) * dq[j]));
            f.coeff[u] = Expr::sum(std::move(terms));
        }
        fs.push_back(std::move(f));
    }

    Eigen::MatrixXd A = sample_rows(fs, cfg, default_samples(cfg, K), K, true);
    NullspaceResult ns = nullspace(A, cfg.tol_rank);
    return finalize_family(sys, ansatz, fs, cfg, true, ns);
}

Method2Direct method2_direct(const DynamicalSystem& sys, const SymmetryGenerator& g,
                             const ConstantOfMotion& C, const SolverConfig& cfg) {
    if (sys.n != 1 || g.dim() != 1)
        throw DimensionMismatchError("the direct Method 2 formula needs n = 1");
    Expr dq = g.Q[0] - v_(1) * g.T;
    if (is_zero(dq, cfg.domain, cfg.zero).is_zero())
        throw DegenerateVariationError("delta q vanishes on the sample box");

    Method2Direct res;
    res.M = HessianCandidate(1);
    res.M.set(0, 0, diff(C.C, Symbol::vel(1)) / dq);
    res.helmholtz = helmholtz_residuals(res.M, sys, cfg.domain, cfg.zero);
    res.compatibility = is_zero(compatibility_residual(res.M, g).at(0, 0), cfg.domain, cfg.zero);
    res.exists = res.helmholtz.pass && res.compatibility.is_zero();
    if (!res.exists) {
        if (const LabeledVerdict* v = res.helmholtz.first_failure())
            res.failure = v->label + " violated";
        else if (!res.helmholtz.h5_pass)
            res.failure = "H5 violated (singular on box)";
        else
            res.failure = "symmetry compatibility violated";
    } else {
        try {
            ReconstructionConfig rc;
            rc.solver = cfg;
            res.lagrangian = reconstruct_lagrangian_1d(res.M, sys, rc);
        } catch (const Error&) {
            // Hessian outside the antiderivative table; M itself still stands.
        }
    }
    return res;
}

namespace {

// Splits an additive term of M_11 into u(q,t) * v1^k.
std::pair<Expr, Rational> split_velocity_power(const Expr& term) {
    auto is_v1 = [](const Expr& e) {
        return e.kind() == NodeKind::SymbolRef && e.symbol_ref() == Symbol::vel(1);
    };
    if (!contains_kind(term, SymbolKind::Vel)) return {term, Rational(0)};
    if (is_v1(term)) return {Expr::integer(1), Rational(1)};
    if (term.kind() == NodeKind::Power && is_v1(term.base()))
        return {Expr::integer(1), term.exponent()};
    if (term.kind() == NodeKind::Product) {
        Rational k(0);
        std::vector<Expr> rest;
        for (const Expr& f : term.children()) {
            if (is_v1(f)) {
                k = k + Rational(1);
            } else if (f.kind() == NodeKind::Power && is_v1(f.base())) {
                k = k + f.exponent();
            } else if (contains_kind(f, SymbolKind::Vel)) {
                throw UnsupportedClassError("M_11 term has non-power velocity dependence: " +
                                            term.str());
            } else {
                rest.push_back(f);
            }
        }
        return {Expr::product(std::move(rest)), k};
    }
    throw UnsupportedClassError("M_11 term outside the antiderivative table: " + term.str());
}

// Double antiderivative in v1 of v1^k.
Expr double_antiderivative(const Rational& k) {
    if (k == Rational(-1)) return v_(1) * Expr::ln(Expr::abs(v_(1))) - v_(1);
    if (k == Rational(-2)) return -Expr::ln(Expr::abs(v_(1)));
    Rational denom = (k + Rational(1)) * (k + Rational(2));
    return Expr::pow(v_(1), k + Rational(2)) / Expr::number(denom);
}

std::vector<Expr> default_completion_basis(const DynamicalSystem& sys) {
    std::set<std::string> params;
    for (const Expr& f : sys.f)
        for (const Symbol& s : free_symbols(f))
            if (s.kind == SymbolKind::Param) params.insert(s.name);
    std::vector<Expr> mults{Expr::integer(1)};
    for (const std::string& p : params) mults.push_back(Expr::exp(par_(p) * t_()));
    std::vector<Expr> basis;
    for (int d = 0; d <= 2; ++d)
        for (const Expr& m : mults) basis.push_back(Expr::pow(q_(1), Rational(d)) * m);
    return basis;
}

}  // namespace

Lagrangian reconstruct_lagrangian_1d(const HessianCandidate& M, const DynamicalSystem& sys,
                                     const ReconstructionConfig& cfg) {
    if (M.dim() != 1 || sys.n != 1)
        throw DimensionMismatchError("reconstruction implemented for n = 1");
    const Expr& m11 = M.at(0, 0);
    std::vector<Expr> terms =
        m11.kind() == NodeKind::Sum ? m11.children() : std::vector<Expr>{m11};
    std::vector<Expr> parts;
    for (const Expr& term : terms) {
        auto [u, k] = split_velocity_power(term);
        parts.push_back(u * double_antiderivative(k));
    }
    Expr L0 = Expr::sum(std::move(parts));

    std::vector<Expr> basis =
        cfg.completion_basis.empty() ? default_completion_basis(sys) : cfg.completion_basis;
    for (const Expr& b : basis)
        if (contains_kind(b, SymbolKind::Vel) || contains_kind(b, SymbolKind::Accel))
            throw AnsatzError("completion basis must contain (q,t) functions only");
    const int B = static_cast<int>(basis.size());
    const int K = 2 * B;

    // EL(L0 + a v1 + b) = EL(L0) - a_t + b_q, affine in the coefficients.
    Functional f;
    f.label = "EL[1]";
    f.constant = euler_lagrange_residual(Lagrangian(L0, cfg.solver.domain.params(), 1), sys)[0];
    f.coeff.reserve(K);
    for (const Expr& u : basis) f.coeff.push_back(-diff(u, Symbol::time()));
    for (const Expr& u : basis) f.coeff.push_back(diff(u, Symbol::coord(1)));
    std::vector<Functional> fs{std::move(f)};

    Eigen::MatrixXd A = sample_rows(fs, cfg.solver, default_samples(cfg.solver, K + 1), K, true);
    NullspaceResult ns = nullspace(A, cfg.solver.tol_rank);
    Eigen::MatrixXd R = rref_span(ns.basis.transpose(), 1e-9);

    int particular = -1;
    for (int r = 0; r < R.rows(); ++r) {
        if (std::fabs(R(r, 0)) > 0.5) {
            particular = r;
            break;
        }
    }
    if (particular < 0)
        throw NoCompletionError("no completion in the (q,t) basis; enlarge completion_basis");

    std::vector<Expr> lterms{L0};
    for (int j = 0; j < B; ++j) {
        Rational aj = snap_rational(R(particular, 1 + j));
        Rational bj = snap_rational(R(particular, 1 + B + j));
        if (!aj.is_zero()) lterms.push_back(Expr::number(aj) * basis[j] * v_(1));
        if (!bj.is_zero()) lterms.push_back(Expr::number(bj) * basis[j]);
    }
    Lagrangian L(Expr::sum(std::move(lterms)), cfg.solver.domain.params(), 1);

    ZeroTestConfig verify_cfg = cfg.solver.zero;
    verify_cfg.seed = splitmix64::at(cfg.solver.seed, 11);
    if (!is_zero(hessian_of(L).at(0, 0) - m11, cfg.solver.domain, verify_cfg).is_zero())
        throw NoCompletionError("reconstructed Lagrangian does not reproduce M");
    if (!is_zero(euler_lagrange_residual(L, sys)[0], cfg.solver.domain, verify_cfg).is_zero())
        throw NoCompletionError("reconstructed Lagrangian does not reproduce the motion");
    return L;
}

const char* solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Ok: return "Ok";
        case SolveStatus::EmptySolution: return "EmptySolution";
        case SolveStatus::IllConditioned: return "IllConditioned";
    }
    return "?";
}

}  // namespace lf
