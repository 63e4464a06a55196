#ifndef LF_PROBLEM_HPP
#define LF_PROBLEM_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lf/mechanics.hpp"
#include "lf/noether.hpp"
#include "lf/numeric.hpp"
#include "lf/solver.hpp"

namespace lf {

struct ProblemError : Error {
    using Error::Error;
};

struct NumericSection {
    double h = 1e-3;
    double t0 = 0.0;
    double t1 = 5.0;
    std::vector<double> q0;
    std::vector<double> v0;
    double drift_tol = 1e-7;
    std::optional<Expr> ft_t_map;
    std::vector<Expr> ft_q_maps;
    Expr ft_F = Expr::integer(0);
    std::vector<double> alphas{1e-2, 1e-3, 1e-4};
    double min_slope = 1.9;
};

struct SolverSection {
    int samples = 0;
    std::optional<std::uint64_t> seed;
    double tol_rank = 1e-8;
};

// Declarative problem description; see docs/problem-format.md for the schema.
struct ProblemFile {
    std::string path;
    std::string hash;  // fnv1a-64 of the raw bytes
    int version = 1;
    int n = 1;
    std::vector<Expr> f;
    std::map<std::string, double> params;
    std::map<std::string, Interval> box;
    std::optional<Expr> lagrangian;
    std::optional<Expr> reference_lagrangian;
    std::optional<std::vector<std::vector<Expr>>> hessian;
    std::vector<SymmetryGenerator> generators;
    std::optional<Expr> constant_of_motion;
    std::map<std::pair<int, int>, std::vector<Expr>> ansatz_entries;  // 0-based keys
    std::vector<Expr> completion_basis;
    SolverSection solver;
    std::optional<NumericSection> numeric;
    std::vector<std::string> tasks;

    DynamicalSystem system() const { return DynamicalSystem(n, f); }
    SampleDomain domain() const;
    HessianCandidate hessian_candidate() const;  // throws if absent/asymmetric
    AnsatzFamily ansatz() const;                 // throws if absent
};

ProblemFile load_problem(const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace lf

#endif
