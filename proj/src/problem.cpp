#include "lf/problem.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lf/parser.hpp"

namespace lf {

using nlohmann::json;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

Expr parse_field(const json& j, const std::string& field, int n) {
    if (!j.is_string())
        throw ProblemError("field '" + field + "' must be an expression string");
    try {
        return parse(j.get<std::string>(), n);
    } catch (const SyntaxError& e) {
        throw ProblemError("field '" + field + "': " + e.what());
    }
}

Interval parse_interval(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ProblemError("box entry '" + field + "' must be [lo, hi]");
    Interval iv{j[0].get<double>(), j[1].get<double>()};
    if (iv.lo > iv.hi) throw ProblemError("box entry '" + field + "' has lo > hi");
    return iv;
}

std::vector<double> parse_reals(const json& j, const std::string& field) {
    if (!j.is_array()) throw ProblemError("field '" + field + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) {
        if (!x.is_number()) throw ProblemError("field '" + field + "' must be numeric");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

SampleDomain ProblemFile::domain() const {
    SampleDomain d(params);
    for (const auto& [key, iv] : box) d.set_range(key, iv);
    return d;
}

HessianCandidate ProblemFile::hessian_candidate() const {
    if (!hessian) throw ProblemError("problem file declares no hessian");
    HessianCandidate M(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            if ((*hessian)[i][j] != (*hessian)[j][i])
                throw ProblemError("hessian entries (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ") are not symmetric");
            M.set(i, j, (*hessian)[i][j]);
        }
    return M;
}

AnsatzFamily ProblemFile::ansatz() const {
    if (ansatz_entries.empty()) throw ProblemError("problem file declares no ansatz");
    AnsatzFamily a(n);
    for (const auto& [key, basis] : ansatz_entries)
        for (const Expr& b : basis) a.add(key.first, key.second, b);
    return a;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ProblemError("cannot open problem file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();

    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ProblemError("problem file is not valid JSON: " + std::string(e.what()));
    }

    ProblemFile pf;
    pf.path = path;
    pf.hash = fnv1a_hex(bytes);
    pf.version = doc.value("version", 1);
    if (pf.version != 1) throw ProblemError("unsupported problem file version");

    if (!doc.contains("system") || !doc["system"].contains("n") ||
        !doc["system"].contains("f"))
        throw ProblemError("problem file needs system.n and system.f");
    pf.n = doc["system"]["n"].get<int>();
    if (pf.n < 1 || pf.n > kMaxDimension) throw ProblemError("system.n out of range");
    for (std::size_t i = 0; i < doc["system"]["f"].size(); ++i)
        pf.f.push_back(parse_field(doc["system"]["f"][i], "system.f[" + std::to_string(i) + "]",
                                   pf.n));
    if (static_cast<int>(pf.f.size()) != pf.n)
        throw ProblemError("system.f must list exactly n expressions");

    if (doc.contains("params"))
        for (auto& [k, v] : doc["params"].items()) {
            if (!v.is_number()) throw ProblemError("params." + k + " must be numeric");
            pf.params[k] = v.get<double>();
        }
    if (doc.contains("box"))
        for (auto& [k, v] : doc["box"].items()) pf.box[k] = parse_interval(v, k);

    if (doc.contains("lagrangian"))
        pf.lagrangian = parse_field(doc["lagrangian"], "lagrangian", pf.n);
    if (doc.contains("reference_lagrangian"))
        pf.reference_lagrangian =
            parse_field(doc["reference_lagrangian"], "reference_lagrangian", pf.n);

    if (doc.contains("hessian")) {
        const json& h = doc["hessian"];
        if (!h.is_array() || static_cast<int>(h.size()) != pf.n)
            throw ProblemError("hessian must be an n x n matrix of expression strings");
        std::vector<std::vector<Expr>> M;
        for (int i = 0; i < pf.n; ++i) {
            if (!h[i].is_array() || static_cast<int>(h[i].size()) != pf.n)
                throw ProblemError("hessian must be an n x n matrix of expression strings");
            std::vector<Expr> row;
            for (int j = 0; j < pf.n; ++j)
                row.push_back(parse_field(h[i][j], "hessian[" + std::to_string(i) + "][" +
                                                       std::to_string(j) + "]",
                                          pf.n));
            M.push_back(std::move(row));
        }
        pf.hessian = std::move(M);
    }

    if (doc.contains("symmetry")) {
        if (!doc["symmetry"].contains("generators"))
            throw ProblemError("symmetry needs a generators list");
        for (const auto& g : doc["symmetry"]["generators"]) {
            Expr T = g.contains("T") ? parse_field(g["T"], "symmetry.T", pf.n) : Expr::integer(0);
            Expr F = g.contains("F") ? parse_field(g["F"], "symmetry.F", pf.n) : Expr::integer(0);
            if (!g.contains("Q") || !g["Q"].is_array() ||
                static_cast<int>(g["Q"].size()) != pf.n)
                throw ProblemError("symmetry.Q must list n expressions");
            std::vector<Expr> Q;
            for (const auto& qi : g["Q"]) Q.push_back(parse_field(qi, "symmetry.Q", pf.n));
            try {
                pf.generators.emplace_back(T, std::move(Q), F);
            } catch (const DimensionMismatchError& e) {
                throw ProblemError(std::string("symmetry generator: ") + e.what());
            }
        }
    }

    if (doc.contains("constant_of_motion"))
        pf.constant_of_motion =
            parse_field(doc["constant_of_motion"], "constant_of_motion", pf.n);

    if (doc.contains("ansatz")) {
        const json& a = doc["ansatz"];
        if (a.contains("entries"))
            for (auto& [key, list] : a["entries"].items()) {
                int i = 0, j = 0;
                if (std::sscanf(key.c_str(), "%d,%d", &i, &j) != 2 || i < 1 || j < 1 ||
                    i > pf.n || j > pf.n)
                    throw ProblemError("ansatz entry key '" + key + "' must be \"i,j\" in 1..n");
                if (i > j) std::swap(i, j);
                std::vector<Expr>& basis = pf.ansatz_entries[{i - 1, j - 1}];
                for (const auto& b : list)
                    basis.push_back(parse_field(b, "ansatz." + key, pf.n));
            }
        if (a.contains("completion_basis"))
            for (const auto& b : a["completion_basis"])
                pf.completion_basis.push_back(parse_field(b, "ansatz.completion_basis", pf.n));
    }

    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        pf.solver.samples = s.value("samples", 0);
        if (s.contains("seed")) pf.solver.seed = s["seed"].get<std::uint64_t>();
        pf.solver.tol_rank = s.value("tol_rank", 1e-8);
    }

    if (doc.contains("numeric")) {
        const json& m = doc["numeric"];
        NumericSection num;
        num.h = m.value("h", 1e-3);
        num.t0 = m.value("t0", 0.0);
        num.t1 = m.value("t1", 5.0);
        if (m.contains("q0")) num.q0 = parse_reals(m["q0"], "numeric.q0");
        if (m.contains("v0")) num.v0 = parse_reals(m["v0"], "numeric.v0");
        if (static_cast<int>(num.q0.size()) != pf.n || static_cast<int>(num.v0.size()) != pf.n)
            throw ProblemError("numeric.q0/v0 must list n values");
        num.drift_tol = m.value("drift_tol", 1e-7);
        if (m.contains("finite_transformation")) {
            const json& ft = m["finite_transformation"];
            if (!ft.contains("t_map") || !ft.contains("q_maps"))
                throw ProblemError("finite_transformation needs t_map and q_maps");
            num.ft_t_map = parse_field(ft["t_map"], "finite_transformation.t_map", pf.n);
            for (const auto& qm : ft["q_maps"])
                num.ft_q_maps.push_back(parse_field(qm, "finite_transformation.q_maps", pf.n));
            if (static_cast<int>(num.ft_q_maps.size()) != pf.n)
                throw ProblemError("finite_transformation.q_maps must list n expressions");
            if (ft.contains("F"))
                num.ft_F = parse_field(ft["F"], "finite_transformation.F", pf.n);
            if (ft.contains("alphas")) num.alphas = parse_reals(ft["alphas"], "alphas");
            num.min_slope = ft.value("min_slope", 1.9);
        }
        pf.numeric = num;
    }

    if (doc.contains("tasks"))
        for (const auto& t : doc["tasks"]) pf.tasks.push_back(t.get<std::string>());

    return pf;
}

}  // namespace lf
