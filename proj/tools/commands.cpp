#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lf/errors.hpp"

namespace lf::cli {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string verdict_line(const std::string& label, const ZeroResult& z) {
    std::string s = z.is_zero() ? "[PASS] " : "[FAIL] ";
    if (z.kind == ZeroKind::Inconclusive) s = "[WARN] ";
    s += label + ": " + zero_kind_name(z.kind);
    if (z.structural) s += " (structural)";
    if (z.witness) s += ", witness value " + fmt(z.witness->value);
    return s + "\n";
}

std::string flag_line(const std::string& label, bool pass, const std::string& detail = "") {
    std::string s = pass ? "[PASS] " : "[FAIL] ";
    s += label;
    if (!detail.empty()) s += ": " + detail;
    return s + "\n";
}

std::string header_text(const std::string& command, const ProblemFile& pf,
                        const RunOptions& opts) {
    std::string s = std::string(kToolVersion) + " - " + command + "\n";
    s += "input: " + pf.path + " (fnv1a:" + pf.hash + ")\n";
    s += "seed " + std::to_string(opts.seed) + ", zero test: " +
         std::to_string(opts.zero.samples) + " samples, tol_abs " + fmt(opts.zero.tol_abs) +
         ", tol_rel " + fmt(opts.zero.tol_rel) + "\n\n";
    return s;
}

SolverConfig solver_config(const ProblemFile& pf, const RunOptions& opts) {
    SolverConfig cfg;
    cfg.samples = opts.samples_override > 0 ? opts.samples_override : pf.solver.samples;
    cfg.seed = (!opts.seed_from_cli && pf.solver.seed) ? *pf.solver.seed : opts.seed;
    cfg.tol_rank = pf.solver.tol_rank;
    cfg.domain = pf.domain();
    cfg.zero = opts.zero;
    cfg.zero.seed = cfg.seed;
    return cfg;
}

Lagrangian problem_lagrangian(const ProblemFile& pf) {
    if (!pf.lagrangian) throw ProblemError("this command needs a 'lagrangian' field");
    return Lagrangian(*pf.lagrangian, pf.params, pf.n);
}

std::string family_text(const SolutionFamily& fam) {
    std::string s;
    s += "status: " + std::string(solve_status_name(fam.status)) +
         ", kernel dimension " + std::to_string(fam.dimension) + "\n";
    if (fam.affine)
        s += std::string("constant-of-motion scale realized: ") +
             (fam.has_particular ? "yes" : "no") + "\n";
    int idx = 0;
    for (const FamilyMember& m : fam.members) {
        s += "member " + std::to_string(++idx);
        if (m.homogeneous) s += " (homogeneous)";
        s += ":\n";
        for (int i = 0; i < m.M.dim(); ++i)
            for (int j = i; j < m.M.dim(); ++j)
                s += "  M[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                     "] = " + m.M.at(i, j).str() + "\n";
        s += flag_line("  re-verification", m.verified);
        if (m.degenerate) s += "  note: degenerate on the box (H5 fails)\n";
    }
    return s;
}

}  // namespace

int cmd_verify_lagrangian(const ProblemFile& pf, const RunOptions& opts) {
    Lagrangian L = problem_lagrangian(pf);
    DynamicalSystem sys = pf.system();
    SampleDomain dom = pf.domain();

    OrderedJson doc = report_header("verify-lagrangian", pf, opts);
    std::string text = header_text("verify-lagrangian", pf, opts);
    bool pass = true;

    std::vector<Expr> el = euler_lagrange_residual(L, sys);
    OrderedJson el_arr = OrderedJson::array();
    for (int i = 0; i < sys.n; ++i) {
        ZeroResult z = is_zero(el[i], dom, opts.zero);
        pass = pass && z.is_zero();
        std::string label = "EL[" + std::to_string(i + 1) + "]";
        OrderedJson j = verdict_json(z);
        j["check"] = label;
        j["residual"] = el[i].str();
        el_arr.push_back(std::move(j));
        text += verdict_line(label + " residual", z);
    }
    doc["euler_lagrange"] = el_arr;

    HessianCandidate M = hessian_of(L);
    OrderedJson hj = OrderedJson::object();
    for (int i = 0; i < M.dim(); ++i)
        for (int j = i; j < M.dim(); ++j) {
            std::string key = "M[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
            hj[key] = M.at(i, j).str();
            text += "hessian " + key + " = " + M.at(i, j).str() + "\n";
        }
    doc["hessian"] = hj;

    HelmholtzReport rep = helmholtz_residuals(M, sys, dom, opts.zero);
    doc["helmholtz"] = helmholtz_json(rep);
    for (const auto* grp : {&rep.h1, &rep.h2, &rep.h3, &rep.h4})
        for (const LabeledVerdict& v : *grp) text += verdict_line(v.label, v.result);
    text += flag_line("H5 regularity", rep.h5_pass,
                      "min |det M| = " + fmt(rep.h5_scan.min_abs) + " over " +
                          std::to_string(rep.h5_scan.samples) + " samples");
    text += verdict_line("det relation", rep.det_relation);
    pass = pass && rep.pass;

    doc["overall"] = pass ? "pass" : "fail";
    text += std::string("overall: ") + (pass ? "PASS" : "FAIL") + "\n";
    emit_report(doc, text, opts);
    return pass ? 0 : 1;
}

int cmd_noether(const ProblemFile& pf, const RunOptions& opts) {
    Lagrangian L = problem_lagrangian(pf);
    if (pf.generators.empty()) throw ProblemError("this command needs a symmetry generator");
    DynamicalSystem sys = pf.system();
    SampleDomain dom = pf.domain();

    OrderedJson doc = report_header("noether", pf, opts);
    std::string text = header_text("noether", pf, opts);
    bool pass = true;

    HessianCandidate M = hessian_of(L);
    OrderedJson gens = OrderedJson::array();
    for (std::size_t a = 0; a < pf.generators.size(); ++a) {
        const SymmetryGenerator& g = pf.generators[a];
        OrderedJson gj;
        std::string tag = "generator " + std::to_string(a + 1);
        text += tag + ": T = " + g.T.str() + ", Q = [";
        for (int i = 0; i < g.dim(); ++i) text += (i ? ", " : "") + g.Q[i].str();
        text += "], F = " + g.F.str() + "\n";

        NoetherConstantResult nc = noether_constant(L, g, opts.zero);
        gj["identity"] = verdict_json(nc.identity);
        gj["not_a_symmetry"] = nc.not_a_symmetry();
        gj["constant_of_motion"] = nc.constant.C.str();
        text += verdict_line("Noether identity", nc.identity);
        if (nc.not_a_symmetry()) text += "[FAIL] flagged NotASymmetry\n";
        text += "constant of motion: " + nc.constant.C.str() + "\n";
        pass = pass && !nc.not_a_symmetry();

        ZeroResult conserved = is_zero(total_time_derivative(nc.constant.C, sys), dom, opts.zero);
        gj["conserved_on_shell"] = verdict_json(conserved);
        text += verdict_line("dC/dt along the motion", conserved);
        pass = pass && conserved.is_zero();

        BoundaryTermResult bt = boundary_term(L, M, nc.constant, opts.zero);
        ZeroResult bmatch = is_zero(bt.F - g.F, dom, opts.zero);
        gj["boundary_term"] = bt.F.str();
        gj["boundary_term_consistent"] = bt.consistent;
        gj["boundary_term_matches"] = verdict_json(bmatch);
        text += verdict_line("boundary term cross-check", bmatch);
        pass = pass && bmatch.is_zero() && bt.consistent;

        std::vector<LabeledVerdict> relations;
        std::vector<Expr> dqr = delta_q_relation_residual(M, nc.constant, g);
        for (int i = 0; i < sys.n; ++i)
            relations.push_back({"dC/dv = M dq [" + std::to_string(i + 1) + "]",
                                 is_zero(dqr[i], dom, opts.zero)});
        ExprMatrix compat = compatibility_residual(M, g);
        ExprMatrix compat_d = compatibility_residual_delta_form(M, g);
        for (int i = 0; i < sys.n; ++i)
            for (int j = i; j < sys.n; ++j) {
                std::string ij = "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
                relations.push_back({"compatibility " + ij,
                                     is_zero(compat.at(i, j), dom, opts.zero)});
                relations.push_back({"compatibility (delta form) " + ij,
                                     is_zero(compat_d.at(i, j), dom, opts.zero)});
            }
        for (const LabeledVerdict& v : relations) {
            text += verdict_line(v.label, v.result);
            pass = pass && v.result.is_zero();
        }
        gj["relations"] = labeled_verdicts_json(relations);
        gens.push_back(std::move(gj));
    }
    doc["generators"] = gens;

    doc["overall"] = pass ? "pass" : "fail";
    text += std::string("overall: ") + (pass ? "PASS" : "FAIL") + "\n";
    emit_report(doc, text, opts);
    return pass ? 0 : 1;
}

int cmd_method1(const ProblemFile& pf, const RunOptions& opts) {
    if (pf.generators.empty()) throw ProblemError("method1 needs a symmetry generator");
    if (pf.ansatz_entries.empty()) throw ProblemError("method1 needs an ansatz");
    DynamicalSystem sys = pf.system();
    SolverConfig cfg = solver_config(pf, opts);

    OrderedJson doc = report_header("method1", pf, opts);
    std::string text = header_text("method1", pf, opts);

    SolutionFamily fam = method1(sys, SymmetryGroupAction{pf.generators}, pf.ansatz(), cfg);
    doc["family"] = family_json(fam);
    text += family_text(fam);

    bool pass = fam.status == SolveStatus::Ok && fam.dimension > 0;
    for (const FamilyMember& m : fam.members) pass = pass && m.verified;
    doc["overall"] = pass ? "pass" : "fail";
    text += std::string("overall: ") + (pass ? "PASS" : "FAIL") + "\n";
    emit_report(doc, text, opts);
    return pass ? 0 : 1;
}

int cmd_method2(const ProblemFile& pf, const RunOptions& opts) {
    if (pf.generators.empty()) throw ProblemError("method2 needs a symmetry generator");
    if (!pf.constant_of_motion) throw ProblemError("method2 needs a constant_of_motion");
    DynamicalSystem sys = pf.system();
    SolverConfig cfg = solver_config(pf, opts);
    ConstantOfMotion C{*pf.constant_of_motion};

    OrderedJson doc = report_header("method2", pf, opts);
    std::string text = header_text("method2", pf, opts);
    bool pass = false;

    if (pf.ansatz_entries.empty() && sys.n == 1) {
        doc["mode"] = "direct";
        try {
            Method2Direct r = method2_direct(sys, pf.generators.front(), C, cfg);
            doc["hessian"] = OrderedJson{{"M[1,1]", r.M.at(0, 0).str()}};
            doc["helmholtz"] = helmholtz_json(r.helmholtz);
            doc["compatibility"] = verdict_json(r.compatibility);
            doc["exists"] = r.exists;
            text += "M[1,1] = " + r.M.at(0, 0).str() + "\n";
            for (const auto* grp : {&r.helmholtz.h1, &r.helmholtz.h2, &r.helmholtz.h3,
                                    &r.helmholtz.h4})
                for (const LabeledVerdict& v : *grp) text += verdict_line(v.label, v.result);
            text += flag_line("H5 regularity", r.helmholtz.h5_pass,
                              "min |det M| = " + fmt(r.helmholtz.h5_scan.min_abs));
            text += verdict_line("symmetry compatibility", r.compatibility);
            if (r.exists) {
                text += "verdict: Exists\n";
                if (r.lagrangian) {
                    doc["lagrangian"] = r.lagrangian->L.str();
                    text += "lagrangian: " + r.lagrangian->L.str() + "\n";
                }
            } else {
                doc["failure"] = r.failure;
                text += "verdict: NoLagrangian (" + r.failure + ")\n";
            }
            pass = r.exists;
        } catch (const DegenerateVariationError& e) {
            doc["failure"] = e.what();
            text += std::string("[FAIL] ") + e.what() + "\n";
        }
    } else {
        doc["mode"] = "ansatz";
        SolutionFamily fam = method2(sys, pf.generators.front(), C, pf.ansatz(), cfg);
        doc["family"] = family_json(fam);
        text += family_text(fam);
        pass = fam.status == SolveStatus::Ok && fam.has_particular;
        for (const FamilyMember& m : fam.members) pass = pass && m.verified;
    }

    doc["overall"] = pass ? "pass" : "fail";
    text += std::string("overall: ") + (pass ? "PASS" : "FAIL") + "\n";
    emit_report(doc, text, opts);
    return pass ? 0 : 1;
}

int cmd_reconstruct(const ProblemFile& pf, const RunOptions& opts) {
    HessianCandidate M = pf.hessian_candidate();
    DynamicalSystem sys = pf.system();
    ReconstructionConfig rc;
    rc.completion_basis = pf.completion_basis;
    rc.solver = solver_config(pf, opts);

    OrderedJson doc = report_header("reconstruct", pf, opts);
    std::string text = header_text("reconstruct", pf, opts);
    bool pass = true;

    try {
        Lagrangian L = reconstruct_lagrangian_1d(M, sys, rc);
        doc["lagrangian"] = L.L.str();
        text += "lagrangian: " + L.L.str() + "\n";

        SampleDomain dom = pf.domain();
        ZeroResult hess_rt = is_zero(hessian_of(L).at(0, 0) - M.at(0, 0), dom, opts.zero);
        ZeroResult el = is_zero(euler_lagrange_residual(L, sys)[0], dom, opts.zero);
        doc["hessian_round_trip"] = verdict_json(hess_rt);
        doc["euler_lagrange"] = verdict_json(el);
        text += verdict_line("hessian round-trip", hess_rt);
        text += verdict_line("EL residual", el);
        pass = hess_rt.is_zero() && el.is_zero();

        if (pf.reference_lagrangian) {
            bool eq = equivalent_mod_total_derivative(
                L, Lagrangian(*pf.reference_lagrangian, pf.params, pf.n), opts.zero);
            doc["matches_reference_mod_total_derivative"] = eq;
            text += flag_line("matches reference modulo total derivative", eq);
            pass = pass && eq;
        }
    } catch (const UnsupportedClassError& e) {
        doc["failure"] = e.what();
        text += std::string("[FAIL] ") + e.what() + "\n";
        pass = false;
    } catch (const NoCompletionError& e) {
        doc["failure"] = e.what();
        text += std::string("[FAIL] ") + e.what() + "\n";
        pass = false;
    }

    doc["overall"] = pass ? "pass" : "fail";
    text += std::string("overall: ") + (pass ? "PASS" : "FAIL") + "\n";
    emit_report(doc, text, opts);
    return pass ? 0 : 1;
}

int cmd_simulate(const ProblemFile& pf, const RunOptions& opts, const std::string& csv_path) {
    if (!pf.numeric) throw ProblemError("simulate needs a 'numeric' section");
    const NumericSection& num = *pf.numeric;
    DynamicalSystem sys = pf.system();

    OrderedJson doc = report_header("simulate", pf, opts);
    std::string text = header_text("simulate", pf, opts);
    bool pass = true;

    Trajectory traj = integrate(sys, num.q0, num.v0, num.t0, num.t1, num.h, pf.params);
    OrderedJson integ;
    integ["method"] = traj.method;
    integ["h"] = traj.h;
    integ["steps"] = traj.size() - 1;
    OrderedJson endstate;
    endstate["t"] = traj.times.back();
    endstate["q"] = traj.q.back();
    endstate["v"] = traj.v.back();
    integ["end_state"] = endstate;
    doc["integration"] = integ;
    text += "integrated " + std::to_string(traj.size() - 1) + " RK4 steps, h = " + fmt(traj.h) +
            ", t in [" + fmt(num.t0) + ", " + fmt(traj.times.back()) + "]\n";

    if (pf.constant_of_motion) {
        double drift = conservation_drift({*pf.constant_of_motion}, traj);
        bool ok = drift <= num.drift_tol;
        doc["conservation"] = OrderedJson{{"constant", pf.constant_of_motion->str()},
                                          {"max_rel_drift", drift},
                                          {"tolerance", num.drift_tol},
                                          {"pass", ok}};
        text += flag_line("conservation drift", ok,
                          "max " + fmt(drift) + " vs tol " + fmt(num.drift_tol));
        pass = pass && ok;
    }

    if (pf.lagrangian) {
        Lagrangian L = problem_lagrangian(pf);
        ActionResult act = action(L, traj);
        doc["action"] = OrderedJson{{"value", act.value},
                                    {"odd_interval_adjustment", act.odd_interval_adjustment}};
        text += "action along the trajectory: " + fmt(act.value) + "\n";
        if (num.ft_t_map) {
            FiniteTransformation ft(*num.ft_t_map, num.ft_q_maps, pf.params);
            VariationCheck chk = action_variation_check(L, ft, num.ft_F, traj, num.alphas);
            doc["action_variation"] = variation_json(chk);
            bool ok = chk.order_at_least(num.min_slope);
            std::string detail = chk.exact ? "exact to round-off"
                                           : "log-log slope " + fmt(chk.slope);
            text += flag_line("first-order action invariance", ok, detail);
            pass = pass && ok;
        }
    }

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw Error("cannot write CSV to '" + csv_path + "'");
        csv << traj.to_csv();
        doc["csv"] = csv_path;
        text += "trajectory written to " + csv_path + "\n";
    }

    doc["overall"] = pass ? "pass" : "fail";
    text += std::string("overall: ") + (pass ? "PASS" : "FAIL") + "\n";
    emit_report(doc, text, opts);
    return pass ? 0 : 1;
}

int run_task(const std::string& task, const ProblemFile& pf, const RunOptions& opts) {
    if (task == "verify-lagrangian") return cmd_verify_lagrangian(pf, opts);
    if (task == "noether") return cmd_noether(pf, opts);
    if (task == "method1") return cmd_method1(pf, opts);
    if (task == "method2") return cmd_method2(pf, opts);
    if (task == "reconstruct") return cmd_reconstruct(pf, opts);
    if (task == "simulate") return cmd_simulate(pf, opts, "");
    throw ProblemError("unknown task '" + task + "'");
}

int cmd_corpus(const std::string& dir, const RunOptions& opts) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path().string());
    }
    if (ec) throw ProblemError("cannot read corpus directory '" + dir + "'");
    if (files.empty()) throw ProblemError("corpus directory '" + dir + "' has no problem files");
    std::sort(files.begin(), files.end());

    OrderedJson doc;
    doc["tool"] = kToolVersion;
    doc["command"] = "corpus";
    doc["directory"] = dir;
    doc["seed"] = opts.seed;
    OrderedJson runs = OrderedJson::array();
    std::string text = std::string(kToolVersion) + " - corpus run of " + dir + "\n\n";

    RunOptions task_opts = opts;
    task_opts.quiet = true;
    task_opts.out_path.clear();

    int passed = 0, total = 0;
    bool input_error = false;
    for (const std::string& file : files) {
        try {
            ProblemFile pf = load_problem(file);
            if (pf.tasks.empty()) throw ProblemError("corpus file lists no tasks");
            for (const std::string& task : pf.tasks) {
                int code = run_task(task, pf, task_opts);
                ++total;
                if (code == 0) ++passed;
                OrderedJson r;
                r["file"] = fs::path(file).filename().string();
                r["task"] = task;
                r["exit"] = code;
                r["pass"] = code == 0;
                runs.push_back(std::move(r));
                text += flag_line(fs::path(file).filename().string() + " :: " + task, code == 0);
            }
        } catch (const ProblemError& e) {
            input_error = true;
            OrderedJson r;
            r["file"] = fs::path(file).filename().string();
            r["error"] = e.what();
            runs.push_back(std::move(r));
            text += "[FAIL] " + fs::path(file).filename().string() + " :: " + e.what() + "\n";
        }
    }
    doc["runs"] = runs;
    doc["passed"] = passed;
    doc["total"] = total;
    text += "\ncorpus: " + std::to_string(passed) + "/" + std::to_string(total) + " passed\n";
    bool pass = !input_error && passed == total && total > 0;
    doc["overall"] = pass ? "pass" : "fail";
    emit_report(doc, text, opts);
    if (input_error) return 2;
    return pass ? 0 : 1;
}

}  // namespace lf::cli
