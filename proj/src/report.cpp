#include "lf/report.hpp"

#include <fstream>
#include <iostream>

namespace lf {

OrderedJson verdict_json(const ZeroResult& z) {
    OrderedJson j;
    j["verdict"] = zero_kind_name(z.kind);
    j["structural"] = z.structural;
    j["samples"] = z.samples;
    j["domain_errors"] = z.domain_errors;
    if (z.witness) {
        OrderedJson w;
        w["value"] = z.witness->value;
        w["point"] = OrderedJson::object();
        for (const auto& [k, v] : z.witness->point) w["point"][k] = v;
        j["witness"] = w;
    }
    return j;
}

OrderedJson labeled_verdicts_json(const std::vector<LabeledVerdict>& vs) {
    OrderedJson arr = OrderedJson::array();
    for (const LabeledVerdict& v : vs) {
        OrderedJson j = verdict_json(v.result);
        j["check"] = v.label;
        arr.push_back(std::move(j));
    }
    return arr;
}

OrderedJson helmholtz_json(const HelmholtzReport& rep) {
    OrderedJson j;
    j["pass"] = rep.pass;
    j["h1"] = labeled_verdicts_json(rep.h1);
    j["h2"] = labeled_verdicts_json(rep.h2);
    j["h3"] = labeled_verdicts_json(rep.h3);
    j["h4"] = labeled_verdicts_json(rep.h4);
    OrderedJson h5;
    h5["pass"] = rep.h5_pass;
    h5["min_abs_det"] = rep.h5_scan.min_abs;
    h5["samples"] = rep.h5_scan.samples;
    h5["domain_errors"] = rep.h5_scan.domain_errors;
    j["h5"] = h5;
    j["det_relation"] = verdict_json(rep.det_relation);
    return j;
}

OrderedJson family_json(const SolutionFamily& fam) {
    OrderedJson j;
    j["status"] = solve_status_name(fam.status);
    j["dimension"] = fam.dimension;
    j["seed"] = fam.seed;
    j["rank_gap"] = fam.rank_gap;
    j["singular_values"] = fam.singular_values;
    if (fam.affine) j["has_particular"] = fam.has_particular;
    OrderedJson members = OrderedJson::array();
    for (const FamilyMember& m : fam.members) {
        OrderedJson mj;
        mj["coefficients"] = m.coefficients;
        OrderedJson entries = OrderedJson::object();
        for (int i = 0; i < m.M.dim(); ++i)
            for (int k = i; k < m.M.dim(); ++k)
                entries["M[" + std::to_string(i + 1) + "," + std::to_string(k + 1) + "]"] =
                    m.M.at(i, k).str();
        mj["hessian"] = entries;
        mj["verified"] = m.verified;
        mj["degenerate"] = m.degenerate;
        if (fam.affine) mj["homogeneous"] = m.homogeneous;
        mj["helmholtz"] = helmholtz_json(m.helmholtz);
        mj["imposed"] = labeled_verdicts_json(m.imposed);
        members.push_back(std::move(mj));
    }
    j["members"] = members;
    return j;
}

OrderedJson variation_json(const VariationCheck& chk) {
    OrderedJson j;
    j["base_action"] = chk.base_action;
    j["floor"] = chk.floor;
    j["exact"] = chk.exact;
    if (!chk.exact) j["slope"] = chk.slope;
    OrderedJson arr = OrderedJson::array();
    for (const auto& s : chk.samples) {
        OrderedJson sj;
        sj["alpha"] = s.alpha;
        sj["deviation"] = s.deviation;
        sj["significant"] = s.significant;
        arr.push_back(std::move(sj));
    }
    j["samples"] = arr;
    return j;
}

OrderedJson report_header(const std::string& command, const ProblemFile& pf,
                          const RunOptions& opts) {
    OrderedJson j;
    j["tool"] = kToolVersion;
    j["command"] = command;
    OrderedJson input;
    input["path"] = pf.path;
    input["hash"] = "fnv1a:" + pf.hash;
    j["input"] = input;
    j["seed"] = opts.seed;
    OrderedJson tol;
    tol["zero_abs"] = opts.zero.tol_abs;
    tol["zero_rel"] = opts.zero.tol_rel;
    tol["zero_samples"] = opts.zero.samples;
    j["tolerances"] = tol;
    return j;
}

void emit_report(const OrderedJson& doc, const std::string& text, const RunOptions& opts) {
    std::string payload;
    if (opts.format == "structured")
        payload = doc.dump(2) + "\n";
    else
        payload = text;
    if (!opts.quiet) std::cout << payload;
    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path, std::ios::binary);
        if (!out) throw Error("cannot write report to '" + opts.out_path + "'");
        // The file always carries the structured form; the console format
        // option only affects what is printed.
        out << doc.dump(2) << "\n";
    }
}

}  // namespace lf
