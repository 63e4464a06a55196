#ifndef LF_REPORT_HPP
#define LF_REPORT_HPP

#include <json.hpp>
#include <string>

#include "lf/helmholtz.hpp"
#include "lf/numeric.hpp"
#include "lf/problem.hpp"
#include "lf/solver.hpp"

namespace lf {

inline constexpr const char* kToolVersion = "lagrange-forge 0.1.0";

using OrderedJson = nlohmann::ordered_json;

struct RunOptions {
    std::uint64_t seed = kDefaultSeed;
    bool seed_from_cli = false;  // --seed beats the problem file's solver.seed
    ZeroTestConfig zero;
    int samples_override = 0;  // 0 = keep defaults
    std::string out_path;
    std::string format = "text";  // or "structured"
    bool quiet = false;
};

OrderedJson verdict_json(const ZeroResult& z);
OrderedJson labeled_verdicts_json(const std::vector<LabeledVerdict>& vs);
OrderedJson helmholtz_json(const HelmholtzReport& rep);
OrderedJson family_json(const SolutionFamily& fam);
OrderedJson variation_json(const VariationCheck& chk);

// Report skeleton with provenance: tool version, command, input, seed,
// tolerances. Re-running with identical inputs yields byte-identical output.
OrderedJson report_header(const std::string& command, const ProblemFile& pf,
                          const RunOptions& opts);

// Serializes doc per opts (text rendering is the caller's `text`), writes to
// stdout and/or opts.out_path.
void emit_report(const OrderedJson& doc, const std::string& text, const RunOptions& opts);

}  // namespace lf

#endif
