#ifndef LF_ZEROTEST_HPP
#define LF_ZEROTEST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lf/eval.hpp"
#include "lf/expr.hpp"
#include "lf/rng.hpp"

namespace lf {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct ZeroTestConfig {
    int samples = 32;
    double tol_abs = 1e-10;
    double tol_rel = 1e-9;
    std::uint64_t seed = kDefaultSeed;
};

// Sampling box for the probabilistic zero test. Coordinates, velocities and
// accelerations default to [0.5, 2] and time to [0, 2]; parameters are pinned
// at their declared values. Per-symbol ranges can be overridden to steer the
// box away from a problem's singular loci.
class SampleDomain {
  public:
    SampleDomain() = default;
    explicit SampleDomain(std::map<std::string, double> params) : params_(std::move(params)) {}

    void set_param(const std::string& name, double value) { params_[name] = value; }
    void set_range(const std::string& symbol_text, Interval iv) { overrides_[symbol_text] = iv; }

    const std::map<std::string, double>& params() const { return params_; }

    Interval interval_for(const Symbol& s) const;

  private:
    std::map<std::string, double> params_;
    std::map<std::string, Interval> overrides_;
};

enum class ZeroKind { Zero, NonZero, Inconclusive };

struct Witness {
    std::map<std::string, double> point;
    double value = 0.0;
};

struct ZeroResult {
    ZeroKind kind = ZeroKind::Zero;
    std::optional<Witness> witness;
    int samples = 0;
    int domain_errors = 0;
    bool structural = false;  // decided by canonicalization alone

    bool is_zero() const { return kind == ZeroKind::Zero; }
};

// Probabilistic zero test: canonicalize, then sample. A sample passes when
// |value| <= tol_abs + tol_rel * scale, with scale the largest magnitude among
// the expression's additive terms at that point. Sample k is derived from the
// seed and k alone, so verdicts and witnesses are reproducible.
ZeroResult is_zero(const Expr& e, const SampleDomain& domain, const ZeroTestConfig& cfg = {});

// Builds the k-th sample point for the given free symbols.
EvalPoint sample_point(const std::vector<Symbol>& slots, const SampleDomain& domain,
                       std::uint64_t seed, std::uint64_t k);

// Minimum of |e| over the sample box; used for regularity (H5) checks.
struct BoxScan {
    double min_abs = 0.0;
    std::optional<Witness> argmin;
    int samples = 0;
    int domain_errors = 0;
};
BoxScan min_abs_on_box(const Expr& e, const SampleDomain& domain, const ZeroTestConfig& cfg = {});

inline bool all_zero(const std::vector<ZeroResult>& rs) {
    for (const ZeroResult& r : rs)
        if (r.kind != ZeroKind::Zero) return false;
    return true;
}

const char* zero_kind_name(ZeroKind k);

}  // namespace lf

#endif
