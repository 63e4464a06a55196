#ifndef LF_TOOLS_COMMANDS_HPP
#define LF_TOOLS_COMMANDS_HPP

#include <string>

#include "lf/report.hpp"

namespace lf::cli {

// Exit-code contract: 0 pass, 1 semantic check failure, 2 input error.
int cmd_verify_lagrangian(const ProblemFile& pf, const RunOptions& opts);
int cmd_noether(const ProblemFile& pf, const RunOptions& opts);
int cmd_method1(const ProblemFile& pf, const RunOptions& opts);
int cmd_method2(const ProblemFile& pf, const RunOptions& opts);
int cmd_reconstruct(const ProblemFile& pf, const RunOptions& opts);
int cmd_simulate(const ProblemFile& pf, const RunOptions& opts, const std::string& csv_path);
int cmd_corpus(const std::string& dir, const RunOptions& opts);

int run_task(const std::string& task, const ProblemFile& pf, const RunOptions& opts);

}  // namespace lf::cli

#endif
