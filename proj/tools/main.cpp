#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "commands.hpp"
#include "lf/errors.hpp"

using namespace lf;

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolVersion) +
                 " - constructs and verifies Lagrangians for given equations of motion "
                 "under imposed rigid symmetries"};
    app.require_subcommand(1);
    app.fallthrough();

    RunOptions opts;
    std::string file, corpus_dir, csv_path;
    std::uint64_t seed_flag = 0;
    double tol_flag = 0.0;
    int samples_flag = 0;

    app.add_option("--seed", seed_flag, "RNG seed (also LAGRANGE_FORGE_SEED)");
    app.add_option("--tol", tol_flag, "relative tolerance of the zero test");
    app.add_option("--samples", samples_flag, "sample count for the zero test and solver");
    app.add_option("--out", opts.out_path, "write the structured report to this path");
    app.add_option("--format", opts.format, "console output format")
        ->check(CLI::IsMember({"text", "structured"}));
    app.add_flag("--quiet", opts.quiet, "suppress console output");

    auto add_file = [&file](CLI::App* cmd) {
        cmd->add_option("file", file, "problem file (JSON)")->required();
    };
    CLI::App* verify = app.add_subcommand("verify-lagrangian",
                                          "EL residual, Hessian, Helmholtz necessity");
    add_file(verify);
    CLI::App* noether = app.add_subcommand(
        "noether", "identity residual, Noether constant, boundary term, new relations");
    add_file(noether);
    CLI::App* m1 = app.add_subcommand("method1", "symmetry compatibility + Helmholtz solver");
    add_file(m1);
    CLI::App* m2 =
        app.add_subcommand("method2", "symmetry + constant of motion + Helmholtz solver");
    add_file(m2);
    CLI::App* rec = app.add_subcommand("reconstruct", "1D Lagrangian from a Hessian");
    add_file(rec);
    CLI::App* sim = app.add_subcommand("simulate",
                                       "RK4 trajectory, drift, action, invariance order");
    add_file(sim);
    sim->add_option("--csv", csv_path, "write the trajectory as CSV to this path");
    CLI::App* corpus = app.add_subcommand("corpus", "run every bundled problem end to end");
    corpus->add_option("dir", corpus_dir, "directory of problem files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad usage is an input error
    }

    if (app.count("--seed") > 0) {
        opts.seed = seed_flag;
        opts.seed_from_cli = true;
    } else if (const char* env = std::getenv("LAGRANGE_FORGE_SEED")) {
        opts.seed = std::strtoull(env, nullptr, 10);
        opts.seed_from_cli = true;
    }
    if (app.count("--tol") > 0) opts.zero.tol_rel = tol_flag;
    if (app.count("--samples") > 0) {
        opts.zero.samples = samples_flag;
        opts.samples_override = samples_flag;
    }
    opts.zero.seed = opts.seed;

    try {
        if (corpus->parsed()) return cli::cmd_corpus(corpus_dir, opts);
        ProblemFile pf = load_problem(file);
        if (verify->parsed()) return cli::cmd_verify_lagrangian(pf, opts);
        if (noether->parsed()) return cli::cmd_noether(pf, opts);
        if (m1->parsed()) return cli::cmd_method1(pf, opts);
        if (m2->parsed()) return cli::cmd_method2(pf, opts);
        if (rec->parsed()) return cli::cmd_reconstruct(pf, opts);
        if (sim->parsed()) return cli::cmd_simulate(pf, opts, csv_path);
    } catch (const ProblemError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const SyntaxError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
