#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlbs/cli.hpp"
#include "nlbs/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Transaction-cost Black-Scholes Delta solver with vanishing viscosity"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 1;
    app.add_option("--config", config_path, "flat key = value config file");
    app.add_option("--out", out_dir, "output directory (overrides out_dir)");
    app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const nlbs::RunContext&);
    };
    const Command commands[] = {
        {"psi", "tabulate Psi and check its structural properties", nlbs::run_psi},
        {"solve", "march one regularized problem and write its reports", nlbs::run_solve},
        {"sweep", "run the eps sweep and fit norm growth exponents", nlbs::run_sweep},
        {"verify", "run acceptance criteria 1-7", nlbs::run_verify},
    };
    for (const auto& c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nlbs::exit_validation;
    }

    nlbs::RunContext ctx;
    ctx.threads = threads;
    ctx.log = &std::cout;
    try {
        if (!config_path.empty()) ctx.config = nlbs::load_config(config_path);
        if (!out_dir.empty()) ctx.config.out_dir = out_dir;
    } catch (const nlbs::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return nlbs::exit_validation;
    }

    for (const auto& c : commands) {
        if (app.got_subcommand(c.name)) return nlbs::guarded(c.run, ctx, std::cerr);
    }
    return nlbs::exit_validation;
}
