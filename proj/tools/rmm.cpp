#include "rmm/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Riccati-based market making and execution toolkit"};
    app.require_subcommand(1);
    rmm::cli::Options opts;
    std::uint64_t seed = 0;
    std::string out, which;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config,-c", opts.config, "Scenario document (JSON)")->required();
        sub->add_option("--out,-o", out, "Output directory (overrides output.directory)");
        sub->add_option("--seed", seed, "Seed override for simulations");
    };
    CLI::App* solve = app.add_subcommand("solve-dre", "Solve the scenario's Riccati equation");
    CLI::App* quotes = app.add_subcommand("quotes", "Tabulate approximate quotes over the sweep");
    CLI::App* compare = app.add_subcommand("compare-approx", "Lattice versus approximate quotes");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo paths");
    for (CLI::App* sub : {solve, quotes, compare, simulate}) common(sub);
    simulate->add_option("which", which, "mm, exec or leqg")
        ->required()
        ->check(CLI::IsMember({"mm", "exec", "leqg"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : rmm::cli::kConfigError;
    }
    if (!out.empty()) opts.out = out;
    if (app.get_subcommands().front()->count("--seed")) opts.seed = seed;

    return rmm::cli::guarded(
        [&] {
            if (solve->parsed()) rmm::cli::cmd_solve_dre(opts, std::cout);
            else if (quotes->parsed()) rmm::cli::cmd_quotes(opts, std::cout);
            else if (compare->parsed()) rmm::cli::cmd_compare_approx(opts, std::cout);
            else rmm::cli::cmd_simulate(opts, which, std::cout);
        },
        std::cerr);
}
