#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "experiments.hpp"

int main(int argc, char** argv) {
    using blab::cli::ExperimentConfig;
    ExperimentConfig c;
    std::string names;
    for (const auto& n : blab::cli::experiment_names()) names += "  " + n + "\n";

    CLI::App app{"Monte Carlo and identity checks for the inverse-gamma polymer."};
    app.footer("Experiments:\n" + names +
               "\nExit status: 0 all checks pass, 1 a check failed or a numerical error, 2 invalid configuration.\n"
               "BUSEMANN_LAB_THREADS sets the thread count when --threads is absent.");
    app.add_option("experiment", c.experiment, "Experiment to run")->required();
    app.add_option("--alpha", c.alpha, "Weight shape (coupling temperature for zero-temp)");
    app.add_option("--rho", c.rho, "Comma-separated rho or lambda values")->delimiter(',');
    app.add_option("--window", c.window, "Row length, bulk width, or sample size per trial (calibrate-stats)");
    app.add_option("--rows", c.rows, "Lattice height");
    app.add_option("--burn-in", c.burn_in, "Burn-in override for the update maps");
    app.add_option("--samples", c.samples, "Replicas, draws or trials");
    app.add_option("--n", c.n, "Tuple size (check-intertwine, check-inverse) or matrix size (grsk-verify)");
    app.add_option("--seed", c.seed, "Master seed");
    app.add_option("--out", c.out, "Report path (default stdout)");
    app.add_option("--format", c.format, "Report format: json or csv");
    app.add_option("--threads", c.threads, "Worker threads (0: default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return blab::cli::run(c, std::cerr);
}
