// Command-line front end: evaluate the transition matrix on a momentum/angle
// grid through any subset of the representations, or run the self-validation
// audit.  Exit codes: 0 success (grid) / all confirmed (validate), 1 recorded
// discrepancies (validate), 2 usage error, 3 I/O or internal failure.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctmatrix/dispatch.hpp"
#include "ctmatrix/errors.hpp"
#include "ctmatrix/export_io.hpp"
#include "ctmatrix/grid.hpp"
#include "ctmatrix/validation.hpp"

namespace {

int exit_code_for(const ctm::Error& e) {
    switch (e.code()) {
    // Bad request-level input: the library's guards fired before any
    // evaluation started (per-point failures become flagged rows instead).
    case ctm::errc::usage_error:
    case ctm::errc::non_negative_energy:
    case ctm::errc::out_of_range:
        return 2;
    default:
        return 3;
    }
}

int report_error(const ctm::Error& e) {
    std::fprintf(stderr, "ctmatrix: %s\n", e.what());
    return exit_code_for(e);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Off-shell Coulomb transition matrix at negative energy"};
    app.require_subcommand(1);

    // ---- grid ----------------------------------------------------------
    CLI::App* grid = app.add_subcommand(
        "grid", "Evaluate the matrix element on the product of the momentum and angle lists");

    double energy = 0.0, mu = 1.0, hbar = 1.0, q1q2 = 0.0;
    double gamma = 0.0, kappa = 1.0;
    CLI::Option* energy_opt =
        grid->add_option("--energy", energy, "Total energy (must be negative)");
    grid->add_option("--mu", mu, "Reduced mass (default 1)");
    grid->add_option("--hbar", hbar, "Planck constant (default 1)");
    CLI::Option* q_opt = grid->add_option("--q1q2", q1q2, "Product of the two charges");
    CLI::Option* gamma_opt = grid->add_option(
        "--gamma", gamma, "Dimensionless strength (alternative to --energy/--q1q2)");
    CLI::Option* kappa_opt =
        grid->add_option("--kappa", kappa, "Momentum scale for --gamma mode (default 1)");

    std::vector<double> k_list, kp_list, cos_list;
    grid->add_option("--k-list", k_list, "Comma-separated k values")
        ->delimiter(',')
        ->required();
    grid->add_option("--kp-list", kp_list, "Comma-separated k' values")
        ->delimiter(',')
        ->required();
    grid->add_option("--cos-list", cos_list, "Comma-separated cos(theta) values")
        ->delimiter(',')
        ->required();

    std::vector<std::string> rep_names = {"series"};
    grid->add_option("--reps", rep_names,
                     "Representations: born,series,closed,schwinger,separated,rational")
        ->delimiter(',');

    double grid_tol = 0.0;
    CLI::Option* grid_tol_opt = grid->add_option(
        "--tol", grid_tol, "Target relative tolerance for sums and quadratures");
    int threads = 1;
    grid->add_option("--threads", threads, "Worker threads (output is identical for any count)");

    std::string grid_format = "csv", grid_out = "-";
    grid->add_option("--format", grid_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    grid->add_option("--out", grid_out, "Output path, - for stdout");

    // ---- validate ------------------------------------------------------
    CLI::App* validate = app.add_subcommand(
        "validate", "Audit every representation against the series reference");

    double form_tol = 1e-8;
    validate->add_option("--tol", form_tol, "Explicit-form audit tolerance (>= 1e-12)");
    std::string val_format = "csv", val_out = "-";
    validate->add_option("--format", val_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    validate->add_option("--out", val_out, "Output path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (grid->parsed()) {
            const bool dimensionless = gamma_opt->count() > 0;
            const bool physical = energy_opt->count() > 0 || q_opt->count() > 0;
            if (dimensionless && physical) {
                std::fprintf(stderr,
                             "ctmatrix: --gamma and --energy/--q1q2 are mutually exclusive\n");
                return 2;
            }
            if (!dimensionless && !physical) {
                std::fprintf(stderr,
                             "ctmatrix: provide either --gamma or --energy with --q1q2\n");
                return 2;
            }
            if (physical && (energy_opt->count() == 0 || q_opt->count() == 0)) {
                std::fprintf(stderr, "ctmatrix: physical mode needs both --energy and --q1q2\n");
                return 2;
            }
            if (kappa_opt->count() > 0 && !dimensionless) {
                std::fprintf(stderr, "ctmatrix: --kappa applies only with --gamma\n");
                return 2;
            }

            const ctm::EnergyState st =
                dimensionless
                    ? ctm::dimensionless_state(gamma, kappa)
                    : ctm::make_energy_state(ctm::TwoBodySystem::make(mu, q1q2, hbar), energy);

            ctm::GridSpec spec;
            spec.k_list = k_list;
            spec.kp_list = kp_list;
            spec.cos_list = cos_list;
            for (const std::string& name : rep_names) {
                ctm::Representation rep;
                if (!ctm::parse_representation(name, rep)) {
                    std::fprintf(stderr, "ctmatrix: unknown representation '%s'\n", name.c_str());
                    return 2;
                }
                spec.reps.push_back(rep);
            }
            if (grid_tol_opt->count() > 0) {
                spec.options.series.target_rel_tol = grid_tol;
                spec.options.quad.target_rel_tol = grid_tol;
            }
            spec.threads = threads;

            const std::vector<ctm::GridRow> rows = ctm::run_grid(st, spec);
            ctm::write_output(grid_out,
                              grid_format == "csv" ? ctm::to_csv(rows) : ctm::to_json(rows));
            return 0;
        }

        const ctm::ValidationReport report = ctm::run_validation(form_tol);
        ctm::write_output(val_out,
                          val_format == "csv" ? ctm::to_csv(report) : ctm::to_json(report));
        return report.exit_code;
    } catch (const ctm::Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ctmatrix: %s\n", e.what());
        return 3;
    }
}
