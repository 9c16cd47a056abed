#include <iostream>

#include "CLI11.hpp"

#include "sshstat/cli/report.hpp"
#include "sshstat/cli/runner.hpp"
#include "sshstat/version.hpp"

namespace {

using sshstat::cli::RunConfig;

void add_input_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--input", cfg.input, "unit-level CSV file")->required();
    sub->add_option("--id", cfg.id_column, "id column name")->capture_default_str();
    sub->add_option("--y", cfg.y_column, "outcome column name")->capture_default_str();
    sub->add_option("--categorical", cfg.categorical, "force columns to categorical");
    sub->add_option("--continuous", cfg.continuous, "force columns to continuous");
}

void add_output_option(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out, "report path (default: stdout)");
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;

    CLI::App app{"statistics for spatially stratified heterogeneity"};
    app.set_version_flag("--version", sshstat::kVersion);
    app.require_subcommand(1);

    CLI::App* q = app.add_subcommand(
        "q", "q-statistic of y over a stratum column, with significance test");
    add_input_options(q, cfg);
    q->add_option("--stratum", cfg.stratum, "stratum column")->required();
    q->add_option("--mode", cfg.mode, "central | noncentral")->capture_default_str();
    add_output_option(q, cfg);
    q->callback([&cfg] { cfg.subcommand = "q"; });

    CLI::App* compare = app.add_subcommand(
        "compare", "test whether two stratifications explain y equally well");
    add_input_options(compare, cfg);
    compare->add_option("--stratum", cfg.stratum, "reference partition column (P1)")
        ->required();
    compare->add_option("--stratum2", cfg.stratum2, "challenger partition column (P2)")
        ->required();
    compare->add_option("--alternative", cfg.alternative, "two-sided | greater | less")
        ->capture_default_str();
    add_output_option(compare, cfg);
    compare->callback([&cfg] { cfg.subcommand = "compare"; });

    CLI::App* stratify = app.add_subcommand(
        "stratify", "discretize a continuous covariate, or scan stratum counts");
    add_input_options(stratify, cfg);
    stratify->add_option("--x", cfg.x_column, "continuous covariate column")->required();
    stratify->add_option("--method", cfg.method, "quantile | equal | optimal")
        ->capture_default_str();
    stratify->add_option("--l", cfg.l, "stratum count")->capture_default_str();
    stratify->add_option("--l-min", cfg.l_min, "scan lower bound")->capture_default_str();
    stratify->add_option("--l-max", cfg.l_max, "scan upper bound (> 0 enables the scan)")
        ->capture_default_str();
    stratify->add_option("--alpha", cfg.alpha, "scan selection level")
        ->capture_default_str();
    stratify->add_flag("--increment-rule", cfg.increment_rule,
                       "require diminishing q gains in the scan");
    stratify->add_option("--format", cfg.format, "json | csv (scan only)")
        ->capture_default_str();
    add_output_option(stratify, cfg);
    stratify->callback([&cfg] { cfg.subcommand = "stratify"; });

    CLI::App* detect = app.add_subcommand(
        "detect", "factor and interaction detection over candidate covariates");
    add_input_options(detect, cfg);
    detect->add_option("--factor", cfg.factors, "candidate covariate (repeatable)");
    detect->add_option("--interaction", cfg.interaction,
                       "two covariates for the overlay detector")
        ->expected(2);
    detect->add_option("--method", cfg.method, "discretizer for continuous covariates")
        ->capture_default_str();
    detect->add_option("--l", cfg.l, "strata per continuous covariate")
        ->capture_default_str();
    detect->add_option("--tolerance", cfg.tolerance, "interaction band width")
        ->capture_default_str();
    detect->add_flag("--with-qx", cfg.with_qx,
                     "also report q of a continuous x over its own strata");
    detect->add_flag("--descriptive-only", cfg.descriptive_only,
                     "skip significance tests");
    add_output_option(detect, cfg);
    detect->callback([&cfg] { cfg.subcommand = "detect"; });

    CLI::App* scatter = app.add_subcommand(
        "scatter", "per-stratum summary points, optionally rendered as SVG");
    add_input_options(scatter, cfg);
    scatter->add_option("--x", cfg.x_column, "continuous covariate column")->required();
    scatter->add_option("--stratum", cfg.stratum,
                        "stratum column (default: discretize --x)");
    scatter->add_option("--method", cfg.method, "discretizer when no --stratum")
        ->capture_default_str();
    scatter->add_option("--l", cfg.l, "strata when no --stratum")->capture_default_str();
    scatter->add_option("--svg", cfg.svg, "also render an SVG to this path");
    scatter->add_option("--format", cfg.format, "json | csv")->capture_default_str();
    add_output_option(scatter, cfg);
    scatter->callback([&cfg] { cfg.subcommand = "scatter"; });

    CLI::App* sandwich = app.add_subcommand(
        "sandwich", "map stratum estimates onto reporting units via overlap weights");
    sandwich->add_option("--samples", cfg.samples, "sample CSV with columns h,y")
        ->required();
    sandwich->add_option("--frame", cfg.frame, "frame CSV with columns h,population")
        ->required();
    sandwich->add_option("--overlaps", cfg.overlaps,
                         "overlap CSV with columns r,h,weight")
        ->required();
    sandwich->add_flag("--fpc", cfg.fpc, "apply the finite population correction");
    CLI::Option* sandwich_format =
        sandwich->add_option("--format", cfg.format, "csv | json (default csv)");
    add_output_option(sandwich, cfg);
    sandwich->callback([&cfg, sandwich_format] {
        cfg.subcommand = "sandwich";
        if (sandwich_format->count() == 0) cfg.format = "csv";
    });

    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo calibration harnesses");
    simulate
        ->add_option("--preset", cfg.preset,
                     "null | noncentral | noncentral-printed | sandwich-strong | "
                     "sandwich-null")
        ->required();
    simulate->add_option("--reps", cfg.reps, "replicates (0 = preset default)")
        ->capture_default_str();
    simulate->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    add_output_option(simulate, cfg);
    simulate->callback([&cfg] { cfg.subcommand = "simulate"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        sshstat::cli::json err;
        err["error"]["type"] = "validation";
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return sshstat::cli::run(cfg);
}
