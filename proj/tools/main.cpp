#include <iostream>

#include "CLI11.hpp"
#include "homefit/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"homefit: least-squares solver comparison on real-estate affordability data"};
    app.require_subcommand(1);

    homefit::PreprocessArgs pre_args;
    CLI::App* pre = app.add_subcommand(
        "preprocess", "Join sales with rates, aggregate by town/year, price and label");
    pre->add_option("--sales", pre_args.sales_path, "Sales CSV path")->required();
    pre->add_option("--rates", pre_args.rates_path, "Interest-rate CSV path")->required();
    pre->add_option("--out", pre_args.out_path, "Output CSV path")->required();
    pre->add_option("--investment", pre_args.investment, "Investment amount")
        ->capture_default_str();
    pre->add_option("--term-years", pre_args.term_years, "Mortgage term in years")
        ->capture_default_str();
    pre->add_option("--payments-per-year", pre_args.payments_per_year, "Payments per year")
        ->capture_default_str();
    pre->add_option("--column-map", pre_args.column_map_spec,
                    "Header renames as Canonical=Actual,...");

    homefit::RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Fit the requested solvers and write a report");
    run->add_option("--data", run_args.data_path, "Preprocessed CSV path")->required();
    run->add_option("--out", run_args.report_path, "Report JSON path")->required();
    run->add_option("--solver", run_args.solver, "qr | ge | lu | all")->capture_default_str();
    run->add_option("--test-size", run_args.test_size, "Test fraction")->capture_default_str();
    run->add_option("--seed", run_args.seed, "Split seed")->capture_default_str();
    run->add_option("--reg-factor", run_args.reg_factor, "Pivot regularization for ge")
        ->capture_default_str();
    run->add_option("--repeat", run_args.repeat, "Timing repetitions (median reported)")
        ->capture_default_str();

    homefit::CompareArgs cmp_args;
    CLI::App* cmp = app.add_subcommand(
        "compare", "Fit all three solvers and write comparison files into a directory");
    cmp->add_option("--data", cmp_args.data_path, "Preprocessed CSV path")->required();
    cmp->add_option("--out-dir", cmp_args.out_dir, "Output directory")->required();
    cmp->add_option("--k", cmp_args.k, "Top-k coefficients")->capture_default_str();
    cmp->add_option("--bins", cmp_args.bins, "Residual histogram bins")->capture_default_str();
    cmp->add_option("--test-size", cmp_args.test_size, "Test fraction")->capture_default_str();
    cmp->add_option("--seed", cmp_args.seed, "Split seed")->capture_default_str();
    cmp->add_option("--reg-factor", cmp_args.reg_factor, "Pivot regularization for ge")
        ->capture_default_str();
    cmp->add_option("--repeat", cmp_args.repeat, "Timing repetitions (median reported)")
        ->capture_default_str();

    homefit::SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic preprocessed CSV from a planted linear model");
    synth->add_option("--rows", synth_args.rows, "Number of (town, year) rows")->required();
    synth->add_option("--towns", synth_args.towns, "Number of towns")->required();
    synth->add_option("--years", synth_args.years_spec, "Inclusive year range a..b")->required();
    synth->add_option("--seed", synth_args.seed, "Generator seed")->required();
    synth->add_option("--out", synth_args.out_path, "Output CSV path")->required();
    synth->add_option("--noise", synth_args.noise, "Noise standard deviation")
        ->capture_default_str();
    synth->add_option("--planted-coefs", synth_args.planted_path,
                      "Also write the planted coefficients to this CSV");
    synth->add_flag("--regression-target", synth_args.regression_target,
                    "Write the raw response instead of thresholded 0/1 labels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message and usage hint
        return homefit::kExitUsage;
    }

    if (*pre) return homefit::cmd_preprocess(pre_args, std::cout, std::cerr);
    if (*run) return homefit::cmd_run(run_args, std::cout, std::cerr);
    if (*cmp) return homefit::cmd_compare(cmp_args, std::cout, std::cerr);
    if (*synth) return homefit::cmd_synth(synth_args, std::cout, std::cerr);
    return homefit::kExitUsage;  // unreachable with require_subcommand(1)
}
