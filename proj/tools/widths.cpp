// Command-line driver: run one verification experiment and emit its report.
//
// Exit codes: 0 all asserted flags pass, 2 assertion failure (a flag failed
// or a cross-check threw), 3 resource limit exceeded, 4 invalid
// configuration or I/O failure.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "widths/experiments.hpp"

namespace {

struct CliOptions {
  widths::ExperimentConfig config;
  std::string format = "json";
  std::string bc = "dirichlet";
  std::string symbol = "lp";
};

void add_common_options(CLI::App* sub, CliOptions& opt) {
  sub->add_option("--m", opt.config.m, "smoothness order m (>= 1)");
  sub->add_option("--d", opt.config.d, "spatial dimension d (>= 1)");
  sub->add_option("--L", opt.config.length, "box side length L (> 0)");
  sub->add_option("--kmax", opt.config.k_max,
                  "largest rank (weyl: the lambda ceiling)");
  sub->add_option("--tol", opt.config.tol,
                  "relative eigenvalue enclosure tolerance in (0, 1)");
  sub->add_option("--seed", opt.config.seed, "Monte Carlo seed");
  sub->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", opt.config.out_path,
                  "output path (default: stdout)");
  sub->add_option("--stride", opt.config.stride,
                  "record every stride-th rank (assertions still cover all)");
  sub->add_option("--frontier-budget", opt.config.frontier_budget,
                  "abort when the enumeration frontier outgrows this size");
  sub->add_flag("--timings", opt.config.timings,
                "report wall-clock timings (breaks byte-identical reruns)");
}

void add_bc_option(CLI::App* sub, CliOptions& opt) {
  sub->add_option("--bc", opt.bc, "boundary condition")
      ->check(CLI::IsMember({"dirichlet", "neumann"}));
}

void add_symbol_option(CLI::App* sub, CliOptions& opt) {
  sub->add_option("--symbol", opt.symbol,
                  "symbol a(z): per-axis sum or euclidean power")
      ->check(CLI::IsMember({"lp", "euclidean"}));
}

void add_samples_option(CLI::App* sub, CliOptions& opt) {
  sub->add_option("--samples", opt.config.samples,
                  "Monte Carlo sample count (>= 1000)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "widths: exact approximation numbers of Sobolev embeddings on boxes, "
      "verified against their closed-form bounds"};
  app.set_version_flag("--version", widths::library_version);
  app.require_subcommand(1);

  CliOptions opt;

  CLI::App* star = app.add_subcommand(
      "star", "Neumann cube spectrum: plateau, explicit bounds, ratio");
  add_common_options(star, opt);
  add_symbol_option(star, opt);

  CLI::App* dirichlet = app.add_subcommand(
      "dirichlet", "Dirichlet cube spectrum against the phase-volume bound");
  add_common_options(dirichlet, opt);
  add_symbol_option(dirichlet, opt);

  CLI::App* weyl = app.add_subcommand(
      "weyl", "counting-function convergence on a geometric lambda ladder");
  add_common_options(weyl, opt);
  add_bc_option(weyl, opt);
  add_symbol_option(weyl, opt);
  weyl->add_option("--ratio-tol", opt.config.ratio_tol,
                   "policy tolerance for the top-decade ratio");

  CLI::App* lemmas = app.add_subcommand(
      "lemmas", "property-suite sweep of solver and geometry invariants");
  add_common_options(lemmas, opt);
  add_samples_option(lemmas, opt);
  lemmas->add_flag("--inject-perturbation", opt.config.inject_perturbation,
                   "corrupt one enclosure to prove the checker can fail");

  CLI::App* spectrum1d = app.add_subcommand(
      "spectrum1d", "univariate eigenvalues: brackets, scaling, "
                    "finite-difference cross-check");
  add_common_options(spectrum1d, opt);
  add_bc_option(spectrum1d, opt);

  CLI::App* volume = app.add_subcommand(
      "volume", "Monte Carlo sublevel volume against the Gamma closed form");
  add_common_options(volume, opt);
  add_symbol_option(volume, opt);
  add_samples_option(volume, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    if (star->parsed())
      opt.config.experiment = widths::ExperimentKind::Star;
    else if (dirichlet->parsed())
      opt.config.experiment = widths::ExperimentKind::Dirichlet;
    else if (weyl->parsed())
      opt.config.experiment = widths::ExperimentKind::Weyl;
    else if (lemmas->parsed())
      opt.config.experiment = widths::ExperimentKind::Lemmas;
    else if (spectrum1d->parsed())
      opt.config.experiment = widths::ExperimentKind::Spectrum1d;
    else
      opt.config.experiment = widths::ExperimentKind::Volume;
    opt.config.format = widths::format_from_string(opt.format);
    opt.config.bc = opt.bc == "neumann" ? widths::BoundaryCondition::Neumann
                                        : widths::BoundaryCondition::Dirichlet;
    opt.config.symbol = widths::symbol_from_string(opt.symbol);

    const widths::ExperimentReport report =
        widths::run_experiment(opt.config);
    widths::emit_report(report, opt.config.format, opt.config.out_path);
    if (!report.all_pass()) {
      for (const widths::NamedFlag& f : report.flags)
        if (!f.pass)
          std::fprintf(stderr, "FAIL %s: %s\n", f.name.c_str(),
                       f.detail.c_str());
      return 2;
    }
    return 0;
  } catch (const widths::ResourceLimit& e) {
    std::fprintf(stderr, "resource limit: %s\n", e.what());
    return 3;
  } catch (const widths::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "check failed: %s\n", e.what());
    return 2;
  }
}
