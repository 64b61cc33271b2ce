// Command-line front end: spectral sweeps, transient runs and verification
// suites over the collective-emitter susceptibility model.
//
// Exit codes: 0 success, 1 validation/configuration error, 2 numerical
// failure, 3 verification failure.
#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include <srchi/sweep.hpp>

namespace {

struct CliArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  std::string format;
  int jobs = 0;
};

void add_common_options(CLI::App* sub, CliArgs& args) {
  sub->add_option("--config", args.config_path,
                  "flat key = value configuration file")
      ->check(CLI::ExistingFile);
  sub->add_option("--set", args.overrides,
                  "override a configuration key (key=value, repeatable)");
  sub->add_option("--out", args.out, "output path ('-' for stdout)");
  sub->add_option("--format", args.format, "output format (csv|json)")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--jobs", args.jobs, "worker threads for sweep points")
      ->check(CLI::PositiveNumber);
}

srchi::RunConfig assemble_config(const CliArgs& args, srchi::RunMode mode) {
  srchi::RunConfig cfg;
  if (!args.config_path.empty())
    cfg = srchi::parse_config_file(args.config_path);
  for (const std::string& ov : args.overrides)
    srchi::apply_override(cfg, ov);
  cfg.mode = mode;  // the subcommand decides
  if (!args.out.empty()) cfg.out = args.out;
  if (!args.format.empty())
    cfg.format = args.format == "csv" ? srchi::OutputFormat::csv
                                      : srchi::OutputFormat::json;
  if (args.jobs > 0) cfg.jobs = args.jobs;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "srchi: linear and third-order optical susceptibilities of N "
      "collectively radiating two-level emitters"};
  app.require_subcommand(1);

  CliArgs args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "chi1/chi3 spectra over a detuning grid");
  CLI::App* transient = app.add_subcommand(
      "transient", "time-resolved chi1(t)/chi3(t) after drive switch-on");
  CLI::App* verify = app.add_subcommand(
      "verify", "plug-back and master-equation cross-checks");
  add_common_options(sweep, args);
  add_common_options(transient, args);
  add_common_options(verify, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) {
      srchi::write_output(
          srchi::run_sweep(assemble_config(args, srchi::RunMode::sweep)));
    } else if (transient->parsed()) {
      srchi::write_output(srchi::run_transient(
          assemble_config(args, srchi::RunMode::transient)));
    } else {
      const srchi::VerifyReport report =
          srchi::run_verify(assemble_config(args, srchi::RunMode::verify));
      srchi::write_output(report);
      if (!report.all_pass) {
        std::cerr << "verification failed\n";
        return 3;
      }
    }
  } catch (const srchi::InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const srchi::SizeLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const srchi::OdeError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const srchi::ModelError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
