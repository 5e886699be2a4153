#include <CLI11.hpp>

#include <iostream>

#include "spdc_cli/commands.hpp"
#include "spdc_cli/config.hpp"
#include "spdc_cli/selftest.hpp"

int main(int argc, char** argv) {
  using namespace spdc::cli;

  CLI::App app{"SPDC biphoton numerics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool figures = false;
  bool timing = false;
  int threads = 0;

  auto add_command = [&](Command c, const std::string& help) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(c)), help);
    auto* cfg = sub->add_option("--config", config_path, "INI run configuration");
    if (c != Command::Selftest) cfg->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--figures", figures, "also write SVG figures");
    sub->add_option("--threads", threads, "worker count (0: available parallelism)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--timing", timing, "record wall_time_ms (breaks byte-identical output)");
    return sub;
  };
  add_command(Command::PmfSlice, "evaluate phase-matching functions on a grid");
  add_command(Command::Jsa, "evaluate the joint spectral or spatial intensity on a grid");
  add_command(Command::PuritySweep, "spatial purity along one parameter");
  add_command(Command::CompareModels, "purity sweep for every model family");
  add_command(Command::Selftest, "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  const Command command = *command_from_string(app.get_subcommands().front()->get_name());
  try {
    if (command == Command::Selftest) return print_selftest(selftest(threads), std::cout) ? kOk : kFailure;

    RunConfig config = load_config_file(config_path, command);
    config.out_dir = out_dir;
    config.figures = figures;
    config.timing = timing;
    config.threads = threads;
    return run(config, std::cout, std::cerr).exit_code;
  } catch (...) {
    return report_error(std::cerr);
  }
}
