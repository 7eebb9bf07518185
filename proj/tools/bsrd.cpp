#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsrd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bulk-surface reaction-diffusion batch runner"};
  bsrd::CliOptions opts;
  app.add_option("--config", opts.config, "Run configuration (key = value lines)");
  app.add_option("--out", opts.out, "Output directory (overrides out_dir)");
  app.add_option("--override", opts.overrides, "Override a configuration key, key=value (repeatable)")
      ->take_all();
  app.add_flag("--quiet", opts.quiet, "Suppress progress messages");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bsrd::exit_config_error;
  }
  return bsrd::run_cli(opts, std::cout, std::cerr);
}
