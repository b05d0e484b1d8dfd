#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "epm/cli.hpp"
#include "epm/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pulsed SPDC design and simulation tool: quasi-phase-matching "
               "design, joint spectral amplitudes, HOM/MZ coincidence scans, "
               "Schmidt spectra and time-domain structure"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string format;

  const char* names[] = {"design", "jsa", "hom", "mz", "schmidt", "timedomain"};
  const char* descs[] = {
      "solve the grating period, check extended phase matching, report the "
      "valid crystal-length window",
      "build the joint spectral amplitude grid and its marginal spectra",
      "Hong-Ou-Mandel coincidence scan versus delay",
      "Mach-Zehnder coincidence scan versus delay",
      "Schmidt decomposition of the joint amplitude",
      "time-domain two-photon amplitude via 2-D Fourier transform"};
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "run configuration file")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--format", format, "data file format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    epm::cli::RunConfig cfg = epm::cli::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) cfg.format = format;
    return epm::cli::run(cfg, sub);
  } catch (const epm::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
