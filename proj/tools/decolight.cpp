#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decolight/commands.hpp"
#include "decolight/error.hpp"

int main(int argc, char** argv) {
  using namespace decolight;

  CLI::App app{"Light-induced decoherence of a condensate in a far-detuned laser"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;

  for (const char* name : {"kernel", "decay", "profile", "oracle"}) {
    const char* help = std::string(name) == "kernel"    ? "tabulate the dipole kernel J(u, theta)"
                       : std::string(name) == "decay"   ? "amplitude decay at one position over a time grid"
                       : std::string(name) == "profile" ? "short-time profile functions A(z), B(z)"
                                                        : "run the lattice operator-identity checks";
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_path, "output path (default: [output] path, else stdout)");
    sub->add_option("--override", overrides, "section.key=value, applied after the file")->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig config;
  try {
    config = load_config(config_path);
    for (const auto& o : overrides) apply_override(config, o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (out_path.empty()) out_path = config.output;

  std::ostringstream buffer;
  const int code = run_command(command, config, out_path.empty() ? std::cout : buffer, std::cerr);
  if (!out_path.empty() && (code == kExitOk || code == kExitOracle)) {
    std::ofstream file(out_path, std::ios::binary);
    if (!(file << buffer.str()) || !file.flush()) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitConfig;
    }
  }
  return code;
}
