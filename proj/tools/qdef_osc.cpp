// qdef_osc: command-line front end.
//
// Exit codes: 0 ok, 1 validation error, 2 numerical failure, 3 verify
// suite failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qdef/commands.hpp"
#include "qdef/config.hpp"
#include "qdef/errors.hpp"
#include "qdef/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerify = 3;

// flag name (without dashes) -> config key
const std::vector<std::pair<std::string, std::string>> kSettings = {
    {"gamma", "gamma"},     {"q", "q"},
    {"scale", "scale"},     {"out", "out"},
    {"format", "format"},   {"samples", "samples"},
    {"tol", "tol"},         {"m0", "m0"},
    {"omega0", "omega0"},   {"hbar", "hbar"},
    {"amplitude", "amplitude"}, {"delta", "delta"},
    {"levels", "levels"},   {"n2", "n2"},
    {"gamma-y", "gamma_y"}, {"omega-ratio", "omega_ratio"},
    {"periods", "periods"}, {"window", "window"},
};

struct Subcommand {
  CLI::App* app;
  std::string config;
  std::vector<std::string> values;
};

void add_flags(Subcommand& sub) {
  sub.values.resize(kSettings.size());
  sub.app->add_option("--config", sub.config, "flat key=value config file");
  for (std::size_t i = 0; i < kSettings.size(); ++i) {
    sub.app->add_option("--" + kSettings[i].first, sub.values[i]);
  }
}

std::vector<std::pair<std::string, std::string>> given_flags(const Subcommand& sub) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < kSettings.size(); ++i) {
    if (sub.app->get_option("--" + kSettings[i].first)->count() > 0) {
      out.emplace_back(kSettings[i].second, sub.values[i]);
    }
  }
  return out;
}

int run(const std::string& name, const Subcommand& sub) {
  const std::optional<std::string> config =
      sub.config.empty() ? std::nullopt : std::optional<std::string>(sub.config);
  const auto cfg = qdef::resolve_config(name, config, given_flags(sub),
                                        qdef::natural_units_from_env());
  qdef::validate(cfg);
  if (name == "verify") {
    const auto outcome = qdef::cmd_verify(cfg);
    for (const auto& r : outcome.results) {
      std::printf("%s criterion %2d %-34s measured %-12.4g tolerance %-10.3g %s\n",
                  r.pass ? "PASS" : "FAIL", r.criterion, r.name.c_str(), r.measured,
                  r.tolerance, r.detail.c_str());
    }
    std::printf("report: %s\n", outcome.report_path.c_str());
    return outcome.passed ? kExitOk : kExitVerify;
  }
  std::vector<std::string> paths;
  if (name == "classical") {
    paths = qdef::cmd_classical(cfg);
  } else if (name == "phase-space") {
    paths = qdef::cmd_phase_space(cfg);
  } else if (name == "lissajous") {
    paths = qdef::cmd_lissajous(cfg);
  } else if (name == "spectrum") {
    paths = qdef::cmd_spectrum(cfg);
  } else if (name == "wavefunctions") {
    paths = qdef::cmd_wavefunctions(cfg);
  } else if (name == "density2d") {
    paths = qdef::cmd_density2d(cfg);
  } else if (name == "correspondence") {
    paths = qdef::cmd_correspondence(cfg);
  } else if (name == "uncertainty") {
    paths = qdef::cmd_uncertainty(cfg);
  }
  for (const auto& p : paths) std::printf("%s\n", p.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-deformed position-dependent-mass oscillator toolkit"};
  app.set_version_flag("--version", qdef::kVersion);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classical", "classical trajectories for each gamma_q A"},
      {"phase-space", "phase-space orbits in (x, p) and (x_q, p_q)"},
      {"lissajous", "Lissajous curves of two oscillators"},
      {"spectrum", "bound-state energies and the Morse potential curve"},
      {"wavefunctions", "bound-state wavefunctions and densities"},
      {"density2d", "two-dimensional product-state density"},
      {"correspondence", "windowed quantum density against the classical one"},
      {"uncertainty", "uncertainty products over a gamma_q x0 sweep"},
      {"verify", "run the verification suite"},
  };
  std::vector<Subcommand> subs;
  subs.reserve(commands.size());
  for (const auto& [name, help] : commands) {
    subs.push_back({app.add_subcommand(name, help), {}, {}});
    add_flags(subs.back());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i].app->parsed()) return run(commands[i].first, subs[i]);
    }
  } catch (const qdef::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const qdef::UnboundStateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}
