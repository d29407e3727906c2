// Copyright 2026 The regen-capacity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "regen/run.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

const std::map<std::string, std::string>& option_help() {
  static const std::map<std::string, std::string> help = {
      {"R", "number of regenerative segments / in-line filters"},
      {"N", "accumulated noise power per dimension"},
      {"n", "signal dimensions (1 or 2)"},
      {"constellation", "rect | ring | binary"},
      {"M", "symbols per dimension (ring: total); 0 optimises the spacing"},
      {"alpha", "sine map amplitude (with --beta)"},
      {"beta", "sine map frequency; fixes the alphabet pitch 2 pi / beta"},
      {"q", "sine map stability index alpha * beta, 0 < q <= 1"},
      {"channel", "optimize: ideal | sine"},
      {"snr-db-min", "first SNR grid point in dB"},
      {"snr-db-max", "last SNR grid point in dB"},
      {"snr-points", "number of SNR grid points"},
      {"grid-points", "coarse grid size of the scalar search"},
      {"seed", "Monte-Carlo seed"},
      {"out", "output path, - for standard output"},
      {"format", "csv | json"},
      {"figure", "figure to reproduce (1-4)"},
      {"threads", "worker threads over SNR points, 0 = all cores"},
      {"tol", "Blahut-Arimoto capacity bracket in bits"},
      {"scan-tol", "capacity bracket during the coarse scan, bits"},
      {"G", "density grid points"},
      {"L", "density grid half-width around the symbol"},
      {"paths", "Monte-Carlo paths"},
  };
  return help;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity of regenerative nonlinear channels"};
  app.set_help_flag("-h,--help", "show this help");
  std::string command;
  std::string config_path;
  app.add_option("command", command, "ideal-sweep | sine-sweep | analytic | optimize | figure")
      ->required();
  app.add_option("--config", config_path, "key = value settings file; flags override it");
  std::map<std::string, std::string> flags;
  for (const auto& key : regen::setting_keys()) {
    if (key == "command") continue;
    app.add_option("--" + key, flags[key], option_help().at(key));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    regen::Settings settings;
    if (!config_path.empty()) settings = regen::load_config_file(config_path);
    settings["command"] = command;
    for (const auto& [key, value] : flags) {
      if (app.count("--" + key) > 0) settings[key] = value;
    }
    const regen::RunConfig cfg = regen::make_config(settings);
    const regen::Table table = regen::run(cfg);
    regen::emit(table, cfg.format, cfg.out);
    const std::size_t bad = regen::failed_points(table);
    if (bad > 0) {
      std::cerr << "regen-capacity: " << bad << " point(s) failed; see the status column\n";
      return kExitNumeric;
    }
    return 0;
  } catch (const regen::ConfigError& e) {
    std::cerr << "regen-capacity: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const regen::IoError& e) {
    std::cerr << "regen-capacity: io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "regen-capacity: numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
