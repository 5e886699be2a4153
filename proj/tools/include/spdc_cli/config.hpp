#pragma once

// INI run configuration. Lab-facing units: wavelengths in nm, crystal length
// in mm, GVD in fs^2/mm, waists in um, durations in fs. Everything is
// converted to the library units on load.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/biphoton.hpp"
#include "spdc/purity.hpp"

namespace spdc::cli {

enum class Command { PmfSlice, Jsa, PuritySweep, CompareModels, Selftest };

std::string_view to_string(Command c);
std::optional<Command> command_from_string(std::string_view s);

struct RunConfig {
  Command command = Command::Selftest;

  PumpSpec pump;
  CrystalSpec crystal;
  ModelKind kind = ModelKind::General;
  KernelMode kernel = KernelMode::QuadraticOnly;
  RegimeOverride regime;
  Guards guards;

  CollectionSpec collection;
  std::optional<double> ws_over_wp;

  SweepAxis sweep_axis = SweepAxis::WsOverWp;
  std::vector<double> sweep_values;  ///< library units

  GridSpec grid;
  std::vector<PmfKind> pmf_kinds;

  PurityQuadrature quad;

  std::filesystem::path out_dir = ".";
  bool figures = false;
  bool timing = false;
  int threads = 0;  ///< 0: available parallelism

  /// Sorted `section.key = value` lines of every resolved setting.
  std::string canonical;
  std::uint64_t hash = 0;

  std::string hash_hex() const;
  BiphotonModel model() const;
  PuritySetting purity_setting() const;
};

/// Parses and resolves a config. Unknown sections or keys, missing required
/// keys and malformed values throw ValidationError naming the field.
RunConfig load_config(std::istream& in, Command command);
RunConfig load_config_file(const std::filesystem::path& path, Command command);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

}  // namespace spdc::cli
