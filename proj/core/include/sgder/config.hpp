#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgder/dataset.hpp"
#include "sgder/landscape.hpp"
#include "sgder/optim.hpp"
#include "sgder/saddle.hpp"
#include "sgder/schedule.hpp"

namespace sgder {

/// Malformed or inconsistent configuration; mapped to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value file with [section] headers. `#` starts a comment. Unknown
/// sections and keys are rejected when a typed config is built.
struct ConfigFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static ConfigFile parse(std::istream& is);
  static ConfigFile parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  const std::string& get(const std::string& section, const std::string& key) const;
};

enum class LandscapeKind { QuadraticSaddle, MultiBasin, Mlp };

struct LandscapeConfig {
  LandscapeKind kind = LandscapeKind::Mlp;
  // mlp
  DatasetSpec dataset;
  int hidden = 16;
  // quadratic_saddle
  std::vector<double> eigenvalues = {1.0, -1.0};
  // multi_basin
  std::vector<MultiBasin::Well> wells;
  // non-mlp start point: explicit when non-empty, otherwise random with scale
  std::vector<double> init;
  double init_scale = 0.5;
};

struct RunConfig {
  LandscapeConfig landscape;

  ScheduleKind scheduler_kind = ScheduleKind::EscalatingRestarts;
  SchedulerParams scheduler_params = EscalatingParams{};
  double lr_floor = kDefaultLrFloor;

  OptimizerKind optimizer = OptimizerKind::Sgd;
  double eta0 = 0.01;

  int budget = 300;
  int patience = 50;
  double min_delta = 0.0;
  int batch_size = 0;  // 0 = full batch
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::string out_dir = "results";
};

/// Builds a run configuration from [landscape], [scheduler] and [run]
/// sections. `require_scheduler` is off for subcommands that supply their own
/// schedule (compare builds all variants itself).
RunConfig load_run_config(const ConfigFile& file, bool require_scheduler = true);

/// Builds a sweep configuration from the [saddle] section.
EscapeConfig load_escape_config(const ConfigFile& file);

const char* to_string(LandscapeKind kind);

}  // namespace sgder
