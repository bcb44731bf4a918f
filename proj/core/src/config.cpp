#include "sgder/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sgder/csv.hpp"

namespace sgder {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream iss(s);
  while (std::getline(iss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double to_double(const std::string& section, const std::string& key,
                 const std::string& value) {
  try {
    return parse_double(value);
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": expected a number, got '" +
                      value + "'");
  }
}

long to_long(const std::string& section, const std::string& key,
             const std::string& value) {
  try {
    return parse_long(value);
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": expected an integer, got '" +
                      value + "'");
  }
}

/// Typed accessor over one section with a closed key vocabulary.
class Section {
 public:
  Section(const ConfigFile& file, std::string name, std::set<std::string> keys)
      : name_(std::move(name)), allowed_(std::move(keys)) {
    const auto it = file.sections.find(name_);
    if (it != file.sections.end()) entries_ = &it->second;
    if (entries_) {
      for (const auto& [key, value] : *entries_) {
        if (!allowed_.count(key))
          throw ConfigError("[" + name_ + "] unknown key '" + key + "'");
      }
    }
  }

  bool present() const { return entries_ != nullptr; }
  bool has(const std::string& key) const { return entries_ && entries_->count(key); }

  std::string str(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    return entries_->at(key);
  }
  std::string required(const std::string& key) const {
    if (!has(key)) throw ConfigError("[" + name_ + "] missing required key '" + key + "'");
    return entries_->at(key);
  }
  double num(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return to_double(name_, key, entries_->at(key));
  }
  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    return to_long(name_, key, entries_->at(key));
  }
  std::vector<double> num_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(entries_->at(key), ','))
      out.push_back(to_double(name_, key, item));
    return out;
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::set<std::string> allowed_;
  const std::map<std::string, std::string>* entries_ = nullptr;
};

}  // namespace

ConfigFile ConfigFile::parse(std::istream& is) {
  ConfigFile file;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
      file.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (file.sections[section].count(key))
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                        key + "'");
    file.sections[section][key] = value;
  }
  return file;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  return parse(is);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections.find(section);
  return it != sections.end() && it->second.count(key);
}

const std::string& ConfigFile::get(const std::string& section,
                                   const std::string& key) const {
  return sections.at(section).at(key);
}

namespace {

const std::set<std::string> kKnownSections = {"landscape", "scheduler", "run", "saddle"};

LandscapeConfig load_landscape(const ConfigFile& file) {
  Section sec(file, "landscape",
              {"kind", "n", "d", "classes", "separation", "noise", "frac_train",
               "frac_val", "frac_test", "hidden", "eigenvalues", "wells", "init",
               "init_scale"});
  LandscapeConfig cfg;
  if (!sec.present()) return cfg;

  const std::string kind = sec.str("kind", "mlp");
  if (kind == "mlp") {
    cfg.kind = LandscapeKind::Mlp;
  } else if (kind == "quadratic_saddle") {
    cfg.kind = LandscapeKind::QuadraticSaddle;
  } else if (kind == "multi_basin") {
    cfg.kind = LandscapeKind::MultiBasin;
  } else {
    throw ConfigError("[landscape] unknown kind '" + kind + "'");
  }

  cfg.dataset.n = static_cast<int>(sec.integer("n", cfg.dataset.n));
  cfg.dataset.d = static_cast<int>(sec.integer("d", cfg.dataset.d));
  cfg.dataset.classes = static_cast<int>(sec.integer("classes", cfg.dataset.classes));
  cfg.dataset.separation = sec.num("separation", cfg.dataset.separation);
  cfg.dataset.noise = sec.num("noise", cfg.dataset.noise);
  cfg.dataset.frac_train = sec.num("frac_train", cfg.dataset.frac_train);
  cfg.dataset.frac_val = sec.num("frac_val", cfg.dataset.frac_val);
  cfg.dataset.frac_test = sec.num("frac_test", cfg.dataset.frac_test);
  cfg.hidden = static_cast<int>(sec.integer("hidden", cfg.hidden));

  if (sec.has("eigenvalues")) cfg.eigenvalues = sec.num_list("eigenvalues");
  if (sec.has("init")) cfg.init = sec.num_list("init");
  cfg.init_scale = sec.num("init_scale", cfg.init_scale);

  if (sec.has("wells")) {
    cfg.wells.clear();
    for (const auto& group : split_list(sec.str("wells", ""), ';')) {
      std::vector<double> vals;
      for (const auto& item : split_list(group, ','))
        vals.push_back(to_double("landscape", "wells", item));
      if (vals.size() < 3)
        throw ConfigError("[landscape] wells: each well needs center...,depth,width");
      MultiBasin::Well w;
      w.width = vals.back();
      vals.pop_back();
      w.depth = vals.back();
      vals.pop_back();
      w.center = vals;
      cfg.wells.push_back(std::move(w));
    }
  }
  if (cfg.kind == LandscapeKind::MultiBasin && cfg.wells.empty())
    throw ConfigError("[landscape] multi_basin requires a wells list");
  return cfg;
}

SchedulerParams load_scheduler_params(const Section& sec, ScheduleKind kind,
                                      int budget) {
  switch (kind) {
    case ScheduleKind::ExpDecay:
      return ExpDecayParams{sec.num("decay_factor", 0.99)};
    case ScheduleKind::LinDecay: {
      LinDecayParams p;
      p.total_budget = static_cast<int>(sec.integer("total_budget", budget));
      p.lr_min = sec.num("lr_min", kDefaultLrFloor);
      return p;
    }
    case ScheduleKind::CosineWarmRestarts: {
      CosineParams p;
      p.lr_min = sec.num("lr_min", 0.0);
      p.lr_max = sec.num("lr_max", 0.01);
      p.t0 = static_cast<int>(sec.integer("t0", budget));
      p.t_mult = static_cast<int>(sec.integer("t_mult", 1));
      return p;
    }
    case ScheduleKind::Cyclical: {
      CyclicalParams p;
      p.lr_base = sec.num("lr_base", 0.001);
      p.lr_max = sec.num("lr_max", 0.01);
      p.step_size = static_cast<int>(sec.integer("step_size", std::max(1, budget / 10)));
      return p;
    }
    case ScheduleKind::WsdSimplified: {
      WsdsParams p;
      p.warmup_epochs = static_cast<int>(
          sec.integer("warmup_epochs", std::max(0, budget / 20)));
      p.stable_lr = sec.num("stable_lr", 0.01);
      p.decay_start_epoch = static_cast<int>(
          sec.integer("decay_start_epoch", budget - budget / 5));
      p.decay_factor = sec.num("decay_factor", 0.99);
      return p;
    }
    case ScheduleKind::EscalatingRestarts: {
      EscalatingParams p;
      const std::string mode = sec.str("decay_mode", "exp");
      if (mode == "exp") {
        p.decay_mode = DecayMode::Exp;
      } else if (mode == "lin") {
        p.decay_mode = DecayMode::Lin;
      } else {
        throw ConfigError("[scheduler] decay_mode must be exp or lin");
      }
      p.intra_decay_factor = sec.num("intra_decay_factor", 0.99);
      p.intra_budget = static_cast<int>(sec.integer("intra_budget", budget));
      return p;
    }
  }
  throw ConfigError("[scheduler] unknown kind");
}

}  // namespace

RunConfig load_run_config(const ConfigFile& file, bool require_scheduler) {
  for (const auto& [name, _] : file.sections) {
    if (!kKnownSections.count(name))
      throw ConfigError("unknown config section [" + name + "]");
  }

  RunConfig cfg;
  cfg.landscape = load_landscape(file);

  Section run(file, "run",
              {"optimizer", "budget", "patience", "min_delta", "batch_size", "seeds",
               "out"});
  if (run.present()) {
    const std::string opt = run.str("optimizer", "sgd");
    if (opt == "sgd") {
      cfg.optimizer = OptimizerKind::Sgd;
    } else if (opt == "adam") {
      cfg.optimizer = OptimizerKind::Adam;
    } else {
      throw ConfigError("[run] unknown optimizer '" + opt + "'");
    }
    cfg.budget = static_cast<int>(run.integer("budget", cfg.budget));
    cfg.patience = static_cast<int>(run.integer("patience", cfg.patience));
    cfg.min_delta = run.num("min_delta", cfg.min_delta);
    cfg.batch_size = static_cast<int>(run.integer("batch_size", cfg.batch_size));
    cfg.out_dir = run.str("out", cfg.out_dir);
    if (run.has("seeds")) {
      cfg.seeds.clear();
      for (const auto& item : split_list(run.str("seeds", ""), ',')) {
        const long s = to_long("run", "seeds", item);
        if (s < 0) throw ConfigError("[run] seeds must be non-negative");
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
      }
    }
  }
  if (cfg.budget < 1) throw ConfigError("[run] budget must be >= 1");
  if (cfg.patience < 1) throw ConfigError("[run] patience must be >= 1");
  if (cfg.min_delta < 0.0) throw ConfigError("[run] min_delta must be >= 0");
  if (cfg.batch_size < 0) throw ConfigError("[run] batch_size must be >= 0");
  if (cfg.seeds.empty()) throw ConfigError("[run] seeds must be non-empty");

  Section sched(file, "scheduler",
                {"kind", "eta0", "lr_floor", "decay_factor", "total_budget", "lr_min",
                 "lr_max", "t0", "t_mult", "lr_base", "step_size", "warmup_epochs",
                 "stable_lr", "decay_start_epoch", "decay_mode", "intra_decay_factor",
                 "intra_budget"});
  if (sched.present()) {
    const std::string kind = sched.required("kind");
    if (kind == "exp_decay") {
      cfg.scheduler_kind = ScheduleKind::ExpDecay;
    } else if (kind == "lin_decay") {
      cfg.scheduler_kind = ScheduleKind::LinDecay;
    } else if (kind == "cosine_warm_restarts") {
      cfg.scheduler_kind = ScheduleKind::CosineWarmRestarts;
    } else if (kind == "cyclical") {
      cfg.scheduler_kind = ScheduleKind::Cyclical;
    } else if (kind == "wsds") {
      cfg.scheduler_kind = ScheduleKind::WsdSimplified;
    } else if (kind == "escalating_restarts") {
      cfg.scheduler_kind = ScheduleKind::EscalatingRestarts;
    } else {
      throw ConfigError("[scheduler] unknown kind '" + kind + "'");
    }
    cfg.eta0 = sched.num("eta0", cfg.optimizer == OptimizerKind::Adam ? 0.001 : 0.01);
    cfg.lr_floor = sched.num("lr_floor", kDefaultLrFloor);
    cfg.scheduler_params = load_scheduler_params(sched, cfg.scheduler_kind, cfg.budget);
  } else if (require_scheduler) {
    throw ConfigError("missing [scheduler] section");
  } else {
    cfg.eta0 = cfg.optimizer == OptimizerKind::Adam ? 0.001 : 0.01;
  }

  if (!(cfg.eta0 > 0.0)) throw ConfigError("[scheduler] eta0 must be positive");
  if (!(cfg.lr_floor > 0.0)) throw ConfigError("[scheduler] lr_floor must be positive");

  // Surface parameter problems now rather than at run time.
  try {
    if (sched.present())
      (void)make_schedule(cfg.scheduler_kind, cfg.eta0, cfg.scheduler_params,
                          cfg.lr_floor);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[scheduler] invalid parameters: ") + e.what());
  }
  return cfg;
}

EscapeConfig load_escape_config(const ConfigFile& file) {
  for (const auto& [name, _] : file.sections) {
    if (!kKnownSections.count(name))
      throw ConfigError("unknown config section [" + name + "]");
  }
  Section sec(file, "saddle",
              {"gamma", "eta0", "x0", "delta", "k_min", "k_max", "t_max"});
  EscapeConfig cfg;
  if (!sec.present()) throw ConfigError("missing [saddle] section");
  cfg.gamma = sec.num("gamma", cfg.gamma);
  cfg.eta0 = sec.num("eta0", cfg.eta0);
  cfg.x0 = sec.num("x0", cfg.x0);
  cfg.delta = sec.num("delta", cfg.delta);
  cfg.k_min = static_cast<int>(sec.integer("k_min", cfg.k_min));
  cfg.k_max = static_cast<int>(sec.integer("k_max", cfg.k_max));
  cfg.t_max = sec.integer("t_max", cfg.t_max);
  if (!(cfg.gamma > 0.0)) throw ConfigError("[saddle] gamma must be positive");
  if (!(cfg.eta0 > 0.0)) throw ConfigError("[saddle] eta0 must be positive");
  if (cfg.x0 == 0.0) throw ConfigError("[saddle] x0 must be non-zero");
  if (!(cfg.delta > std::abs(cfg.x0)))
    throw ConfigError("[saddle] delta must exceed |x0|");
  if (cfg.k_min < 0 || cfg.k_max < cfg.k_min)
    throw ConfigError("[saddle] need 0 <= k_min <= k_max");
  if (cfg.t_max < 1) throw ConfigError("[saddle] t_max must be >= 1");
  return cfg;
}

const char* to_string(LandscapeKind kind) {
  switch (kind) {
    case LandscapeKind::QuadraticSaddle: return "quadratic_saddle";
    case LandscapeKind::MultiBasin: return "multi_basin";
    case LandscapeKind::Mlp: return "mlp";
  }
  return "unknown";
}

}  // namespace sgder
