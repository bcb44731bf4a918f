#include "sgder/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sgder/convergence.hpp"
#include "sgder/csv.hpp"
#include "sgder/mlp.hpp"
#include "sgder/rng.hpp"

namespace sgder {

namespace {

struct RunSetup {
  std::unique_ptr<SyntheticDataset> dataset;  // mlp only
  std::unique_ptr<Landscape> landscape;
  const MlpObjective* mlp = nullptr;  // non-null when landscape is the MLP
};

RunSetup build_landscape(const LandscapeConfig& cfg, std::uint64_t dataset_seed) {
  RunSetup setup;
  switch (cfg.kind) {
    case LandscapeKind::Mlp: {
      setup.dataset =
          std::make_unique<SyntheticDataset>(generate_dataset(cfg.dataset, dataset_seed));
      auto mlp = std::make_unique<MlpObjective>(*setup.dataset, cfg.hidden);
      setup.mlp = mlp.get();
      setup.landscape = std::move(mlp);
      return setup;
    }
    case LandscapeKind::QuadraticSaddle:
      setup.landscape = std::make_unique<QuadraticSaddle>(cfg.eigenvalues);
      return setup;
    case LandscapeKind::MultiBasin:
      setup.landscape = std::make_unique<MultiBasin>(cfg.wells);
      return setup;
  }
  throw std::invalid_argument("build_landscape: unknown landscape kind");
}

std::vector<double> initial_point(const RunSetup& setup, const LandscapeConfig& cfg,
                                  Rng& init_rng) {
  if (setup.mlp) return setup.mlp->init_params(init_rng);
  if (!cfg.init.empty()) {
    if (cfg.init.size() != setup.landscape->dim())
      throw std::invalid_argument("run: init point dimension mismatch");
    return cfg.init;
  }
  std::vector<double> theta(setup.landscape->dim());
  for (auto& v : theta) v = cfg.init_scale * init_rng.normal();
  return theta;
}

struct Metrics {
  double train = 0.0, val = 0.0, test = 0.0, acc = 0.0;
};

bool any_nan(const Metrics& m) {
  return std::isnan(m.train) || std::isnan(m.val) || std::isnan(m.test) ||
         std::isnan(m.acc);
}

std::string default_label(const RunConfig& cfg) {
  if (cfg.scheduler_kind == ScheduleKind::EscalatingRestarts) {
    const auto& p = std::get<EscalatingParams>(cfg.scheduler_params);
    return p.decay_mode == DecayMode::Exp ? "ours_exp" : "ours_lin";
  }
  return to_string(cfg.scheduler_kind);
}

void finalize_summary(RunRecord& rec) {
  rec.epochs_used = static_cast<int>(rec.rows.size());
  rec.best_train_loss = std::numeric_limits<double>::infinity();
  rec.best_val_loss = std::numeric_limits<double>::infinity();
  rec.best_test_loss = std::numeric_limits<double>::infinity();
  rec.best_test_acc = 0.0;
  for (const auto& row : rec.rows) {
    rec.best_train_loss = std::min(rec.best_train_loss, row.train_loss);
    rec.best_val_loss = std::min(rec.best_val_loss, row.val_loss);
    rec.best_test_loss = std::min(rec.best_test_loss, row.test_loss);
    rec.best_test_acc = std::max(rec.best_test_acc, row.test_acc);
  }
}

}  // namespace

RunRecord train_run(const RunConfig& config, std::uint64_t seed) {
  // One master stream per (config, seed); dataset, initialization and
  // shuffling draw from split child streams so every scheduler variant sees
  // identical initial conditions.
  std::mt19937_64 master(seed);
  const std::uint64_t dataset_seed = master();
  const std::uint64_t init_seed = master();
  const std::uint64_t shuffle_seed = master();

  RunSetup setup = build_landscape(config.landscape, dataset_seed);
  Rng init_rng(init_seed);
  std::vector<double> theta = initial_point(setup, config.landscape, init_rng);
  Rng shuffle_rng(shuffle_seed);

  ScheduleState schedule = make_schedule(config.scheduler_kind, config.eta0,
                                         config.scheduler_params, config.lr_floor);
  const bool escalating = config.scheduler_kind == ScheduleKind::EscalatingRestarts;
  PlateauDetector detector(config.patience, config.min_delta);
  RestartController controller(config.eta0, config.budget);

  Optimizer optimizer = config.optimizer == OptimizerKind::Adam
                            ? Optimizer::adam(theta.size())
                            : Optimizer::sgd();

  RunRecord rec;
  rec.scheduler_label = default_label(config);
  rec.seed = seed;
  rec.stop_reason = StopReason::BudgetExhausted;

  std::vector<int> batch_order;
  if (setup.mlp) batch_order = setup.dataset->train_indices;

  for (int epoch = 0; epoch < config.budget; ++epoch) {
    Metrics m;
    Eval train_eval;  // carries the full-batch gradient when it is needed
    if (setup.mlp) {
      const bool minibatch = config.batch_size > 0;
      if (minibatch) {
        m.train = setup.mlp->loss(theta, setup.dataset->train_indices);
      } else {
        train_eval = setup.mlp->eval_batch(theta, setup.dataset->train_indices);
        m.train = train_eval.value;
      }
      m.val = setup.mlp->loss(theta, setup.dataset->val_indices);
      m.test = setup.mlp->loss(theta, setup.dataset->test_indices);
      m.acc = setup.mlp->accuracy(theta, setup.dataset->test_indices);
    } else {
      train_eval = setup.landscape->eval(theta);
      m.train = m.val = m.test = train_eval.value;
      m.acc = 0.0;
    }

    if (any_nan(m)) {
      rec.stop_reason = StopReason::AbortedNanLoss;
      rec.diagnostic = "loss became NaN at epoch " + std::to_string(epoch);
      break;
    }

    bool restart_flag = false;
    if (escalating) {
      controller.observe_epoch(m.val);
      if (detector.observe(m.val) == PlateauSignal::PlateauDetected) {
        const PlateauAction action = controller.on_plateau(detector);
        if (std::holds_alternative<StopDecision>(action)) {
          rec.rows.push_back({epoch, lr_at(schedule), m.train, m.val, m.test, m.acc,
                              false, schedule.restart_count});
          rec.stop_reason = StopReason::NoImprovementAfterRestart;
          break;
        }
        schedule = advance(schedule, ScheduleEvent::RestartTriggered);
        restart_flag = true;
      }
    }

    const double lr = lr_at(schedule);
    rec.rows.push_back({epoch, lr, m.train, m.val, m.test, m.acc, restart_flag,
                        schedule.restart_count});

    try {
      if (setup.mlp && config.batch_size > 0) {
        shuffle_rng.shuffle(batch_order);
        const int n = static_cast<int>(batch_order.size());
        for (int start = 0; start < n; start += config.batch_size) {
          const int len = std::min(config.batch_size, n - start);
          const Eval batch_eval = setup.mlp->eval_batch(
              theta, std::span<const int>(batch_order.data() + start,
                                          static_cast<std::size_t>(len)));
          theta = optimizer.step(theta, batch_eval.grad, lr);
        }
      } else {
        theta = optimizer.step(theta, train_eval.grad, lr);
      }
    } catch (const std::runtime_error& e) {
      rec.stop_reason = StopReason::AbortedNanLoss;
      rec.diagnostic = std::string("update failed at epoch ") + std::to_string(epoch) +
                       ": " + e.what();
      break;
    }

    schedule = advance(schedule, ScheduleEvent::EpochEnd);
  }

  finalize_summary(rec);
  return rec;
}

std::vector<SchedulerVariant> scheduler_variants(const RunConfig& base) {
  const int budget = base.budget;
  constexpr double kSgdLr = 0.01;
  constexpr double kAdamLr = 0.001;

  auto variant = [&](std::string name, OptimizerKind opt, double eta0,
                     ScheduleKind kind, SchedulerParams params) {
    RunConfig cfg = base;
    cfg.optimizer = opt;
    cfg.eta0 = eta0;
    cfg.scheduler_kind = kind;
    cfg.scheduler_params = std::move(params);
    return SchedulerVariant{std::move(name), std::move(cfg)};
  };

  std::vector<SchedulerVariant> variants;
  variants.push_back(variant("sgd_exp", OptimizerKind::Sgd, kSgdLr,
                             ScheduleKind::ExpDecay, ExpDecayParams{0.99}));
  variants.push_back(variant("sgd_lin", OptimizerKind::Sgd, kSgdLr,
                             ScheduleKind::LinDecay,
                             LinDecayParams{budget, kDefaultLrFloor}));
  // The Adam baseline trains at a constant LR: a stable phase covering the
  // whole budget.
  variants.push_back(variant("adam", OptimizerKind::Adam, kAdamLr,
                             ScheduleKind::WsdSimplified,
                             WsdsParams{0, kAdamLr, budget, 0.99}));
  variants.push_back(variant("cosa", OptimizerKind::Sgd, kSgdLr,
                             ScheduleKind::CosineWarmRestarts,
                             CosineParams{0.0, kSgdLr, budget, 1}));
  variants.push_back(variant("clr", OptimizerKind::Sgd, kSgdLr, ScheduleKind::Cyclical,
                             CyclicalParams{kSgdLr / 10.0, kSgdLr,
                                            std::max(1, budget / 10)}));
  variants.push_back(variant("wsds", OptimizerKind::Sgd, kSgdLr,
                             ScheduleKind::WsdSimplified,
                             WsdsParams{std::max(0, budget / 20), kSgdLr,
                                        budget - budget / 5, 0.99}));
  variants.push_back(variant("ours_exp", OptimizerKind::Sgd, kSgdLr,
                             ScheduleKind::EscalatingRestarts,
                             EscalatingParams{DecayMode::Exp, 0.99, budget}));
  variants.push_back(variant("ours_lin", OptimizerKind::Sgd, kSgdLr,
                             ScheduleKind::EscalatingRestarts,
                             EscalatingParams{DecayMode::Lin, 0.99, budget}));
  return variants;
}

namespace {

struct MeanStd {
  double mean = 0.0, std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (const double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return out;  // single seed reports std = 0
  double ss = 0.0;
  for (const double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return out;
}

}  // namespace

ComparisonReport compare(const RunConfig& base, std::span<const std::uint64_t> seeds) {
  const auto variants = scheduler_variants(base);
  return compare_variants(variants, seeds);
}

ComparisonReport compare_variants(std::span<const SchedulerVariant> variants,
                                  std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw std::invalid_argument("compare: seed list is empty");

  ComparisonReport report;
  for (const auto& v : variants) {
    VariantSummary summary;
    summary.name = v.name;
    std::vector<RunRecord> runs;
    try {
      for (const std::uint64_t seed : seeds) {
        RunRecord rec = train_run(v.config, seed);
        rec.scheduler_label = v.name;
        if (rec.stop_reason == StopReason::AbortedNanLoss)
          throw std::runtime_error("run aborted: " + rec.diagnostic);
        runs.push_back(std::move(rec));
      }
    } catch (const std::exception& e) {
      summary.failed = true;
      summary.error = e.what();
      report.variants.push_back(std::move(summary));
      continue;
    }

    std::vector<double> train, val, test, acc;
    for (const auto& r : runs) {
      train.push_back(r.best_train_loss);
      val.push_back(r.best_val_loss);
      test.push_back(r.best_test_loss);
      acc.push_back(r.best_test_acc);
    }
    const auto mt = mean_std(train), mv = mean_std(val), ms = mean_std(test),
               ma = mean_std(acc);
    summary.n_seeds = static_cast<int>(seeds.size());
    summary.mean_best_train = mt.mean;
    summary.std_best_train = mt.std;
    summary.mean_best_val = mv.mean;
    summary.std_best_val = mv.std;
    summary.mean_best_test = ms.mean;
    summary.std_best_test = ms.std;
    summary.mean_best_acc = ma.mean;
    summary.std_best_acc = ma.std;
    report.variants.push_back(std::move(summary));
    for (auto& r : runs) report.runs.push_back(std::move(r));
  }
  return report;
}

void write_run_csv(const RunRecord& record, std::ostream& os) {
  os << "epoch,lr,train_loss,val_loss,test_loss,test_acc,restart,k\n";
  for (const auto& r : record.rows) {
    os << r.epoch << ',' << format_double(r.lr) << ',' << format_double(r.train_loss)
       << ',' << format_double(r.val_loss) << ',' << format_double(r.test_loss) << ','
       << format_double(r.test_acc) << ',' << (r.restart ? 1 : 0) << ',' << r.k << '\n';
  }
}

std::string run_csv_string(const RunRecord& record) {
  std::ostringstream os;
  write_run_csv(record, os);
  return os.str();
}

RunRecord read_run_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) ||
      line != "epoch,lr,train_loss,val_loss,test_loss,test_acc,restart,k")
    throw std::runtime_error("run csv: unexpected header");
  RunRecord rec;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw std::runtime_error("run csv: ragged row");
    EpochRow row;
    row.epoch = static_cast<int>(parse_long(f[0]));
    row.lr = parse_double(f[1]);
    row.train_loss = parse_double(f[2]);
    row.val_loss = parse_double(f[3]);
    row.test_loss = parse_double(f[4]);
    row.test_acc = parse_double(f[5]);
    row.restart = parse_long(f[6]) != 0;
    row.k = static_cast<int>(parse_long(f[7]));
    rec.rows.push_back(row);
  }
  finalize_summary(rec);
  return rec;
}

void write_summary_csv(const ComparisonReport& report, std::ostream& os) {
  os << "scheduler,metric,mean,std,n_seeds\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& v : report.variants) {
    const struct {
      const char* metric;
      double mean, std;
    } rows[] = {
        {"train_loss", v.failed ? nan : v.mean_best_train, v.failed ? nan : v.std_best_train},
        {"val_loss", v.failed ? nan : v.mean_best_val, v.failed ? nan : v.std_best_val},
        {"test_loss", v.failed ? nan : v.mean_best_test, v.failed ? nan : v.std_best_test},
        {"test_acc", v.failed ? nan : v.mean_best_acc, v.failed ? nan : v.std_best_acc},
    };
    for (const auto& r : rows) {
      os << v.name << ',' << r.metric << ',' << format_double(r.mean) << ','
         << format_double(r.std) << ',' << v.n_seeds << '\n';
    }
  }
}

void print_summary(const ComparisonReport& report, std::ostream& os) {
  os << "scheduler    best train loss        best val loss          "
        "best test loss         best test acc\n";
  for (const auto& v : report.variants) {
    if (v.failed) {
      os << v.name << ": FAILED (" << v.error << ")\n";
      continue;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%-12s %.6f (+/-%.6f)  %.6f (+/-%.6f)  %.6f (+/-%.6f)  %.4f (+/-%.4f)\n",
                  v.name.c_str(), v.mean_best_train, v.std_best_train, v.mean_best_val,
                  v.std_best_val, v.mean_best_test, v.std_best_test, v.mean_best_acc,
                  v.std_best_acc);
    os << buf;
  }
}

namespace {

void write_series_csv(const std::string& path, const char* value_header,
                      const std::vector<std::pair<int, double>>& series) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit_plot_data: cannot write " + path);
  os << "epoch," << value_header << '\n';
  for (const auto& [epoch, value] : series)
    os << epoch << ',' << format_double(value) << '\n';
}

void write_series_svg(const std::string& path, const std::string& title,
                      const std::vector<std::pair<int, double>>& series) {
  constexpr int kW = 640, kH = 400, kMargin = 50;
  double lo = series.front().second, hi = lo;
  for (const auto& [_, v] : series) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) hi = lo + 1.0;
  const double x_span = std::max<std::size_t>(1, series.size() - 1);

  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit_plot_data: cannot write " + path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
     << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << kW / 2 << "' y='20' text-anchor='middle' font-size='14'>"
     << title << "</text>\n";
  os << "<polyline fill='none' stroke='crimson' stroke-width='1.5' points='";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double x = kMargin + (kW - 2.0 * kMargin) * (static_cast<double>(i) / x_span);
    const double y =
        kH - kMargin - (kH - 2.0 * kMargin) * ((series[i].second - lo) / (hi - lo));
    os << x << ',' << y << ' ';
  }
  os << "'/>\n";
  os << "<line x1='" << kMargin << "' y1='" << kH - kMargin << "' x2='" << kW - kMargin
     << "' y2='" << kH - kMargin << "' stroke='black'/>\n";
  os << "<line x1='" << kMargin << "' y1='" << kMargin << "' x2='" << kMargin << "' y2='"
     << kH - kMargin << "' stroke='black'/>\n";
  os << "<text x='" << kMargin << "' y='" << kH - kMargin + 20
     << "' font-size='11'>0</text>\n";
  os << "<text x='" << kW - kMargin << "' y='" << kH - kMargin + 20
     << "' text-anchor='end' font-size='11'>" << series.back().first << "</text>\n";
  os << "<text x='" << kMargin - 5 << "' y='" << kH - kMargin
     << "' text-anchor='end' font-size='11'>" << format_double(lo) << "</text>\n";
  os << "<text x='" << kMargin - 5 << "' y='" << kMargin + 5
     << "' text-anchor='end' font-size='11'>" << format_double(hi) << "</text>\n";
  os << "</svg>\n";
}

}  // namespace

std::vector<std::string> emit_plot_data(std::span<const RunRecord> records,
                                        const std::string& dir, bool svg) {
  if (records.empty())
    throw std::invalid_argument("emit_plot_data: no records to plot");
  std::filesystem::create_directories(dir);

  std::vector<std::string> paths;
  for (const auto& rec : records) {
    const std::string stem =
        dir + "/" + rec.scheduler_label + "_seed" + std::to_string(rec.seed);
    std::vector<std::pair<int, double>> lr_series, acc_series;
    lr_series.reserve(rec.rows.size());
    acc_series.reserve(rec.rows.size());
    for (const auto& row : rec.rows) {
      lr_series.emplace_back(row.epoch, row.lr);
      acc_series.emplace_back(row.epoch, row.test_acc);
    }
    if (lr_series.empty())
      throw std::invalid_argument("emit_plot_data: record with no rows: " + stem);

    write_series_csv(stem + "_lr.csv", "lr", lr_series);
    paths.push_back(stem + "_lr.csv");
    write_series_csv(stem + "_acc.csv", "test_acc", acc_series);
    paths.push_back(stem + "_acc.csv");
    if (svg) {
      write_series_svg(stem + "_lr.svg", rec.scheduler_label + " learning rate",
                       lr_series);
      paths.push_back(stem + "_lr.svg");
      write_series_svg(stem + "_acc.svg", rec.scheduler_label + " test accuracy",
                       acc_series);
      paths.push_back(stem + "_acc.svg");
    }
  }
  return paths;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::BudgetExhausted: return "budget_exhausted";
    case StopReason::NoImprovementAfterRestart: return "no_improvement_after_restart";
    case StopReason::AbortedNanLoss: return "aborted_nan_loss";
  }
  return "unknown";
}

}  // namespace sgder
