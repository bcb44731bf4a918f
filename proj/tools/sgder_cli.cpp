// Command-line front end: run a single training configuration, sweep the
// eight scheduler variants, sweep saddle-escape restart indices, or audit
// analytic gradients against finite differences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgder/config.hpp"
#include "sgder/csv.hpp"
#include "sgder/harness.hpp"
#include "sgder/mlp.hpp"
#include "sgder/rng.hpp"
#include "sgder/saddle.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonArgs {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  int budget = -1;
  int patience = -1;
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "config file path");
  if (config_required) opt->required();
  cmd->add_option("--seed", args.seeds, "seed list (repeat or comma-separate)")
      ->delimiter(',');
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--budget", args.budget, "override epoch budget");
  cmd->add_option("--patience", args.patience, "override patience window");
  cmd->add_flag("--svg", args.svg, "also render SVG line charts");
}

sgder::RunConfig load_with_overrides(const CommonArgs& args, bool require_scheduler) {
  const auto file = sgder::ConfigFile::parse_file(args.config_path);
  sgder::RunConfig cfg = sgder::load_run_config(file, require_scheduler);
  if (!args.seeds.empty()) cfg.seeds = args.seeds;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.budget > 0) cfg.budget = args.budget;
  if (args.patience > 0) cfg.patience = args.patience;
  return cfg;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << contents;
}

int cmd_run(const CommonArgs& args) {
  const sgder::RunConfig cfg = load_with_overrides(args, /*require_scheduler=*/true);
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<sgder::RunRecord> records;
  for (const std::uint64_t seed : cfg.seeds) {
    sgder::RunRecord rec = sgder::train_run(cfg, seed);
    const std::string path = cfg.out_dir + "/" + rec.scheduler_label + "_seed" +
                             std::to_string(seed) + ".csv";
    write_file(path, sgder::run_csv_string(rec));
    std::cout << rec.scheduler_label << " seed " << seed << ": " << rec.epochs_used
              << " epochs, stop=" << sgder::to_string(rec.stop_reason)
              << ", best val loss " << sgder::format_double(rec.best_val_loss)
              << ", best test acc " << sgder::format_double(rec.best_test_acc) << "\n";
    if (rec.stop_reason == sgder::StopReason::AbortedNanLoss)
      std::cout << "  diagnostic: " << rec.diagnostic << "\n";
    records.push_back(std::move(rec));
  }
  sgder::emit_plot_data(records, cfg.out_dir, args.svg);
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  const sgder::RunConfig cfg = load_with_overrides(args, /*require_scheduler=*/false);
  std::filesystem::create_directories(cfg.out_dir);

  const sgder::ComparisonReport report = sgder::compare(cfg, cfg.seeds);
  for (const auto& rec : report.runs) {
    const std::string path = cfg.out_dir + "/" + rec.scheduler_label + "_seed" +
                             std::to_string(rec.seed) + ".csv";
    write_file(path, sgder::run_csv_string(rec));
  }
  {
    std::ofstream os(cfg.out_dir + "/summary.csv");
    if (!os) throw std::runtime_error("cannot write summary.csv");
    sgder::write_summary_csv(report, os);
  }
  sgder::emit_plot_data(report.runs, cfg.out_dir, args.svg);
  sgder::print_summary(report, std::cout);

  for (const auto& v : report.variants) {
    if (v.failed) return kExitRuntime;
  }
  return 0;
}

int cmd_saddle(const CommonArgs& args) {
  const auto file = sgder::ConfigFile::parse_file(args.config_path);
  const sgder::EscapeConfig cfg = sgder::load_escape_config(file);

  const auto results = sgder::sweep_restarts(cfg);
  const std::string dir = args.out_dir.empty() ? "results" : args.out_dir;
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir + "/saddle.csv");
    if (!os) throw std::runtime_error("cannot write saddle.csv");
    sgder::write_escape_csv(results, os);
  }
  sgder::write_escape_csv(results, std::cout);
  return 0;
}

int cmd_gradcheck(const CommonArgs& args) {
  // Max relative gradient error over sampled points, measured as
  // ||g_analytic - g_fd|| / max(||g_analytic||, ||g_fd||).
  constexpr int kPoints = 100;
  constexpr double kStep = 1e-5;
  constexpr double kTol = 1e-5;

  struct Case {
    std::string name;
    std::unique_ptr<sgder::Landscape> landscape;
    std::unique_ptr<sgder::SyntheticDataset> dataset;  // keeps the MLP data alive
    double point_scale = 1.0;
  };
  std::vector<Case> cases;

  if (!args.config_path.empty()) {
    const auto file = sgder::ConfigFile::parse_file(args.config_path);
    const sgder::RunConfig cfg = sgder::load_run_config(file, /*require_scheduler=*/false);
    Case c;
    c.name = sgder::to_string(cfg.landscape.kind);
    switch (cfg.landscape.kind) {
      case sgder::LandscapeKind::QuadraticSaddle:
        c.landscape = std::make_unique<sgder::QuadraticSaddle>(cfg.landscape.eigenvalues);
        break;
      case sgder::LandscapeKind::MultiBasin:
        c.landscape = std::make_unique<sgder::MultiBasin>(cfg.landscape.wells);
        break;
      case sgder::LandscapeKind::Mlp: {
        c.dataset = std::make_unique<sgder::SyntheticDataset>(
            sgder::generate_dataset(cfg.landscape.dataset, 1));
        c.landscape = std::make_unique<sgder::MlpObjective>(*c.dataset, cfg.landscape.hidden);
        c.point_scale = 0.5;
        break;
      }
    }
    cases.push_back(std::move(c));
  } else {
    Case saddle;
    saddle.name = "quadratic_saddle";
    saddle.landscape = std::make_unique<sgder::QuadraticSaddle>(std::vector<double>{1.0, -1.0});
    cases.push_back(std::move(saddle));

    Case basin;
    basin.name = "multi_basin";
    basin.landscape = std::make_unique<sgder::MultiBasin>(std::vector<sgder::MultiBasin::Well>{
        {{-1.0, 0.0}, 1.0, 0.8}, {{1.5, 0.5}, 2.0, 0.6}});
    cases.push_back(std::move(basin));

    Case mlp;
    mlp.name = "mlp";
    mlp.dataset = std::make_unique<sgder::SyntheticDataset>(
        sgder::generate_dataset(sgder::DatasetSpec{}, 1));
    mlp.landscape = std::make_unique<sgder::MlpObjective>(*mlp.dataset, 16);
    mlp.point_scale = 0.5;
    cases.push_back(std::move(mlp));
  }

  bool ok = true;
  for (const auto& c : cases) {
    sgder::Rng rng(42);
    double worst = 0.0;
    for (int p = 0; p < kPoints; ++p) {
      std::vector<double> theta(c.landscape->dim());
      for (auto& v : theta) v = c.point_scale * rng.normal();
      const auto analytic = c.landscape->eval(theta).grad;
      const auto fd = sgder::fd_gradient(*c.landscape, theta, kStep);
      double diff2 = 0.0, a2 = 0.0, f2 = 0.0;
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        diff2 += (analytic[i] - fd[i]) * (analytic[i] - fd[i]);
        a2 += analytic[i] * analytic[i];
        f2 += fd[i] * fd[i];
      }
      const double denom = std::max({std::sqrt(a2), std::sqrt(f2), 1e-12});
      worst = std::max(worst, std::sqrt(diff2) / denom);
    }
    const bool pass = worst <= kTol;
    ok = ok && pass;
    std::cout << c.name << ": max rel err " << sgder::format_double(worst) << " over "
              << kPoints << " points -> " << (pass ? "OK" : "FAIL") << "\n";
  }
  return ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"escalating-restart learning-rate scheduling experiments"};
  app.require_subcommand(1);

  CommonArgs run_args, compare_args, saddle_args, grad_args;
  auto* run = app.add_subcommand("run", "train one configuration across its seeds");
  add_common(run, run_args, /*config_required=*/true);
  auto* cmp = app.add_subcommand("compare", "run all eight scheduler variants");
  add_common(cmp, compare_args, /*config_required=*/true);
  auto* sad = app.add_subcommand("saddle", "sweep saddle-escape restart indices");
  add_common(sad, saddle_args, /*config_required=*/true);
  auto* grad = app.add_subcommand("gradcheck", "audit analytic gradients vs finite differences");
  add_common(grad, grad_args, /*config_required=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (cmp->parsed()) return cmd_compare(compare_args);
    if (sad->parsed()) return cmd_saddle(saddle_args);
    if (grad->parsed()) return cmd_gradcheck(grad_args);
  } catch (const sgder::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
