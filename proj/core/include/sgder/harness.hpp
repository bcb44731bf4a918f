#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sgder/config.hpp"

namespace sgder {

enum class StopReason { BudgetExhausted, NoImprovementAfterRestart, AbortedNanLoss };

struct EpochRow {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double test_loss = 0.0;
  double test_acc = 0.0;
  bool restart = false;
  int k = 0;
};

/// Full trajectory of one training run plus its terminal summary. The lr
/// column replays exactly from the scheduler given the restart flags.
struct RunRecord {
  std::string scheduler_label;
  std::uint64_t seed = 0;
  std::vector<EpochRow> rows;
  StopReason stop_reason = StopReason::BudgetExhausted;
  std::string diagnostic;  // set when the run aborted
  double best_train_loss = 0.0;
  double best_val_loss = 0.0;
  double best_test_loss = 0.0;
  double best_test_acc = 0.0;
  int epochs_used = 0;
};

/// Executes one run: epoch loop wiring landscape, optimizer, scheduler and,
/// for the escalating-restart schedule, the plateau detector and restart
/// controller. Deterministic for a fixed (config, seed).
RunRecord train_run(const RunConfig& config, std::uint64_t seed);

struct VariantSummary {
  std::string name;
  bool failed = false;
  std::string error;
  int n_seeds = 0;
  double mean_best_train = 0.0, std_best_train = 0.0;
  double mean_best_val = 0.0, std_best_val = 0.0;
  double mean_best_test = 0.0, std_best_test = 0.0;
  double mean_best_acc = 0.0, std_best_acc = 0.0;
};

struct ComparisonReport {
  std::vector<VariantSummary> variants;
  std::vector<RunRecord> runs;  // every completed run, for plots and audits
};

/// A named scheduler/optimizer configuration entering the comparison.
struct SchedulerVariant {
  std::string name;
  RunConfig config;
};

/// The eight benchmark variants: sgd_exp, sgd_lin, adam (constant LR), cosa,
/// clr, wsds, ours_exp, ours_lin. SGD variants start at eta0 = 0.01, Adam at
/// 0.001; baseline constants follow the documented defaults.
std::vector<SchedulerVariant> scheduler_variants(const RunConfig& base);

/// Runs every variant over every seed and aggregates mean/sample-std of the
/// per-run best metrics. A variant whose run throws or aborts is marked
/// failed; the others are unaffected.
ComparisonReport compare(const RunConfig& base, std::span<const std::uint64_t> seeds);
ComparisonReport compare_variants(std::span<const SchedulerVariant> variants,
                                  std::span<const std::uint64_t> seeds);

/// Columns: epoch,lr,train_loss,val_loss,test_loss,test_acc,restart,k.
void write_run_csv(const RunRecord& record, std::ostream& os);
RunRecord read_run_csv(std::istream& is);
std::string run_csv_string(const RunRecord& record);

/// Columns: scheduler,metric,mean,std,n_seeds. Failed variants emit nan rows.
void write_summary_csv(const ComparisonReport& report, std::ostream& os);

/// Prints the aggregate table (mean +/- std per variant and metric).
void print_summary(const ComparisonReport& report, std::ostream& os);

/// Per-record series files <label>_seed<seed>_lr.csv and ..._acc.csv in
/// `dir`; optional SVG line charts next to them. Throws on an empty list.
std::vector<std::string> emit_plot_data(std::span<const RunRecord> records,
                                        const std::string& dir, bool svg = false);

const char* to_string(StopReason reason);

}  // namespace sgder
