#pragma once

#include <variant>
#include <vector>

namespace sgder {

enum class PlateauSignal { Continue, PlateauDetected };

/// Plateau detector over a validation-loss stream. Tracks the running
/// minimum; the patience counter resets only when a new value beats the
/// previous best by more than min_delta, so a drip of sub-threshold
/// improvements still counts as stagnation.
class PlateauDetector {
 public:
  PlateauDetector(int patience, double min_delta = 0.0);

  /// Feeds one epoch's validation loss. Fires PlateauDetected on the first
  /// observation where the counter reaches the patience window.
  PlateauSignal observe(double val_loss);

  /// Called when a restart is issued: the window resets, the best loss is
  /// kept so the next segment must beat the global best to reset it again.
  void notify_restart();

  int patience() const { return patience_; }
  double min_delta() const { return min_delta_; }
  double best_loss() const { return best_loss_; }
  int epochs_since_improve() const { return epochs_since_improve_; }

 private:
  int patience_;
  double min_delta_;
  double best_loss_;
  int epochs_since_improve_ = 0;
};

struct RestartDecision {
  int new_restart_count = 0;
  double new_lr = 0.0;
};
struct StopDecision {};
using PlateauAction = std::variant<RestartDecision, StopDecision>;

/// Owns the restart history and the two termination rules: stop when a
/// completed segment fails to beat the best of all previous segments, or
/// when the epoch budget is exhausted. Once either rule fires the verdict
/// latches for the rest of the run.
class RestartController {
 public:
  RestartController(double eta0, int max_epochs);

  /// Folds one epoch's validation loss into the current segment.
  void observe_epoch(double val_loss);

  bool should_stop() const;

  /// Resolves a detected plateau: either a stop verdict or a restart with
  /// the escalated learning rate. Model parameters are left untouched by
  /// design; only the schedule changes.
  PlateauAction on_plateau(PlateauDetector& detector);

  double eta0() const { return eta0_; }
  int restart_count() const { return restart_count_; }
  int epochs_elapsed() const { return epochs_elapsed_; }
  int max_epochs() const { return max_epochs_; }
  const std::vector<double>& segment_best() const { return segment_best_; }

 private:
  double eta0_;
  int max_epochs_;
  int restart_count_ = 0;
  int epochs_elapsed_ = 0;
  std::vector<double> segment_best_;
  mutable bool stopped_ = false;
};

}  // namespace sgder
