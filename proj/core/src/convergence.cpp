#include "sgder/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgder/schedule.hpp"

namespace sgder {

PlateauDetector::PlateauDetector(int patience, double min_delta)
    : patience_(patience),
      min_delta_(min_delta),
      best_loss_(std::numeric_limits<double>::infinity()) {
  if (patience < 1) throw std::invalid_argument("PlateauDetector: patience must be >= 1");
  if (min_delta < 0.0)
    throw std::invalid_argument("PlateauDetector: min_delta must be >= 0");
}

PlateauSignal PlateauDetector::observe(double val_loss) {
  if (std::isnan(val_loss))
    throw std::runtime_error("PlateauDetector: validation loss is NaN");

  if (val_loss < best_loss_ - min_delta_) {
    best_loss_ = val_loss;
    epochs_since_improve_ = 0;
    return PlateauSignal::Continue;
  }
  best_loss_ = std::min(best_loss_, val_loss);
  ++epochs_since_improve_;
  return epochs_since_improve_ == patience_ ? PlateauSignal::PlateauDetected
                                            : PlateauSignal::Continue;
}

void PlateauDetector::notify_restart() { epochs_since_improve_ = 0; }

RestartController::RestartController(double eta0, int max_epochs)
    : eta0_(eta0), max_epochs_(max_epochs) {
  if (eta0 <= 0.0) throw std::invalid_argument("RestartController: eta0 must be positive");
  if (max_epochs < 1)
    throw std::invalid_argument("RestartController: max_epochs must be >= 1");
}

void RestartController::observe_epoch(double val_loss) {
  if (std::isnan(val_loss))
    throw std::runtime_error("RestartController: validation loss is NaN");
  if (epochs_elapsed_ >= max_epochs_)
    throw std::logic_error("RestartController: observation past the epoch budget");

  ++epochs_elapsed_;
  const auto k = static_cast<std::size_t>(restart_count_);
  if (segment_best_.size() == k) {
    segment_best_.push_back(val_loss);
  } else {
    segment_best_[k] = std::min(segment_best_[k], val_loss);
  }
}

bool RestartController::should_stop() const {
  if (stopped_) return true;
  if (epochs_elapsed_ >= max_epochs_) {
    stopped_ = true;
    return true;
  }
  // A completed segment k >= 1 must strictly beat the best of segments
  // 0..k-1; ties count as failure to improve.
  const auto k = static_cast<std::size_t>(restart_count_);
  if (k >= 1 && segment_best_.size() == k + 1) {
    const double prev_best =
        *std::min_element(segment_best_.begin(), segment_best_.begin() + k);
    if (segment_best_[k] >= prev_best) {
      stopped_ = true;
      return true;
    }
  }
  return false;
}

PlateauAction RestartController::on_plateau(PlateauDetector& detector) {
  if (should_stop()) return StopDecision{};
  ++restart_count_;
  detector.notify_restart();
  return RestartDecision{restart_count_, escalated_lr(restart_count_, eta0_)};
}

}  // namespace sgder
