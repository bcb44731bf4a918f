#pragma once

#include <cstddef>
#include <vector>

namespace sgder {

/// One plain gradient-descent update: theta - lr * grad. Throws on
/// dimension mismatch or non-finite gradient entries.
std::vector<double> sgd_step(const std::vector<double>& theta,
                             const std::vector<double>& grad, double lr);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState init(std::size_t dim, double beta1 = 0.9, double beta2 = 0.999,
                        double epsilon = 1e-8);
};

struct AdamResult {
  AdamState state;
  std::vector<double> theta;
};

/// Bias-corrected Adam update.
AdamResult adam_step(AdamState state, const std::vector<double>& theta,
                     const std::vector<double>& grad, double lr);

enum class OptimizerKind { Sgd, Adam };

/// Thin wrapper used by the training loop so SGD and Adam share one update
/// call. A restart is a no-op on optimizer state: parameters are retained by
/// the caller and Adam moments carry across segments.
class Optimizer {
 public:
  static Optimizer sgd();
  static Optimizer adam(std::size_t dim, double beta1 = 0.9, double beta2 = 0.999,
                        double epsilon = 1e-8);

  std::vector<double> step(const std::vector<double>& theta,
                           const std::vector<double>& grad, double lr);

  void apply_restart() {}  // parameters and moments are retained

  OptimizerKind kind() const { return kind_; }
  const AdamState& adam_state() const { return adam_state_; }

 private:
  OptimizerKind kind_ = OptimizerKind::Sgd;
  AdamState adam_state_;
};

const char* to_string(OptimizerKind kind);

}  // namespace sgder
