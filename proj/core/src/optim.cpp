#include "sgder/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sgder {

namespace {

void check_update_args(const std::vector<double>& theta,
                       const std::vector<double>& grad, double lr) {
  if (theta.size() != grad.size())
    throw std::invalid_argument("optimizer step: parameter/gradient dimension mismatch");
  if (!(lr > 0.0)) throw std::invalid_argument("optimizer step: lr must be positive");
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i]))
      throw std::runtime_error("optimizer step: non-finite gradient at coordinate " +
                               std::to_string(i));
  }
}

}  // namespace

std::vector<double> sgd_step(const std::vector<double>& theta,
                             const std::vector<double>& grad, double lr) {
  check_update_args(theta, grad, lr);
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) out[i] = theta[i] - lr * grad[i];
  return out;
}

AdamState AdamState::init(std::size_t dim, double beta1, double beta2, double epsilon) {
  if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0))
    throw std::invalid_argument("AdamState: betas must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("AdamState: epsilon must be positive");
  AdamState s;
  s.m.assign(dim, 0.0);
  s.v.assign(dim, 0.0);
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  return s;
}

AdamResult adam_step(AdamState state, const std::vector<double>& theta,
                     const std::vector<double>& grad, double lr) {
  check_update_args(theta, grad, lr);
  if (state.m.size() != theta.size())
    throw std::invalid_argument("adam_step: state dimension mismatch");

  ++state.t;
  const double bc1 = 1.0 - std::pow(state.beta1, state.t);
  const double bc2 = 1.0 - std::pow(state.beta2, state.t);

  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    out[i] = theta[i] - lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
  return {std::move(state), std::move(out)};
}

Optimizer Optimizer::sgd() {
  Optimizer o;
  o.kind_ = OptimizerKind::Sgd;
  return o;
}

Optimizer Optimizer::adam(std::size_t dim, double beta1, double beta2, double epsilon) {
  Optimizer o;
  o.kind_ = OptimizerKind::Adam;
  o.adam_state_ = AdamState::init(dim, beta1, beta2, epsilon);
  return o;
}

std::vector<double> Optimizer::step(const std::vector<double>& theta,
                                    const std::vector<double>& grad, double lr) {
  if (kind_ == OptimizerKind::Sgd) return sgd_step(theta, grad, lr);
  auto result = adam_step(std::move(adam_state_), theta, grad, lr);
  adam_state_ = std::move(result.state);
  return std::move(result.theta);
}

const char* to_string(OptimizerKind kind) {
  return kind == OptimizerKind::Sgd ? "sgd" : "adam";
}

}  // namespace sgder
