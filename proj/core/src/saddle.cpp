#include "sgder/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sgder/csv.hpp"
#include "sgder/schedule.hpp"

namespace sgder {

namespace {

constexpr double kOverflowGuard = 1e300;

void check_escape_args(double delta, double x0, double eta_k, double gamma) {
  if (!(x0 != 0.0)) throw std::invalid_argument("saddle escape: x0 must be non-zero");
  if (!(delta > std::abs(x0)))
    throw std::invalid_argument("saddle escape: delta must exceed |x0|");
  if (!(eta_k > 0.0)) throw std::invalid_argument("saddle escape: eta_k must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("saddle escape: gamma must be positive");
}

}  // namespace

double escape_bound(double delta, double x0, double eta_k, double gamma) {
  check_escape_args(delta, x0, eta_k, gamma);
  return std::log(delta / std::abs(x0)) / std::log(1.0 + eta_k * gamma);
}

EscapeResult simulate_projected(double x0, double eta_k, double gamma, double delta,
                                long t_max) {
  check_escape_args(delta, x0, eta_k, gamma);
  if (t_max < 1) throw std::invalid_argument("simulate_projected: t_max must be >= 1");

  EscapeResult result;
  result.eta_k = eta_k;
  result.growth_factor = 1.0 + eta_k * gamma;
  result.bound = escape_bound(delta, x0, eta_k, gamma);

  double x = x0;
  for (long t = 1; t <= t_max; ++t) {
    x *= result.growth_factor;
    if (std::abs(x) >= delta) {
      result.outcome = EscapeOutcome::Escaped;
      result.t_empirical = t;
      return result;
    }
    if (std::abs(x) > kOverflowGuard)
      throw std::runtime_error("simulate_projected: overflow before escape at t=" +
                               std::to_string(t));
  }
  result.outcome = EscapeOutcome::DidNotEscape;
  return result;
}

EscapeResult simulate_full(const QuadraticSaddle& saddle,
                           std::span<const double> theta0, double eta_k, double delta,
                           long t_max) {
  if (theta0.size() != saddle.dim())
    throw std::invalid_argument("simulate_full: theta0 dimension mismatch");
  if (!(eta_k > 0.0)) throw std::invalid_argument("simulate_full: eta_k must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("simulate_full: delta must be positive");
  if (t_max < 1) throw std::invalid_argument("simulate_full: t_max must be >= 1");

  double norm0 = 0.0;
  for (const double v : theta0) norm0 += v * v;
  norm0 = std::sqrt(norm0);
  if (norm0 > delta)
    throw std::invalid_argument("simulate_full: theta0 lies outside the neighborhood");

  const double gamma = saddle.gamma();
  const double x0 = saddle.project_unstable(theta0);

  EscapeResult result;
  result.eta_k = eta_k;
  result.growth_factor = 1.0 + eta_k * gamma;
  if (x0 == 0.0) {
    result.outcome = EscapeOutcome::NonEscapingStart;
    return result;
  }
  result.bound = escape_bound(delta, x0, eta_k, gamma);

  std::vector<double> theta(theta0.begin(), theta0.end());
  for (long t = 1; t <= t_max; ++t) {
    const Eval e = saddle.eval(theta);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] -= eta_k * e.grad[i];
      norm2 += theta[i] * theta[i];
    }

    // The dynamics are exactly linear on a quadratic, so the projected
    // coordinate must follow the closed-form recurrence.
    const double projected = saddle.project_unstable(theta);
    const double closed_form = std::pow(result.growth_factor, t) * x0;
    const double rel = std::abs(projected - closed_form) / std::abs(closed_form);
    result.max_projected_rel_err = std::max(result.max_projected_rel_err, rel);

    const double norm = std::sqrt(norm2);
    if (norm > delta) {
      result.outcome = EscapeOutcome::Escaped;
      result.t_empirical = t;
      return result;
    }
    if (norm > kOverflowGuard)
      throw std::runtime_error("simulate_full: overflow before escape at t=" +
                               std::to_string(t));
  }
  result.outcome = EscapeOutcome::DidNotEscape;
  return result;
}

std::vector<EscapeResult> sweep_restarts(const EscapeConfig& config) {
  if (config.k_min < 0 || config.k_max < config.k_min)
    throw std::invalid_argument("sweep_restarts: bad restart index range");
  std::vector<EscapeResult> results;
  results.reserve(config.k_max - config.k_min + 1);
  for (int k = config.k_min; k <= config.k_max; ++k) {
    const double eta_k = escalated_lr(k, config.eta0);
    EscapeResult r =
        simulate_projected(config.x0, eta_k, config.gamma, config.delta, config.t_max);
    r.k = k;
    results.push_back(r);
  }
  return results;
}

void write_escape_csv(std::span<const EscapeResult> results, std::ostream& os) {
  os << "k,eta_k,alpha_k,bound,T_empirical\n";
  for (const auto& r : results) {
    os << r.k << ',' << format_double(r.eta_k) << ',' << format_double(r.growth_factor)
       << ',' << format_double(r.bound) << ','
       << (r.outcome == EscapeOutcome::Escaped ? r.t_empirical : -1) << '\n';
  }
}

}  // namespace sgder
