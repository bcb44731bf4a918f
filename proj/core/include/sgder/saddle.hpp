#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sgder/landscape.hpp"

namespace sgder {

/// Escape experiment around a strict saddle: initial offset x0 along the
/// unstable direction, neighborhood radius delta, restart indices to sweep.
struct EscapeConfig {
  double gamma = 1.0;
  double eta0 = 0.05;
  double x0 = 1e-3;
  double delta = 1.0;
  int k_min = 0;
  int k_max = 9;
  long t_max = 1000000;
};

enum class EscapeOutcome { Escaped, DidNotEscape, NonEscapingStart };

struct EscapeResult {
  int k = -1;  // restart index; -1 when run outside a sweep
  double eta_k = 0.0;
  double growth_factor = 0.0;  // alpha_k = 1 + eta_k * gamma
  double bound = 0.0;          // theoretical lower bound on the escape time
  EscapeOutcome outcome = EscapeOutcome::DidNotEscape;
  long t_empirical = 0;             // valid when outcome == Escaped
  double max_projected_rel_err = 0.0;  // filled by simulate_full
};

/// Lower bound ln(delta/|x0|) / ln(1 + eta_k*gamma) on the iterations needed
/// to leave the delta-neighborhood. Requires delta > |x0| > 0 and positive
/// eta_k, gamma.
double escape_bound(double delta, double x0, double eta_k, double gamma);

/// Iterates the projected recurrence x <- (1 + eta_k*gamma) x and reports the
/// first t with |x_t| >= delta.
EscapeResult simulate_projected(double x0, double eta_k, double gamma, double delta,
                                long t_max);

/// Full-vector gradient descent on the quadratic saddle. Escape is the first
/// exit from {|theta| <= delta}; the projected coordinate is checked against
/// its closed form (1 + eta_k*gamma)^t * x0 at every step and the worst
/// relative deviation is reported. A start on the stable manifold (x0 == 0)
/// yields NonEscapingStart.
EscapeResult simulate_full(const QuadraticSaddle& saddle,
                           std::span<const double> theta0, double eta_k, double delta,
                           long t_max);

/// One projected simulation per restart index in [k_min, k_max], with
/// eta_k = (k+1) * eta0. Results sorted by k.
std::vector<EscapeResult> sweep_restarts(const EscapeConfig& config);

/// Columns: k,eta_k,alpha_k,bound,T_empirical. A run that did not escape
/// writes -1 in the last column.
void write_escape_csv(std::span<const EscapeResult> results, std::ostream& os);

}  // namespace sgder
