#include "sgder/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgder {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double escalated_lr(int restart_index, double eta0) {
  require(eta0 > 0.0, "escalated_lr: eta0 must be positive");
  require(restart_index >= 0, "escalated_lr: restart index must be >= 0");
  return static_cast<double>(restart_index + 1) * eta0;
}

double exp_decay_lr(double eta0, double decay_factor, int epoch, double floor) {
  require(eta0 > 0.0, "exp_decay_lr: eta0 must be positive");
  require(decay_factor > 0.0 && decay_factor < 1.0,
          "exp_decay_lr: decay factor must lie in (0, 1)");
  require(epoch >= 0, "exp_decay_lr: epoch must be >= 0");
  return std::max(floor, eta0 * std::pow(decay_factor, epoch));
}

double lin_decay_lr(double eta0, int total_budget, double lr_min, int epoch) {
  require(total_budget >= 1, "lin_decay_lr: budget must be >= 1");
  require(lr_min > 0.0 && lr_min <= eta0, "lin_decay_lr: need 0 < lr_min <= eta0");
  require(epoch >= 0, "lin_decay_lr: epoch must be >= 0");
  const double frac = static_cast<double>(epoch) / static_cast<double>(total_budget);
  return std::max(lr_min, eta0 * (1.0 - frac));
}

double cosine_warm_restart_lr(double lr_min, double lr_max, int t0, int t_mult,
                              int epoch) {
  require(lr_max > 0.0 && lr_max >= lr_min && lr_min >= 0.0,
          "cosine_warm_restart_lr: need lr_max >= lr_min >= 0, lr_max > 0");
  require(t0 >= 1 && t_mult >= 1, "cosine_warm_restart_lr: need t0 >= 1, t_mult >= 1");
  require(epoch >= 0, "cosine_warm_restart_lr: epoch must be >= 0");

  // Locate the cycle containing `epoch`.
  long cycle_len = t0;
  long t_cycle = epoch;
  if (t_mult == 1) {
    t_cycle = epoch % t0;
  } else {
    while (t_cycle >= cycle_len) {
      t_cycle -= cycle_len;
      cycle_len *= t_mult;
    }
  }
  if (t_cycle == 0) return lr_max;  // exact at cycle start
  const double phase = 3.14159265358979323846 * static_cast<double>(t_cycle) /
                       static_cast<double>(cycle_len);
  return lr_min + 0.5 * (lr_max - lr_min) * (1.0 + std::cos(phase));
}

double cyclical_lr(double lr_base, double lr_max, int step_size, int epoch) {
  require(lr_base > 0.0 && lr_max >= lr_base,
          "cyclical_lr: need lr_max >= lr_base > 0");
  require(step_size >= 1, "cyclical_lr: step_size must be >= 1");
  require(epoch >= 0, "cyclical_lr: epoch must be >= 0");

  const int p = epoch % (2 * step_size);
  if (p == 0) return lr_base;          // trough, exact
  if (p == step_size) return lr_max;   // peak, exact
  const double frac = p < step_size
                          ? static_cast<double>(p) / step_size
                          : static_cast<double>(2 * step_size - p) / step_size;
  return lr_base + (lr_max - lr_base) * frac;
}

double wsds_lr(const WsdsParams& params, int epoch, double floor) {
  require(params.warmup_epochs >= 0, "wsds_lr: warmup must be >= 0");
  require(params.stable_lr > 0.0, "wsds_lr: stable_lr must be positive");
  if (params.decay_start_epoch < params.warmup_epochs)
    throw std::invalid_argument("wsds_lr: decay must not start before warmup ends");
  require(params.decay_factor > 0.0 && params.decay_factor < 1.0,
          "wsds_lr: decay factor must lie in (0, 1)");
  require(epoch >= 0, "wsds_lr: epoch must be >= 0");

  if (epoch < params.warmup_epochs) {
    const double ramp = params.stable_lr * static_cast<double>(epoch) /
                        static_cast<double>(params.warmup_epochs);
    return std::max(floor, ramp);
  }
  if (epoch <= params.decay_start_epoch) return params.stable_lr;
  const int since_decay = epoch - params.decay_start_epoch;
  return std::max(floor, params.stable_lr * std::pow(params.decay_factor, since_decay));
}

double sgd_er_lr(const ScheduleState& state, int epochs_since_restart) {
  if (state.kind != ScheduleKind::EscalatingRestarts)
    throw std::logic_error("sgd_er_lr: state is not an escalating-restart schedule");
  require(epochs_since_restart >= 0, "sgd_er_lr: epochs_since_restart must be >= 0");

  const auto& p = std::get<EscalatingParams>(state.params);
  const double base = escalated_lr(state.restart_count, state.eta0);
  if (p.decay_mode == DecayMode::Exp) {
    require(p.intra_decay_factor > 0.0 && p.intra_decay_factor <= 1.0,
            "sgd_er_lr: intra decay factor must lie in (0, 1]");
    return std::max(state.lr_floor,
                    base * std::pow(p.intra_decay_factor, epochs_since_restart));
  }
  require(p.intra_budget >= 1, "sgd_er_lr: intra budget must be >= 1");
  // Lin: interpolate from the segment peak down to the floor over the
  // intra budget, then hold at the floor.
  const double frac = std::min(
      1.0, static_cast<double>(epochs_since_restart) / static_cast<double>(p.intra_budget));
  return std::max(state.lr_floor, base + (state.lr_floor - base) * frac);
}

double lr_at(const ScheduleState& state) {
  switch (state.kind) {
    case ScheduleKind::ExpDecay: {
      const auto& p = std::get<ExpDecayParams>(state.params);
      return exp_decay_lr(state.eta0, p.decay_factor, state.epoch, state.lr_floor);
    }
    case ScheduleKind::LinDecay: {
      const auto& p = std::get<LinDecayParams>(state.params);
      return std::max(state.lr_floor,
                      lin_decay_lr(state.eta0, p.total_budget, p.lr_min, state.epoch));
    }
    case ScheduleKind::CosineWarmRestarts: {
      const auto& p = std::get<CosineParams>(state.params);
      return std::max(state.lr_floor,
                      cosine_warm_restart_lr(p.lr_min, p.lr_max, p.t0, p.t_mult, state.epoch));
    }
    case ScheduleKind::Cyclical: {
      const auto& p = std::get<CyclicalParams>(state.params);
      return std::max(state.lr_floor,
                      cyclical_lr(p.lr_base, p.lr_max, p.step_size, state.epoch));
    }
    case ScheduleKind::WsdSimplified: {
      const auto& p = std::get<WsdsParams>(state.params);
      return wsds_lr(p, state.epoch, state.lr_floor);
    }
    case ScheduleKind::EscalatingRestarts:
      return sgd_er_lr(state, state.epoch_in_cycle);
  }
  throw std::logic_error("lr_at: unknown schedule kind");
}

ScheduleState advance(ScheduleState state, ScheduleEvent event) {
  switch (event) {
    case ScheduleEvent::EpochEnd:
      ++state.epoch;
      ++state.epoch_in_cycle;
      return state;
    case ScheduleEvent::RestartTriggered:
      if (state.kind != ScheduleKind::EscalatingRestarts)
        throw std::logic_error("advance: restart event on a non-restarting schedule");
      ++state.restart_count;
      state.epoch_in_cycle = 0;
      return state;
  }
  throw std::logic_error("advance: unknown event");
}

namespace {

ScheduleKind kind_of(const SchedulerParams& params) {
  struct Visitor {
    ScheduleKind operator()(const ExpDecayParams&) { return ScheduleKind::ExpDecay; }
    ScheduleKind operator()(const LinDecayParams&) { return ScheduleKind::LinDecay; }
    ScheduleKind operator()(const CosineParams&) { return ScheduleKind::CosineWarmRestarts; }
    ScheduleKind operator()(const CyclicalParams&) { return ScheduleKind::Cyclical; }
    ScheduleKind operator()(const WsdsParams&) { return ScheduleKind::WsdSimplified; }
    ScheduleKind operator()(const EscalatingParams&) { return ScheduleKind::EscalatingRestarts; }
  };
  return std::visit(Visitor{}, params);
}

}  // namespace

ScheduleState make_schedule(ScheduleKind kind, double eta0, SchedulerParams params,
                            double lr_floor) {
  require(eta0 > 0.0, "make_schedule: eta0 must be positive");
  require(lr_floor > 0.0, "make_schedule: lr floor must be positive");
  if (kind_of(params) != kind)
    throw std::invalid_argument("make_schedule: params do not match schedule kind");

  ScheduleState state;
  state.kind = kind;
  state.eta0 = eta0;
  state.lr_floor = lr_floor;
  state.params = std::move(params);

  // Validate parameter ranges by evaluating the first epoch.
  (void)lr_at(state);
  return state;
}

const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::ExpDecay: return "exp_decay";
    case ScheduleKind::LinDecay: return "lin_decay";
    case ScheduleKind::CosineWarmRestarts: return "cosine_warm_restarts";
    case ScheduleKind::Cyclical: return "cyclical";
    case ScheduleKind::WsdSimplified: return "wsds";
    case ScheduleKind::EscalatingRestarts: return "escalating_restarts";
  }
  return "unknown";
}

}  // namespace sgder
