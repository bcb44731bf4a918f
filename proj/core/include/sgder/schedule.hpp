#pragma once

#include <string>
#include <variant>

namespace sgder {

/// Lower bound applied to every emitted learning rate. Long decays never
/// reach zero, so an epoch never degenerates into a zero-length step.
inline constexpr double kDefaultLrFloor = 1e-8;

enum class ScheduleKind {
  ExpDecay,
  LinDecay,
  CosineWarmRestarts,
  Cyclical,
  WsdSimplified,
  EscalatingRestarts,
};

/// Decay applied within one restart segment of the escalating-restart
/// schedule.
enum class DecayMode { Exp, Lin };

struct ExpDecayParams {
  double decay_factor = 0.99;
};

struct LinDecayParams {
  int total_budget = 1;
  double lr_min = kDefaultLrFloor;
};

struct CosineParams {
  double lr_min = 0.0;
  double lr_max = 0.01;
  int t0 = 1;       // first cycle length, epochs
  int t_mult = 1;   // cycle-length multiplier at each reset
};

struct CyclicalParams {
  double lr_base = 0.001;
  double lr_max = 0.01;
  int step_size = 1;  // epochs per half-cycle
};

struct WsdsParams {
  int warmup_epochs = 0;
  double stable_lr = 0.01;
  int decay_start_epoch = 0;
  double decay_factor = 0.99;
};

struct EscalatingParams {
  DecayMode decay_mode = DecayMode::Exp;
  double intra_decay_factor = 0.99;  // Exp mode: per-epoch factor within a segment
  int intra_budget = 1;              // Lin mode: epochs from segment peak to floor
};

using SchedulerParams = std::variant<ExpDecayParams, LinDecayParams, CosineParams,
                                     CyclicalParams, WsdsParams, EscalatingParams>;

/// Per-schedule state machine. Pure value type: the learning rate is a
/// function of (params, counters) only, so replaying an event sequence
/// reproduces the exact LR series.
struct ScheduleState {
  ScheduleKind kind = ScheduleKind::ExpDecay;
  double eta0 = 0.01;
  int epoch = 0;           // global epoch counter t
  int restart_count = 0;   // k; stays 0 for non-restarting kinds
  int epoch_in_cycle = 0;  // epochs since the last restart
  double lr_floor = kDefaultLrFloor;
  SchedulerParams params = ExpDecayParams{};
};

enum class ScheduleEvent { EpochEnd, RestartTriggered };

/// Learning rate at the start of restart segment k: (k+1) * eta0, exact.
double escalated_lr(int restart_index, double eta0);

double exp_decay_lr(double eta0, double decay_factor, int epoch,
                    double floor = kDefaultLrFloor);

/// max(lr_min, eta0 * (1 - t/T)); clamps at lr_min past the budget.
double lin_decay_lr(double eta0, int total_budget, double lr_min, int epoch);

/// Cosine decay from lr_max to lr_min within each cycle; resets to lr_max at
/// cycle boundaries, next cycle t_mult times longer.
double cosine_warm_restart_lr(double lr_min, double lr_max, int t0, int t_mult,
                              int epoch);

/// Triangular wave between lr_base and lr_max with period 2*step_size.
double cyclical_lr(double lr_base, double lr_max, int step_size, int epoch);

/// Warmup-Stable-Decay-Simplified: linear ramp 0 -> stable_lr over the warmup,
/// constant stable phase, exponential decay after decay_start_epoch.
double wsds_lr(const WsdsParams& params, int epoch, double floor = kDefaultLrFloor);

/// Escalating-restart LR: segment-start value (k+1)*eta0, decayed within the
/// segment according to the configured decay mode.
double sgd_er_lr(const ScheduleState& state, int epochs_since_restart);

/// Current LR for the state's counters.
double lr_at(const ScheduleState& state);

/// Applies one event. EpochEnd advances both counters; RestartTriggered is
/// only legal for EscalatingRestarts and opens a new segment.
ScheduleState advance(ScheduleState state, ScheduleEvent event);

/// Validates parameters and builds the initial state.
ScheduleState make_schedule(ScheduleKind kind, double eta0, SchedulerParams params,
                            double lr_floor = kDefaultLrFloor);

const char* to_string(ScheduleKind kind);

}  // namespace sgder
