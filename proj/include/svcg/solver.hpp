#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "svcg/cost_sharing.hpp"
#include "svcg/game.hpp"

namespace svcg {

/// Derived constants of the phased improvement dynamics.
struct ScheduleParams {
  double gamma = 0.0;
  double t = 0.0;       // 1 + gamma
  double theta = 0.0;   // limited stretch bound at rho = t
  double s = 0.0;       // (1/theta - 2 gamma)^(-1)
  double g = 0.0;       // 2 n (d+1) gamma^-3
  double x_max = 0.0;
  double x_min = 0.0;
  std::size_t m = 1;    // phase count
  std::vector<double> blocks;  // b_0 .. b_m, b_r = x_max g^-r
  double alpha = 0.0;
  double step_bound = 0.0;     // (1 + m) 2 n^2 (d+1) gamma^-9
  int degree = 0;
  std::size_t num_players = 0;
};

/// compute_schedule rejects gamma; carries the largest admissible value.
class GammaTooLarge : public PreconditionError {
 public:
  GammaTooLarge(const std::string& what, double max_gamma)
      : PreconditionError(what), max_gamma_(max_gamma) {}
  double max_gamma() const { return max_gamma_; }

 private:
  double max_gamma_;
};

/// g = 2 n (d+1) gamma^-3, the ratio between consecutive blocks.
double phase_growth(std::size_t num_players, int d, double gamma);

ScheduleParams compute_schedule(const Game& game, const Profile& initial, double gamma);

/// Cheapest alone-cost of player i: min over strategies of sum_e C_e(w_i).
double alone_best_cost(const Game& game, PlayerId player);

struct BestResponse {
  std::size_t strategy;
  double cost;
};

/// Evaluates every strategy of `player` against the others' current choices;
/// ties go to the lowest strategy index.
BestResponse best_response(const Game& game, const Profile& profile, PlayerId player,
                           const ShareMethod& method, std::uint64_t context = 0);

struct RhoMove {
  std::size_t strategy;
  double current_cost;
  double new_cost;
  double ratio;  // current / new
};

/// The best-response deviation iff X_i(P) > rho (1 + kRelTol) X_i(BR).
std::optional<RhoMove> can_rho_move(const Game& game, const Profile& profile, PlayerId player,
                                    double rho, const ShareMethod& method,
                                    std::uint64_t context = 0);

enum class MoveKind { kS, kT };

struct MoveRecord {
  std::size_t step;   // 1-based
  std::size_t phase;  // 0 = initial loop
  PlayerId player;
  std::size_t from;
  std::size_t to;
  double cost_before;
  double cost_after;
  MoveKind kind;
  double potential_after;
};

struct PhaseRecord {
  std::size_t phase;
  std::size_t steps = 0;
  std::vector<PlayerId> deviators;  // D_r, ascending
  std::vector<PlayerId> finished;   // finished set after the freeze, ascending
  double potential = 0.0;           // at phase end
  double social_cost = 0.0;         // at phase end
};

struct SolveTrace {
  double initial_potential = 0.0;
  std::vector<MoveRecord> moves;
  std::vector<PhaseRecord> phases;
  Profile final_profile;
};

enum class ScanPolicy { kRoundRobin };

struct SolveResult {
  Profile profile;
  SolveTrace trace;
  ScheduleParams schedule;
};

/// Thrown when the executed moves exceed the proven step bound. Carries the
/// partial trace for diagnosis.
class StepBudgetExceeded : public std::runtime_error {
 public:
  StepBudgetExceeded(const std::string& what, SolveTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const SolveTrace& trace() const { return trace_; }

 private:
  SolveTrace trace_;
};

struct SolveOptions {
  ScanPolicy scan = ScanPolicy::kRoundRobin;
  /// Record Phi after each move (exact Shapley; needs every resource within
  /// the exact size cap).
  bool record_potential = true;
  /// Optional tighter budget than the proven bound (0 = proven bound only).
  std::size_t max_steps = 0;
};

/// Runs the initial t-move loop and phases 1..m-1, freezing players with
/// X_i >= b_r after phase r. s-eligibility: X_i >= b_r; t-eligibility:
/// b_{r+1} <= X_i < b_r.
SolveResult solve(const Game& game, const Profile& initial, double gamma,
                  const ShareMethod& method, const SolveOptions& options = {});

}  // namespace svcg
