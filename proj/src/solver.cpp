#include "svcg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "svcg/analysis.hpp"
#include "svcg/potentials.hpp"
#include "svcg/rng.hpp"

namespace svcg {

double alone_best_cost(const Game& game, PlayerId player) {
  const Player& p = game.players.at(player);
  double best = std::numeric_limits<double>::infinity();
  for (const Strategy& s : p.strategies) {
    double cost = 0.0;
    for (ResourceId e : s) cost += game.resources.at(e).joint(p.weight);
    best = std::min(best, cost);
  }
  return best;
}

double phase_growth(std::size_t num_players, int d, double gamma) {
  return 2.0 * static_cast<double>(num_players) * (d + 1.0) * std::pow(gamma, -3.0);
}

ScheduleParams compute_schedule(const Game& game, const Profile& initial, double gamma) {
  if (const auto v = validate_game(game); !v.empty())
    throw PreconditionError("invalid game: " + v.front());
  check_profile(game, initial);
  const int d = game.degree();
  if (!(gamma > 0.0)) throw PreconditionError("gamma must be positive");

  ScheduleParams sp;
  sp.degree = d;
  sp.num_players = game.num_players();
  sp.gamma = gamma;
  sp.t = 1.0 + gamma;
  auto too_large = [&] {
    const double max_gamma = max_admissible_gamma(d);
    return GammaTooLarge("gamma violates stretch constraint; maximal admissible gamma for d=" +
                             std::to_string(d) + " is " + std::to_string(max_gamma),
                         max_gamma);
  };
  if (!(gamma < 1.0) || !(bound_denominator(1.0L + gamma, d) > 0.0L)) throw too_large();
  sp.theta = stretch_theta(gamma, d);
  const double inner = 1.0 / sp.theta - 2.0 * gamma;
  if (!(inner > 0.0)) throw too_large();
  sp.s = 1.0 / inner;
  sp.alpha = alpha_of(gamma, d);

  const double n = static_cast<double>(game.num_players());
  sp.g = phase_growth(game.num_players(), d, gamma);

  const auto exact = ShareMethod::shapley_exact();
  sp.x_max = 0.0;
  sp.x_min = std::numeric_limits<double>::infinity();
  for (PlayerId i = 0; i < game.num_players(); ++i) {
    sp.x_max = std::max(sp.x_max, player_cost(game, initial, i, exact));
    sp.x_min = std::min(sp.x_min, alone_best_cost(game, i));
  }
  const double ratio = sp.x_max / sp.x_min;
  sp.m = 1;
  if (ratio > 1.0)
    sp.m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log(ratio) / std::log(sp.g))));
  sp.blocks.resize(sp.m + 1);
  for (std::size_t r = 0; r <= sp.m; ++r)
    sp.blocks[r] = sp.x_max * std::pow(sp.g, -static_cast<double>(r));
  sp.step_bound = (1.0 + static_cast<double>(sp.m)) * 2.0 * n * n * (d + 1.0) * std::pow(gamma, -9.0);
  return sp;
}

namespace {

// X_i(P_{-i}, P'_i) for every strategy of i. Strategy s is priced from the
// stream family derive_key(context, {s}), so the current strategy's entry is
// the same number whether it is read as "current cost" or as a candidate.
std::vector<double> all_costs(const Game& game, const Profile& profile, PlayerId player,
                              const ShareMethod& method, std::uint64_t context) {
  const std::size_t k = game.players.at(player).strategies.size();
  std::vector<double> costs(k);
  for (std::size_t s = 0; s < k; ++s)
    costs[s] = player_cost(game, with_choice(profile, player, s), player, method,
                           derive_key(context, {static_cast<std::uint64_t>(s)}));
  return costs;
}

std::size_t argmin(const std::vector<double>& costs) {
  std::size_t best = 0;
  for (std::size_t s = 1; s < costs.size(); ++s)
    if (costs[s] < costs[best]) best = s;
  return best;
}

bool is_rho_move(double current, double candidate, double rho) {
  return current > rho * (1.0 + kRelTol) * candidate;
}

}  // namespace

BestResponse best_response(const Game& game, const Profile& profile, PlayerId player,
                           const ShareMethod& method, std::uint64_t context) {
  check_profile(game, profile);
  const std::vector<double> costs = all_costs(game, profile, player, method, context);
  const std::size_t s = argmin(costs);
  return {s, costs[s]};
}

std::optional<RhoMove> can_rho_move(const Game& game, const Profile& profile, PlayerId player,
                                    double rho, const ShareMethod& method,
                                    std::uint64_t context) {
  if (!(rho >= 1.0)) throw PreconditionError("rho must be >= 1");
  check_profile(game, profile);
  const std::vector<double> costs = all_costs(game, profile, player, method, context);
  const std::size_t s = argmin(costs);
  const double current = costs[profile.choice[player]];
  if (!is_rho_move(current, costs[s], rho)) return std::nullopt;
  return RhoMove{s, current, costs[s], current / costs[s]};
}

SolveResult solve(const Game& game, const Profile& initial, double gamma,
                  const ShareMethod& method_in, const SolveOptions& options) {
  SolveResult result;
  result.schedule = compute_schedule(game, initial, gamma);
  const ScheduleParams& sp = result.schedule;
  const std::size_t n = game.num_players();

  ShareMethod method = method_in;
  std::uint64_t seed = 0;
  if (method.is_sampled()) {
    SampleConfig& cfg = method.sample_config();
    if (!cfg.batches) {
      const double phase_term = std::log(sp.x_max / sp.x_min) / std::log(sp.g);
      cfg.batches = default_batch_count(n, game.max_strategies(), game.num_resources(), phase_term,
                                        sp.degree, gamma, cfg.failure_exponent);
    }
    cfg.validate(true);
    seed = cfg.seed;
  }

  Profile profile = initial;
  SolveTrace& trace = result.trace;
  if (options.record_potential) trace.initial_potential = potential(game, profile).total;
  std::vector<bool> finished(n, false);
  std::size_t steps = 0;

  struct Eligibility {
    double rho;
    MoveKind kind;
  };

  auto run_phase = [&](std::size_t phase, auto&& classify) {
    PhaseRecord rec;
    rec.phase = phase;
    std::set<PlayerId> deviators;
    while (true) {
      bool moved = false;
      for (PlayerId i = 0; i < n && !moved; ++i) {
        if (finished[i]) continue;
        const std::uint64_t ctx = derive_key(seed, {steps, i});
        const std::vector<double> costs = all_costs(game, profile, i, method, ctx);
        const std::size_t from = profile.choice[i];
        const double current = costs[from];
        const std::optional<Eligibility> el = classify(current);
        if (!el) continue;
        const std::size_t to = argmin(costs);
        if (!is_rho_move(current, costs[to], el->rho)) continue;

        profile.choice[i] = to;
        ++steps;
        ++rec.steps;
        deviators.insert(i);
        MoveRecord mv{steps, phase, i, from, to, current, costs[to], el->kind, 0.0};
        if (options.record_potential) mv.potential_after = potential(game, profile).total;
        trace.moves.push_back(mv);
        moved = true;

        if (static_cast<double>(steps) > sp.step_bound ||
            (options.max_steps != 0 && steps > options.max_steps)) {
          trace.final_profile = profile;
          throw StepBudgetExceeded("step budget exceeded after " + std::to_string(steps) +
                                       " moves (proven bound " + std::to_string(sp.step_bound) + ")",
                                   trace);
        }
      }
      if (!moved) break;
    }
    rec.deviators.assign(deviators.begin(), deviators.end());
    return rec;
  };

  auto close_phase = [&](PhaseRecord& rec) {
    for (PlayerId i = 0; i < n; ++i)
      if (finished[i]) rec.finished.push_back(i);
    if (options.record_potential) rec.potential = potential(game, profile).total;
    rec.social_cost = social_cost(game, profile);
    trace.phases.push_back(std::move(rec));
  };

  // Initial loop: t-moves for every player with X_i >= b_1.
  {
    const double b1 = sp.blocks[1];
    PhaseRecord rec = run_phase(0, [&](double cost) -> std::optional<Eligibility> {
      if (cost >= b1) return Eligibility{sp.t, MoveKind::kT};
      return std::nullopt;
    });
    close_phase(rec);
  }

  for (std::size_t r = 1; r + 1 <= sp.m; ++r) {
    const double br = sp.blocks[r];
    const double bnext = sp.blocks[r + 1];
    PhaseRecord rec = run_phase(r, [&](double cost) -> std::optional<Eligibility> {
      if (cost >= br) return Eligibility{sp.s, MoveKind::kS};
      if (cost >= bnext) return Eligibility{sp.t, MoveKind::kT};
      return std::nullopt;
    });
    for (PlayerId i = 0; i < n; ++i) {
      if (finished[i]) continue;
      const std::uint64_t ctx = derive_key(seed, {steps, i, 0xf1u});
      if (player_cost(game, profile, i, method, ctx) >= br) finished[i] = true;
    }
    close_phase(rec);
  }

  trace.final_profile = profile;
  result.profile = profile;
  return result;
}

}  // namespace svcg
