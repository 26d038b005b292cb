#include "svcg/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "svcg/cost_sharing.hpp"

namespace svcg {

bool approx_equal(double a, double b, double rel) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

bool approx_leq(double a, double b, double rel) {
  return a <= b || approx_equal(a, b, rel);
}

int CostPolynomial::degree() const {
  for (std::size_t k = coeffs_.size(); k-- > 0;)
    if (coeffs_[k] != 0.0) return static_cast<int>(k);
  return 0;
}

double CostPolynomial::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double CostPolynomial::joint(double load) const { return load * eval(load); }

int Game::degree() const {
  int d = 0;
  for (const auto& r : resources) d = std::max(d, r.degree());
  return d;
}

std::size_t Game::max_strategies() const {
  std::size_t k = 0;
  for (const auto& p : players) k = std::max(k, p.strategies.size());
  return k;
}

PlayerSet PlayerSet::of(std::size_t n, std::initializer_list<PlayerId> ids) {
  return of(n, std::span<const PlayerId>(ids.begin(), ids.size()));
}

PlayerSet PlayerSet::of(std::size_t n, std::span<const PlayerId> ids) {
  PlayerSet s(n);
  for (PlayerId i : ids) {
    if (i >= n) throw PreconditionError("player id out of range in player set");
    s.insert(i);
  }
  return s;
}

std::size_t PlayerSet::size() const {
  return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true));
}

std::vector<PlayerId> PlayerSet::members() const {
  std::vector<PlayerId> out;
  for (PlayerId i = 0; i < member_.size(); ++i)
    if (member_[i]) out.push_back(i);
  return out;
}

bool PlayerSet::is_subset_of(const PlayerSet& other) const {
  for (PlayerId i = 0; i < member_.size(); ++i)
    if (member_[i] && !other.contains(i)) return false;
  return true;
}

PlayerSet PlayerSet::minus(const PlayerSet& other) const {
  PlayerSet out = *this;
  for (PlayerId i = 0; i < member_.size(); ++i)
    if (other.contains(i)) out.member_[i] = false;
  return out;
}

std::vector<std::string> validate_game(const Game& game, int max_degree) {
  std::vector<std::string> v;
  if (game.players.empty()) v.emplace_back("game must have at least one player");
  if (game.resources.empty()) v.emplace_back("game must have at least one resource");

  for (std::size_t e = 0; e < game.resources.size(); ++e) {
    const auto& c = game.resources[e].coeffs();
    const std::string where = "resource " + std::to_string(e) + ": ";
    if (c.empty()) {
      v.push_back(where + "cost polynomial has no coefficients");
      continue;
    }
    bool positive = false;
    for (double a : c) {
      if (!std::isfinite(a) || a < 0.0) {
        v.push_back(where + "coefficients must be finite and non-negative");
        break;
      }
      positive = positive || a > 0.0;
    }
    if (!positive) v.push_back(where + "cost polynomial must not be identically zero");
    if (game.resources[e].degree() > max_degree)
      v.push_back(where + "degree exceeds maximum " + std::to_string(max_degree));
  }

  for (std::size_t i = 0; i < game.players.size(); ++i) {
    const auto& p = game.players[i];
    const std::string where = "player " + std::to_string(i) + ": ";
    if (!(p.weight > 0.0) || !std::isfinite(p.weight)) v.push_back(where + "weight must be positive");
    if (p.strategies.empty()) v.push_back(where + "strategy set must not be empty");
    std::set<std::vector<ResourceId>> seen;
    for (std::size_t s = 0; s < p.strategies.size(); ++s) {
      const auto& strat = p.strategies[s];
      const std::string ws = where + "strategy " + std::to_string(s) + ": ";
      if (strat.empty()) v.push_back(ws + "strategy must not be empty");
      std::vector<ResourceId> sorted = strat;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        v.push_back(ws + "duplicate resource in strategy");
      for (ResourceId e : strat)
        if (e >= game.resources.size()) {
          v.push_back(ws + "unknown resource " + std::to_string(e));
          break;
        }
      if (!seen.insert(sorted).second) v.push_back(ws + "duplicate strategy");
    }
  }
  return v;
}

void check_profile(const Game& game, const Profile& profile) {
  if (profile.choice.size() != game.players.size())
    throw PreconditionError("profile has " + std::to_string(profile.choice.size()) +
                            " choices for " + std::to_string(game.players.size()) + " players");
  for (PlayerId i = 0; i < profile.choice.size(); ++i)
    if (profile.choice[i] >= game.players[i].strategies.size())
      throw PreconditionError("profile choice for player " + std::to_string(i) +
                              " is not a valid strategy index");
}

const Strategy& chosen_strategy(const Game& game, const Profile& profile, PlayerId player) {
  return game.players.at(player).strategies.at(profile.choice.at(player));
}

namespace {

LoadView build_view(const Game& game, const Profile& profile, const PlayerSet* restriction) {
  check_profile(game, profile);
  LoadView view;
  view.users.resize(game.resources.size());
  view.load.assign(game.resources.size(), 0.0);
  for (PlayerId i = 0; i < game.players.size(); ++i) {
    if (restriction && !restriction->contains(i)) continue;
    for (ResourceId e : chosen_strategy(game, profile, i)) {
      view.users[e].push_back(i);
      view.load[e] += game.players[i].weight;
    }
  }
  return view;
}

}  // namespace

LoadView load_view(const Game& game, const Profile& profile) {
  return build_view(game, profile, nullptr);
}

LoadView load_view(const Game& game, const Profile& profile, const PlayerSet& restriction) {
  return build_view(game, profile, &restriction);
}

double joint_cost(const CostPolynomial& poly, double load) {
  if (!(load >= 0.0)) throw PreconditionError("joint_cost: load must be non-negative");
  return poly.joint(load);
}

double social_cost(const Game& game, const Profile& profile) {
  const LoadView view = load_view(game, profile);
  double total = 0.0;
  for (ResourceId e = 0; e < game.resources.size(); ++e)
    total += joint_cost(game.resources[e], view.load[e]);
  return total;
}

double social_cost(const Game& game, const Profile& profile, const PlayerSet& restriction) {
  double total = 0.0;
  for (PlayerId i : restriction.members())
    total += player_cost(game, profile, i, ShareMethod::shapley_exact());
  return total;
}

Profile with_choice(Profile profile, PlayerId player, std::size_t strategy) {
  profile.choice.at(player) = strategy;
  return profile;
}

}  // namespace svcg
