#pragma once
// Reference implementations and random instance builders shared by the test
// binaries. Everything here is written from the definitions, independently of
// the library's own algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "svcg/game.hpp"

namespace svcg::testing {

inline bool close(double a, double b, double rel = 1e-9) {
  return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// C(x) = sum_k a_k x^(k+1) by direct powers.
inline double joint_ref(const std::vector<double>& coeffs, double x) {
  double total = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) total += coeffs[k] * std::pow(x, k + 1.0);
  return total;
}

/// Average marginal contribution of `target` over all |S|! arrival orders.
inline double shapley_by_permutations(const std::vector<double>& coeffs,
                                      const std::vector<double>& weights, std::size_t target) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  double sum = 0.0;
  std::size_t count = 0;
  do {
    double prefix = 0.0;
    for (std::size_t u : order) {
      if (u == target) {
        sum += joint_ref(coeffs, prefix + weights[u]) - joint_ref(coeffs, prefix);
        break;
      }
      prefix += weights[u];
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return sum / static_cast<double>(count);
}

/// Shapley cost of `player` in `profile`, priced by permutation enumeration
/// restricted to the players in `present`.
inline double cost_by_permutations(const Game& game, const Profile& profile, PlayerId player,
                                   const std::vector<bool>& present) {
  double total = 0.0;
  for (ResourceId e : game.players[player].strategies[profile.choice[player]]) {
    std::vector<double> weights;
    std::size_t target = 0;
    for (PlayerId j = 0; j < game.num_players(); ++j) {
      if (!present[j]) continue;
      const Strategy& s = game.players[j].strategies[profile.choice[j]];
      if (std::find(s.begin(), s.end(), e) == s.end()) continue;
      if (j == player) target = weights.size();
      weights.push_back(game.players[j].weight);
    }
    total += shapley_by_permutations(game.resources[e].coeffs(), weights, target);
  }
  return total;
}

/// Phi^A(P) straight from the definition: add players of A one at a time in
/// `order`; each pays her Shapley cost among those already added.
inline double limited_potential_ref(const Game& game, const Profile& profile,
                                    const std::vector<bool>& in_a,
                                    const std::vector<PlayerId>& order) {
  std::vector<bool> present(game.num_players(), false);
  double total = 0.0;
  for (PlayerId i : order) {
    if (!in_a[i]) continue;
    present[i] = true;
    total += cost_by_permutations(game, profile, i, present);
  }
  return total;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  std::mt19937_64& engine() { return eng_; }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }
  bool coin() { return index(0, 1) == 1; }

  /// Degree exactly d, coefficients in [0, 2], leading coefficient positive.
  std::vector<double> poly(int d) {
    std::vector<double> a(static_cast<std::size_t>(d) + 1);
    for (double& c : a) c = coin() ? real(0.0, 2.0) : 0.0;
    a.back() = real(0.1, 2.0);
    return a;
  }

  std::vector<double> weights(std::size_t count, double lo = 0.2, double hi = 4.0) {
    std::vector<double> w(count);
    for (double& x : w) x = real(lo, hi);
    return w;
  }

  /// Random game with distinct non-empty strategies.
  Game game(std::size_t players, std::size_t resources, std::size_t max_strategies, int d) {
    Game g;
    for (std::size_t e = 0; e < resources; ++e) g.resources.emplace_back(poly(d));
    for (std::size_t i = 0; i < players; ++i) {
      Player p;
      p.weight = real(0.5, 3.0);
      const std::size_t k = index(1, max_strategies);
      for (std::size_t attempt = 0; p.strategies.size() < k && attempt < 50; ++attempt) {
        Strategy s;
        for (ResourceId e = 0; e < resources; ++e)
          if (index(0, 2) == 0) s.push_back(e);
        if (s.empty()) s.push_back(index(0, resources - 1));
        if (std::find(p.strategies.begin(), p.strategies.end(), s) == p.strategies.end())
          p.strategies.push_back(std::move(s));
      }
      g.players.push_back(std::move(p));
    }
    return g;
  }

  Profile profile(const Game& g) {
    Profile p;
    for (const Player& pl : g.players) p.choice.push_back(index(0, pl.strategies.size() - 1));
    return p;
  }

  PlayerSet subset(std::size_t n) {
    PlayerSet s(n);
    for (PlayerId i = 0; i < n; ++i)
      if (coin()) s.insert(i);
    return s;
  }

 private:
  std::mt19937_64 eng_;
};

/// c(x) = x on two parallel links, two unit-weight players.
inline Game parallel_links() {
  Game g;
  g.resources = {CostPolynomial({0.0, 1.0}), CostPolynomial({0.0, 1.0})};
  g.players = {Player{1.0, {{0}, {1}}}, Player{1.0, {{0}, {1}}}};
  return g;
}

/// One resource with c(x) = x^2 shared by weights 1 and 2.
inline Game square_pair() {
  Game g;
  g.resources = {CostPolynomial({0.0, 0.0, 1.0})};
  g.players = {Player{1.0, {{0}}}, Player{2.0, {{0}}}};
  return g;
}

inline std::vector<bool> mask_of(const PlayerSet& s) {
  std::vector<bool> m(s.universe());
  for (PlayerId i = 0; i < s.universe(); ++i) m[i] = s.contains(i);
  return m;
}

}  // namespace svcg::testing
