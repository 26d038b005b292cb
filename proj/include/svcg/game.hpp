#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace svcg {

using PlayerId = std::size_t;
using ResourceId = std::size_t;
using Strategy = std::vector<ResourceId>;

/// Relative tolerance for every floating point equality in the library.
inline constexpr double kRelTol = 1e-9;
inline constexpr int kDefaultMaxDegree = 16;

/// Thrown when an operation is called outside its documented domain.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown when an exact computation or enumeration would exceed its size cap.
/// The caller is expected to fall back to sampling or a smaller instance.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool approx_equal(double a, double b, double rel = kRelTol);
/// a <= b up to relative slack.
bool approx_leq(double a, double b, double rel = kRelTol);

/// c(x) = a_0 + a_1 x + ... + a_d x^d with non-negative coefficients.
class CostPolynomial {
 public:
  CostPolynomial() = default;
  explicit CostPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  const std::vector<double>& coeffs() const { return coeffs_; }
  /// Index of the highest non-zero coefficient; 0 for an all-zero polynomial.
  int degree() const;
  /// Per-unit cost c(x).
  double eval(double x) const;
  /// Joint cost C(x) = x * c(x).
  double joint(double load) const;

  friend bool operator==(const CostPolynomial&, const CostPolynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

struct Player {
  double weight = 1.0;
  std::vector<Strategy> strategies;

  friend bool operator==(const Player&, const Player&) = default;
};

/// Weighted congestion game. Player and resource ids are dense indices.
struct Game {
  std::vector<CostPolynomial> resources;
  std::vector<Player> players;

  std::size_t num_players() const { return players.size(); }
  std::size_t num_resources() const { return resources.size(); }
  /// Max polynomial degree over all resources.
  int degree() const;
  std::size_t max_strategies() const;

  friend bool operator==(const Game&, const Game&) = default;
};

/// One chosen strategy index per player.
struct Profile {
  std::vector<std::size_t> choice;

  friend bool operator==(const Profile&, const Profile&) = default;
  friend auto operator<=>(const Profile&, const Profile&) = default;
};

/// Subset of players as a membership mask over 0..n-1.
class PlayerSet {
 public:
  PlayerSet() = default;
  explicit PlayerSet(std::size_t n, bool filled = false) : member_(n, filled) {}
  static PlayerSet all(std::size_t n) { return PlayerSet(n, true); }
  static PlayerSet none(std::size_t n) { return PlayerSet(n, false); }
  static PlayerSet of(std::size_t n, std::initializer_list<PlayerId> ids);
  static PlayerSet of(std::size_t n, std::span<const PlayerId> ids);

  std::size_t universe() const { return member_.size(); }
  bool contains(PlayerId i) const { return i < member_.size() && member_[i]; }
  void insert(PlayerId i) { member_.at(i) = true; }
  void erase(PlayerId i) { member_.at(i) = false; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<PlayerId> members() const;
  bool is_subset_of(const PlayerSet& other) const;
  PlayerSet minus(const PlayerSet& other) const;

  friend bool operator==(const PlayerSet&, const PlayerSet&) = default;

 private:
  std::vector<bool> member_;
};

/// Users and loads per resource for one profile, optionally restricted to a
/// player subset A (then users[e] = S_e^A and load[e] = f_e^A).
struct LoadView {
  std::vector<std::vector<PlayerId>> users;  // ascending player id
  std::vector<double> load;
};

/// Returns every invariant violation; an empty list means the game is valid.
std::vector<std::string> validate_game(const Game& game, int max_degree = kDefaultMaxDegree);

/// Throws PreconditionError unless the profile indexes valid strategies.
void check_profile(const Game& game, const Profile& profile);

const Strategy& chosen_strategy(const Game& game, const Profile& profile, PlayerId player);

LoadView load_view(const Game& game, const Profile& profile);
LoadView load_view(const Game& game, const Profile& profile, const PlayerSet& restriction);

/// C(x) = x c(x); load must be non-negative.
double joint_cost(const CostPolynomial& poly, double load);

/// SC(P) = sum_e C_e(f_e(P)).
double social_cost(const Game& game, const Profile& profile);
/// SC_A(P) = sum_{i in A} X_i(P) under exact Shapley shares.
double social_cost(const Game& game, const Profile& profile, const PlayerSet& restriction);

/// Profile with player i switched to strategy index s.
Profile with_choice(Profile profile, PlayerId player, std::size_t strategy);

}  // namespace svcg
