#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "svcg/game.hpp"

namespace svcg {

/// Largest user set priced by exact Shapley (2^(|S|-1) subset terms).
inline constexpr std::size_t kExactSizeCap = 20;

struct User {
  PlayerId id;
  double weight;
};

/// Parameters of the permutation-sampling Shapley estimator.
struct SampleConfig {
  double mu = 0.2;                   // relative error target, in (0, 1]
  std::optional<int> batches;        // odd; unset means "derive from the schedule"
  std::uint64_t seed = 0;
  double failure_exponent = 1.0;     // c >= 1 in the default batch-count formula

  /// Throws PreconditionError on an invalid configuration. When
  /// `require_batches` is set, an unset batch count is also an error.
  void validate(bool require_batches) const;
};

struct ShapleyExact {};
struct ShapleySampled {
  SampleConfig config;
};
struct Proportional {};

/// Which cost-sharing rule prices a profile.
class ShareMethod {
 public:
  static ShareMethod shapley_exact() { return ShareMethod(ShapleyExact{}); }
  static ShareMethod shapley_sampled(SampleConfig config);
  static ShareMethod proportional() { return ShareMethod(Proportional{}); }

  bool is_exact() const { return std::holds_alternative<ShapleyExact>(rule_); }
  bool is_sampled() const { return std::holds_alternative<ShapleySampled>(rule_); }
  bool is_proportional() const { return std::holds_alternative<Proportional>(rule_); }
  const SampleConfig& sample_config() const { return std::get<ShapleySampled>(rule_).config; }
  SampleConfig& sample_config() { return std::get<ShapleySampled>(rule_).config; }
  std::string name() const;

 private:
  using Rule = std::variant<ShapleyExact, ShapleySampled, Proportional>;
  explicit ShareMethod(Rule rule) : rule_(std::move(rule)) {}
  Rule rule_;
};

/// C(prefix + w) - C(prefix).
double marginal_contribution(const CostPolynomial& poly, double prefix_weight, double weight);

/// Exact Shapley share of `target` among `users`, via the subset-weighted form
///   sum_{T subset of others} |T|! (|A|-|T|-1)! / |A|! * (C(w(T)+w_i) - C(w(T))).
/// Throws CapExceeded when |users| > kExactSizeCap.
double shapley_exact(const CostPolynomial& poly, std::span<const User> users, PlayerId target);

/// Permutations drawn per batch: max(1, ceil(4(|S|-1)/mu^2)), or 0 for a
/// single user (whose share is known exactly).
std::size_t samples_per_batch(std::size_t num_users, double mu);

struct SampledShare {
  double estimate = 0.0;
  std::vector<double> batch_means;
  std::size_t samples_per_batch = 0;
};

/// Median over `config.batches` batches of the mean marginal contribution of
/// `target` across uniformly random arrival orders. Batch b draws from the
/// stream derive_key(config.seed, {stream, b}), so the result is a pure
/// function of the inputs.
SampledShare shapley_sampled(const CostPolynomial& poly, std::span<const User> users,
                             PlayerId target, const SampleConfig& config,
                             std::uint64_t stream);

/// Amplification count for the median of batches, rounded up to odd:
/// ceil(log2(2 n^(c+3) maxP |E| (1 + phase_term) (d+1) gamma^-9)).
int default_batch_count(std::size_t num_players, std::size_t max_strategies,
                        std::size_t num_resources, double phase_term, int degree, double gamma,
                        double failure_exponent);

/// w_i c(f_e); requires f_e >= w_i > 0.
double proportional_share(const CostPolynomial& poly, double load, double weight);

/// Share of `player` on `resource` given the (full) user list of that resource.
/// `context` only affects sampled shares: it selects an independent family of
/// random streams, keyed further by (player, resource, batch).
double resource_share(const Game& game, ResourceId resource, std::span<const PlayerId> users,
                      PlayerId player, const ShareMethod& method, std::uint64_t context = 0);

/// X_i(P) = sum over the player's resources of her share.
double player_cost(const Game& game, const Profile& profile, PlayerId player,
                   const ShareMethod& method, std::uint64_t context = 0);

/// X_i(P_{-i}, P'_i) for strategy index `strategy` of `player`.
double deviation_cost(const Game& game, const Profile& profile, PlayerId player,
                      std::size_t strategy, const ShareMethod& method,
                      std::uint64_t context = 0);

struct ShareEntry {
  PlayerId player;
  ResourceId resource;
  double share;
  std::vector<double> batch_means;  // sampled only
  std::size_t samples_per_batch = 0;
};

struct ResourceBalance {
  ResourceId resource;
  double joint_cost;
  double share_sum;
  double residual;  // share_sum - joint_cost
};

struct ShareReport {
  std::string method;
  std::vector<ShareEntry> entries;
  std::vector<ResourceBalance> balance;  // used resources only
};

ShareReport share_report(const Game& game, const Profile& profile, const ShareMethod& method,
                         std::uint64_t context = 0);

}  // namespace svcg
