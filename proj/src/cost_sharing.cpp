#include "svcg/cost_sharing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "svcg/rng.hpp"

namespace svcg {

void SampleConfig::validate(bool require_batches) const {
  if (!(mu > 0.0 && mu <= 1.0)) throw PreconditionError("sampling: mu must lie in (0, 1]");
  if (!(failure_exponent >= 1.0))
    throw PreconditionError("sampling: failure exponent must be >= 1");
  if (batches) {
    if (*batches < 1 || *batches % 2 == 0)
      throw PreconditionError("sampling: batch count must be a positive odd integer");
  } else if (require_batches) {
    throw PreconditionError("sampling: batch count is required");
  }
}

ShareMethod ShareMethod::shapley_sampled(SampleConfig config) {
  config.validate(false);
  return ShareMethod(ShapleySampled{config});
}

std::string ShareMethod::name() const {
  if (is_exact()) return "shapley-exact";
  if (is_sampled()) return "shapley-sampled";
  return "proportional";
}

double marginal_contribution(const CostPolynomial& poly, double prefix_weight, double weight) {
  if (!(prefix_weight >= 0.0)) throw PreconditionError("marginal contribution: negative prefix");
  if (!(weight > 0.0)) throw PreconditionError("marginal contribution: weight must be positive");
  return poly.joint(prefix_weight + weight) - poly.joint(prefix_weight);
}

namespace {

std::size_t index_of(std::span<const User> users, PlayerId target) {
  for (std::size_t k = 0; k < users.size(); ++k)
    if (users[k].id == target) return k;
  throw PreconditionError("Shapley share: target is not among the users");
}

}  // namespace

double shapley_exact(const CostPolynomial& poly, std::span<const User> users, PlayerId target) {
  const std::size_t pos = index_of(users, target);
  const std::size_t size = users.size();
  if (size > kExactSizeCap)
    throw CapExceeded("exact size exceeded: " + std::to_string(size) + " users > cap " +
                      std::to_string(kExactSizeCap));
  const double w = users[pos].weight;
  if (!(w > 0.0)) throw PreconditionError("Shapley share: weight must be positive");

  std::vector<double> others;
  others.reserve(size - 1);
  for (std::size_t k = 0; k < size; ++k)
    if (k != pos) others.push_back(users[k].weight);
  const std::size_t rest = others.size();

  // |T|!(|A|-|T|-1)!/|A|! = 1 / (|A| * binom(|A|-1, |T|))
  std::vector<double> coef(rest + 1);
  double binom = 1.0;
  for (std::size_t t = 0; t <= rest; ++t) {
    coef[t] = 1.0 / (static_cast<double>(size) * binom);
    binom = binom * static_cast<double>(rest - t) / static_cast<double>(t + 1);
  }

  const std::size_t masks = std::size_t{1} << rest;
  std::vector<double> subset_weight(masks, 0.0);
  double total = 0.0;
  for (std::size_t mask = 0; mask < masks; ++mask) {
    if (mask != 0) {
      const auto low = static_cast<std::size_t>(std::countr_zero(mask));
      subset_weight[mask] = subset_weight[mask & (mask - 1)] + others[low];
    }
    const double prefix = subset_weight[mask];
    total += coef[static_cast<std::size_t>(std::popcount(mask))] *
             (poly.joint(prefix + w) - poly.joint(prefix));
  }
  return total;
}

std::size_t samples_per_batch(std::size_t num_users, double mu) {
  if (num_users <= 1) return 0;
  const double k = std::ceil(4.0 * static_cast<double>(num_users - 1) / (mu * mu));
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

SampledShare shapley_sampled(const CostPolynomial& poly, std::span<const User> users,
                             PlayerId target, const SampleConfig& config, std::uint64_t stream) {
  config.validate(true);
  const std::size_t pos = index_of(users, target);
  SampledShare out;
  const double w = users[pos].weight;
  if (users.size() == 1) {
    out.estimate = poly.joint(w);
    return out;
  }

  const std::size_t k = samples_per_batch(users.size(), config.mu);
  out.samples_per_batch = k;
  const int batches = *config.batches;
  out.batch_means.reserve(static_cast<std::size_t>(batches));

  std::vector<std::size_t> order(users.size());
  for (int b = 0; b < batches; ++b) {
    CounterRng rng(derive_key(config.seed, {stream, static_cast<std::uint64_t>(b)}));
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t q = 0; q < order.size(); ++q) order[q] = q;
      for (std::size_t q = order.size() - 1; q > 0; --q)
        std::swap(order[q], order[rng.below(q + 1)]);
      double prefix = 0.0;
      for (std::size_t q : order) {
        if (q == pos) break;
        prefix += users[q].weight;
      }
      sum += poly.joint(prefix + w) - poly.joint(prefix);
    }
    out.batch_means.push_back(sum / static_cast<double>(k));
  }

  std::vector<double> sorted = out.batch_means;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  out.estimate = *mid;
  return out;
}

int default_batch_count(std::size_t num_players, std::size_t max_strategies,
                        std::size_t num_resources, double phase_term, int degree, double gamma,
                        double failure_exponent) {
  if (!(gamma > 0.0)) throw PreconditionError("batch count: gamma must be positive");
  const double n = static_cast<double>(std::max<std::size_t>(num_players, 1));
  const double bits = 1.0 + (failure_exponent + 3.0) * std::log2(n) +
                      std::log2(static_cast<double>(std::max<std::size_t>(max_strategies, 1))) +
                      std::log2(static_cast<double>(std::max<std::size_t>(num_resources, 1))) +
                      std::log2(1.0 + std::max(phase_term, 0.0)) +
                      std::log2(static_cast<double>(degree + 1)) - 9.0 * std::log2(gamma);
  int r = std::max(1, static_cast<int>(std::ceil(bits)));
  if (r % 2 == 0) ++r;
  return r;
}

double proportional_share(const CostPolynomial& poly, double load, double weight) {
  if (!(weight > 0.0)) throw PreconditionError("proportional share: weight must be positive");
  if (load < weight && !approx_equal(load, weight))
    throw PreconditionError("proportional share: load is smaller than the player's weight");
  return weight * poly.eval(load);
}

namespace {

std::vector<User> users_of(const Game& game, std::span<const PlayerId> ids) {
  std::vector<User> users;
  users.reserve(ids.size());
  for (PlayerId j : ids) users.push_back({j, game.players.at(j).weight});
  return users;
}

std::uint64_t share_stream(std::uint64_t context, PlayerId player, ResourceId resource) {
  return derive_key(context, {static_cast<std::uint64_t>(player),
                              static_cast<std::uint64_t>(resource)});
}

}  // namespace

double resource_share(const Game& game, ResourceId resource, std::span<const PlayerId> users,
                      PlayerId player, const ShareMethod& method, std::uint64_t context) {
  const CostPolynomial& poly = game.resources.at(resource);
  if (method.is_proportional()) {
    double load = 0.0;
    bool present = false;
    for (PlayerId j : users) {
      load += game.players.at(j).weight;
      present = present || j == player;
    }
    if (!present) throw PreconditionError("proportional share: player does not use the resource");
    return proportional_share(poly, load, game.players.at(player).weight);
  }
  const std::vector<User> list = users_of(game, users);
  if (method.is_exact()) return shapley_exact(poly, list, player);
  return shapley_sampled(poly, list, player, method.sample_config(),
                         share_stream(context, player, resource))
      .estimate;
}

double player_cost(const Game& game, const Profile& profile, PlayerId player,
                   const ShareMethod& method, std::uint64_t context) {
  const LoadView view = load_view(game, profile);
  double total = 0.0;
  for (ResourceId e : chosen_strategy(game, profile, player))
    total += resource_share(game, e, view.users[e], player, method, context);
  return total;
}

double deviation_cost(const Game& game, const Profile& profile, PlayerId player,
                      std::size_t strategy, const ShareMethod& method, std::uint64_t context) {
  check_profile(game, profile);
  if (strategy >= game.players.at(player).strategies.size())
    throw PreconditionError("deviation: strategy index out of range");
  return player_cost(game, with_choice(profile, player, strategy), player, method, context);
}

ShareReport share_report(const Game& game, const Profile& profile, const ShareMethod& method,
                         std::uint64_t context) {
  const LoadView view = load_view(game, profile);
  ShareReport report;
  report.method = method.name();
  for (ResourceId e = 0; e < game.resources.size(); ++e) {
    if (view.users[e].empty()) continue;
    const CostPolynomial& poly = game.resources[e];
    double sum = 0.0;
    for (PlayerId i : view.users[e]) {
      ShareEntry entry{i, e, 0.0, {}, 0};
      if (method.is_sampled()) {
        SampledShare s = shapley_sampled(poly, users_of(game, view.users[e]), i,
                                         method.sample_config(), share_stream(context, i, e));
        entry.share = s.estimate;
        entry.batch_means = std::move(s.batch_means);
        entry.samples_per_batch = s.samples_per_batch;
      } else {
        entry.share = resource_share(game, e, view.users[e], i, method, context);
      }
      sum += entry.share;
      report.entries.push_back(std::move(entry));
    }
    const double joint = poly.joint(view.load[e]);
    report.balance.push_back({e, joint, sum, sum - joint});
  }
  return report;
}

}  // namespace svcg
