#include "svcg/potentials.hpp"

#include <algorithm>
#include <numeric>

#include "svcg/cost_sharing.hpp"

namespace svcg {

Ordering canonical_ordering(std::size_t num_players) {
  Ordering ord(num_players);
  std::iota(ord.begin(), ord.end(), PlayerId{0});
  return ord;
}

namespace {

// rank[i] = position of player i in the ordering.
std::vector<std::size_t> ranks_of(const Ordering& ordering, std::size_t n) {
  if (ordering.size() != n) throw PreconditionError("ordering is not a permutation of the players");
  std::vector<std::size_t> rank(n, n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const PlayerId i = ordering[pos];
    if (i >= n || rank[i] != n) throw PreconditionError("ordering is not a permutation of the players");
    rank[i] = pos;
  }
  return rank;
}

PotentialValue compute(const Game& game, const Profile& profile, const PlayerSet& a,
                       const Ordering& ordering) {
  const std::size_t n = game.num_players();
  if (a.universe() != n) throw PreconditionError("player set does not match the game");
  const std::vector<std::size_t> rank = ranks_of(ordering, n);
  const LoadView view = load_view(game, profile, a);

  PotentialValue out;
  out.ordering = ordering;
  out.per_resource.assign(game.num_resources(), 0.0);
  for (ResourceId e = 0; e < game.num_resources(); ++e) {
    std::vector<PlayerId> users = view.users[e];
    std::sort(users.begin(), users.end(),
              [&](PlayerId x, PlayerId y) { return rank[x] < rank[y]; });
    std::vector<User> prefix;
    prefix.reserve(users.size());
    double phi = 0.0;
    for (PlayerId i : users) {
      prefix.push_back({i, game.players[i].weight});
      phi += shapley_exact(game.resources[e], prefix, i);
    }
    out.per_resource[e] = phi;
  }
  // Fixed resource order keeps the total bit-reproducible.
  for (double v : out.per_resource) out.total += v;
  return out;
}

}  // namespace

PotentialValue potential(const Game& game, const Profile& profile) {
  return potential(game, profile, canonical_ordering(game.num_players()));
}

PotentialValue potential(const Game& game, const Profile& profile, const Ordering& ordering) {
  return compute(game, profile, PlayerSet::all(game.num_players()), ordering);
}

PotentialValue limited_potential(const Game& game, const Profile& profile, const PlayerSet& a) {
  return limited_potential(game, profile, a, canonical_ordering(game.num_players()));
}

PotentialValue limited_potential(const Game& game, const Profile& profile, const PlayerSet& a,
                                 const Ordering& ordering) {
  return compute(game, profile, a, ordering);
}

double partial_potential(const Game& game, const Profile& profile, const PlayerSet& a,
                         const PlayerSet& b) {
  return partial_potential(game, profile, a, b, canonical_ordering(game.num_players()));
}

double partial_potential(const Game& game, const Profile& profile, const PlayerSet& a,
                         const PlayerSet& b, const Ordering& ordering) {
  if (!b.is_subset_of(a)) throw PreconditionError("partial potential: B is not a subset of A");
  return compute(game, profile, a, ordering).total -
         compute(game, profile, a.minus(b), ordering).total;
}

double partial_potential(const Game& game, const Profile& profile, const PlayerSet& b) {
  return partial_potential(game, profile, PlayerSet::all(game.num_players()), b);
}

}  // namespace svcg
