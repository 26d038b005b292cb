#pragma once

#include <vector>

#include "svcg/game.hpp"

namespace svcg {

using Ordering = std::vector<PlayerId>;

/// Ascending player ids; used whenever no ordering is supplied.
Ordering canonical_ordering(std::size_t num_players);

struct PotentialValue {
  double total = 0.0;
  std::vector<double> per_resource;
  Ordering ordering;
};

/// Phi(P): for every resource, each user pays her exact Shapley share among
/// the users that precede her (inclusive) in `ordering`. The value does not
/// depend on the ordering.
PotentialValue potential(const Game& game, const Profile& profile);
PotentialValue potential(const Game& game, const Profile& profile, const Ordering& ordering);

/// Phi^A(P): the same sum over users in A only.
PotentialValue limited_potential(const Game& game, const Profile& profile, const PlayerSet& a);
PotentialValue limited_potential(const Game& game, const Profile& profile, const PlayerSet& a,
                                 const Ordering& ordering);

/// Phi^A_B(P) = Phi^A(P) - Phi^{A \ B}(P); requires B subset of A.
double partial_potential(const Game& game, const Profile& profile, const PlayerSet& a,
                         const PlayerSet& b);
double partial_potential(const Game& game, const Profile& profile, const PlayerSet& a,
                         const PlayerSet& b, const Ordering& ordering);

/// Phi_B(P) = Phi^N_B(P).
double partial_potential(const Game& game, const Profile& profile, const PlayerSet& b);

}  // namespace svcg
