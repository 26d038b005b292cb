#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "svcg/cost_sharing.hpp"
#include "svcg/game.hpp"

namespace svcg {

// ---------------------------------------------------------------------------
// Closed-form bounds. All evaluated in extended precision (long double).
// ---------------------------------------------------------------------------

/// Thrown when 2^(-d/(d+1)) (1 + rho) - rho <= 0, where every bound diverges.
class RhoOutOfRange : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct BoundValues {
  int d = 0;
  double rho = 1.0;
  double lambda = 0.0;       // 2^(d/(d+1)) (2^(1/(d+1)) - 1)^(-d)
  double mu_smooth = 0.0;    // 2^(d/(d+1)) - 1
  bool admissible = false;   // denominator positive; otherwise the bounds are +inf
  double poa_bound = 0.0;
  double stretch_bound = 0.0;
  double limited_stretch_bound = 0.0;
};

BoundValues compute_bounds(double rho, int d);

/// 2^(-d/(d+1)) (1 + rho) - rho.
long double bound_denominator(long double rho, int d);
double poa_bound(double rho, int d);
double stretch_bound(double rho, int d);
/// (d+1)^2 (d+3)/8 * poa_bound(rho, d).
double limited_stretch_bound(double rho, int d);
/// theta = limited_stretch_bound(1 + gamma, d).
double stretch_theta(double gamma, int d);
/// ((1 + gamma^2) / (1 - gamma)) * (1/theta - 2 gamma)^(-1).
double alpha_of(double gamma, int d);
/// Supremum of gamma in (0, 1) with a positive bound denominator at 1 + gamma
/// and 2 gamma theta(gamma) < 1.
double max_admissible_gamma(int d);
/// Fixed point of gamma = fraction / theta(1 + gamma); fraction = 0.25 is the
/// setting used throughout the test suites.
double default_gamma(int d, double fraction = 0.25);
/// 1 / (2^(1/(d+1)) - 1), the base of the exponential growth of alpha in d.
double alpha_growth_base(int d);

// ---------------------------------------------------------------------------
// Equilibrium verification and brute force.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultDeviationCap = 1'000'000;
inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

struct EquilibriumReport {
  Profile profile;
  /// max_i max_{P'_i} X_i(P) / X_i(P_{-i}, P'_i), the current strategy
  /// included, so the value is 1 when nobody can deviate.
  double worst_ratio = 1.0;
  std::optional<PlayerId> witness_player;
  std::optional<std::size_t> witness_strategy;
  std::vector<double> costs;

  /// No rho-move exists (with kRelTol slack).
  bool is_rho_pne(double rho) const;
};

EquilibriumReport verify_approx_equilibrium(const Game& game, const Profile& profile,
                                            const ShareMethod& method,
                                            std::size_t deviation_cap = kDefaultDeviationCap);
/// Same check restricted to the players in `movers`.
EquilibriumReport verify_approx_equilibrium(const Game& game, const Profile& profile,
                                            const ShareMethod& method, const PlayerSet& movers,
                                            std::size_t deviation_cap = kDefaultDeviationCap);

enum class Objective { kSocialCost, kPotential };

struct Minimizer {
  Profile profile;
  double value = 0.0;
};

/// Number of profiles; throws CapExceeded above `cap`.
std::size_t profile_count(const Game& game, std::size_t cap = kDefaultEnumerationCap);

/// Calls fn(profile) on every profile in lexicographic order of choice vectors.
template <typename Fn>
void for_each_profile(const Game& game, Fn&& fn, std::size_t cap = kDefaultEnumerationCap) {
  profile_count(game, cap);
  Profile p{std::vector<std::size_t>(game.num_players(), 0)};
  while (true) {
    fn(static_cast<const Profile&>(p));
    std::size_t i = p.choice.size();
    while (i > 0) {
      --i;
      if (++p.choice[i] < game.players[i].strategies.size()) break;
      p.choice[i] = 0;
      if (i == 0) return;
    }
    if (p.choice.empty()) return;
  }
}

/// Exact minimizer by full enumeration; ties go to the lexicographically
/// smallest choice vector.
Minimizer brute_force_min(const Game& game, Objective objective,
                          std::size_t cap = kDefaultEnumerationCap);

/// Outcome of a max-over-equilibria ratio measurement. `empty` is set when no
/// profile qualifies as a rho-PNE (possible under proportional sharing).
struct RatioReport {
  bool empty = true;
  double ratio = 0.0;
  std::size_t equilibria = 0;
  Profile worst;
  double reference = 0.0;   // SC(P*) or Phi(P-hat)
  /// Limited stretch only: max Phi_D(P) / Phi_D(P-hat).
  std::optional<double> partial_ratio;
};

/// max over rho-PNE P of SC(P) / SC(P*).
RatioReport measured_poa(const Game& game, double rho, const ShareMethod& method,
                         std::size_t cap = kDefaultEnumerationCap);

/// max over rho-PNE P of Phi(P) / Phi(P-hat) under exact Shapley shares.
RatioReport measured_stretch(const Game& game, double rho,
                             std::size_t cap = kDefaultEnumerationCap);

/// Limited variant: only players in `movers` choose; the others keep their
/// strategy from `fixed`. P-hat minimizes Phi over the movers' choices.
RatioReport measured_stretch(const Game& game, double rho, const PlayerSet& movers,
                             const Profile& fixed, std::size_t cap = kDefaultEnumerationCap);

// ---------------------------------------------------------------------------
// Shapley versus proportional certificates.
// ---------------------------------------------------------------------------

/// Lower and upper multipliers of the per-resource sandwich
///   lower * chi <= chi_prop <= upper * chi,  lower = 2/(d+1), upper = (d+3)/4.
struct SandwichFactors {
  double lower;
  double upper;
};
SandwichFactors shapley_prop_factors(int d);
/// (d+3)(d+1)/8.
double prop_transfer_factor(int d);

struct CertificateReport {
  int d = 0;
  std::size_t pairs_checked = 0;
  std::size_t lower_violations = 0;
  std::size_t upper_violations = 0;
  double min_ratio = 0.0;  // min chi_prop / chi
  double max_ratio = 0.0;  // max chi_prop / chi
  std::size_t transfers_checked = 0;
  std::size_t transfer_violations = 0;
  double worst_transfer_slack = 0.0;  // max (prop worst ratio) / (factor * rho)

  bool ok() const { return lower_violations == 0 && upper_violations == 0 && transfer_violations == 0; }
};

/// Checks the sandwich on every used (player, resource) pair of every profile
/// and the equilibrium transfer: a profile that is a rho-PNE under exact
/// Shapley must be a prop_transfer_factor(d) * rho PNE under proportional
/// sharing. When `rho` is unset, each profile's own Shapley worst ratio is used.
CertificateReport shapley_prop_certificates(const Game& game, std::span<const Profile> profiles,
                                            std::optional<double> rho = std::nullopt);

}  // namespace svcg
