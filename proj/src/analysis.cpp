#include "svcg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svcg/potentials.hpp"

namespace svcg {

namespace {

void check_degree(int d) {
  if (d < 0) throw PreconditionError("degree must be non-negative");
}

void check_rho(double rho) {
  if (!(rho >= 1.0)) throw PreconditionError("rho must be >= 1");
}

long double root2(int d) { return std::pow(2.0L, 1.0L / static_cast<long double>(d + 1)); }

long double poa_ld(long double rho, int d) {
  const long double den = bound_denominator(rho, d);
  if (!(den > 0.0L))
    throw RhoOutOfRange("rho " + std::to_string(static_cast<double>(rho)) +
                        " exceeds admissible range for degree " + std::to_string(d));
  return rho * std::pow(root2(d) - 1.0L, -static_cast<long double>(d)) / den;
}

long double limited_factor(int d) {
  const long double dd = d;
  return (dd + 1) * (dd + 1) * (dd + 3) / 8.0L;
}

}  // namespace

long double bound_denominator(long double rho, int d) {
  check_degree(d);
  const long double dd = d;
  return std::pow(2.0L, -dd / (dd + 1)) * (1.0L + rho) - rho;
}

BoundValues compute_bounds(double rho, int d) {
  check_degree(d);
  check_rho(rho);
  BoundValues b;
  b.d = d;
  b.rho = rho;
  const long double dd = d;
  const long double two_pow = std::pow(2.0L, dd / (dd + 1));
  b.lambda = static_cast<double>(two_pow * std::pow(root2(d) - 1.0L, -dd));
  b.mu_smooth = static_cast<double>(two_pow - 1.0L);
  b.admissible = bound_denominator(rho, d) > 0.0L;
  if (b.admissible) {
    const long double poa = poa_ld(rho, d);
    b.poa_bound = static_cast<double>(poa);
    b.stretch_bound = static_cast<double>(poa * (dd + 1));
    b.limited_stretch_bound = static_cast<double>(poa * limited_factor(d));
  } else {
    b.poa_bound = b.stretch_bound = b.limited_stretch_bound =
        std::numeric_limits<double>::infinity();
  }
  return b;
}

double poa_bound(double rho, int d) {
  check_rho(rho);
  return static_cast<double>(poa_ld(rho, d));
}

double stretch_bound(double rho, int d) {
  check_rho(rho);
  return static_cast<double>(poa_ld(rho, d) * static_cast<long double>(d + 1));
}

double limited_stretch_bound(double rho, int d) {
  check_rho(rho);
  return static_cast<double>(poa_ld(rho, d) * limited_factor(d));
}

double stretch_theta(double gamma, int d) {
  if (!(gamma > 0.0)) throw PreconditionError("gamma must be positive");
  return limited_stretch_bound(1.0 + gamma, d);
}

double alpha_of(double gamma, int d) {
  const long double theta = stretch_theta(gamma, d);
  const long double g = gamma;
  const long double inner = 1.0L / theta - 2.0L * g;
  if (!(g < 1.0L) || !(inner > 0.0L))
    throw PreconditionError("gamma violates stretch constraint: need gamma < 1/(2 theta); "
                            "maximal admissible gamma is " +
                            std::to_string(max_admissible_gamma(d)));
  return static_cast<double>((1.0L + g * g) / (1.0L - g) / inner);
}

double max_admissible_gamma(int d) {
  check_degree(d);
  auto ok = [d](double g) {
    if (!(bound_denominator(1.0L + g, d) > 0.0L)) return false;
    return 2.0L * g * static_cast<long double>(limited_stretch_bound(1.0 + g, d)) < 1.0L;
  };
  double lo = 0.0;
  double hi = 1.0;
  if (ok(hi)) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

double default_gamma(int d, double fraction) {
  if (!(fraction > 0.0 && fraction < 0.5))
    throw PreconditionError("gamma fraction must lie in (0, 1/2)");
  double gamma = fraction / limited_stretch_bound(1.0, d);
  for (int it = 0; it < 200; ++it) {
    const double next = fraction / stretch_theta(gamma, d);
    if (next == gamma) break;
    gamma = next;
  }
  return gamma;
}

double alpha_growth_base(int d) {
  check_degree(d);
  return static_cast<double>(1.0L / (root2(d) - 1.0L));
}

// ---------------------------------------------------------------------------

bool EquilibriumReport::is_rho_pne(double rho) const {
  return approx_leq(worst_ratio, rho);
}

EquilibriumReport verify_approx_equilibrium(const Game& game, const Profile& profile,
                                            const ShareMethod& method, std::size_t deviation_cap) {
  return verify_approx_equilibrium(game, profile, method, PlayerSet::all(game.num_players()),
                                   deviation_cap);
}

EquilibriumReport verify_approx_equilibrium(const Game& game, const Profile& profile,
                                            const ShareMethod& method, const PlayerSet& movers,
                                            std::size_t deviation_cap) {
  check_profile(game, profile);
  std::size_t deviations = 0;
  for (PlayerId i : movers.members()) deviations += game.players[i].strategies.size();
  if (deviations > deviation_cap)
    throw CapExceeded("deviation enumeration of " + std::to_string(deviations) +
                      " strategies exceeds cap " + std::to_string(deviation_cap));

  EquilibriumReport report;
  report.profile = profile;
  report.costs.assign(game.num_players(), 0.0);
  for (PlayerId i = 0; i < game.num_players(); ++i) {
    report.costs[i] = player_cost(game, profile, i, method);
    if (!movers.contains(i)) continue;
    for (std::size_t s = 0; s < game.players[i].strategies.size(); ++s) {
      if (s == profile.choice[i]) continue;
      const double dev = deviation_cost(game, profile, i, s, method);
      const double ratio = report.costs[i] / dev;
      if (ratio > report.worst_ratio) {
        report.worst_ratio = ratio;
        report.witness_player = i;
        report.witness_strategy = s;
      }
    }
  }
  return report;
}

std::size_t profile_count(const Game& game, std::size_t cap) {
  std::size_t count = 1;
  for (const auto& p : game.players) {
    const std::size_t k = p.strategies.size();
    if (k == 0) return 0;
    if (count > cap / k) throw CapExceeded("profile enumeration exceeds cap " + std::to_string(cap));
    count *= k;
  }
  if (count > cap) throw CapExceeded("profile enumeration exceeds cap " + std::to_string(cap));
  return count;
}

namespace {

double objective_value(const Game& game, const Profile& p, Objective objective) {
  return objective == Objective::kSocialCost ? social_cost(game, p) : potential(game, p).total;
}

// Keeps the first profile among approximately equal values.
bool improves(double value, double best) { return value < best && !approx_equal(value, best); }

}  // namespace

Minimizer brute_force_min(const Game& game, Objective objective, std::size_t cap) {
  Minimizer best;
  bool have = false;
  for_each_profile(
      game,
      [&](const Profile& p) {
        const double v = objective_value(game, p, objective);
        if (!have || improves(v, best.value)) {
          best = {p, v};
          have = true;
        }
      },
      cap);
  return best;
}

RatioReport measured_poa(const Game& game, double rho, const ShareMethod& method,
                         std::size_t cap) {
  check_rho(rho);
  RatioReport out;
  out.reference = brute_force_min(game, Objective::kSocialCost, cap).value;
  for_each_profile(
      game,
      [&](const Profile& p) {
        if (!verify_approx_equilibrium(game, p, method).is_rho_pne(rho)) return;
        ++out.equilibria;
        const double r = social_cost(game, p) / out.reference;
        if (out.empty || r > out.ratio) {
          out.ratio = r;
          out.worst = p;
        }
        out.empty = false;
      },
      cap);
  return out;
}

RatioReport measured_stretch(const Game& game, double rho, std::size_t cap) {
  check_rho(rho);
  const auto exact = ShareMethod::shapley_exact();
  RatioReport out;
  out.reference = brute_force_min(game, Objective::kPotential, cap).value;
  for_each_profile(
      game,
      [&](const Profile& p) {
        if (!verify_approx_equilibrium(game, p, exact).is_rho_pne(rho)) return;
        ++out.equilibria;
        const double r = potential(game, p).total / out.reference;
        if (out.empty || r > out.ratio) {
          out.ratio = r;
          out.worst = p;
        }
        out.empty = false;
      },
      cap);
  return out;
}

RatioReport measured_stretch(const Game& game, double rho, const PlayerSet& movers,
                             const Profile& fixed, std::size_t cap) {
  check_rho(rho);
  check_profile(game, fixed);
  if (movers.universe() != game.num_players())
    throw PreconditionError("mover set does not match the game");

  // Subgame in which non-movers have exactly one strategy, their fixed one.
  Game sub = game;
  for (PlayerId i = 0; i < game.num_players(); ++i)
    if (!movers.contains(i))
      sub.players[i].strategies = {chosen_strategy(game, fixed, i)};
  auto lift = [&](const Profile& sp) {
    Profile p = fixed;
    for (PlayerId i : movers.members()) p.choice[i] = sp.choice[i];
    return p;
  };

  const auto exact = ShareMethod::shapley_exact();
  const Minimizer hat = brute_force_min(sub, Objective::kPotential, cap);
  const Profile hat_full = lift(hat.profile);
  const double hat_partial = partial_potential(game, hat_full, movers);

  RatioReport out;
  out.reference = hat.value;
  double worst_partial = 0.0;
  for_each_profile(
      sub,
      [&](const Profile& sp) {
        const Profile p = lift(sp);
        if (!verify_approx_equilibrium(game, p, exact, movers).is_rho_pne(rho)) return;
        ++out.equilibria;
        const double r = potential(game, p).total / out.reference;
        if (out.empty || r > out.ratio) {
          out.ratio = r;
          out.worst = p;
        }
        if (hat_partial > 0.0)
          worst_partial = std::max(worst_partial, partial_potential(game, p, movers) / hat_partial);
        out.empty = false;
      },
      cap);
  if (!out.empty && hat_partial > 0.0) out.partial_ratio = worst_partial;
  return out;
}

// ---------------------------------------------------------------------------

SandwichFactors shapley_prop_factors(int d) {
  check_degree(d);
  return {2.0 / (d + 1.0), (d + 3.0) / 4.0};
}

double prop_transfer_factor(int d) {
  check_degree(d);
  return (d + 3.0) * (d + 1.0) / 8.0;
}

CertificateReport shapley_prop_certificates(const Game& game, std::span<const Profile> profiles,
                                            std::optional<double> rho) {
  CertificateReport rep;
  rep.d = game.degree();
  const SandwichFactors f = shapley_prop_factors(rep.d);
  const double transfer = prop_transfer_factor(rep.d);
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  const auto exact = ShareMethod::shapley_exact();
  const auto prop = ShareMethod::proportional();

  for (const Profile& p : profiles) {
    const LoadView view = load_view(game, p);
    for (ResourceId e = 0; e < game.num_resources(); ++e) {
      for (PlayerId i : view.users[e]) {
        const double chi = resource_share(game, e, view.users[e], i, exact);
        const double chi_prop = resource_share(game, e, view.users[e], i, prop);
        ++rep.pairs_checked;
        rep.min_ratio = std::min(rep.min_ratio, chi_prop / chi);
        rep.max_ratio = std::max(rep.max_ratio, chi_prop / chi);
        if (!approx_leq(f.lower * chi, chi_prop)) ++rep.lower_violations;
        if (!approx_leq(chi_prop, f.upper * chi)) ++rep.upper_violations;
      }
    }

    const EquilibriumReport sv = verify_approx_equilibrium(game, p, exact);
    const double r = rho.value_or(sv.worst_ratio);
    if (!sv.is_rho_pne(r)) continue;
    const EquilibriumReport pr = verify_approx_equilibrium(game, p, prop);
    ++rep.transfers_checked;
    rep.worst_transfer_slack = std::max(rep.worst_transfer_slack, pr.worst_ratio / (transfer * r));
    if (!pr.is_rho_pne(transfer * r)) ++rep.transfer_violations;
  }
  if (rep.pairs_checked == 0) rep.min_ratio = 0.0;
  return rep;
}

}  // namespace svcg
