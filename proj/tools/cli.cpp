#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "svcg/analysis.hpp"
#include "svcg/io.hpp"
#include "svcg/potentials.hpp"
#include "svcg/solver.hpp"

namespace svcg::cli {

namespace {

struct SamplingFlags {
  std::optional<double> mu;
  std::optional<int> batches;
  std::optional<std::uint64_t> seed;
};

void add_sampling_flags(CLI::App* cmd, SamplingFlags& f) {
  cmd->add_option("--mu", f.mu, "relative error target of the sampler, in (0, 1]");
  cmd->add_option("--batches", f.batches, "odd number of batches for the median");
  cmd->add_option("--seed", f.seed, "master seed (required for sampling)");
}

ShareMethod make_method(const std::string& name, const SamplingFlags& f, double default_mu) {
  if (name == "shapley-exact") return ShareMethod::shapley_exact();
  if (name == "proportional") return ShareMethod::proportional();
  if (name != "shapley-sampled") throw PreconditionError("unknown method " + name);
  if (!f.seed) throw PreconditionError("--seed is required for sampled shares");
  SampleConfig cfg;
  cfg.mu = f.mu.value_or(default_mu);
  cfg.batches = f.batches;
  cfg.seed = *f.seed;
  return ShareMethod::shapley_sampled(cfg);
}

Game load_valid_game(const std::string& path) {
  Game game = read_game(path);
  if (const auto v = validate_game(game); !v.empty())
    throw PreconditionError("invalid game: " + v.front());
  return game;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? path.substr(0, dot) : path) + suffix;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + path);
  f << text;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

const std::vector<std::string> kMethods = {"shapley-exact", "shapley-sampled", "proportional"};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver and analysis toolkit for Shapley-value weighted congestion games", "svcg"};
  app.require_subcommand(1);

  // solve
  std::string game_path, profile_path, method_name = "shapley-exact", trace_path;
  std::string profile_out, summary_out, initial_path;
  std::optional<double> gamma;
  SamplingFlags sampling;
  auto* solve_cmd = app.add_subcommand("solve", "run the phased improvement dynamics");
  solve_cmd->add_option("game", game_path, "game file")->required();
  solve_cmd->add_option("--gamma", gamma, "schedule parameter (default: fixed point of gamma = 0.25/theta)");
  solve_cmd->add_option("--method", method_name)->check(CLI::IsMember(kMethods));
  add_sampling_flags(solve_cmd, sampling);
  solve_cmd->add_option("--trace", trace_path, "trace output (JSON lines)")->required();
  solve_cmd->add_option("--profile-out", profile_out, "final profile (default <trace>.profile.json)");
  solve_cmd->add_option("--summary", summary_out, "phase summary CSV (default <trace>.summary.csv)");
  solve_cmd->add_option("--initial", initial_path, "initial profile (default: first strategies)");

  // verify
  double rho = 1.0;
  auto* verify_cmd = app.add_subcommand("verify", "check a profile for rho-moves");
  verify_cmd->add_option("game", game_path)->required();
  verify_cmd->add_option("profile", profile_path)->required();
  verify_cmd->add_option("--rho", rho)->required();
  verify_cmd->add_option("--method", method_name)->check(CLI::IsMember(kMethods));
  add_sampling_flags(verify_cmd, sampling);

  // shapley
  bool exact_flag = false, sample_flag = false;
  auto* shapley_cmd = app.add_subcommand("shapley", "print per-resource shares and balance residuals");
  shapley_cmd->add_option("game", game_path)->required();
  shapley_cmd->add_option("profile", profile_path)->required();
  auto* exact_opt = shapley_cmd->add_flag("--exact", exact_flag);
  shapley_cmd->add_flag("--sample", sample_flag)->excludes(exact_opt);
  add_sampling_flags(shapley_cmd, sampling);

  // bounds
  int degree = 1;
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the closed-form bounds");
  bounds_cmd->add_option("--d", degree)->required();
  bounds_cmd->add_option("--rho", rho)->required();
  bounds_cmd->add_option("--gamma", gamma);

  // bruteforce
  std::string objective = "sc";
  std::string minimizer_out;
  std::size_t cap = kDefaultEnumerationCap;
  auto* brute_cmd = app.add_subcommand("bruteforce", "exact minimizer by enumeration");
  brute_cmd->add_option("game", game_path)->required();
  brute_cmd->add_option("--objective", objective)->check(CLI::IsMember({"sc", "potential"}));
  brute_cmd->add_option("--out", minimizer_out, "write the minimizer as a profile file");
  brute_cmd->add_option("--cap", cap, "enumeration cap");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "measured PoA and stretch against the bounds");
  metrics_cmd->add_option("game", game_path)->required();
  metrics_cmd->add_option("--rho", rho)->required();
  metrics_cmd->add_option("--method", method_name)->check(CLI::IsMember(kMethods));
  metrics_cmd->add_option("--cap", cap, "enumeration cap");

  // generate
  GeneratorParams gen;
  std::string gen_out;
  std::optional<std::uint64_t> gen_seed;
  bool log_weights = false;
  auto* gen_cmd = app.add_subcommand("generate", "write a random game");
  gen_cmd->add_option("--out", gen_out)->required();
  gen_cmd->add_option("--seed", gen_seed)->required();
  gen_cmd->add_option("--players", gen.players);
  gen_cmd->add_option("--resources", gen.resources);
  gen_cmd->add_option("--strategies", gen.strategies_per_player);
  gen_cmd->add_option("--min-size", gen.min_strategy_size);
  gen_cmd->add_option("--max-size", gen.max_strategy_size);
  gen_cmd->add_option("--min-weight", gen.min_weight);
  gen_cmd->add_option("--max-weight", gen.max_weight);
  gen_cmd->add_flag("--log-weights", log_weights, "draw weights log-uniformly");
  gen_cmd->add_option("--degree", gen.degree);
  gen_cmd->add_option("--min-coeff", gen.min_coeff);
  gen_cmd->add_option("--max-coeff", gen.max_coeff);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*solve_cmd) {
      const Game game = load_valid_game(game_path);
      const Profile initial = initial_path.empty() ? initial_profile(game) : read_profile(initial_path);
      const double g = gamma.value_or(default_gamma(game.degree()));
      const ShareMethod method = make_method(method_name, sampling, g);
      const SolveResult res = solve(game, initial, g, method);

      std::ostringstream trace;
      write_trace_jsonl(res.trace, res.schedule, trace);
      write_file(trace_path, trace.str());
      write_profile(res.profile, profile_out.empty() ? with_suffix(trace_path, ".profile.json") : profile_out);
      std::ostringstream csv;
      write_trace_summary_csv(res.trace, csv);
      write_file(summary_out.empty() ? with_suffix(trace_path, ".summary.csv") : summary_out, csv.str());

      out << "gamma=" << num(res.schedule.gamma) << '\n'
          << "alpha=" << num(res.schedule.alpha) << '\n'
          << "theta=" << num(res.schedule.theta) << '\n'
          << "m=" << res.schedule.m << '\n'
          << "steps=" << res.trace.moves.size() << '\n';
      return kExitOk;
    }

    if (*verify_cmd) {
      const Game game = load_valid_game(game_path);
      const Profile profile = read_profile(profile_path);
      check_profile(game, profile);
      const ShareMethod method = make_method(method_name, sampling, 0.2);
      if (method.is_sampled() && !method.sample_config().batches)
        throw PreconditionError("--batches is required for sampled verification");
      const EquilibriumReport rep = verify_approx_equilibrium(game, profile, method);
      const bool pne = rep.is_rho_pne(rho);
      out << "worst_ratio=" << num(rep.worst_ratio) << '\n';
      if (rep.witness_player)
        out << "witness_player=" << *rep.witness_player << '\n'
            << "witness_strategy=" << *rep.witness_strategy << '\n';
      out << "rho=" << num(rho) << '\n' << "rho_pne=" << (pne ? "yes" : "no") << '\n';
      return pne ? kExitOk : kExitNotEquilibrium;
    }

    if (*shapley_cmd) {
      const Game game = load_valid_game(game_path);
      const Profile profile = read_profile(profile_path);
      check_profile(game, profile);
      ShareMethod method = ShareMethod::shapley_exact();
      if (sample_flag) {
        SampleConfig cfg;
        if (!sampling.seed) throw PreconditionError("--seed is required for sampled shares");
        cfg.seed = *sampling.seed;
        cfg.mu = sampling.mu.value_or(default_gamma(game.degree()));
        if (sampling.batches) {
          cfg.batches = sampling.batches;
        } else {
          const ScheduleParams sp = compute_schedule(game, profile, default_gamma(game.degree()));
          cfg.batches = default_batch_count(game.num_players(), game.max_strategies(),
                                            game.num_resources(),
                                            std::log(sp.x_max / sp.x_min) / std::log(sp.g),
                                            sp.degree, sp.gamma, cfg.failure_exponent);
        }
        method = ShareMethod::shapley_sampled(cfg);
      }
      out << share_report_to_json(share_report(game, profile, method)).dump(2) << '\n';
      return kExitOk;
    }

    if (*bounds_cmd) {
      const BoundValues b = compute_bounds(rho, degree);
      if (!b.admissible)
        throw RhoOutOfRange("rho exceeds admissible range for degree " + std::to_string(degree));
      const double g = gamma.value_or(default_gamma(degree));
      out << "d=" << degree << '\n'
          << "rho=" << num(rho) << '\n'
          << "lambda=" << num(b.lambda) << '\n'
          << "mu_smooth=" << num(b.mu_smooth) << '\n'
          << "poa_bound=" << num(b.poa_bound) << '\n'
          << "stretch_bound=" << num(b.stretch_bound) << '\n'
          << "limited_stretch_bound=" << num(b.limited_stretch_bound) << '\n'
          << "gamma=" << num(g) << '\n'
          << "theta=" << num(stretch_theta(g, degree)) << '\n'
          << "alpha=" << num(alpha_of(g, degree)) << '\n';
      return kExitOk;
    }

    if (*brute_cmd) {
      const Game game = load_valid_game(game_path);
      const Minimizer best = brute_force_min(
          game, objective == "sc" ? Objective::kSocialCost : Objective::kPotential, cap);
      out << "choice=" << profile_to_json(best.profile)["choice"].dump() << '\n'
          << "value=" << num(best.value) << '\n';
      if (!minimizer_out.empty()) write_profile(best.profile, minimizer_out);
      return kExitOk;
    }

    if (*metrics_cmd) {
      const Game game = load_valid_game(game_path);
      const int d = game.degree();
      const ShareMethod method = make_method(method_name, sampling, 0.2);
      if (method.is_sampled()) throw PreconditionError("metrics require an exact sharing method");
      const BoundValues b = compute_bounds(rho, d);
      if (!b.admissible)
        throw RhoOutOfRange("rho exceeds admissible range for degree " + std::to_string(d));
      const RatioReport poa = measured_poa(game, rho, method, cap);
      const RatioReport st = measured_stretch(game, rho, cap);
      out << "metric,d,n,measured,bound,margin\n";
      auto row = [&](const char* name, const RatioReport& r, double bound) {
        out << name << ',' << d << ',' << game.num_players() << ',';
        if (r.empty)
          out << "empty," << num(bound) << ",\n";
        else
          out << num(r.ratio) << ',' << num(bound) << ',' << num(bound - r.ratio) << '\n';
      };
      row("poa", poa, b.poa_bound);
      row("stretch", st, b.stretch_bound);
      return kExitOk;
    }

    if (*gen_cmd) {
      gen.seed = *gen_seed;
      gen.weight_scale = log_weights ? WeightScale::kLogUniform : WeightScale::kUniform;
      write_game(generate(gen), gen_out);
      return kExitOk;
    }
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapRefused;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace svcg::cli
