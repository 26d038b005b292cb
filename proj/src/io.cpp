#include "svcg/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "svcg/rng.hpp"

namespace svcg {

using nlohmann::json;

namespace {

std::size_t dense_id(const json& item, std::size_t count, const char* what) {
  if (!item.contains("id") || !item["id"].is_number_integer())
    throw FormatError(std::string(what) + " entry needs an integer \"id\"");
  const auto id = item["id"].get<long long>();
  if (id < 0 || static_cast<std::size_t>(id) >= count)
    throw FormatError(std::string(what) + " ids must be dense 0-based indices; got " +
                      std::to_string(id));
  return static_cast<std::size_t>(id);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

}  // namespace

json game_to_json(const Game& game) {
  json resources = json::array();
  for (std::size_t e = 0; e < game.resources.size(); ++e)
    resources.push_back({{"id", e}, {"coeffs", game.resources[e].coeffs()}});
  json players = json::array();
  for (std::size_t i = 0; i < game.players.size(); ++i)
    players.push_back({{"id", i},
                       {"weight", game.players[i].weight},
                       {"strategies", game.players[i].strategies}});
  return {{"resources", resources}, {"players", players}};
}

Game game_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("resources") || !j.contains("players"))
      throw FormatError("game file needs \"resources\" and \"players\" arrays");
    const json& res = j.at("resources");
    const json& pl = j.at("players");
    if (!res.is_array() || !pl.is_array())
      throw FormatError("\"resources\" and \"players\" must be arrays");

    Game game;
    game.resources.resize(res.size());
    std::vector<bool> seen(res.size(), false);
    for (const json& r : res) {
      const std::size_t id = dense_id(r, res.size(), "resource");
      if (seen[id]) throw FormatError("duplicate resource id " + std::to_string(id));
      seen[id] = true;
      game.resources[id] = CostPolynomial(r.at("coeffs").get<std::vector<double>>());
    }

    game.players.resize(pl.size());
    seen.assign(pl.size(), false);
    for (const json& p : pl) {
      const std::size_t id = dense_id(p, pl.size(), "player");
      if (seen[id]) throw FormatError("duplicate player id " + std::to_string(id));
      seen[id] = true;
      game.players[id].weight = p.at("weight").get<double>();
      for (const json& s : p.at("strategies")) {
        Strategy strat;
        for (const json& e : s) {
          const auto v = e.get<long long>();
          if (v < 0) throw FormatError("negative resource id in strategy");
          strat.push_back(static_cast<ResourceId>(v));
        }
        game.players[id].strategies.push_back(std::move(strat));
      }
    }
    return game;
  } catch (const json::exception& e) {
    throw FormatError(std::string("game file: ") + e.what());
  }
}

Game read_game(const std::string& path) { return game_from_json(read_json_file(path)); }

void write_game(const Game& game, const std::string& path) {
  write_text(path, game_to_json(game).dump(2) + "\n");
}

json profile_to_json(const Profile& profile) { return {{"choice", profile.choice}}; }

Profile profile_from_json(const json& j) {
  try {
    Profile p;
    for (const json& c : j.at("choice")) {
      const auto v = c.get<long long>();
      if (v < 0) throw FormatError("negative strategy index in profile");
      p.choice.push_back(static_cast<std::size_t>(v));
    }
    return p;
  } catch (const json::exception& e) {
    throw FormatError(std::string("profile file: ") + e.what());
  }
}

Profile read_profile(const std::string& path) { return profile_from_json(read_json_file(path)); }

void write_profile(const Profile& profile, const std::string& path) {
  write_text(path, profile_to_json(profile).dump() + "\n");
}

json share_report_to_json(const ShareReport& report) {
  json entries = json::array();
  for (const ShareEntry& e : report.entries) {
    json item = {{"player", e.player}, {"resource", e.resource}, {"share", e.share}};
    if (!e.batch_means.empty()) {
      item["batch_means"] = e.batch_means;
      item["samples_per_batch"] = e.samples_per_batch;
    }
    entries.push_back(std::move(item));
  }
  json balance = json::array();
  for (const ResourceBalance& b : report.balance)
    balance.push_back({{"resource", b.resource},
                       {"joint_cost", b.joint_cost},
                       {"share_sum", b.share_sum},
                       {"residual", b.residual}});
  return {{"method", report.method}, {"shares", entries}, {"balance", balance}};
}

json schedule_to_json(const ScheduleParams& s) {
  return {{"gamma", s.gamma}, {"t", s.t},         {"theta", s.theta},
          {"s", s.s},         {"g", s.g},         {"x_max", s.x_max},
          {"x_min", s.x_min}, {"m", s.m},         {"blocks", s.blocks},
          {"alpha", s.alpha}, {"step_bound", s.step_bound}, {"d", s.degree},
          {"n", s.num_players}};
}

json equilibrium_report_to_json(const EquilibriumReport& r) {
  json j = {{"profile", r.profile.choice}, {"worst_ratio", r.worst_ratio}, {"costs", r.costs}};
  if (r.witness_player) {
    j["witness_player"] = *r.witness_player;
    j["witness_strategy"] = *r.witness_strategy;
  }
  return j;
}

json bounds_to_json(const BoundValues& b) {
  json j = {{"d", b.d}, {"rho", b.rho}, {"lambda", b.lambda}, {"mu_smooth", b.mu_smooth},
            {"admissible", b.admissible}};
  if (b.admissible) {
    j["poa_bound"] = b.poa_bound;
    j["stretch_bound"] = b.stretch_bound;
    j["limited_stretch_bound"] = b.limited_stretch_bound;
  }
  return j;
}

void write_trace_jsonl(const SolveTrace& trace, const ScheduleParams& schedule, std::ostream& out) {
  out << json{{"type", "schedule"},
              {"schedule", schedule_to_json(schedule)},
              {"initial_potential", trace.initial_potential}}
             .dump()
      << '\n';
  for (const MoveRecord& m : trace.moves)
    out << json{{"type", "move"},
                {"step", m.step},
                {"phase", m.phase},
                {"player", m.player},
                {"from", m.from},
                {"to", m.to},
                {"cost_before", m.cost_before},
                {"cost_after", m.cost_after},
                {"kind", m.kind == MoveKind::kS ? "s" : "t"},
                {"potential_after", m.potential_after}}
               .dump()
        << '\n';
  for (const PhaseRecord& p : trace.phases)
    out << json{{"type", "phase"},
                {"phase", p.phase},
                {"steps", p.steps},
                {"deviators", p.deviators},
                {"finished", p.finished},
                {"potential", p.potential},
                {"social_cost", p.social_cost}}
               .dump()
        << '\n';
  out << json{{"type", "final"}, {"choice", trace.final_profile.choice}}.dump() << '\n';
}

void write_trace_summary_csv(const SolveTrace& trace, std::ostream& out) {
  out << "phase,steps,potential,social_cost\n";
  std::ostringstream row;
  row << std::setprecision(17);
  for (const PhaseRecord& p : trace.phases)
    row << p.phase << ',' << p.steps << ',' << p.potential << ',' << p.social_cost << '\n';
  out << row.str();
}

// ---------------------------------------------------------------------------

void GeneratorParams::validate() const {
  auto fail = [](const std::string& msg) { throw PreconditionError("generator: " + msg); };
  if (players == 0) fail("need at least one player");
  if (resources == 0) fail("need at least one resource");
  if (resources > 62) fail("at most 62 resources are supported");
  if (strategies_per_player == 0) fail("need at least one strategy per player");
  if (min_strategy_size == 0) fail("strategies must be non-empty");
  if (min_strategy_size > max_strategy_size) fail("empty strategy size range");
  if (max_strategy_size > resources) fail("strategy size exceeds resource count");
  if (!(min_weight > 0.0)) fail("weight lower bound must be positive");
  if (!(min_weight <= max_weight) || !std::isfinite(max_weight)) fail("empty weight range");
  if (degree < 0 || degree > kDefaultMaxDegree) fail("degree out of range");
  if (!(min_coeff >= 0.0)) fail("coefficients must be non-negative");
  if (!(min_coeff <= max_coeff) || !std::isfinite(max_coeff)) fail("empty coefficient range");
  if (!(max_coeff > 0.0)) fail("coefficient range must contain a positive value");

  double subsets = 0.0;
  for (std::size_t k = min_strategy_size; k <= max_strategy_size; ++k) {
    double c = 1.0;
    for (std::size_t q = 0; q < k; ++q) c = c * static_cast<double>(resources - q) / static_cast<double>(q + 1);
    subsets += c;
  }
  if (static_cast<double>(strategies_per_player) > subsets)
    fail("more strategies requested than distinct subsets exist");
}

Game generate(const GeneratorParams& params) {
  params.validate();
  CounterRng rng(derive_key(params.seed, {0x67656eULL}));
  Game game;

  for (std::size_t e = 0; e < params.resources; ++e) {
    std::vector<double> coeffs(static_cast<std::size_t>(params.degree) + 1);
    for (double& a : coeffs) a = rng.uniform(params.min_coeff, params.max_coeff);
    if (coeffs.back() <= 0.0) coeffs.back() = params.max_coeff;
    game.resources.emplace_back(std::move(coeffs));
  }

  // Subset sizes weighted by binom(|E|, k) make the draw uniform over subsets.
  std::vector<std::uint64_t> size_weight;
  std::uint64_t total = 0;
  for (std::size_t k = params.min_strategy_size; k <= params.max_strategy_size; ++k) {
    unsigned __int128 c = 1;
    for (std::size_t q = 0; q < k; ++q) c = c * (params.resources - q) / (q + 1);
    size_weight.push_back(static_cast<std::uint64_t>(c));
    total += static_cast<std::uint64_t>(c);
  }

  std::vector<ResourceId> pool(params.resources);
  for (std::size_t i = 0; i < params.players; ++i) {
    Player p;
    if (params.weight_scale == WeightScale::kLogUniform)
      p.weight = std::exp(rng.uniform(std::log(params.min_weight), std::log(params.max_weight)));
    else
      p.weight = rng.uniform(params.min_weight, params.max_weight);

    std::set<Strategy> seen;
    while (p.strategies.size() < params.strategies_per_player) {
      std::uint64_t pick = rng.below(total);
      std::size_t k = params.min_strategy_size;
      for (std::uint64_t w : size_weight) {
        if (pick < w) break;
        pick -= w;
        ++k;
      }
      for (std::size_t q = 0; q < pool.size(); ++q) pool[q] = q;
      for (std::size_t q = 0; q < k; ++q)
        std::swap(pool[q], pool[q + rng.below(pool.size() - q)]);
      Strategy s(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(s.begin(), s.end());
      if (seen.insert(s).second) p.strategies.push_back(std::move(s));
    }
    game.players.push_back(std::move(p));
  }
  return game;
}

Profile initial_profile(const Game& game) {
  return Profile{std::vector<std::size_t>(game.num_players(), 0)};
}

}  // namespace svcg
