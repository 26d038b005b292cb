#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "svcg/analysis.hpp"
#include "svcg/cost_sharing.hpp"
#include "svcg/game.hpp"
#include "svcg/solver.hpp"

namespace svcg {

/// Malformed game or profile file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Game file: {"resources": [{"id", "coeffs"}], "players": [{"id", "weight",
// "strategies"}]}, ids dense and 0-based (any order in the file).
nlohmann::json game_to_json(const Game& game);
Game game_from_json(const nlohmann::json& j);
Game read_game(const std::string& path);
void write_game(const Game& game, const std::string& path);

// Profile file: {"choice": [strategy indices]}.
nlohmann::json profile_to_json(const Profile& profile);
Profile profile_from_json(const nlohmann::json& j);
Profile read_profile(const std::string& path);
void write_profile(const Profile& profile, const std::string& path);

nlohmann::json share_report_to_json(const ShareReport& report);
nlohmann::json schedule_to_json(const ScheduleParams& schedule);
nlohmann::json equilibrium_report_to_json(const EquilibriumReport& report);
nlohmann::json bounds_to_json(const BoundValues& bounds);

/// One JSON object per line: a header line, one line per move, one per phase.
void write_trace_jsonl(const SolveTrace& trace, const ScheduleParams& schedule, std::ostream& out);
/// CSV with columns phase,steps,potential,social_cost.
void write_trace_summary_csv(const SolveTrace& trace, std::ostream& out);

// ---------------------------------------------------------------------------
// Instance generation.
// ---------------------------------------------------------------------------

enum class WeightScale { kUniform, kLogUniform };

struct GeneratorParams {
  std::size_t players = 3;
  std::size_t resources = 4;
  std::size_t strategies_per_player = 2;
  std::size_t min_strategy_size = 1;
  std::size_t max_strategy_size = 2;
  double min_weight = 1.0;
  double max_weight = 3.0;
  WeightScale weight_scale = WeightScale::kUniform;
  int degree = 2;
  double min_coeff = 0.0;
  double max_coeff = 2.0;
  std::uint64_t seed = 0;

  /// Throws PreconditionError on inconsistent parameters.
  void validate() const;
};

/// Deterministic in the seed. Strategies are distinct subsets drawn uniformly
/// from all subsets whose size lies in the allowed range. Every resource has a
/// positive top coefficient, so each cost function has exactly `degree`.
Game generate(const GeneratorParams& params);

/// First strategy for every player.
Profile initial_profile(const Game& game);

}  // namespace svcg
