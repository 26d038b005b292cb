#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "svcg/cost_sharing.hpp"

using namespace svcg;

namespace {

const CostPolynomial kSquare({0.0, 0.0, 1.0});
const CostPolynomial kLinear({0.0, 1.0});

}  // namespace

TEST_CASE("marginal_contribution") {
  CHECK(marginal_contribution(kSquare, 0.0, 1.0) == 1.0);
  CHECK(marginal_contribution(kSquare, 1.0, 2.0) == 26.0);
  const CostPolynomial unit({1.0});
  CHECK(marginal_contribution(unit, 7.5, 2.5) == doctest::Approx(2.5));
  CHECK_THROWS_AS(marginal_contribution(kSquare, -1.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(marginal_contribution(kSquare, 0.0, -1.0), PreconditionError);
}

TEST_CASE("shapley_exact on the square pair") {
  const std::vector<User> users{{0, 1.0}, {1, 2.0}};
  // Orders (0,1) and (1,0): player 0 pays 1 or 27-8, player 1 pays 26 or 8.
  CHECK(shapley_exact(kSquare, users, 0) == doctest::Approx((1.0 + 19.0) / 2));
  CHECK(shapley_exact(kSquare, users, 1) == doctest::Approx((26.0 + 8.0) / 2));
  CHECK(shapley_exact(kSquare, users, 0) == 10.0);
  CHECK(shapley_exact(kSquare, users, 1) == 17.0);
}

TEST_CASE("shapley_exact for a single user is the joint cost") {
  const std::vector<User> users{{3, 2.5}};
  CHECK(shapley_exact(kSquare, users, 3) == doctest::Approx(kSquare.joint(2.5)));
}

TEST_CASE("shapley_exact with a linear per-unit cost equals proportional") {
  const std::vector<User> users{{0, 1.0}, {1, 2.0}};
  CHECK(shapley_exact(kLinear, users, 0) == doctest::Approx(3.0));
  CHECK(shapley_exact(kLinear, users, 1) == doctest::Approx(6.0));
}

TEST_CASE("shapley_exact preconditions") {
  const std::vector<User> users{{0, 1.0}, {1, 2.0}};
  CHECK_THROWS_AS(shapley_exact(kSquare, users, 7), PreconditionError);
  std::vector<User> many;
  for (PlayerId i = 0; i <= kExactSizeCap; ++i) many.push_back({i, 1.0});
  CHECK_THROWS_AS(shapley_exact(kSquare, many, 0), CapExceeded);
  many.pop_back();
  CHECK_NOTHROW(shapley_exact(kSquare, many, 0));
}

TEST_CASE("shapley_exact with 20 equal users splits evenly") {
  std::vector<User> users;
  for (PlayerId i = 0; i < 20; ++i) users.push_back({i, 0.5});
  CHECK(shapley_exact(kSquare, users, 4) == doctest::Approx(kSquare.joint(10.0) / 20));
}

TEST_CASE("samples_per_batch") {
  CHECK(samples_per_batch(5, 0.5) == 64);
  CHECK(samples_per_batch(5, 0.2) == 400);
  CHECK(samples_per_batch(2, 1.0) == 4);
  CHECK(samples_per_batch(1, 0.1) == 0);
}

TEST_CASE("shapley_sampled on a single user is exact and draws nothing") {
  const std::vector<User> users{{0, 1.5}};
  SampleConfig cfg;
  cfg.mu = 0.3;
  cfg.batches = 5;
  const SampledShare s = shapley_sampled(kSquare, users, 0, cfg, 11);
  CHECK(s.estimate == doctest::Approx(kSquare.joint(1.5)));
  CHECK(s.samples_per_batch == 0);
}

TEST_CASE("shapley_sampled stays within the mu band on the square pair") {
  const std::vector<User> users{{0, 1.0}, {1, 2.0}};
  SampleConfig cfg;
  cfg.mu = 0.1;
  cfg.batches = 11;
  cfg.seed = 20240601;
  const SampledShare s = shapley_sampled(kSquare, users, 0, cfg, 0);
  CHECK(s.batch_means.size() == 11);
  CHECK(s.samples_per_batch == 400);
  CHECK(s.estimate >= 9.0);
  CHECK(s.estimate <= 11.0);
}

TEST_CASE("shapley_sampled is a pure function of its inputs") {
  const std::vector<User> users{{0, 1.0}, {1, 2.0}, {2, 0.5}, {3, 3.0}};
  SampleConfig cfg;
  cfg.mu = 0.3;
  cfg.batches = 7;
  cfg.seed = 99;
  const SampledShare a = shapley_sampled(kSquare, users, 2, cfg, 5);
  const SampledShare b = shapley_sampled(kSquare, users, 2, cfg, 5);
  CHECK(a.estimate == b.estimate);
  CHECK(a.batch_means == b.batch_means);
  const SampledShare c = shapley_sampled(kSquare, users, 2, cfg, 6);
  CHECK(c.batch_means != a.batch_means);
  cfg.seed = 100;
  CHECK(shapley_sampled(kSquare, users, 2, cfg, 5).batch_means != a.batch_means);
}

TEST_CASE("shapley_sampled estimate is the median of batch means") {
  const std::vector<User> users{{0, 1.0}, {1, 2.0}, {2, 0.5}};
  SampleConfig cfg;
  cfg.mu = 0.5;
  cfg.batches = 9;
  cfg.seed = 3;
  const SampledShare s = shapley_sampled(kSquare, users, 0, cfg, 1);
  std::vector<double> sorted = s.batch_means;
  std::sort(sorted.begin(), sorted.end());
  CHECK(s.estimate == sorted[4]);
}

TEST_CASE("SampleConfig validation") {
  SampleConfig cfg;
  cfg.batches = 4;
  CHECK_THROWS_AS(cfg.validate(true), PreconditionError);
  cfg.batches = 5;
  CHECK_NOTHROW(cfg.validate(true));
  cfg.mu = 1.5;
  CHECK_THROWS_AS(cfg.validate(true), PreconditionError);
  cfg.mu = 0.0;
  CHECK_THROWS_AS(cfg.validate(true), PreconditionError);
  cfg.mu = 0.5;
  cfg.batches.reset();
  CHECK_NOTHROW(cfg.validate(false));
  CHECK_THROWS_AS(cfg.validate(true), PreconditionError);
  cfg.failure_exponent = 0.5;
  CHECK_THROWS_AS(cfg.validate(false), PreconditionError);
}

TEST_CASE("default_batch_count follows the amplification formula") {
  struct Case {
    std::size_t n, p, e;
    double phase;
    int d;
    double gamma, c;
  };
  for (const Case k : {Case{2, 2, 2, 0.0, 1, 0.1, 1.0}, Case{6, 4, 8, 1.3, 3, 0.01, 2.0},
                       Case{3, 1, 1, 0.0, 0, 0.5, 1.0}}) {
    const double arg = 2.0 * std::pow(static_cast<double>(k.n), k.c + 3.0) * k.p * k.e *
                       (1.0 + k.phase) * (k.d + 1.0) * std::pow(k.gamma, -9.0);
    int expect = static_cast<int>(std::ceil(std::log2(arg)));
    if (expect % 2 == 0) ++expect;
    const int got = default_batch_count(k.n, k.p, k.e, k.phase, k.d, k.gamma, k.c);
    CHECK(got == expect);
    CHECK(got % 2 == 1);
  }
}

TEST_CASE("proportional_share") {
  CHECK(proportional_share(kSquare, 3.0, 1.0) == 9.0);
  CHECK(proportional_share(kSquare, 3.0, 2.0) == 18.0);
  CHECK(proportional_share(CostPolynomial({4.0}), 10.0, 2.5) == 10.0);
  CHECK_THROWS_AS(proportional_share(kSquare, 1.0, 2.0), PreconditionError);
}

TEST_CASE("player_cost examples") {
  SUBCASE("sole user of two resources") {
    Game g;
    g.resources = {kLinear, kLinear};
    g.players = {Player{1.0, {{0, 1}}}};
    CHECK(player_cost(g, Profile{{0}}, 0, ShareMethod::shapley_exact()) == doctest::Approx(2.0));
  }
  SUBCASE("square pair under both rules") {
    const Game g = testing::square_pair();
    const Profile p{{0, 0}};
    CHECK(player_cost(g, p, 0, ShareMethod::shapley_exact()) == doctest::Approx(10.0));
    CHECK(player_cost(g, p, 1, ShareMethod::shapley_exact()) == doctest::Approx(17.0));
    CHECK(player_cost(g, p, 0, ShareMethod::proportional()) == doctest::Approx(9.0));
    CHECK(player_cost(g, p, 1, ShareMethod::proportional()) == doctest::Approx(18.0));
  }
}

TEST_CASE("deviation_cost prices the unilateral switch") {
  const Game g = testing::parallel_links();
  const Profile p{{0, 0}};
  CHECK(player_cost(g, p, 0, ShareMethod::shapley_exact()) == doctest::Approx(2.0));
  CHECK(deviation_cost(g, p, 0, 1, ShareMethod::shapley_exact()) == doctest::Approx(1.0));
  CHECK(deviation_cost(g, p, 0, 0, ShareMethod::shapley_exact()) == doctest::Approx(2.0));
}

TEST_CASE("share_report balances every used resource") {
  const Game g = testing::square_pair();
  const ShareReport r = share_report(g, Profile{{0, 0}}, ShareMethod::shapley_exact());
  CHECK(r.method == "shapley-exact");
  REQUIRE(r.entries.size() == 2);
  REQUIRE(r.balance.size() == 1);
  CHECK(r.balance[0].joint_cost == doctest::Approx(27.0));
  CHECK(std::fabs(r.balance[0].residual) < 1e-12);

  const ShareReport prop = share_report(g, Profile{{0, 0}}, ShareMethod::proportional());
  CHECK(prop.method == "proportional");
  CHECK(std::fabs(prop.balance[0].residual) < 1e-12);
}

TEST_CASE("sampled shares through the game interface are reproducible") {
  testing::Gen gen(5);
  const Game g = gen.game(4, 3, 2, 2);
  const Profile p = gen.profile(g);
  SampleConfig cfg;
  cfg.mu = 0.4;
  cfg.batches = 5;
  cfg.seed = 17;
  const auto m = ShareMethod::shapley_sampled(cfg);
  CHECK(m.name() == "shapley-sampled");
  for (PlayerId i = 0; i < g.num_players(); ++i)
    CHECK(player_cost(g, p, i, m, 42) == player_cost(g, p, i, m, 42));
}
