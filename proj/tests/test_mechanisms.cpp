#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "auctionlab/generator.hpp"
#include "auctionlab/market_io.hpp"
#include "auctionlab/mechanisms.hpp"

using namespace auctionlab;
using doctest::Approx;

TEST_CASE("critical neighborhoods on the fixture") {
  const Market m = fig1();
  const auto p = truthful_profile(m);
  CHECK(critical_neighborhood(m, p, "B").members ==
        std::set<AgentId>{"b1", "C", "E"});
  CHECK(critical_neighborhood(m, p, "D").members == std::set<AgentId>{"d1"});
  CHECK(critical_neighborhood(m, p, "C").members.empty());
  CHECK(critical_neighborhood(m, p, "A").members == std::set<AgentId>{"D"});
  CHECK_THROWS_AS(critical_neighborhood(m, p, "b1"), MarketError);
  CHECK_THROWS_AS(critical_neighborhood(m, remove_agent(m, p, "B"), "C"),
                  MarketError);
}

TEST_CASE("VCG on the fixture") {
  const Market m = fig1();
  const auto outcome = run_vcg(m, truthful_profile(m));
  CHECK(outcome.welfare == Approx(51.0));
  CHECK(outcome.cost == Approx(4.0));
  CHECK(outcome.payments.at("A") == Approx(-21.0));
  CHECK(outcome.payments.at("B") == Approx(-9.0));
  CHECK(outcome.payments.at("C") == Approx(0.0));
  CHECK(outcome.payments.at("D") == Approx(-21.0));
  CHECK(outcome.payments.at("E") == Approx(-1.0));
  CHECK(outcome.payments.at("b1") == Approx(11.0));
  CHECK(outcome.payments.at("d1") == Approx(12.0));
  CHECK(outcome.payments.at("e2") == Approx(11.0));
  for (const auto& j : {"s1", "s2", "s3", "s4", "a1", "b2", "c1", "d2", "e1"})
    CHECK(outcome.payments.at(j) == Approx(0.0));
  CHECK(outcome.revenue == Approx(-22.0));
  CHECK(outcome.utilities.at("b1") == Approx(2.0));
  CHECK(outcome.utilities.at("A") == Approx(21.0));
}

TEST_CASE("simplified winner payment matches generic VCG") {
  const Market m = fig1();
  const auto p = truthful_profile(m);
  CHECK(vcg_winner_payment(m, p, "d1") == Approx(12.0));
  CHECK(vcg_winner_payment(m, p, "b1") == Approx(11.0));
  CHECK(vcg_winner_payment(m, p, "e2") == Approx(11.0));
  CHECK_THROWS_AS(vcg_winner_payment(m, p, "b2"), MarketError);

  const Market solo =
      build_market({{"j", AgentKind::Buyer, {}, 5.0}}, {"j"}, {}, 1);
  CHECK(vcg_winner_payment(solo, truthful_profile(solo), "j") == Approx(0.0));
}

TEST_CASE("CNA on the fixture") {
  const Market m = fig1();
  const auto outcome = run_cna(m, truthful_profile(m));
  CHECK(outcome.payments.at("B") == Approx(-3.0));
  CHECK(outcome.payments.at("D") == Approx(-3.0));
  CHECK(outcome.payments.at("A") == Approx(0.0));
  CHECK(outcome.payments.at("C") == Approx(0.0));
  CHECK(outcome.payments.at("E") == Approx(0.0));
  CHECK(outcome.payments.at("b1") == Approx(11.0));
  CHECK(outcome.payments.at("d1") == Approx(12.0));
  CHECK(outcome.payments.at("e2") == Approx(11.0));
  CHECK(outcome.revenue == Approx(24.0));
  CHECK(outcome.welfare == Approx(51.0));
  CHECK(outcome.utilities.at("B") == Approx(3.0));
  CHECK(outcome.utilities.at("D") == Approx(3.0));
}

TEST_CASE("VCG-WI on the fixture") {
  const Market m = fig1();
  const auto outcome = run_vcg_wi(m, truthful_profile(m));
  CHECK(outcome.allocation.winners == std::set<AgentId>{"s2", "s3", "s4"});
  for (const auto& j : {"s2", "s3", "s4"})
    CHECK(outcome.payments.at(j) == Approx(1.0));
  CHECK(outcome.revenue == Approx(3.0));

  Market k1 = fig1();
  k1.item_count = 1;
  const auto single = run_vcg_wi(k1, truthful_profile(k1));
  CHECK(single.allocation.winners == std::set<AgentId>{"s2"});
  CHECK(single.payments.at("s2") == Approx(2.0));
}

TEST_CASE("VCG-WI with slack supply charges nothing") {
  const Market m = build_market({{"x", AgentKind::Buyer, {}, 4.0},
                                 {"y", AgentKind::Buyer, {}, 9.0}},
                                {"x", "y"}, {}, 3);
  const auto outcome = run_vcg_wi(m, truthful_profile(m));
  CHECK(outcome.allocation.winners == std::set<AgentId>{"x", "y"});
  CHECK(outcome.payments.at("x") == Approx(0.0));
  CHECK(outcome.payments.at("y") == Approx(0.0));
}

TEST_CASE("outcome_summary") {
  const Market m = fig1();
  const auto p = truthful_profile(m);
  const std::vector<MechanismOutcome> outcomes{run_vcg(m, p), run_cna(m, p),
                                               run_vcg_wi(m, p)};
  const auto rows = outcome_summary(m, outcomes);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].revenue == Approx(-22.0));
  CHECK(rows[1].revenue == Approx(24.0));
  CHECK(rows[2].revenue == Approx(3.0));
  CHECK(rows[0].buyer_payments == Approx(34.0));
  CHECK(rows[0].intermediary_payments == Approx(-52.0));
  CHECK(outcome_summary(m, {}).empty());
  CHECK(outcome_summary(m, {outcomes[1]}).size() == 1);
}

TEST_CASE("invalid agents pay nothing") {
  const Market m = fig1();
  const auto p = restrict_neighbors(truthful_profile(m), "B", {"b1", "b2", "C"});
  for (const auto outcome : {run_vcg(m, p), run_cna(m, p)}) {
    for (const auto& id : {"E", "e1", "e2"}) {
      CHECK(outcome.payments.count(id) == 0);
      CHECK(outcome.utilities.at(id) == Approx(0.0));
    }
  }
}

TEST_CASE("mechanism properties on generated markets") {
  GeneratorConfig cfg;
  cfg.k = 2;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    cfg.seed = seed;
    cfg.topology = seed % 4 == 0 ? Topology::General : Topology::Tree;
    cfg.extra_edge_probability = 0.25;
    const Market m = generate(cfg);
    const auto p = truthful_profile(m);
    const auto vcg = run_vcg(m, p);
    const auto cna = run_cna(m, p);

    // Identical efficient allocations.
    CHECK(vcg.allocation.winners == cna.allocation.winners);
    CHECK(vcg.welfare == Approx(cna.welfare));

    // Buyers pay the same in both; intermediary CNA payments dominate VCG
    // payments and never go positive.
    for (const auto& [id, x] : cna.payments) {
      if (m.is_buyer(id)) {
        CHECK(x == Approx(vcg.payments.at(id)));
      } else {
        CHECK(x <= kTol);
        CHECK(x >= vcg.payments.at(id) - kTol);
      }
    }
    CHECK(cna.revenue >= vcg.revenue - kTol);

    // Leaves of AG* are exactly the winners.
    std::map<AgentId, int> degree;
    for (const auto& [a, b] : cna.allocation.graph_edges) {
      degree[a]++;
      degree[b]++;
    }
    for (const auto& [id, deg] : degree) {
      if (id == kSellerId) continue;
      if (m.is_tree())
        CHECK((deg == 1) == (cna.allocation.winners.count(id) == 1));
      if (cna.allocation.winners.count(id)) CHECK(deg == 1);
    }

    // Intermediaries outside AG* pay zero under CNA.
    const auto nodes = cna.allocation.nodes();
    for (const auto& [id, x] : cna.payments)
      if (m.is_intermediary(id) && nodes.count(id) == 0)
        CHECK(x == Approx(0.0));

    // Truthful utilities are individually rational.
    for (const auto& [id, u] : vcg.utilities) CHECK(u >= -kTol);
    for (const auto& [id, u] : cna.utilities) CHECK(u >= -kTol);

    // The simplified winner payment agrees with the generic formula.
    for (const auto& j : vcg.allocation.winners)
      CHECK(vcg_winner_payment(m, p, j) == Approx(vcg.payments.at(j)).epsilon(1e-9));
  }
}
