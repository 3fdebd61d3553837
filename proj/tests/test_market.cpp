#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "auctionlab/generator.hpp"
#include "auctionlab/market_io.hpp"

using namespace auctionlab;

namespace {

Market single_buyer_market() {
  return build_market({{"j", AgentKind::Buyer, {}, 5.0}}, {"j"}, {}, 1);
}

}  // namespace

TEST_CASE("build_market validates the fixture") {
  const Market m = fig1();
  int buyers = 0, intermediaries = 0;
  for (const auto& [id, rec] : m.agents)
    (rec.kind == AgentKind::Buyer ? buyers : intermediaries)++;
  CHECK(intermediaries == 5);
  CHECK(buyers == 12);
  CHECK(m.item_count == 3);
  CHECK(m.cost("s", "A") == 1.0);
  CHECK(m.cost("B", "E") == 0.0);  // defaulted edge
  CHECK(m.is_tree());
}

TEST_CASE("build_market minimal instance") {
  const Market m = single_buyer_market();
  CHECK(m.is_buyer("j"));
  CHECK(m.cost("s", "j") == 0.0);
}

TEST_CASE("build_market rejects invalid inputs") {
  std::vector<AgentRecord> base{{"i", AgentKind::Intermediary, {"j"}, 0.0},
                                {"j", AgentKind::Buyer, {}, 5.0}};
  CHECK_THROWS_AS(build_market(base, {"i"}, {}, 0), MarketError);
  CHECK_THROWS_AS(
      build_market({{"j", AgentKind::Buyer, {}, 5.0},
                    {"j", AgentKind::Buyer, {}, 2.0}},
                   {"j"}, {}, 1),
      MarketError);
  CHECK_THROWS_AS(
      build_market({{"i", AgentKind::Intermediary, {"missing"}, 0.0}}, {"i"},
                   {}, 1),
      MarketError);
  CHECK_THROWS_AS(build_market(base, {"i"}, {{make_edge("s", "i"), -1.0}}, 1),
                  MarketError);
  CHECK_THROWS_AS(build_market(base, {"i"}, {{make_edge("s", "j"), 1.0}}, 1),
                  MarketError);  // cost on a non-edge
  CHECK_THROWS_AS(build_market({{"j", AgentKind::Buyer, {}, -2.0}}, {"j"}, {}, 1),
                  MarketError);
}

TEST_CASE("truthful_profile reports true types") {
  const Market m = fig1();
  const auto p = truthful_profile(m);
  CHECK(p.bids.at("b1") == 13.0);
  CHECK(p.declared.at("B") == std::set<AgentId>{"b1", "b2", "C", "E"});

  const auto q = truthful_profile(single_buyer_market());
  CHECK(q.bids.at("j") == 5.0);
  CHECK(q.declared.empty());

  // Pure: later misreports do not affect a fresh truthful profile.
  auto r = restrict_neighbors(p, "B", {});
  CHECK(truthful_profile(m).declared.at("B").size() == 4);
  CHECK(r.declared.at("B").empty());
}

TEST_CASE("valid_agents follows declared diffusion") {
  const Market m = fig1();
  const auto truthful = truthful_profile(m);
  CHECK(valid_agents(m, truthful).size() == 17);

  auto drop_e = restrict_neighbors(truthful, "B", {"b1", "b2", "C"});
  const auto v1 = valid_agents(m, drop_e);
  CHECK(v1.size() == 14);
  CHECK(v1.count("E") == 0);
  CHECK(v1.count("e1") == 0);
  CHECK(v1.count("e2") == 0);

  auto b_empty = restrict_neighbors(truthful, "B", {});
  const auto v2 = valid_agents(m, b_empty);
  for (const auto& id : {"b1", "b2", "C", "c1", "E", "e1", "e2"})
    CHECK(v2.count(id) == 0);
  CHECK(v2.count("B") == 1);
}

TEST_CASE("remove_agent recomputes downstream validity") {
  const Market m = fig1();
  const auto truthful = truthful_profile(m);

  const auto no_b = valid_agents(m, remove_agent(m, truthful, "B"));
  for (const auto& id : {"B", "b1", "b2", "C", "c1", "E", "e1", "e2"})
    CHECK(no_b.count(id) == 0);
  CHECK(no_b.count("A") == 1);

  const auto no_c1 = valid_agents(m, remove_agent(m, truthful, "c1"));
  CHECK(no_c1.size() == 16);
  CHECK(no_c1.count("c1") == 0);

  const auto no_c = valid_agents(m, remove_agent(m, truthful, "C"));
  CHECK(no_c.count("c1") == 0);
  CHECK(no_c.size() == 15);

  CHECK_THROWS_AS(remove_agent(m, truthful, kSellerId), MarketError);
}

TEST_CASE("restrict_neighbors") {
  const Market m = fig1();
  const auto truthful = truthful_profile(m);

  const auto b_only_b2 = restrict_neighbors(truthful, "B", {"b2"});
  const auto v = valid_agents(m, b_only_b2);
  for (const auto& id : {"b1", "C", "c1", "E", "e1", "e2"}) CHECK(v.count(id) == 0);
  CHECK(v.count("b2") == 1);

  CHECK(restrict_neighbors(truthful, "B", truthful.declared.at("B")).declared ==
        truthful.declared);

  const auto a_empty = valid_agents(m, restrict_neighbors(truthful, "A", {}));
  for (const auto& id : {"D", "d1", "d2", "a1"}) CHECK(a_empty.count(id) == 0);

  CHECK_THROWS_AS(restrict_neighbors(truthful, "B", {"a1"}), MarketError);
}

TEST_CASE("validity properties on generated markets") {
  GeneratorConfig cfg;
  cfg.buyers_per_intermediary = {1, 2};
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    cfg.seed = seed;
    const Market m = generate(cfg);
    const auto truthful = truthful_profile(m);
    const auto full = valid_agents(m, truthful);

    // Seller neighbors are always valid.
    for (const auto& n : m.seller_neighbors) CHECK(full.count(n) == 1);

    std::mt19937_64 rng(seed);
    for (const auto& [i, declared] : truthful.declared) {
      // Monotonicity: shrinking a declaration never adds valid agents.
      std::set<AgentId> subset;
      for (const auto& n : declared)
        if (rng() % 2) subset.insert(n);
      const auto shrunk = valid_agents(m, restrict_neighbors(truthful, i, subset));
      for (const auto& id : shrunk) CHECK(full.count(id) == 1);
    }
    for (const auto& [id, rec] : m.agents) {
      const auto without = valid_agents(m, remove_agent(m, truthful, id));
      CHECK(without.count(id) == 0);
      for (const auto& v : without) CHECK(full.count(v) == 1);
    }
  }
}
