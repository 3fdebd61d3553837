#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "auctionlab/generator.hpp"
#include "auctionlab/market_io.hpp"

using namespace auctionlab;

TEST_CASE("same seed, same market") {
  GeneratorConfig cfg;
  cfg.seed = 42;
  cfg.n_intermediaries = {3, 3};
  CHECK(serialize_market(generate(cfg)) == serialize_market(generate(cfg)));

  cfg.seed = 43;
  CHECK(serialize_market(generate(GeneratorConfig{42})) !=
        serialize_market(generate(cfg)));
}

TEST_CASE("tree topology yields trees") {
  GeneratorConfig cfg;
  cfg.topology = Topology::General;
  cfg.extra_edge_probability = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    cfg.seed = seed;
    CHECK(generate(cfg).is_tree());
  }
}

TEST_CASE("general topology round-trips through the validator") {
  GeneratorConfig cfg;
  cfg.topology = Topology::General;
  cfg.extra_edge_probability = 0.5;
  int non_tree = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    cfg.seed = seed;
    const Market m = generate(cfg);  // build_market validates internally
    const Market back = parse_market(serialize_market(m));
    CHECK(serialize_market(back) == serialize_market(m));
    if (!m.is_tree()) ++non_tree;
  }
  CHECK(non_tree > 0);
}

TEST_CASE("seed sweep stays valid and connected") {
  GeneratorConfig cfg;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    cfg.seed = seed;
    const Market m = generate(cfg);
    // One path from s to every agent in tree markets.
    CHECK(m.is_tree());
    CHECK(valid_agents(m, truthful_profile(m)).size() == m.agents.size());
  }
}

TEST_CASE("invalid configurations are rejected") {
  GeneratorConfig cfg;
  cfg.cost_range = {-1.0, 2.0};
  CHECK_THROWS_AS(generate(cfg), MarketError);
  cfg = GeneratorConfig{};
  cfg.n_intermediaries = {5, 2};
  CHECK_THROWS_AS(generate(cfg), MarketError);
  cfg = GeneratorConfig{};
  cfg.k = 0;
  CHECK_THROWS_AS(generate(cfg), MarketError);
}

TEST_CASE("generator spec strings") {
  const auto cfg = parse_generator_spec("tree,seed=7,n=5");
  CHECK(cfg.topology == Topology::Tree);
  CHECK(cfg.seed == 7);
  CHECK(cfg.n_intermediaries.lo == 5);
  CHECK(cfg.n_intermediaries.hi == 5);

  const auto gen = parse_generator_spec("general,p=0.3,k=2");
  CHECK(gen.topology == Topology::General);
  CHECK(gen.extra_edge_probability == 0.3);
  CHECK(gen.k == 2);

  CHECK_THROWS_AS(parse_generator_spec("ring,seed=1"), MarketError);
}
