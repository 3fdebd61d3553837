#pragma once

#include <cstdint>

#include "auctionlab/market.hpp"

namespace auctionlab {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
};

enum class Topology { Tree, General };

struct GeneratorConfig {
  std::uint64_t seed = 0;
  IntRange n_intermediaries{2, 5};
  IntRange buyers_per_intermediary{1, 3};
  IntRange direct_buyers{1, 4};
  RealRange value_range{0.0, 30.0};
  RealRange cost_range{0.0, 2.0};
  int k = 3;
  Topology topology = Topology::Tree;
  double extra_edge_probability = 0.0;
};

// Deterministic for a fixed seed. Tree topology attaches each intermediary to
// a uniformly chosen earlier node; general topology adds extra
// intermediary-intermediary edges with the configured probability. Values and
// costs are uniform draws rounded to 2 decimals.
Market generate(const GeneratorConfig& cfg);

// Spec strings of the form "tree,seed=7,n=5" (see the CLI).
GeneratorConfig parse_generator_spec(const std::string& spec);

}  // namespace auctionlab
