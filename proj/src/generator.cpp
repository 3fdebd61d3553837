#include "auctionlab/generator.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace auctionlab {

namespace {

// Engine-output-only draws keep generated markets identical across standard
// library implementations.
int draw_int(std::mt19937_64& rng, int lo, int hi) {
  if (lo > hi) throw MarketError("empty integer range");
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double draw_real_2dp(std::mt19937_64& rng, const RealRange& r) {
  if (r.lo > r.hi) throw MarketError("empty real range");
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::round((r.lo + u * (r.hi - r.lo)) * 100.0) / 100.0;
}

bool draw_bernoulli(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

AgentId pad_id(const char* prefix, int n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%s%02d", prefix, n);
  return buf;
}

}  // namespace

Market generate(const GeneratorConfig& cfg) {
  if (cfg.cost_range.lo < 0.0) throw MarketError("negative cost range");
  if (cfg.value_range.lo < 0.0) throw MarketError("negative value range");
  if (cfg.k < 1) throw MarketError("k must be >= 1");
  if (cfg.extra_edge_probability < 0.0 || cfg.extra_edge_probability > 1.0)
    throw MarketError("extra edge probability outside [0,1]");

  std::mt19937_64 rng(cfg.seed);
  const int n_int = draw_int(rng, cfg.n_intermediaries.lo, cfg.n_intermediaries.hi);

  std::vector<AgentRecord> records;
  std::set<AgentId> seller_neighbors;
  std::map<EdgeKey, double> costs;
  std::vector<AgentId> intermediaries;
  int buyer_seq = 0;

  for (int i = 0; i < n_int; ++i) {
    AgentId id = pad_id("i", i + 1);
    records.push_back({id, AgentKind::Intermediary, {}, 0.0});
    // Attach to the seller or a uniformly chosen earlier intermediary.
    int parent = draw_int(rng, 0, i);
    double w = draw_real_2dp(rng, cfg.cost_range);
    if (parent == 0) {
      seller_neighbors.insert(id);
      costs[make_edge(kSellerId, id)] = w;
    } else {
      records[parent - 1].true_neighbors.insert(id);
      costs[make_edge(intermediaries[parent - 1], id)] = w;
    }
    intermediaries.push_back(id);
  }

  for (int i = 0; i < n_int; ++i) {
    int n_buyers = draw_int(rng, cfg.buyers_per_intermediary.lo,
                            cfg.buyers_per_intermediary.hi);
    for (int b = 0; b < n_buyers; ++b) {
      AgentId id = pad_id("b", ++buyer_seq);
      records.push_back({id, AgentKind::Buyer, {}, draw_real_2dp(rng, cfg.value_range)});
      records[i].true_neighbors.insert(id);
      costs[make_edge(intermediaries[i], id)] = draw_real_2dp(rng, cfg.cost_range);
    }
  }

  int n_direct = draw_int(rng, cfg.direct_buyers.lo, cfg.direct_buyers.hi);
  for (int b = 0; b < n_direct; ++b) {
    AgentId id = pad_id("b", ++buyer_seq);
    records.push_back({id, AgentKind::Buyer, {}, draw_real_2dp(rng, cfg.value_range)});
    seller_neighbors.insert(id);
    // Seller-to-direct-buyer edges are free.
    costs[make_edge(kSellerId, id)] = 0.0;
  }

  if (cfg.topology == Topology::General) {
    for (int a = 0; a < n_int; ++a) {
      for (int b = a + 1; b < n_int; ++b) {
        EdgeKey e = make_edge(intermediaries[a], intermediaries[b]);
        if (costs.count(e) != 0) continue;
        if (!draw_bernoulli(rng, cfg.extra_edge_probability)) continue;
        records[a].true_neighbors.insert(intermediaries[b]);
        records[b].true_neighbors.insert(intermediaries[a]);
        costs[e] = draw_real_2dp(rng, cfg.cost_range);
      }
    }
  }

  if (records.empty()) throw MarketError("configuration generates no agents");
  return build_market(records, seller_neighbors, costs, cfg.k);
}

GeneratorConfig parse_generator_spec(const std::string& spec) {
  GeneratorConfig cfg;
  std::stringstream ss(spec);
  std::string token;
  bool first = true;
  while (std::getline(ss, token, ',')) {
    if (first && token.find('=') == std::string::npos) {
      if (token == "tree")
        cfg.topology = Topology::Tree;
      else if (token == "general")
        cfg.topology = Topology::General;
      else
        throw MarketError("unknown topology: " + token);
      first = false;
      continue;
    }
    first = false;
    auto eq = token.find('=');
    if (eq == std::string::npos) throw MarketError("bad generator token: " + token);
    std::string key = token.substr(0, eq);
    std::string val = token.substr(eq + 1);
    if (key == "seed")
      cfg.seed = std::stoull(val);
    else if (key == "n")
      cfg.n_intermediaries = {std::stoi(val), std::stoi(val)};
    else if (key == "buyers")
      cfg.buyers_per_intermediary = {std::stoi(val), std::stoi(val)};
    else if (key == "direct")
      cfg.direct_buyers = {std::stoi(val), std::stoi(val)};
    else if (key == "k")
      cfg.k = std::stoi(val);
    else if (key == "vmax")
      cfg.value_range.hi = std::stod(val);
    else if (key == "cmax")
      cfg.cost_range.hi = std::stod(val);
    else if (key == "p")
      cfg.extra_edge_probability = std::stod(val);
    else
      throw MarketError("unknown generator key: " + key);
  }
  return cfg;
}

}  // namespace auctionlab
