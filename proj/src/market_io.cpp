#include "auctionlab/market_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace auctionlab {

namespace {

using json = nlohmann::ordered_json;

// Orientation for the canonical edge list: "from" is the declaring endpoint.
std::pair<AgentId, AgentId> orient(const Market& m, const EdgeKey& e) {
  const auto& [a, b] = e;
  if (a == kSellerId) return {a, b};
  if (b == kSellerId) return {b, a};
  if (m.is_intermediary(a) && m.record(a).true_neighbors.count(b)) return {a, b};
  return {b, a};
}

}  // namespace

std::string serialize_market(const Market& m) {
  json doc;
  doc["k"] = m.item_count;
  doc["seller_neighbors"] = m.seller_neighbors;
  doc["agents"] = json::array();
  for (const auto& [id, rec] : m.agents) {
    json a;
    a["id"] = id;
    if (rec.kind == AgentKind::Intermediary) {
      a["kind"] = "intermediary";
      a["neighbors"] = rec.true_neighbors;
    } else {
      a["kind"] = "buyer";
      a["value"] = rec.true_value;
    }
    doc["agents"].push_back(a);
  }
  doc["edges"] = json::array();
  for (const auto& [e, w] : m.edge_cost) {
    auto [from, to] = orient(m, e);
    doc["edges"].push_back({{"from", from}, {"to", to}, {"w", w}});
  }
  return doc.dump(2) + "\n";
}

Market parse_market(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid market document: ") + e.what());
  }
  try {
    std::vector<AgentRecord> records;
    for (const auto& a : doc.at("agents")) {
      AgentRecord rec;
      rec.id = a.at("id").get<std::string>();
      const auto kind = a.at("kind").get<std::string>();
      if (kind == "intermediary") {
        rec.kind = AgentKind::Intermediary;
        if (a.contains("neighbors"))
          rec.true_neighbors = a.at("neighbors").get<std::set<AgentId>>();
      } else if (kind == "buyer") {
        rec.kind = AgentKind::Buyer;
        rec.true_value = a.at("value").get<double>();
      } else {
        throw ParseError("unknown agent kind: " + kind);
      }
      records.push_back(std::move(rec));
    }
    std::map<EdgeKey, double> costs;
    if (doc.contains("edges")) {
      for (const auto& e : doc.at("edges")) {
        EdgeKey key{e.at("from").get<std::string>(), e.at("to").get<std::string>()};
        if (!costs.emplace(make_edge(key.first, key.second), e.at("w").get<double>()).second)
          throw ParseError("duplicate edge (" + key.first + "," + key.second + ")");
      }
    }
    return build_market(records,
                        doc.at("seller_neighbors").get<std::set<AgentId>>(),
                        costs, doc.at("k").get<int>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid market document: ") + e.what());
  } catch (const MarketError& e) {
    throw ParseError(std::string("invalid market: ") + e.what());
  }
}

Market load_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_market(buf.str());
}

std::string market_digest(const Market& m) {
  const std::string text = serialize_market(m);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

Market fig1() {
  std::vector<AgentRecord> records;
  auto intermediary = [&](const AgentId& id, std::set<AgentId> nbrs) {
    records.push_back({id, AgentKind::Intermediary, std::move(nbrs), 0.0});
  };
  auto buyer = [&](const AgentId& id, double v) {
    records.push_back({id, AgentKind::Buyer, {}, v});
  };
  intermediary("A", {"D", "a1"});
  intermediary("B", {"b1", "b2", "C", "E"});
  intermediary("C", {"c1"});
  intermediary("D", {"d1", "d2"});
  intermediary("E", {"e1", "e2"});
  buyer("s1", 1);
  buyer("s2", 3);
  buyer("s3", 2);
  buyer("s4", 2);
  buyer("a1", 5);
  buyer("b1", 13);
  buyer("b2", 8);
  buyer("c1", 1);
  buyer("d1", 30);
  buyer("d2", 12);
  buyer("e1", 3);
  buyer("e2", 12);
  std::map<EdgeKey, double> costs{
      {make_edge(kSellerId, "A"), 1.0},
      {make_edge(kSellerId, "B"), 1.0},
      {make_edge("A", "D"), 1.0},
  };
  return build_market(records, {"A", "B", "s1", "s2", "s3", "s4"}, costs, 3);
}

ReportProfile apply_profile_overrides(const Market& m, const std::string& text) {
  ReportProfile p = truthful_profile(m);
  json doc;
  try {
    doc = json::parse(text);
    if (doc.contains("bids")) {
      for (const auto& [id, v] : doc.at("bids").items()) {
        if (!m.is_buyer(id)) throw ParseError(id + " is not a buyer");
        double bid = v.get<double>();
        if (bid < 0.0) throw ParseError("negative bid for " + id);
        p.bids[id] = bid;
      }
    }
    if (doc.contains("declared")) {
      for (const auto& [id, lst] : doc.at("declared").items()) {
        if (!m.is_intermediary(id)) throw ParseError(id + " is not an intermediary");
        auto subset = lst.get<std::set<AgentId>>();
        p = restrict_neighbors(p, id, subset);
      }
    }
    if (doc.contains("removed")) {
      for (const auto& id : doc.at("removed").get<std::vector<AgentId>>())
        p = remove_agent(m, p, id);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid profile overrides: ") + e.what());
  } catch (const MarketError& e) {
    throw ParseError(e.what());
  }
  return p;
}

}  // namespace auctionlab
