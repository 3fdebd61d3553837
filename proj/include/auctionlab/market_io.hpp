#pragma once

#include "auctionlab/market.hpp"

namespace auctionlab {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Canonical text form: JSON with fields k, seller_neighbors, agents, edges,
// everything sorted by id. serialize(parse(serialize(m))) is byte-identical.
std::string serialize_market(const Market& m);
Market parse_market(const std::string& text);
Market load_market_file(const std::string& path);

// FNV-1a hash of the canonical serialization, hex.
std::string market_digest(const Market& m);

// The worked-example market: 5 intermediaries, 12 buyers, K = 3.
Market fig1();

// Profile overrides for deviation runs: {"bids": {...}, "declared": {...}},
// applied on top of the truthful profile.
ReportProfile apply_profile_overrides(const Market& m, const std::string& text);

}  // namespace auctionlab
