#include "auctionlab/report.hpp"

#include <iomanip>
#include <sstream>

#include "auctionlab/market_io.hpp"
#include "json.hpp"

namespace auctionlab {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // strip the sign off negative zero
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace

RunReport make_run_report(const Market& m, const ReportProfile& p,
                          const MechanismOutcome& outcome) {
  RunReport rep;
  rep.market_digest = market_digest(m);
  rep.mechanism = mechanism_name(outcome.mechanism);
  rep.welfare = outcome.welfare;
  rep.cost = outcome.cost;
  const auto valid = valid_agents(m, p);
  double paid = 0.0;
  for (const auto& [id, rec] : m.agents) {
    RunReport::AgentRow row;
    row.id = id;
    row.kind = rec.kind == AgentKind::Buyer ? "buyer" : "intermediary";
    row.valid = valid.count(id) != 0;
    row.winner = outcome.allocation.winners.count(id) != 0;
    row.payment = outcome.payments.count(id) ? outcome.payments.at(id) : 0.0;
    row.utility = outcome.utilities.count(id) ? outcome.utilities.at(id) : 0.0;
    paid += row.payment;
    rep.rows.push_back(std::move(row));
  }
  rep.revenue = paid - rep.cost;  // recomputed at serialization time
  return rep;
}

std::string render_run_reports(const std::vector<RunReport>& reports,
                               ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "market,mechanism,agent,kind,valid,winner,payment,utility,welfare,cost,revenue\n";
    for (const auto& r : reports)
      for (const auto& row : r.rows)
        os << r.market_digest << ',' << r.mechanism << ',' << row.id << ','
           << row.kind << ',' << row.valid << ',' << row.winner << ','
           << fmt(row.payment) << ',' << fmt(row.utility) << ','
           << fmt(r.welfare) << ',' << fmt(r.cost) << ',' << fmt(r.revenue)
           << '\n';
    return os.str();
  }
  if (format == ReportFormat::Structured) {
    json doc = json::array();
    for (const auto& r : reports) {
      json jr;
      jr["market"] = r.market_digest;
      jr["mechanism"] = r.mechanism;
      jr["welfare"] = r.welfare;
      jr["cost"] = r.cost;
      jr["revenue"] = r.revenue;
      jr["agents"] = json::array();
      for (const auto& row : r.rows)
        jr["agents"].push_back({{"id", row.id},
                                {"kind", row.kind},
                                {"valid", row.valid},
                                {"winner", row.winner},
                                {"payment", row.payment},
                                {"utility", row.utility}});
      doc.push_back(std::move(jr));
    }
    return doc.dump(2) + "\n";
  }
  for (const auto& r : reports) {
    os << "== " << r.mechanism << " (market " << r.market_digest << ")\n"
       << "   welfare " << fmt(r.welfare) << "  cost " << fmt(r.cost)
       << "  revenue " << fmt(r.revenue) << "\n";
    os << "   " << std::left << std::setw(6) << "agent" << std::setw(14)
       << "kind" << std::setw(7) << "valid" << std::setw(8) << "winner"
       << std::setw(12) << "payment" << "utility\n";
    for (const auto& row : r.rows)
      os << "   " << std::left << std::setw(6) << row.id << std::setw(14)
         << row.kind << std::setw(7) << (row.valid ? "yes" : "no")
         << std::setw(8) << (row.winner ? "yes" : "no") << std::setw(12)
         << fmt(row.payment) << fmt(row.utility) << "\n";
  }
  return os.str();
}

std::string render_summary(const std::vector<SummaryRow>& rows,
                           ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "mechanism,welfare,revenue,buyer_payments,intermediary_payments,cost\n";
    for (const auto& r : rows)
      os << r.mechanism << ',' << fmt(r.welfare) << ',' << fmt(r.revenue) << ','
         << fmt(r.buyer_payments) << ',' << fmt(r.intermediary_payments) << ','
         << fmt(r.cost) << '\n';
    return os.str();
  }
  if (format == ReportFormat::Structured) {
    json doc = json::array();
    for (const auto& r : rows)
      doc.push_back({{"mechanism", r.mechanism},
                     {"welfare", r.welfare},
                     {"revenue", r.revenue},
                     {"buyer_payments", r.buyer_payments},
                     {"intermediary_payments", r.intermediary_payments},
                     {"cost", r.cost}});
    return doc.dump(2) + "\n";
  }
  os << std::left << std::setw(14) << "mechanism" << std::setw(12) << "welfare"
     << std::setw(12) << "revenue" << std::setw(12) << "buyers" << std::setw(14)
     << "interm." << "cost\n";
  for (const auto& r : rows)
    os << std::left << std::setw(14) << r.mechanism << std::setw(12)
       << fmt(r.welfare) << std::setw(12) << fmt(r.revenue) << std::setw(12)
       << fmt(r.buyer_payments) << std::setw(14) << fmt(r.intermediary_payments)
       << fmt(r.cost) << "\n";
  return os.str();
}

std::string render_verification(const std::vector<VerificationReport>& reports,
                                ReportFormat format) {
  if (format == ReportFormat::Structured) {
    json doc = json::array();
    for (const auto& r : reports) {
      json jr;
      jr["property"] = r.property;
      jr["status"] = status_name(r.status);
      jr["trials"] = r.trials;
      if (r.counterexample) {
        const auto& ce = *r.counterexample;
        json jc;
        jc["agent"] = ce.agent;
        jc["description"] = ce.description;
        jc["truthful_utility"] = ce.truthful_utility;
        jc["deviating_utility"] = ce.deviating_utility;
        jc["bids"] = ce.profile.bids;
        json jd = json::object();
        for (const auto& [id, nbrs] : ce.profile.declared) jd[id] = nbrs;
        jc["declared"] = jd;
        jr["counterexample"] = std::move(jc);
      }
      jr["notes"] = r.notes;
      doc.push_back(std::move(jr));
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  if (format == ReportFormat::Csv)
    os << "property,status,trials,counterexample\n";
  for (const auto& r : reports) {
    const char sep = format == ReportFormat::Csv ? ',' : ' ';
    os << r.property << sep << status_name(r.status) << sep << r.trials;
    if (r.counterexample)
      os << sep << r.counterexample->agent << ": "
         << r.counterexample->description;
    os << '\n';
  }
  return os.str();
}

}  // namespace auctionlab
