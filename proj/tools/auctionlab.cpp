#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "auctionlab/generator.hpp"
#include "auctionlab/market_io.hpp"
#include "auctionlab/report.hpp"

namespace {

using namespace auctionlab;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBound = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("AUCTION_LAB_SEED")) return std::stoull(env);
  return 0;
}

Market resolve_market(const std::string& spec) {
  if (spec == "fig1") return fig1();
  return load_market_file(spec);
}

ReportFormat parse_format(const std::string& name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "structured") return ReportFormat::Structured;
  throw ParseError("unknown format: " + name);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + out_path);
  out << text;
}

std::pair<int, int> parse_int_range(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) return {std::stoi(s), std::stoi(s)};
  return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

std::pair<double, double> parse_real_range(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) return {0.0, std::stod(s)};
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

int cmd_run(const std::string& market_spec, const std::string& mechanism,
            const std::string& deviations_path, const std::string& format_name,
            const std::string& out_path) {
  const Market m = resolve_market(market_spec);
  ReportProfile profile = truthful_profile(m);
  if (!deviations_path.empty()) {
    std::ifstream in(deviations_path);
    if (!in) throw ParseError("cannot open " + deviations_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    profile = apply_profile_overrides(m, buf.str());
  }

  std::vector<Mechanism> mechs;
  if (mechanism == "all") {
    mechs = {Mechanism::Vcg, Mechanism::Cna, Mechanism::VcgWi};
  } else if (auto mech = mechanism_from_name(mechanism)) {
    mechs = {*mech};
  } else {
    throw ParseError("unknown mechanism: " + mechanism);
  }

  const ReportFormat format = parse_format(format_name);
  std::vector<MechanismOutcome> outcomes;
  std::vector<RunReport> reports;
  for (auto mech : mechs) {
    outcomes.push_back(run_mechanism(m, profile, mech));
    reports.push_back(make_run_report(m, profile, outcomes.back()));
  }
  std::string text = render_run_reports(reports, format);
  if (mechs.size() > 1 && format == ReportFormat::Table)
    text += "\n" + render_summary(outcome_summary(m, outcomes), format);
  emit(text, out_path);
  return kExitOk;
}

int cmd_verify(const std::string& market_spec, const std::string& gen_spec,
               const std::string& suite, const std::string& mechanism,
               std::uint64_t seed, int trials, int max_degree, int bound,
               const std::string& format_name, const std::string& out_path) {
  std::vector<Market> corpus;
  if (!gen_spec.empty()) {
    GeneratorConfig cfg = parse_generator_spec(gen_spec);
    for (int t = 0; t < trials; ++t) {
      cfg.seed = seed + static_cast<std::uint64_t>(t);
      corpus.push_back(generate(cfg));
    }
  } else {
    corpus.push_back(resolve_market(market_spec));
  }

  std::vector<Mechanism> mechs{Mechanism::Vcg, Mechanism::Cna};
  if (!mechanism.empty()) {
    auto mech = mechanism_from_name(mechanism);
    if (!mech) throw ParseError("unknown mechanism: " + mechanism);
    mechs = {*mech};
  }

  auto wants = [&](const std::string& name) {
    return suite == "all" || suite == name;
  };

  std::vector<VerificationReport> reports;
  for (const auto& m : corpus) {
    const auto truthful = truthful_profile(m);
    const DeviationSpace d = DeviationSpace::build(m, max_degree);
    if (wants("ic"))
      for (auto mech : mechs) reports.push_back(check_ic(m, d, mech));
    if (wants("ir"))
      for (auto mech : mechs) reports.push_back(check_ir(m, d, mech));
    if (wants("monotone")) reports.push_back(check_value_monotonicity(m, d));
    if (wants("characterization"))
      for (auto mech : mechs)
        reports.push_back(check_payment_characterization(m, d, mech));
    if (wants("nondegenerate"))
      for (auto mech : mechs) reports.push_back(check_non_degenerate(m, mech));
    if (wants("revenue")) reports.push_back(check_revenue_chain(m, truthful));
    if (wants("lemma1")) reports.push_back(check_lemma1(m, truthful));
    if (wants("oracle")) {
      VerificationReport rep{"oracle-equivalence"};
      rep.trials = 1;
      const double engine =
          social_welfare(efficient_allocation(m, truthful), truthful);
      const double brute =
          social_welfare(brute_force_allocation(m, truthful, bound), truthful);
      if (std::abs(engine - brute) > kTol) {
        rep.status = CheckStatus::Fail;
        rep.counterexample =
            Counterexample{"", truthful, brute, engine,
                           "engine and brute-force welfare disagree"};
      }
      reports.push_back(std::move(rep));
    }
  }

  emit(render_verification(reports, parse_format(format_name)), out_path);
  bool failed = false;
  for (const auto& r : reports) {
    if (r.status == CheckStatus::Fail) failed = true;
    if (r.status == CheckStatus::Inconclusive)
      std::cerr << "warning: " << r.property
                << " inconclusive (see report notes)\n";
  }
  return failed ? kExitPropertyFail : kExitOk;
}

int cmd_gen(const GeneratorConfig& cfg, const std::string& out_path) {
  emit(serialize_market(generate(cfg)), out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion auctions over intermediary networks"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run mechanisms on a market");
  std::string run_market, run_mechanism = "all", run_deviations;
  std::string run_format = "table", run_out;
  run->add_option("--market", run_market, "market file path, or 'fig1'")->required();
  run->add_option("--mechanism", run_mechanism, "vcg|cna|vcg-wi|all");
  run->add_option("--deviations", run_deviations, "profile override file");
  run->add_option("--format", run_format, "table|csv|structured");
  run->add_option("--out", run_out, "output path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  std::string ver_market, ver_gen, ver_suite = "all", ver_mechanism;
  std::string ver_format = "table", ver_out;
  std::uint64_t ver_seed = default_seed();
  int ver_trials = 1, ver_max_degree = 8, ver_bound = 12;
  verify->add_option("--market", ver_market, "market file path, or 'fig1'");
  verify->add_option("--gen", ver_gen, "generator spec, e.g. \"tree,seed=7,n=5\"");
  verify->add_option("--suite", ver_suite,
                     "ic|ir|monotone|characterization|nondegenerate|revenue|lemma1|oracle|all");
  verify->add_option("--mechanism", ver_mechanism,
                     "restrict to one mechanism (default: vcg and cna)");
  verify->add_option("--seed", ver_seed, "base seed for generated corpora");
  verify->add_option("--trials", ver_trials, "generated instances per suite");
  verify->add_option("--max-degree", ver_max_degree,
                     "subset enumeration cutoff per intermediary");
  verify->add_option("--bound", ver_bound, "brute-force valid-buyer bound");
  verify->add_option("--format", ver_format, "table|csv|structured");
  verify->add_option("--out", ver_out, "output path (default stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random market");
  GeneratorConfig cfg;
  cfg.seed = default_seed();
  std::string gen_topology = "tree", gen_n = "2,5", gen_buyers = "1,3";
  std::string gen_direct = "1,4", gen_values = "0,30", gen_costs = "0,2";
  std::string gen_out;
  gen->add_option("--seed", cfg.seed, "generator seed");
  gen->add_option("--topology", gen_topology, "tree|general");
  gen->add_option("--extra-edge-prob", cfg.extra_edge_probability,
                  "extra intermediary edge probability (general topology)");
  gen->add_option("--n-intermediaries", gen_n, "range lo,hi");
  gen->add_option("--buyers", gen_buyers, "buyers per intermediary, range lo,hi");
  gen->add_option("--direct", gen_direct, "direct buyers, range lo,hi");
  gen->add_option("--value-range", gen_values, "buyer value range lo,hi");
  gen->add_option("--cost-range", gen_costs, "edge cost range lo,hi");
  gen->add_option("-k,--items", cfg.k, "item count");
  gen->add_option("--out", gen_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed())
      return cmd_run(run_market, run_mechanism, run_deviations, run_format,
                     run_out);
    if (verify->parsed()) {
      if (ver_market.empty() == ver_gen.empty())
        throw ParseError("verify needs exactly one of --market / --gen");
      return cmd_verify(ver_market, ver_gen, ver_suite, ver_mechanism, ver_seed,
                        ver_trials, ver_max_degree, ver_bound, ver_format,
                        ver_out);
    }
    auto [nlo, nhi] = parse_int_range(gen_n);
    auto [blo, bhi] = parse_int_range(gen_buyers);
    auto [dlo, dhi] = parse_int_range(gen_direct);
    auto [vlo, vhi] = parse_real_range(gen_values);
    auto [clo, chi] = parse_real_range(gen_costs);
    cfg.n_intermediaries = {nlo, nhi};
    cfg.buyers_per_intermediary = {blo, bhi};
    cfg.direct_buyers = {dlo, dhi};
    cfg.value_range = {vlo, vhi};
    cfg.cost_range = {clo, chi};
    cfg.topology = gen_topology == "general" ? Topology::General : Topology::Tree;
    if (gen_topology != "tree" && gen_topology != "general")
      throw ParseError("unknown topology: " + gen_topology);
    return cmd_gen(cfg, gen_out);
  } catch (const BoundExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
