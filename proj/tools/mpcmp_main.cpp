// Command-line driver: runs the comparison protocols over the in-memory
// or TCP loopback transport, replays transcripts, and runs the audits.
// Output is one machine-parsable record on stdout; --human adds a
// readable summary.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpcmp/audit.hpp"
#include "mpcmp/protocols.hpp"
#include "mpcmp/runtime.hpp"

namespace {

using namespace mpcmp;

struct CommonOptions {
  int n = 3;
  int t = 1;
  std::uint64_t q = field::kMersenne61;
  int bits = 8;
  std::string transport = "mem";
  int port = 18400;
  std::string transcript_path;
  std::string config_path;
  std::string seed_str;
  bool human = false;
};

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      if (i > start) out.push_back(std::stoull(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> parse_groups(const std::string& s) {
  std::vector<std::vector<std::uint64_t>> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ';') {
      if (i > start) out.push_back(parse_u64_list(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

// Config files use the same key=value record style as transcripts.
void apply_config_file(CommonOptions& opts) {
  std::ifstream in(opts.config_path);
  if (!in) throw std::invalid_argument("cannot open config file '" + opts.config_path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("bad config entry '" + token + "'");
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      if (key == "n") opts.n = std::stoi(value);
      else if (key == "t") opts.t = std::stoi(value);
      else if (key == "q") opts.q = std::stoull(value);
      else if (key == "bits" || key == "l") opts.bits = std::stoi(value);
      else if (key == "seed") opts.seed_str = value;
      else if (key == "transport") opts.transport = value;
      else if (key == "port") opts.port = std::stoi(value);
      else throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

std::uint64_t resolve_seed(const CommonOptions& opts) {
  if (!opts.seed_str.empty()) return std::stoull(opts.seed_str);
  if (const char* env = std::getenv("MPCMP_SEED"); env && *env) return std::stoull(env);
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void validate_inputs_range(const std::vector<std::uint64_t>& inputs, int bits) {
  for (auto v : inputs) {
    if (bits >= 64 || (v >> bits) != 0)
      throw std::invalid_argument("input " + std::to_string(v) + " out of range: must be < 2^" +
                                  std::to_string(bits));
  }
}

int run_protocol(const CommonOptions& opts_in, runtime::RunSpec spec) {
  CommonOptions opts = opts_in;
  if (!opts.config_path.empty()) apply_config_file(opts);
  const std::uint64_t seed = resolve_seed(opts);

  std::vector<std::uint64_t> all_inputs = spec.inputs;
  for (const auto& g : spec.groups) all_inputs.insert(all_inputs.end(), g.begin(), g.end());
  validate_inputs_range(all_inputs, opts.bits);

  auto cfg = sharing::make_config(opts.n, opts.t, opts.q, opts.bits, seed);

  std::unique_ptr<runtime::Transport> transport;
  if (opts.transport == "mem") {
    transport = std::make_unique<runtime::InMemoryTransport>(opts.n);
  } else if (opts.transport == "tcp") {
    transport = std::make_unique<runtime::TcpTransport>(opts.n, opts.port);
  } else {
    throw std::invalid_argument("unknown transport '" + opts.transport + "' (use mem or tcp)");
  }

  auto result = runtime::run_session(spec, cfg, *transport);

  if (!opts.transcript_path.empty())
    runtime::export_transcript(result.transcript, opts.transcript_path);

  const auto& t = result.transcript;
  // Every party ends with the same record except outliers, where only the
  // server learns the distances.
  std::size_t reporter = 0;
  if (spec.protocol == "outliers")
    reporter = static_cast<std::size_t>((spec.server == 0 ? opts.n : spec.server) - 1);
  std::cout << "protocol=" << spec.protocol << " " << result.party_outputs[reporter]
            << " invocations=" << t.counter_total
            << " rounds=" << (t.messages.empty() ? 0 : t.messages.back().round)
            << " messages=" << t.messages.size() << " seed=" << seed << "\n";
  if (opts.human) {
    std::cout << "# " << spec.protocol << " over " << opts.n << " parties (threshold " << opts.t
              << "), field q=" << opts.q << ", " << opts.bits << "-bit inputs, " << opts.transport
              << " transport\n";
    for (std::size_t p = 0; p < result.party_outputs.size(); ++p)
      std::cout << "# party " << (p + 1) << ": " << result.party_outputs[p] << "\n";
    if (!opts.transcript_path.empty())
      std::cout << "# transcript written to " << opts.transcript_path << "\n";
  }
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_bits = true) {
  cmd->add_option("--n", opts.n, "party count");
  cmd->add_option("--t", opts.t, "collusion threshold");
  cmd->add_option("--q", opts.q, "prime field modulus");
  if (with_bits) cmd->add_option("--bits", opts.bits, "input bit length L");
  cmd->add_option("--transport", opts.transport, "mem or tcp");
  cmd->add_option("--port", opts.port, "tcp base port (party i listens on port+i)");
  cmd->add_option("--transcript", opts.transcript_path, "write a replayable transcript here");
  cmd->add_option("--config", opts.config_path, "key=value config file");
  cmd->add_option("--seed", opts.seed_str, "seed (default: MPCMP_SEED or OS entropy)");
  cmd->add_flag("--human", opts.human, "append a readable summary");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unconditionally secure multiparty comparison over threshold shares"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string inputs_str, groups_str;
  int rank_t = 0;
  int server = 0;
  bool tie_safe = false;

  auto add_inputs = [&](CLI::App* cmd) {
    cmd->add_option("--inputs", inputs_str, "comma-separated private inputs")->required();
  };

  auto* cmd_compare = app.add_subcommand("compare", "compare two secrets; reveals only the verdict");
  add_inputs(cmd_compare);
  add_common(cmd_compare, opts);

  auto* cmd_sci = app.add_subcommand("sci", "shared comparison indicator bit");
  add_inputs(cmd_sci);
  add_common(cmd_sci, opts);

  auto* cmd_max = app.add_subcommand("max", "maximum of all inputs");
  add_inputs(cmd_max);
  add_common(cmd_max, opts);

  auto* cmd_min = app.add_subcommand("min", "minimum of all inputs");
  add_inputs(cmd_min);
  add_common(cmd_min, opts);

  auto* cmd_median = app.add_subcommand("median", "median of all inputs");
  add_inputs(cmd_median);
  cmd_median->add_flag("--tie-safe", tie_safe, "order-preserving preprocessing for ties");
  add_common(cmd_median, opts);

  auto* cmd_rank = app.add_subcommand("rank", "element with a given number of greater elements");
  add_inputs(cmd_rank);
  cmd_rank->add_option("--rank-t", rank_t, "target rank (0 = max)")->required();
  cmd_rank->add_flag("--tie-safe", tie_safe, "order-preserving preprocessing for ties");
  add_common(cmd_rank, opts);

  auto* cmd_auction = app.add_subcommand("auction", "sealed-bid maximum with the winner's index");
  add_inputs(cmd_auction);
  add_common(cmd_auction, opts);

  auto* cmd_minimax = app.add_subcommand("minimax", "max over groups of the within-group min");
  cmd_minimax->add_option("--groups", groups_str, "inputs as \"a,b;c,d\"")->required();
  add_common(cmd_minimax, opts);

  auto* cmd_outliers =
      app.add_subcommand("outliers", "squared distances from the median, revealed to one server");
  add_inputs(cmd_outliers);
  cmd_outliers->add_option("--server", server, "receiving party (default: last party)");
  add_common(cmd_outliers, opts);

  auto* cmd_replay = app.add_subcommand("replay", "re-execute a transcript and diff it");
  std::string replay_path;
  cmd_replay->add_option("--transcript", replay_path, "transcript file")->required();

  auto* cmd_audit = app.add_subcommand("audit", "privacy and complexity audits");
  cmd_audit->require_subcommand(1);

  auto* cmd_shares = cmd_audit->add_subcommand("shares", "exact secrecy by enumeration");
  audit::ShareSecrecyParams share_params;
  cmd_shares->add_option("--q", share_params.q, "prime modulus (<= 17)");
  cmd_shares->add_option("--n", share_params.n, "party count (<= 5)");
  cmd_shares->add_option("--t", share_params.t, "threshold (<= 2)");

  auto* cmd_views = cmd_audit->add_subcommand("views", "statistical view indistinguishability");
  audit::ViewAuditParams view_params;
  std::string pair_a = "5,2", pair_b = "6,1", coalition = "3";
  cmd_views->add_option("--protocol", view_params.protocol, "compare or sci");
  cmd_views->add_option("--pair-a", pair_a, "first input pair");
  cmd_views->add_option("--pair-b", pair_b, "second input pair");
  cmd_views->add_option("--coalition", coalition, "comma-separated coalition parties");
  cmd_views->add_option("--samples", view_params.samples, "Monte Carlo samples");
  cmd_views->add_option("--q", view_params.q, "prime modulus (<= 17)");
  cmd_views->add_option("--bits", view_params.l, "input bit length (<= 3)");
  cmd_views->add_option("--seed", view_params.seed, "sampling seed");
  cmd_views->add_option("--threshold", view_params.threshold, "pass threshold on the distance");

  auto* cmd_complexity = cmd_audit->add_subcommand("complexity", "invocation counts vs bounds");
  audit::ComplexityParams cx_params;
  cmd_complexity->add_option("--q", cx_params.q, "default field modulus");
  cmd_complexity->add_option("--lmin", cx_params.l_min, "smallest input bit length");
  cmd_complexity->add_option("--lmax", cx_params.l_max, "largest input bit length");
  cmd_complexity->add_option("--kmin", cx_params.k_min, "smallest tournament size");
  cmd_complexity->add_option("--kmax", cx_params.k_max, "largest tournament size");
  std::string audit_out;
  for (auto* c : {cmd_shares, cmd_views, cmd_complexity})
    c->add_option("--out", audit_out, "also write records to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    auto write_records = [&audit_out](const std::vector<std::string>& records) {
      if (audit_out.empty()) return;
      std::ofstream out(audit_out);
      for (const auto& r : records) out << r << '\n';
    };

    if (cmd_replay->parsed()) {
      auto report = runtime::replay_transcript(replay_path);
      std::cout << "replay=" << (report.identical ? "identical" : "divergent");
      if (!report.identical) std::cout << " line=" << report.first_divergent_line;
      std::cout << "\n";
      if (!report.identical) std::cerr << report.detail << "\n";
      return report.identical ? 0 : 1;
    }
    if (cmd_shares->parsed()) {
      auto report = audit::share_secrecy_audit(share_params);
      std::cout << report.records().front() << "\n" << report.table();
      write_records(report.records());
      return report.pass ? 0 : 1;
    }
    if (cmd_views->parsed()) {
      auto pa = parse_u64_list(pair_a);
      auto pb = parse_u64_list(pair_b);
      if (pa.size() != 2 || pb.size() != 2)
        throw std::invalid_argument("input pairs must have exactly two values");
      view_params.inputs_a = {pa[0], pa[1]};
      view_params.inputs_b = {pb[0], pb[1]};
      view_params.coalition.clear();
      for (auto v : parse_u64_list(coalition)) view_params.coalition.push_back(static_cast<int>(v));
      auto report = audit::view_indistinguishability_audit(view_params);
      std::cout << report.records().front() << "\n" << report.table();
      write_records(report.records());
      return report.pass ? 0 : 1;
    }
    if (cmd_complexity->parsed()) {
      auto report = audit::complexity_report(cx_params);
      std::cout << report.table();
      write_records(report.records());
      return report.pass ? 0 : 1;
    }

    runtime::RunSpec spec;
    if (cmd_compare->parsed()) spec.protocol = "compare";
    else if (cmd_sci->parsed()) spec.protocol = "sci";
    else if (cmd_max->parsed()) spec.protocol = "max";
    else if (cmd_min->parsed()) spec.protocol = "min";
    else if (cmd_median->parsed()) spec.protocol = "median";
    else if (cmd_rank->parsed()) spec.protocol = "rank";
    else if (cmd_auction->parsed()) spec.protocol = "auction";
    else if (cmd_minimax->parsed()) spec.protocol = "minimax";
    else if (cmd_outliers->parsed()) spec.protocol = "outliers";

    spec.inputs = parse_u64_list(inputs_str);
    spec.groups = parse_groups(groups_str);
    spec.rank_t = rank_t;
    spec.server = server;
    spec.tie_safe = tie_safe;
    if (spec.protocol == "compare" || spec.protocol == "sci") {
      if (spec.inputs.size() != 2)
        throw std::invalid_argument(spec.protocol + " takes exactly two inputs");
    }
    return run_protocol(opts, spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
