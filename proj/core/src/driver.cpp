// Protocol dispatch shared by the CLI and transcript replay: maps a
// RunSpec onto the protocol implementations, formats per-party output
// records, and re-executes transcripts for verification.

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mpcmp/protocols.hpp"
#include "mpcmp/runtime.hpp"

namespace mpcmp::runtime {

namespace {

std::string join_u64(const std::vector<std::uint64_t>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ',';
    os << xs[i];
  }
  return os.str();
}

std::string join_groups(const std::vector<std::vector<std::uint64_t>>& groups) {
  std::ostringstream os;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (g) os << ';';
    os << join_u64(groups[g]);
  }
  return os.str();
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      out.push_back(std::stoull(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> parse_groups(const std::string& s) {
  std::vector<std::vector<std::uint64_t>> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ';') {
      out.push_back(parse_u64_list(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::vector<protocols::OwnedInput> assign_owners(const std::vector<std::uint64_t>& inputs, int n,
                                                 int first_owner = 1) {
  std::vector<protocols::OwnedInput> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const int owner = static_cast<int>((first_owner - 1 + i) % static_cast<std::size_t>(n)) + 1;
    out.push_back(protocols::OwnedInput{owner, inputs[i]});
  }
  return out;
}

void require_inputs(const RunSpec& spec, std::size_t at_least) {
  if (spec.inputs.size() < at_least)
    throw std::invalid_argument("run: protocol '" + spec.protocol + "' needs at least " +
                                std::to_string(at_least) + " inputs");
}

}  // namespace

RunResult run_session(const RunSpec& spec, const sharing::ProtocolConfig& cfg, Transport& transport,
                      const RunOptions& options) {
  Session session(cfg, transport, options.session_id.empty() ? spec.protocol : options.session_id);
  session.record_messages = options.record_messages;
  session.message_observer = options.message_observer;
  session.hooks() = options.hooks;

  Transcript& t = session.transcript();
  t.protocol = spec.protocol;
  if (!spec.inputs.empty()) t.params["inputs"] = join_u64(spec.inputs);
  if (!spec.groups.empty()) t.params["groups"] = join_groups(spec.groups);
  if (spec.protocol == "rank") t.params["rank_t"] = std::to_string(spec.rank_t);
  if (spec.protocol == "outliers")
    t.params["server"] = std::to_string(spec.server == 0 ? cfg.n : spec.server);
  if (spec.tie_safe) t.params["tie_safe"] = "1";

  std::vector<std::string> outputs(cfg.n);
  auto broadcast_output = [&](const std::string& record) {
    for (auto& o : outputs) o = record;
  };

  if (spec.protocol == "compare") {
    require_inputs(spec, 2);
    if (cfg.n < 2) throw std::invalid_argument("run: compare needs two distinct holder parties");
    auto outcome = protocols::secure_compare(session, 1, spec.inputs[0], 2, spec.inputs[1]);
    broadcast_output("revealed=" + field::to_string(outcome.revealed) + " verdict=" +
                     (outcome.verdict == protocols::Verdict::kFirstGreater ? "first>second"
                                                                           : "not-greater"));
  } else if (spec.protocol == "sci") {
    require_inputs(spec, 2);
    if (cfg.n < 2) throw std::invalid_argument("run: sci needs two distinct holder parties");
    session.push_scope("sci");
    encoding::PartitionVector va =
        encoding::partition_vector(spec.inputs[0], cfg.l, cfg.field, cfg.mode);
    auto va_sh = session.deal_vector(1, va.entries, "share");
    encoding::ZeroCodedVector vb =
        encoding::zero_coded_vector(spec.inputs[1], cfg.l, cfg.field, cfg.mode, session.rng(2));
    auto vb_sh = session.deal_vector(2, vb.entries, "share");
    auto g = protocols::sci(session, va_sh, vb_sh);
    auto bit = session.reveal(g, "reveal");
    session.pop_scope();
    broadcast_output("indicator=" + field::to_string(bit));
  } else if (spec.protocol == "max" || spec.protocol == "auction") {
    require_inputs(spec, 1);
    const bool with_index = spec.protocol == "auction";
    auto result = protocols::max_circuit(session, assign_owners(spec.inputs, cfg.n), with_index);
    if (with_index) {
      broadcast_output("winner=" + std::to_string(*result.winner_index) +
                       " bid=" + std::to_string(result.value));
    } else {
      broadcast_output("max=" + std::to_string(result.value));
    }
  } else if (spec.protocol == "min") {
    require_inputs(spec, 1);
    auto result = protocols::min_circuit(session, assign_owners(spec.inputs, cfg.n));
    broadcast_output("min=" + std::to_string(result.value));
  } else if (spec.protocol == "median") {
    require_inputs(spec, 1);
    auto result =
        protocols::median_circuit(session, assign_owners(spec.inputs, cfg.n), spec.tie_safe);
    broadcast_output("median=" + std::to_string(result.value) +
                     " owner=" + std::to_string(result.owner));
  } else if (spec.protocol == "rank") {
    require_inputs(spec, 1);
    auto result = protocols::rank_circuit(session, assign_owners(spec.inputs, cfg.n), spec.rank_t,
                                          spec.tie_safe);
    broadcast_output("value=" + std::to_string(result.value) +
                     " owner=" + std::to_string(result.owner));
  } else if (spec.protocol == "minimax") {
    if (spec.groups.empty()) throw std::invalid_argument("run: minimax needs --groups");
    std::vector<std::vector<protocols::OwnedInput>> groups;
    int next_owner = 1;
    for (const auto& g : spec.groups) {
      groups.push_back(assign_owners(g, cfg.n, next_owner));
      next_owner = (next_owner - 1 + static_cast<int>(g.size())) % cfg.n + 1;
    }
    auto result = protocols::maximin(session, groups);
    broadcast_output("value=" + std::to_string(result.value) +
                     " group=" + std::to_string(result.group));
  } else if (spec.protocol == "outliers") {
    require_inputs(spec, 1);
    const int server = spec.server == 0 ? cfg.n : spec.server;
    auto distances =
        protocols::outlier_distances(session, assign_owners(spec.inputs, cfg.n), server);
    for (int p = 1; p <= cfg.n; ++p)
      outputs[p - 1] = (p == server) ? "distances=" + join_u64(distances) : "distances=";
  } else {
    throw std::invalid_argument("run: unknown protocol '" + spec.protocol + "'");
  }

  t.counters = session.counter().by_step;
  t.counter_total = session.counter().total;
  t.party_outputs = outputs;

  RunResult result;
  result.party_outputs = outputs;
  result.transcript = std::move(t);
  return result;
}

RunSpec spec_from_transcript(const Transcript& t) {
  RunSpec spec;
  spec.protocol = t.protocol;
  auto get = [&t](const std::string& key) -> std::string {
    auto it = t.params.find(key);
    return it == t.params.end() ? std::string() : it->second;
  };
  spec.inputs = parse_u64_list(get("inputs"));
  spec.groups = parse_groups(get("groups"));
  if (!get("rank_t").empty()) spec.rank_t = std::stoi(get("rank_t"));
  if (!get("server").empty()) spec.server = std::stoi(get("server"));
  spec.tie_safe = get("tie_safe") == "1";
  return spec;
}

ReplayReport replay_transcript(const std::string& path) {
  const Transcript recorded = import_transcript(path);
  const RunSpec spec = spec_from_transcript(recorded);

  InMemoryTransport transport(recorded.cfg.n);
  RunOptions options;
  options.session_id = recorded.session_id;
  const RunResult rerun = run_session(spec, recorded.cfg, transport, options);

  // Line numbers in the file: line 1 is the config record, messages follow.
  const int message_base = 1;
  ReplayReport report;
  const std::size_t common =
      std::min(recorded.messages.size(), rerun.transcript.messages.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (!(recorded.messages[i] == rerun.transcript.messages[i])) {
      report.first_divergent_line = message_base + static_cast<int>(i) + 1;
      report.detail = "message " + std::to_string(i + 1) + " diverges: transcript has '" +
                      format_message(recorded.messages[i]) + "', re-execution produced '" +
                      format_message(rerun.transcript.messages[i]) + "'";
      return report;
    }
  }
  if (recorded.messages.size() != rerun.transcript.messages.size()) {
    report.first_divergent_line = message_base + static_cast<int>(common) + 1;
    report.detail = "message count mismatch: transcript has " +
                    std::to_string(recorded.messages.size()) + ", re-execution produced " +
                    std::to_string(rerun.transcript.messages.size());
    return report;
  }
  if (recorded.reveals != rerun.transcript.reveals) {
    report.detail = "reveal events diverge";
    return report;
  }
  if (recorded.party_outputs != rerun.party_outputs) {
    report.detail = "party outputs diverge";
    return report;
  }
  report.identical = true;
  report.detail = "identical";
  return report;
}

}  // namespace mpcmp::runtime
