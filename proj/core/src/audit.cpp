#include "mpcmp/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mpcmp/protocols.hpp"
#include "mpcmp/runtime.hpp"

namespace mpcmp::audit {

using field::FieldElement;

namespace {

// All size-k subsets of {1..n}.
void subsets_of_size(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
}

double histogram_tv(const std::map<std::uint64_t, std::uint64_t>& a,
                    const std::map<std::uint64_t, std::uint64_t>& b, double total) {
  double sum = 0.0;
  for (const auto& [key, ca] : a) {
    auto it = b.find(key);
    const double cb = it == b.end() ? 0.0 : static_cast<double>(it->second);
    sum += std::abs(static_cast<double>(ca) - cb);
  }
  for (const auto& [key, cb] : b)
    if (a.find(key) == a.end()) sum += static_cast<double>(cb);
  return sum / (2.0 * total);
}

}  // namespace

ShareSecrecyReport share_secrecy_audit(const ShareSecrecyParams& params) {
  if (params.q > 17 || params.t > 2 || params.n > 5 || params.t < 1 ||
      params.n < 2 * params.t + 1)
    throw std::invalid_argument("audit: secrecy enumeration limited to q<=17, t<=2, n<=5");
  const auto cfg = sharing::make_config(params.n, params.t, params.q, 1, 0);
  const std::uint64_t q = params.q;

  // Enumerate every coefficient tuple for every secret and tabulate the
  // joint distribution each coalition sees. Coalition share tuples are
  // packed into a base-q key.
  std::uint64_t tuples = 1;
  for (int i = 0; i < params.t; ++i) tuples *= q;

  std::vector<std::vector<int>> coalitions;
  for (int k = 1; k <= params.t + 1; ++k) subsets_of_size(params.n, k, coalitions);

  ShareSecrecyReport report;
  report.params = params;
  report.max_small_coalition_tv = 0.0;
  report.min_large_coalition_tv = 1.0;

  for (const auto& coalition : coalitions) {
    const bool small = static_cast<int>(coalition.size()) <= params.t;
    // histogram[s][packed coalition tuple] = count
    std::vector<std::map<std::uint64_t, std::uint64_t>> hist(q);
    for (std::uint64_t secret = 0; secret < q; ++secret) {
      for (std::uint64_t tuple = 0; tuple < tuples; ++tuple) {
        std::vector<FieldElement> coeffs{FieldElement(secret, cfg.field)};
        std::uint64_t rest = tuple;
        for (int i = 0; i < params.t; ++i) {
          coeffs.push_back(FieldElement(rest % q, cfg.field));
          rest /= q;
        }
        const field::DensePolynomial p(coeffs);
        std::uint64_t key = 0;
        for (int member : coalition) key = key * q + p.eval(cfg.alphas[member - 1]).value();
        ++hist[secret][key];
      }
    }
    for (std::uint64_t s1 = 0; s1 < q; ++s1) {
      for (std::uint64_t s2 = s1 + 1; s2 < q; ++s2) {
        const double tv = histogram_tv(hist[s1], hist[s2], static_cast<double>(tuples));
        if (small) {
          report.max_small_coalition_tv = std::max(report.max_small_coalition_tv, tv);
        } else {
          report.min_large_coalition_tv = std::min(report.min_large_coalition_tv, tv);
        }
      }
    }
  }
  report.pass = report.max_small_coalition_tv == 0.0 && report.min_large_coalition_tv > 0.0;
  return report;
}

std::vector<std::string> ShareSecrecyReport::records() const {
  std::vector<std::string> out;
  std::ostringstream os;
  os << "secrecy q=" << params.q << " n=" << params.n << " t=" << params.t
     << " max_small_tv=" << max_small_coalition_tv
     << " min_large_tv=" << min_large_coalition_tv << " pass=" << (pass ? 1 : 0);
  out.push_back(os.str());
  return out;
}

std::string ShareSecrecyReport::table() const {
  std::ostringstream os;
  os << "share secrecy audit (q=" << params.q << ", n=" << params.n << ", t=" << params.t << ")\n"
     << "  coalitions of size <= " << params.t
     << ": max total-variation distance = " << max_small_coalition_tv << " (must be exactly 0)\n"
     << "  coalition of size " << params.t + 1
     << ": min total-variation distance = " << min_large_coalition_tv << " (must distinguish)\n"
     << "  " << (pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

ViewAuditReport view_indistinguishability_audit(const ViewAuditParams& params) {
  if (params.q > 17 || params.l > 3 || params.n != 3 || params.t != 1)
    throw std::invalid_argument("audit: view sampling limited to q<=17, l<=3, n=3, t=1");
  if (params.protocol != "compare" && params.protocol != "sci")
    throw std::invalid_argument("audit: view audit supports protocols 'compare' and 'sci'");
  for (int member : params.coalition)
    if (member < 1 || member > params.n)
      throw std::invalid_argument("audit: coalition member out of range");
  if (params.protocol == "compare") {
    // The audit is only defined for runs with equal public output.
    const bool ga = params.inputs_a.first > params.inputs_a.second;
    const bool gb = params.inputs_b.first > params.inputs_b.second;
    if (ga != gb)
      throw std::invalid_argument("audit: input pairs have different public outputs");
  }

  const auto cfg_base =
      sharing::make_config(params.n, params.t, params.q, params.l, 0, params.mode);

  // Per message group (round, step, sender), the empirical distribution of
  // what the coalition received, per scenario. Groups are per dealt
  // polynomial, which is where reconstructible structure would show up.
  std::map<std::string, std::array<std::map<std::string, std::uint64_t>, 2>> groups;

  for (int scenario = 0; scenario < 2; ++scenario) {
    const auto inputs = scenario == 0 ? params.inputs_a : params.inputs_b;
    for (int k = 0; k < params.samples; ++k) {
      auto cfg = cfg_base;
      cfg.seed = field::splitmix64(field::splitmix64(params.seed) ^
                                   (2ULL * static_cast<std::uint64_t>(k) + scenario));
      runtime::InMemoryTransport transport(cfg.n);
      runtime::Session session(cfg, transport, "audit");
      session.record_messages = false;

      // One group per dealt polynomial: vector dealings draw independent
      // randomness per coordinate, so each payload index is its own group.
      std::map<std::string, std::string> sample_view;
      session.message_observer = [&](const runtime::Message& m) {
        for (int member : params.coalition) {
          if (m.to != member) continue;
          for (std::size_t idx = 0; idx < m.payload.size(); ++idx) {
            std::string key = "r" + std::to_string(m.round) + "|" + m.step + "|f" +
                              std::to_string(m.from) + "|c" + std::to_string(idx);
            std::string& slot = sample_view[key];
            slot += "t" + std::to_string(m.to) + ":" + m.payload[idx] + ";";
          }
        }
      };

      if (params.protocol == "compare") {
        protocols::secure_compare(session, 1, inputs.first, 2, inputs.second);
      } else {
        session.push_scope("sci");
        encoding::PartitionVector va =
            encoding::partition_vector(inputs.first, cfg.l, cfg.field, cfg.mode);
        auto va_sh = session.deal_vector(1, va.entries, "share");
        encoding::ZeroCodedVector vb =
            encoding::zero_coded_vector(inputs.second, cfg.l, cfg.field, cfg.mode, session.rng(2));
        auto vb_sh = session.deal_vector(2, vb.entries, "share");
        protocols::sci(session, va_sh, vb_sh);
        session.pop_scope();
      }
      for (auto& [key, view] : sample_view) ++groups[key][scenario][view];
    }
  }

  ViewAuditReport report;
  report.params = params;
  report.group_count = static_cast<int>(groups.size());
  report.max_group_tv = 0.0;
  const double total = static_cast<double>(params.samples);
  for (const auto& [key, hists] : groups) {
    double sum = 0.0;
    double seen[2] = {0.0, 0.0};
    for (const auto& [view, c0] : hists[0]) {
      auto it = hists[1].find(view);
      const double c1 = it == hists[1].end() ? 0.0 : static_cast<double>(it->second);
      sum += std::abs(static_cast<double>(c0) - c1);
      seen[0] += static_cast<double>(c0);
      seen[1] += c1;
    }
    for (const auto& [view, c1] : hists[1]) {
      if (hists[0].find(view) == hists[0].end()) {
        sum += static_cast<double>(c1);
        seen[1] += static_cast<double>(c1);
      }
    }
    // Samples where the group never appeared (e.g. regeneration rounds).
    sum += std::abs((total - seen[0]) - (total - seen[1]));
    const double tv = sum / (2.0 * total);
    if (tv > report.max_group_tv) {
      report.max_group_tv = tv;
      report.worst_group = key;
    }
  }
  report.pass = report.max_group_tv < params.threshold;
  return report;
}

std::vector<std::string> ViewAuditReport::records() const {
  std::vector<std::string> out;
  std::ostringstream os;
  os << "views protocol=" << params.protocol << " q=" << params.q << " l=" << params.l
     << " coalition=";
  for (std::size_t i = 0; i < params.coalition.size(); ++i) {
    if (i) os << ',';
    os << params.coalition[i];
  }
  os << " samples=" << params.samples << " max_tv=" << max_group_tv << " groups=" << group_count
     << " pass=" << (pass ? 1 : 0);
  out.push_back(os.str());
  return out;
}

std::string ViewAuditReport::table() const {
  std::ostringstream os;
  os << "view indistinguishability audit (" << params.protocol << ", q=" << params.q
     << ", l=" << params.l << ", coalition size " << params.coalition.size() << ")\n"
     << "  inputs (" << params.inputs_a.first << "," << params.inputs_a.second << ") vs ("
     << params.inputs_b.first << "," << params.inputs_b.second << "), " << params.samples
     << " samples\n"
     << "  max per-group total-variation distance = " << max_group_tv << " over " << group_count
     << " message groups (threshold " << params.threshold << ")\n"
     << "  worst group: " << worst_group << '\n'
     << "  " << (pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

namespace {

struct MeasuredRun {
  std::uint64_t core = 0;
  std::uint64_t total = 0;
};

MeasuredRun run_counting(const std::string& protocol, const sharing::ProtocolConfig& cfg, int k) {
  runtime::InMemoryTransport transport(cfg.n);
  runtime::RunSpec spec;
  runtime::RunOptions options;
  options.record_messages = false;

  if (protocol == "zero") {
    runtime::Session session(cfg, transport, "count");
    session.record_messages = false;
    auto x = session.deal(1, FieldElement(1, cfg.field), "share");
    protocols::zero_indicator(session, x);
    return {session.counter().total, session.counter().total};
  }

  spec.protocol = protocol;
  if (protocol == "compare" || protocol == "sci") {
    spec.inputs = {1, 0};
  } else if (protocol == "max") {
    for (int i = 0; i < k; ++i) spec.inputs.push_back(static_cast<std::uint64_t>(i % 2));
  }
  auto result = runtime::run_session(spec, cfg, transport, options);
  MeasuredRun m;
  m.total = result.transcript.counter_total;
  if (protocol == "compare") {
    // The closed-form bound covers the core comparison steps: one random
    // secret generation, the entrywise product, the mask multiplication.
    // Verifying the mask nonzero (an optional certainty upgrade) is
    // reported in the total but has its own budget of 2L per attempt.
    std::uint64_t core = 0;
    for (const auto& [step, n] : result.transcript.counters) {
      if (step.find("jrandnz/zero") != std::string::npos) continue;
      core += n;
    }
    m.core = core;
  } else {
    m.core = m.total;
  }
  return m;
}

}  // namespace

ComplexityReport complexity_report(const ComplexityParams& params) {
  ComplexityReport report;
  report.pass = true;

  auto add_row = [&report](const std::string& protocol, const sharing::ProtocolConfig& cfg, int k,
                           const std::string& formula, std::uint64_t bound) {
    MeasuredRun m = run_counting(protocol, cfg, k);
    ComplexityRow row;
    row.protocol = protocol;
    row.q = cfg.field.q();
    row.l_q = cfg.field.bit_length_q();
    row.l = cfg.l;
    row.k = k;
    row.bound_formula = formula;
    row.bound = bound;
    row.measured = m.core;
    row.measured_total = m.total;
    row.pass = m.core <= bound;
    report.rows.push_back(row);
    report.pass = report.pass && row.pass;
  };

  const std::uint64_t q = params.q;
  const int lq = field::FieldConfig(q).bit_length_q();

  for (int l = params.l_min; l <= params.l_max; ++l) {
    auto cfg = sharing::make_config(3, 1, q, l, params.seed);
    add_row("compare", cfg, 0, "L+2", static_cast<std::uint64_t>(lq) + 2);
    add_row("sci", cfg, 0, "3L+2", 3ULL * lq + 2);
  }
  // Zero indicator across fields of growing bit length; the bound 2L is
  // about the field, not the inputs.
  for (std::uint64_t zq : std::initializer_list<std::uint64_t>{5, 11, 17, 37, 67, 131, q}) {
    auto cfg = sharing::make_config(3, 1, zq, 1, params.seed, encoding::Mode::kRaw);
    add_row("zero", cfg, 0, "2L", 2ULL * cfg.field.bit_length_q());
  }
  // Tight small-field comparison runs.
  for (auto [sq, sl] : std::initializer_list<std::pair<std::uint64_t, int>>{
           {37, 3}, {67, 4}, {131, 5}, {257, 6}}) {
    auto cfg = sharing::make_config(3, 1, sq, sl, params.seed);
    const int slq = cfg.field.bit_length_q();
    add_row("compare", cfg, 0, "L+2", static_cast<std::uint64_t>(slq) + 2);
    add_row("sci", cfg, 0, "3L+2", 3ULL * slq + 2);
  }
  for (int k = params.k_min; k <= params.k_max; ++k) {
    auto cfg = sharing::make_config(3, 1, q, 4, params.seed);
    add_row("max", cfg, k, "(K-1)(5L+2)",
            static_cast<std::uint64_t>(k - 1) * (5ULL * lq + 2));
    auto small = sharing::make_config(3, 1, 257, 3, params.seed);
    add_row("max", small, k, "(K-1)(5L+2)",
            static_cast<std::uint64_t>(k - 1) * (5ULL * small.field.bit_length_q() + 2));
  }

  // Published costs of the schemes this stack is measured against, at the
  // same L; none of them is implemented here.
  auto baseline = [&report](const std::string& label, double value) {
    std::ostringstream os;
    os << label << " = " << static_cast<std::uint64_t>(value);
    report.baselines.push_back(os.str());
  };
  const double L = static_cast<double>(lq);
  baseline("comparison, damgard2006: 188*L*log2(L) + 205*L", 188.0 * L * std::log2(L) + 205.0 * L);
  baseline("comparison, nishide2007: 279*L + 5", 279.0 * L + 5);
  baseline("comparison, rabbit2021: ~53*L", 53.0 * L);
  baseline("comparison, proposed: L + 2", L + 2);
  baseline("equality, damgard2006: 94*L*log2(L) + 92", 94.0 * L * std::log2(L) + 92);
  baseline("equality, nishide2007: 81*L", 81.0 * L);
  baseline("equality, proposed: 2*L", 2.0 * L);
  return report;
}

std::vector<std::string> ComplexityReport::records() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    std::ostringstream os;
    os << "complexity protocol=" << r.protocol << " q=" << r.q << " lq=" << r.l_q << " l=" << r.l
       << " k=" << r.k << " measured=" << r.measured << " total=" << r.measured_total
       << " bound=" << r.bound << " pass=" << (r.pass ? 1 : 0);
    out.push_back(os.str());
  }
  return out;
}

std::string ComplexityReport::table() const {
  std::ostringstream os;
  os << "invocation counts vs closed-form bounds (L = bit length of q-1)\n";
  os << "  protocol      q                     L_q  L   K  measured  total  bound  formula\n";
  for (const auto& r : rows) {
    os << "  " << r.protocol;
    for (std::size_t i = r.protocol.size(); i < 12; ++i) os << ' ';
    std::string qs = std::to_string(r.q);
    os << "  " << qs;
    for (std::size_t i = qs.size(); i < 20; ++i) os << ' ';
    os << "  " << r.l_q << (r.l_q < 10 ? "  " : " ") << " " << r.l << "   " << r.k << "  "
       << r.measured << "        " << r.measured_total << "     " << r.bound << "   "
       << r.bound_formula << (r.pass ? "" : "  FAIL") << '\n';
  }
  os << "reference costs at the default field's L:\n";
  for (const auto& b : baselines) os << "  " << b << '\n';
  os << (pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace mpcmp::audit
