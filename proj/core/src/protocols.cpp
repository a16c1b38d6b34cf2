#include "mpcmp/protocols.hpp"

#include <stdexcept>
#include <string>

#include "mpcmp/encoding.hpp"

namespace mpcmp::protocols {

using field::FieldElement;
using sharing::Shared;
using sharing::SharedVec;

namespace {

// RAII step-label scope.
class Scope {
 public:
  Scope(runtime::Session& s, const std::string& name) : s_(s) { s_.push_scope(name); }
  ~Scope() { s_.pop_scope(); }
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;

 private:
  runtime::Session& s_;
};

void require_sentinel(const runtime::Session& s, const char* what) {
  if (s.cfg().mode != encoding::Mode::kSentinel)
    throw std::invalid_argument(std::string(what) + ": requires sentinel encoding mode");
}

void require_input_range(std::uint64_t value, int bits) {
  if (bits < 1 || bits > 58 || (value >> bits) != 0)
    throw std::invalid_argument("protocol: input " + std::to_string(value) +
                                " out of range for bit length " + std::to_string(bits));
}

int ceil_log2(std::size_t k) {
  int b = 0;
  while ((std::size_t{1} << b) < k) ++b;
  return b;
}

std::vector<Shared> components(const SharedVec& v) {
  std::vector<Shared> out;
  const std::size_t len = v.front().values.size();
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) out.push_back(mpc::vector_component(v, i));
  return out;
}

// Core of the masked comparison and the indicator: entrywise difference,
// then the product of all entries, which is zero iff some entry is zero.
Shared difference_product(runtime::Session& s, const SharedVec& partition_a,
                          const SharedVec& zero_coded_b) {
  SharedVec diff = mpc::sub_vec(s, partition_a, zero_coded_b);
  return mpc::product_fold(s, components(diff), "fold");
}

FieldElement public_element(runtime::Session& s, std::uint64_t v) {
  return FieldElement(v, s.fieldcfg());
}

struct TournamentResult {
  GateValue value;
  int gates = 0;
};

enum class GateKind { kMax, kMin };

TournamentResult tournament(runtime::Session& s, std::vector<GateValue> current, GateKind kind,
                            bool with_index) {
  TournamentResult result;
  int level = 1;
  while (current.size() > 1) {
    std::vector<GateValue> next;
    next.reserve((current.size() + 1) / 2);
    for (std::size_t slot = 0; 2 * slot + 1 < current.size(); ++slot) {
      Scope scope(s, (kind == GateKind::kMax ? "scg/" : "mincg/") + std::to_string(level) + "/" +
                         std::to_string(slot));
      const GateValue& a = current[2 * slot];
      const GateValue& b = current[2 * slot + 1];
      if (kind == GateKind::kMax) {
        next.push_back(with_index ? escg(s, a, b) : scg(s, a, b));
      } else {
        next.push_back(min_gate(s, a, b, with_index));
      }
      ++result.gates;
    }
    if (current.size() % 2 == 1) next.push_back(std::move(current.back()));
    current = std::move(next);
    ++level;
  }
  result.value = std::move(current.front());
  return result;
}

std::vector<GateValue> deal_all(runtime::Session& s, const std::vector<OwnedInput>& inputs,
                                int bits, bool with_index, bool complement) {
  std::vector<GateValue> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::optional<std::uint64_t> index;
    if (with_index) index = i + 1;
    out.push_back(share_encoded_input(s, inputs[i].owner, inputs[i].value, bits, index, complement));
  }
  return out;
}

std::uint64_t reveal_decoded(runtime::Session& s, const GateValue& v, int bits,
                             std::string_view step) {
  FieldElement rev = s.reveal(mpc::last_component(v.partition), step);
  return encoding::decode_last_entry(rev, bits);
}

// Candidate scan shared by median, rank and the outlier pipeline. For
// candidate c the scanned count is either how many other inputs it
// exceeds (kSmaller, used for the median) or how many exceed it
// (kGreater, used for rank). Only the per-candidate equality bit is made
// public; returns the index of the first candidate whose count matches.
enum class CountKind { kSmaller, kGreater };

std::size_t candidate_scan(runtime::Session& s, const std::vector<GateValue>& inputs, int target,
                           CountKind kind) {
  for (std::size_t c = 0; c < inputs.size(); ++c) {
    Scope cand(s, "cand" + std::to_string(c + 1));
    std::vector<Shared> bits_of_others;
    std::vector<FieldElement> ones;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      if (k == c) continue;
      Scope pair(s, "vs" + std::to_string(k + 1));
      if (kind == CountKind::kSmaller) {
        // SCI(s_k, s_c) = 1 iff s_k < s_c for distinct inputs.
        bits_of_others.push_back(sci(s, inputs[k].partition, inputs[c].zero_coded));
      } else {
        bits_of_others.push_back(sci(s, inputs[c].partition, inputs[k].zero_coded));
      }
      ones.push_back(public_element(s, 1));
    }
    Shared count = mpc::affine(s, bits_of_others, ones, public_element(s, 0));
    Shared eq = equality_test(s, count, mpc::constant_shared(s, public_element(s, target)));
    FieldElement bit = s.reveal(eq, "reveal");
    if (bit.is_zero()) return c;
  }
  throw std::runtime_error(
      "protocol: candidate scan exhausted; inputs must be pairwise distinct (use tie-safe "
      "preprocessing when ties are possible)");
}

struct TieSafeInputs {
  std::vector<OwnedInput> inputs;
  int bits = 0;
  std::uint64_t factor = 1;
};

// x -> x*K + (position-1): order-preserving and injective across inputs.
TieSafeInputs tie_safe_remap(runtime::Session& s, const std::vector<OwnedInput>& inputs,
                             bool tie_safe) {
  TieSafeInputs out;
  out.bits = s.cfg().l;
  out.inputs = inputs;
  if (!tie_safe || inputs.size() < 2) return out;
  const int extra = ceil_log2(inputs.size());
  out.bits = s.cfg().l + extra;
  out.factor = inputs.size();
  if (out.bits > 58 || (1ULL << (out.bits + 2)) >= s.fieldcfg().q())
    throw std::invalid_argument(
        "protocol: field too small for tie-safe preprocessing, need 2^(L+log2(K)+2) < q");
  for (std::size_t i = 0; i < out.inputs.size(); ++i)
    out.inputs[i].value = out.inputs[i].value * out.factor + i;
  return out;
}

}  // namespace

Shared zero_indicator(runtime::Session& s, const Shared& x) {
  return mpc::pow_shares(s, x, s.fieldcfg().q() - 1, "zero");
}

Shared equality_test(runtime::Session& s, const Shared& x, const Shared& y) {
  return zero_indicator(s, mpc::sub_shared(s, x, y));
}

Shared sci(runtime::Session& s, const SharedVec& partition_a, const SharedVec& zero_coded_b) {
  // Nothing is revealed downstream of this product, so the random mask of
  // the plain comparison is unnecessary; the indicator exponentiation
  // hides everything but the zero/nonzero distinction, which stays shared.
  Shared u = difference_product(s, partition_a, zero_coded_b);
  return zero_indicator(s, u);
}

ComparisonOutcome secure_compare(runtime::Session& s, int holder1, std::uint64_t s1, int holder2,
                                 std::uint64_t s2) {
  if (holder1 == holder2) throw std::invalid_argument("compare: holders must be distinct parties");
  const int bits = s.cfg().l;
  require_input_range(s1, bits);
  require_input_range(s2, bits);
  Scope scope(s, "cmp");

  // Sharing phase: holder1 deals the partition vector of s1, holder2 the
  // 0-coded vector of s2.
  encoding::PartitionVector va =
      encoding::partition_vector(s1, bits, s.fieldcfg(), s.cfg().mode);
  SharedVec va_sh = s.deal_vector(holder1, va.entries, "share");
  encoding::ZeroCodedVector vb = encoding::zero_coded_vector(s2, bits, s.fieldcfg(), s.cfg().mode,
                                                             s.rng(holder2));
  SharedVec vb_sh = s.deal_vector(holder2, vb.entries, "share");

  // Random secret generation, with the candidate verified nonzero so a
  // zero reveal can only mean s1 > s2.
  Shared mask = sharing::joint_random_nonzero(s);

  // Vector computation and entity computation phases.
  Shared u = difference_product(s, va_sh, vb_sh);
  Shared masked = mpc::mul_shares(s, mask, u, "mask");

  // Reconstruction phase.
  FieldElement revealed = s.reveal(masked, "reveal");
  return ComparisonOutcome{revealed,
                           revealed.is_zero() ? Verdict::kFirstGreater : Verdict::kNotGreater};
}

GateValue scg(runtime::Session& s, const GateValue& a, const GateValue& b) {
  Shared g = sci(s, a.partition, b.zero_coded);
  GateValue out;
  out.partition = mpc::select_vec(s, g, a.partition, b.partition, "select");
  out.zero_coded = mpc::select_vec(s, g, a.zero_coded, b.zero_coded, "select");
  return out;
}

GateValue escg(runtime::Session& s, const GateValue& a, const GateValue& b) {
  if (!a.index || !b.index) throw std::invalid_argument("escg: inputs must carry indices");
  Shared g = sci(s, a.partition, b.zero_coded);
  GateValue out;
  out.partition = mpc::select_vec(s, g, a.partition, b.partition, "select");
  out.zero_coded = mpc::select_vec(s, g, a.zero_coded, b.zero_coded, "select");
  out.index = mpc::select(s, g, *a.index, *b.index, "select");
  return out;
}

GateValue min_gate(runtime::Session& s, const GateValue& a, const GateValue& b, bool with_index) {
  // Same indicator, selection swapped: a > b picks b.
  Shared g = sci(s, a.partition, b.zero_coded);
  GateValue out;
  out.partition = mpc::select_vec(s, g, b.partition, a.partition, "select");
  out.zero_coded = mpc::select_vec(s, g, b.zero_coded, a.zero_coded, "select");
  if (with_index) {
    if (!a.index || !b.index) throw std::invalid_argument("min gate: inputs must carry indices");
    out.index = mpc::select(s, g, *b.index, *a.index, "select");
  }
  return out;
}

GateValue share_encoded_input(runtime::Session& s, int owner, std::uint64_t value, int bits,
                              std::optional<std::uint64_t> index, bool complement) {
  require_input_range(value, bits);
  const std::uint64_t encoded = complement ? ((1ULL << bits) - 1 - value) : value;
  GateValue out;
  encoding::PartitionVector pv =
      encoding::partition_vector(encoded, bits, s.fieldcfg(), s.cfg().mode);
  out.partition = s.deal_vector(owner, pv.entries, "share");
  encoding::ZeroCodedVector zv =
      encoding::zero_coded_vector(encoded, bits, s.fieldcfg(), s.cfg().mode, s.rng(owner));
  out.zero_coded = s.deal_vector(owner, zv.entries, "share");
  if (index) {
    if (*index == 0) throw std::invalid_argument("protocol: index 0 is reserved");
    out.index = s.deal(owner, public_element(s, *index), "share");
  }
  return out;
}

MaxResult max_circuit(runtime::Session& s, const std::vector<OwnedInput>& inputs,
                      bool with_index) {
  require_sentinel(s, "max");
  if (inputs.empty()) throw std::invalid_argument("max: need at least one input");
  const int bits = s.cfg().l;
  Scope scope(s, "max");
  auto dealt = deal_all(s, inputs, bits, with_index, /*complement=*/false);
  TournamentResult t = tournament(s, std::move(dealt), GateKind::kMax, with_index);
  MaxResult result;
  result.value = reveal_decoded(s, t.value, bits, "reveal");
  if (with_index) result.winner_index = s.reveal(*t.value.index, "reveal").value();
  return result;
}

MaxResult min_circuit(runtime::Session& s, const std::vector<OwnedInput>& inputs) {
  require_sentinel(s, "min");
  if (inputs.empty()) throw std::invalid_argument("min: need at least one input");
  const int bits = s.cfg().l;
  Scope scope(s, "min");
  auto dealt = deal_all(s, inputs, bits, /*with_index=*/false, /*complement=*/true);
  TournamentResult t = tournament(s, std::move(dealt), GateKind::kMax, false);
  MaxResult result;
  result.value = ((1ULL << bits) - 1) - reveal_decoded(s, t.value, bits, "reveal");
  return result;
}

SelectionResult median_circuit(runtime::Session& s, const std::vector<OwnedInput>& inputs,
                               bool tie_safe) {
  require_sentinel(s, "median");
  if (inputs.empty()) throw std::invalid_argument("median: need at least one input");
  Scope scope(s, "med");
  TieSafeInputs prepared = tie_safe_remap(s, inputs, tie_safe);
  auto dealt = deal_all(s, prepared.inputs, prepared.bits, false, false);
  const int target = static_cast<int>(inputs.size()) / 2;
  const std::size_t c = candidate_scan(s, dealt, target, CountKind::kSmaller);
  FieldElement rev = s.reveal(mpc::last_component(dealt[c].partition), "reveal");
  const std::uint64_t decoded = encoding::decode_last_entry(rev, prepared.bits);
  return SelectionResult{decoded / prepared.factor, inputs[c].owner};
}

SelectionResult rank_circuit(runtime::Session& s, const std::vector<OwnedInput>& inputs,
                             int target_rank, bool tie_safe) {
  require_sentinel(s, "rank");
  if (inputs.empty()) throw std::invalid_argument("rank: need at least one input");
  if (target_rank < 0 || target_rank >= static_cast<int>(inputs.size()))
    throw std::invalid_argument("rank: target rank must be in [0, K)");
  Scope scope(s, "rank");
  TieSafeInputs prepared = tie_safe_remap(s, inputs, tie_safe);
  auto dealt = deal_all(s, prepared.inputs, prepared.bits, false, false);
  const std::size_t c = candidate_scan(s, dealt, target_rank, CountKind::kGreater);
  FieldElement rev = s.reveal(mpc::last_component(dealt[c].partition), "reveal");
  const std::uint64_t decoded = encoding::decode_last_entry(rev, prepared.bits);
  return SelectionResult{decoded / prepared.factor, inputs[c].owner};
}

std::vector<std::uint64_t> outlier_distances(runtime::Session& s,
                                             const std::vector<OwnedInput>& inputs, int server) {
  require_sentinel(s, "outliers");
  if (inputs.empty()) throw std::invalid_argument("outliers: need at least one input");
  if (server < 1 || server > s.cfg().n)
    throw std::invalid_argument("outliers: server index out of range");
  const int bits = s.cfg().l;
  Scope scope(s, "outl");
  auto dealt = deal_all(s, inputs, bits, false, false);
  const int target = static_cast<int>(inputs.size()) / 2;
  const std::size_t c = candidate_scan(s, dealt, target, CountKind::kSmaller);

  // The median itself is never reconstructed: its share is the winning
  // candidate's last partition entry minus the public sentinel offset.
  const FieldElement offset = field::neg(public_element(s, 1ULL << bits));
  Shared median = mpc::add_const(s, mpc::last_component(dealt[c].partition), offset);
  std::vector<std::uint64_t> distances;
  distances.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Scope d(s, "d" + std::to_string(i + 1));
    Shared x = mpc::add_const(s, mpc::last_component(dealt[i].partition), offset);
    Shared diff = mpc::sub_shared(s, x, median);
    Shared sq = mpc::mul_shares(s, diff, diff, "fold");
    distances.push_back(s.reveal_to(sq, server, "reveal").value());
  }
  return distances;
}

MaximinResult maximin(runtime::Session& s, const std::vector<std::vector<OwnedInput>>& groups) {
  require_sentinel(s, "maximin");
  if (groups.empty()) throw std::invalid_argument("maximin: need at least one group");
  const int bits = s.cfg().l;
  Scope scope(s, "mmx");

  // Each group's min is the complement of the max over complements; the
  // winners stay complement-encoded, so the cross-group max is found with
  // an index-carrying min tournament and one final complement.
  std::vector<GateValue> group_mins;
  group_mins.reserve(groups.size());
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (groups[k].empty())
      throw std::invalid_argument("maximin: group " + std::to_string(k + 1) + " is empty");
    Scope g(s, "grp" + std::to_string(k + 1));
    auto dealt = deal_all(s, groups[k], bits, false, /*complement=*/true);
    TournamentResult t = tournament(s, std::move(dealt), GateKind::kMax, false);
    t.value.index = mpc::constant_shared(s, public_element(s, k + 1));
    group_mins.push_back(std::move(t.value));
  }
  Scope outer(s, "outer");
  TournamentResult t = tournament(s, std::move(group_mins), GateKind::kMin, /*with_index=*/true);
  MaximinResult result;
  result.value = ((1ULL << bits) - 1) - reveal_decoded(s, t.value, bits, "reveal");
  result.group = static_cast<int>(s.reveal(*t.value.index, "reveal").value());
  return result;
}

}  // namespace mpcmp::protocols
