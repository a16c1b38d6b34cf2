#pragma once

// The comparison stack. Two encoded vectors turn ordering into a zero
// test (one zero in an entrywise difference iff a > b); the protocols
// here evaluate that test on shares, compose it into gates that forward
// the encodings of the running maximum, and build circuits for max, min,
// median, rank, squared distances from the median, and max-of-group-mins.
// Nothing is reconstructed except each operation's declared output.

#include <cstdint>
#include <optional>
#include <vector>

#include "mpcmp/mpc.hpp"
#include "mpcmp/runtime.hpp"

namespace mpcmp::protocols {

enum class Verdict { kFirstGreater, kNotGreater };

struct ComparisonOutcome {
  field::FieldElement revealed;
  Verdict verdict = Verdict::kNotGreater;
};

// Shared encodings of one in-flight value; index present only when the
// circuit tracks identities (auctions, maximin group tags).
struct GateValue {
  sharing::SharedVec partition;
  sharing::SharedVec zero_coded;
  std::optional<sharing::Shared> index;
};

struct IndexedSecret {
  std::uint64_t value = 0;
  std::uint64_t index = 0;  // nonzero; 0 is reserved for "absent"
};

struct OwnedInput {
  int owner = 0;  // party that contributes the value
  std::uint64_t value = 0;
};

// Masked two-secret comparison: every party learns mask * prod(diff) and
// nothing else; the reveal is 0 iff s1 > s2. The mask is a joint random
// secret verified nonzero, so a zero reveal cannot be a false positive.
ComparisonOutcome secure_compare(runtime::Session& s, int holder1, std::uint64_t s1, int holder2,
                                 std::uint64_t s2);

// Sharing of x^(q-1): 0 if x = 0, 1 otherwise. No reveal.
sharing::Shared zero_indicator(runtime::Session& s, const sharing::Shared& x);

// Sharing of Zero(x - y): 0 iff x = y. No reveal.
sharing::Shared equality_test(runtime::Session& s, const sharing::Shared& x,
                              const sharing::Shared& y);

// Comparison indicator bit, kept shared: 0 if a > b, 1 otherwise. Works
// on a's partition vector and b's 0-coded vector; the masked product of
// the plain comparison is skipped since nothing is revealed here.
sharing::Shared sci(runtime::Session& s, const sharing::SharedVec& partition_a,
                    const sharing::SharedVec& zero_coded_b);

// Comparison gate: fresh sharings of both encodings of max(a,b); ties
// select operand b. escg additionally forwards the index of the winner.
GateValue scg(runtime::Session& s, const GateValue& a, const GateValue& b);
GateValue escg(runtime::Session& s, const GateValue& a, const GateValue& b);

// Order-reversed gate used by maximin: forwards min(a,b); ties select a.
GateValue min_gate(runtime::Session& s, const GateValue& a, const GateValue& b, bool with_index);

// Owner encodes (optionally the complement 2^bits-1-value of) its input
// and deals partition vector, 0-coded vector and optional index.
GateValue share_encoded_input(runtime::Session& s, int owner, std::uint64_t value, int bits,
                              std::optional<std::uint64_t> index, bool complement);

struct MaxResult {
  std::uint64_t value = 0;
  std::optional<std::uint64_t> winner_index;  // 1-based input position
};

// Tournament of comparison gates; only the last partition entry of the
// final gate output is revealed. Intermediate maxima stay shared.
MaxResult max_circuit(runtime::Session& s, const std::vector<OwnedInput>& inputs,
                      bool with_index = false);

// Complement trick: owners encode 2^L-1-s, the max tournament runs, and
// the revealed result is complemented back. Field negation would not
// preserve order of the [0, 2^L) embedding, so the complement is used.
MaxResult min_circuit(runtime::Session& s, const std::vector<OwnedInput>& inputs);

struct SelectionResult {
  std::uint64_t value = 0;
  int owner = 0;
};

// Candidate scan: for each input (ascending position) the parties count,
// via shared indicator bits, how many other inputs it exceeds, and reveal
// only whether that count equals floor(K/2). Inputs must be pairwise
// distinct; tie_safe remaps x to x*K + (position-1) first, which is
// order-preserving and injective, at the cost of log2(K) extra bits.
SelectionResult median_circuit(runtime::Session& s, const std::vector<OwnedInput>& inputs,
                               bool tie_safe = false);

// Element with exactly target_rank strictly-greater others: rank 0 is the
// maximum, rank K-1 the minimum.
SelectionResult rank_circuit(runtime::Session& s, const std::vector<OwnedInput>& inputs,
                             int target_rank, bool tie_safe = false);

// d_i = (x_i - median)^2, revealed only to the server party. The median
// is located by the scan above but its value is never reconstructed; its
// share is read off the winning candidate's last partition entry.
std::vector<std::uint64_t> outlier_distances(runtime::Session& s,
                                             const std::vector<OwnedInput>& inputs, int server);

struct MaximinResult {
  std::uint64_t value = 0;
  int group = 0;  // 1-based
};

// max over groups of the within-group min. Groups run the complement max
// tournament internally; the group winners (still complement-encoded)
// feed an index-carrying min tournament, so no re-encoding of shared
// values is ever needed. The final reveal is complemented back.
MaximinResult maximin(runtime::Session& s, const std::vector<std::vector<OwnedInput>>& groups);

}  // namespace mpcmp::protocols
