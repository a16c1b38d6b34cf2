#pragma once

// Threshold secret sharing: a secret is the constant term of a random
// degree-T polynomial and party i holds its evaluation at alpha_i. Any
// T+1 shares reconstruct; any T reveal nothing. Vector sharing draws
// independent randomness per coordinate. Joint random secrets are built
// by summing one dealing per party inside a session.

#include <cstdint>
#include <optional>
#include <vector>

#include "mpcmp/encoding.hpp"
#include "mpcmp/field.hpp"

namespace mpcmp::runtime {
class Session;
}

namespace mpcmp::sharing {

// Session-wide parameters. Degree-T sharings tolerate T colluding parties
// and support one multiplication when N >= 2T+1.
struct ProtocolConfig {
  int n = 3;
  int t = 1;
  field::FieldConfig field{field::kMersenne61};
  int l = 8;  // input bit length
  encoding::Mode mode = encoding::Mode::kSentinel;
  std::vector<field::FieldElement> alphas;  // evaluation points, one per party
  std::uint64_t seed = 0;
};

// Fills alphas with 1..n when empty and checks every invariant:
// n >= 2t+1, t >= 0, alphas distinct nonzero, field capacity for l.
ProtocolConfig make_config(int n, int t, std::uint64_t q, int l, std::uint64_t seed,
                           encoding::Mode mode = encoding::Mode::kSentinel,
                           std::vector<field::FieldElement> alphas = {});
void validate_config(const ProtocolConfig& cfg);

// One party's evaluation of a sharing polynomial at its alpha.
struct Share {
  int party = 0;  // 1-based
  field::FieldElement value;
  int degree_hint = 0;  // expected polynomial degree (T, or 2T for raw products)
};

struct ShareVector {
  int party = 0;
  std::vector<field::FieldElement> values;
  int degree_hint = 0;
};

// Godview containers indexed by party - 1. Protocol code only ever
// combines per-party slots independently; cross-party movement goes
// through a session's transport.
using Shared = std::vector<Share>;
using SharedVec = std::vector<ShareVector>;

// Degree-T sharing of s: constant term s, T uniform coefficients,
// share i = p(alpha_i).
Shared share_secret(const field::FieldElement& s, const ProtocolConfig& cfg, field::Rng& rng);

// Componentwise share_secret with fresh randomness per coordinate.
SharedVec share_vector(const std::vector<field::FieldElement>& values, const ProtocolConfig& cfg,
                       field::Rng& rng);

// Lagrange interpolation at zero over the shares' (alpha, value) points.
// Requires distinct parties and at least degree_hint + 1 shares.
field::FieldElement reconstruct(const Shared& shares, const ProtocolConfig& cfg);

// Sum of one uniformly random contribution per party; nobody learns it.
// Counts as one multiplication invocation.
Shared joint_random_secret(runtime::Session& session);

// joint_random_secret, retried (at most 64 times) until a shared zero test
// run over the candidate reveals a nonzero value. Only the zero/nonzero
// bit of each candidate is made public.
Shared joint_random_nonzero(runtime::Session& session);

inline constexpr int kJointRandomNonzeroMaxRetries = 64;

}  // namespace mpcmp::sharing
