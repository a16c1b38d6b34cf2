#pragma once

// Bit-level encodings that turn "a > b" into "the entrywise difference of
// two vectors has exactly one zero": partition vectors, 0-coded vectors,
// and a plaintext oracle over both.
//
// Two encoding modes exist. In raw mode a bit-string is read as a plain
// binary numeral, which is how the scheme is usually illustrated, but it
// is not injective: the prefix "01" and a filler "1" both read as 1, so a
// filler can collide with a prefix and create a spurious zero. Sentinel
// mode prepends a 1-bit before reading the numeral, mapping a string w to
// 2^|w| + int(w); strings of different lengths then land in the disjoint
// ranges [2^l, 2^(l+1)) and the scheme's "filler length != i" rule becomes
// a real no-collision guarantee. Sentinel is the protocol default; raw is
// kept for small-field runs and illustration.

#include <cstdint>
#include <optional>
#include <vector>

#include "mpcmp/field.hpp"

namespace mpcmp::encoding {

enum class Mode { kRaw, kSentinel };

// Bits ordered most significant first; leading zeros are significant.
struct BitString {
  std::vector<std::uint8_t> bits;

  std::size_t length() const { return bits.size(); }
  bool operator==(const BitString&) const = default;
};

struct PartitionVector {
  std::vector<field::FieldElement> entries;
  int bit_length = 0;
};

struct ZeroCodedVector {
  std::vector<field::FieldElement> entries;
  int bit_length = 0;
};

// Length-L big-endian binary representation of s; requires s < 2^L.
BitString to_bits(std::uint64_t s, int bit_count);

std::uint64_t bits_to_uint(const BitString& w);

// Sentinel encoding: 2^|w| + int(w). Requires 2^(|w|+1) < q.
field::FieldElement encode_string(const BitString& w, const field::FieldConfig& cfg);

// Mode-dispatched string-to-field map used by both vector encodings.
field::FieldElement encode_string_mode(const BitString& w, const field::FieldConfig& cfg, Mode mode);

// Entry i encodes the prefix s_1..s_i of the binary representation of s.
PartitionVector partition_vector(std::uint64_t s, int bit_count, const field::FieldConfig& cfg,
                                 Mode mode);

// Entry i encodes prefix s_1..s_{i-1} followed by 1 where the i-th bit of s
// is 0, and a random filler bit-string of length != i elsewhere. Filler
// lengths are uniform on {1..L+1} \ {i} with uniform bits.
ZeroCodedVector zero_coded_vector(std::uint64_t s, int bit_count, const field::FieldConfig& cfg,
                                  Mode mode, field::Rng& rng);

// As above with fillers supplied explicitly (position i in 1..L maps to
// fillers[i-1]); positions whose bit is 0 must be nullopt.
ZeroCodedVector zero_coded_vector_with_fillers(std::uint64_t s, int bit_count,
                                               const field::FieldConfig& cfg, Mode mode,
                                               const std::vector<std::optional<BitString>>& fillers);

// Uniform filler for position i: length uniform on {1..L+1} \ {i}, bits uniform.
BitString sample_filler(int position, int bit_count, field::Rng& rng);

struct ZeroCountResult {
  int zero_count = 0;
  // 1-based position of the first zero entry, if any.
  std::optional<int> first_zero_index;
  bool unique_zero = false;
};

// Plaintext oracle: counts zeros of partition_vector(a) - zero_coded_vector(b)
// in sentinel mode. unique_zero is expected to coincide with a > b.
ZeroCountResult zero_count_oracle(std::uint64_t a, std::uint64_t b, int bit_count,
                                  const field::FieldConfig& cfg, field::Rng& rng);

// Recovers the secret from a sentinel-mode partition vector's last entry.
std::uint64_t decode_secret(const PartitionVector& v);

// Last-entry decoding from a bare field element, for values extracted out
// of shared partition vectors. Requires value in [2^L, 2^(L+1)).
std::uint64_t decode_last_entry(const field::FieldElement& e, int bit_count);

}  // namespace mpcmp::encoding
