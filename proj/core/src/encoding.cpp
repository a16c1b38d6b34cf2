#include "mpcmp/encoding.hpp"

#include <stdexcept>
#include <string>

namespace mpcmp::encoding {

namespace {

void require_range(std::uint64_t s, int bit_count) {
  if (bit_count < 1 || bit_count > 62)
    throw std::invalid_argument("encoding: bit length must be in [1, 62]");
  if (s >> bit_count)
    throw std::invalid_argument("encoding: value " + std::to_string(s) +
                                " does not fit in " + std::to_string(bit_count) + " bits");
}

void require_capacity(int bit_count, const field::FieldConfig& cfg, Mode mode) {
  // Sentinel entries reach 2^(L+2) - 1 (fillers may be L+1 bits long);
  // raw entries only need the values themselves to be representable.
  if (mode == Mode::kSentinel) {
    if (bit_count + 2 >= 64 || (1ULL << (bit_count + 2)) >= cfg.q())
      throw std::invalid_argument("encoding: field too small, need 2^(L+2) < q");
  } else {
    if (bit_count >= 64 || (1ULL << bit_count) > cfg.q())
      throw std::invalid_argument("encoding: field too small, need 2^L <= q");
  }
}

BitString prefix_with_one(const BitString& full, int upto) {
  // First (upto - 1) bits of full, then a 1.
  BitString w;
  w.bits.assign(full.bits.begin(), full.bits.begin() + (upto - 1));
  w.bits.push_back(1);
  return w;
}

}  // namespace

BitString to_bits(std::uint64_t s, int bit_count) {
  require_range(s, bit_count);
  BitString w;
  w.bits.resize(bit_count);
  for (int i = 0; i < bit_count; ++i)
    w.bits[i] = static_cast<std::uint8_t>((s >> (bit_count - 1 - i)) & 1);
  return w;
}

std::uint64_t bits_to_uint(const BitString& w) {
  std::uint64_t v = 0;
  for (auto b : w.bits) v = (v << 1) | b;
  return v;
}

field::FieldElement encode_string(const BitString& w, const field::FieldConfig& cfg) {
  if (w.length() == 0) throw std::invalid_argument("encoding: empty bit-string");
  if (w.length() + 1 >= 64 || (1ULL << (w.length() + 1)) >= cfg.q())
    throw std::invalid_argument("encoding: field too small, need 2^(len+1) < q");
  return field::FieldElement((1ULL << w.length()) + bits_to_uint(w), cfg);
}

field::FieldElement encode_string_mode(const BitString& w, const field::FieldConfig& cfg,
                                       Mode mode) {
  if (mode == Mode::kSentinel) return encode_string(w, cfg);
  if (w.length() == 0) throw std::invalid_argument("encoding: empty bit-string");
  return field::FieldElement(bits_to_uint(w) % cfg.q(), cfg);
}

PartitionVector partition_vector(std::uint64_t s, int bit_count, const field::FieldConfig& cfg,
                                 Mode mode) {
  require_range(s, bit_count);
  require_capacity(bit_count, cfg, mode);
  const BitString full = to_bits(s, bit_count);
  PartitionVector v;
  v.bit_length = bit_count;
  v.entries.reserve(bit_count);
  for (int i = 1; i <= bit_count; ++i) {
    BitString prefix;
    prefix.bits.assign(full.bits.begin(), full.bits.begin() + i);
    v.entries.push_back(encode_string_mode(prefix, cfg, mode));
  }
  return v;
}

BitString sample_filler(int position, int bit_count, field::Rng& rng) {
  // Length uniform on {1..L+1} \ {position}.
  const int choices = bit_count;  // L+1 lengths minus the excluded one
  int pick = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(choices)) + 1;
  if (pick >= position) ++pick;
  BitString w;
  w.bits.resize(pick);
  for (int i = 0; i < pick; ++i) w.bits[i] = static_cast<std::uint8_t>(rng.next_u64() & 1);
  return w;
}

ZeroCodedVector zero_coded_vector(std::uint64_t s, int bit_count, const field::FieldConfig& cfg,
                                  Mode mode, field::Rng& rng) {
  require_range(s, bit_count);
  require_capacity(bit_count, cfg, mode);
  const BitString full = to_bits(s, bit_count);
  ZeroCodedVector v;
  v.bit_length = bit_count;
  v.entries.reserve(bit_count);
  for (int i = 1; i <= bit_count; ++i) {
    if (full.bits[i - 1] == 0) {
      v.entries.push_back(encode_string_mode(prefix_with_one(full, i), cfg, mode));
    } else {
      v.entries.push_back(encode_string_mode(sample_filler(i, bit_count, rng), cfg, mode));
    }
  }
  return v;
}

ZeroCodedVector zero_coded_vector_with_fillers(
    std::uint64_t s, int bit_count, const field::FieldConfig& cfg, Mode mode,
    const std::vector<std::optional<BitString>>& fillers) {
  require_range(s, bit_count);
  require_capacity(bit_count, cfg, mode);
  if (fillers.size() != static_cast<std::size_t>(bit_count))
    throw std::invalid_argument("encoding: need one filler slot per position");
  const BitString full = to_bits(s, bit_count);
  ZeroCodedVector v;
  v.bit_length = bit_count;
  v.entries.reserve(bit_count);
  for (int i = 1; i <= bit_count; ++i) {
    if (full.bits[i - 1] == 0) {
      if (fillers[i - 1].has_value())
        throw std::invalid_argument("encoding: filler supplied at a zero-bit position");
      v.entries.push_back(encode_string_mode(prefix_with_one(full, i), cfg, mode));
    } else {
      if (!fillers[i - 1].has_value())
        throw std::invalid_argument("encoding: missing filler at position " + std::to_string(i));
      const BitString& f = *fillers[i - 1];
      if (static_cast<int>(f.length()) == i)
        throw std::invalid_argument("encoding: filler length must differ from its position");
      v.entries.push_back(encode_string_mode(f, cfg, mode));
    }
  }
  return v;
}

ZeroCountResult zero_count_oracle(std::uint64_t a, std::uint64_t b, int bit_count,
                                  const field::FieldConfig& cfg, field::Rng& rng) {
  const PartitionVector va = partition_vector(a, bit_count, cfg, Mode::kSentinel);
  const ZeroCodedVector vb = zero_coded_vector(b, bit_count, cfg, Mode::kSentinel, rng);
  ZeroCountResult r;
  for (int i = 0; i < bit_count; ++i) {
    if (field::sub(va.entries[i], vb.entries[i]).is_zero()) {
      ++r.zero_count;
      if (!r.first_zero_index) r.first_zero_index = i + 1;
    }
  }
  r.unique_zero = r.zero_count == 1;
  return r;
}

std::uint64_t decode_last_entry(const field::FieldElement& e, int bit_count) {
  const std::uint64_t lo = 1ULL << bit_count;
  if (e.value() < lo || e.value() >= 2 * lo)
    throw std::invalid_argument("encoding: entry " + std::to_string(e.value()) +
                                " is not a sentinel encoding of " + std::to_string(bit_count) +
                                " bits");
  return e.value() - lo;
}

std::uint64_t decode_secret(const PartitionVector& v) {
  if (v.entries.empty()) throw std::invalid_argument("encoding: empty partition vector");
  return decode_last_entry(v.entries.back(), v.bit_length);
}

}  // namespace mpcmp::encoding
