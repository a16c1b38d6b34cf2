#pragma once

// Exact arithmetic in a prime field F_q for 64-bit moduli: residues,
// dense polynomials, Lagrange interpolation at zero, and bias-free
// uniform sampling. Everything here is pure value code; no I/O.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpcmp::field {

// 2^61 - 1. Default modulus: products of two residues fit a 128-bit limb
// and inputs of up to 58 bits keep sentinel-encoding headroom.
inline constexpr std::uint64_t kMersenne61 = 0x1fffffffffffffffULL;

// Bit length of v (0 for v == 0).
int bit_length(std::uint64_t v);

// Deterministic Miller-Rabin for 64-bit n.
bool is_probable_prime(std::uint64_t n);

// splitmix64; used to derive independent per-party seeds from one seed.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random generator. All randomness in the library flows
// through explicitly seeded instances of this type.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Modulus context. Primality is checked at construction.
class FieldConfig {
 public:
  explicit FieldConfig(std::uint64_t q);

  std::uint64_t q() const { return q_; }
  // Bit length of q - 1.
  int bit_length_q() const { return bit_length_q_; }

  bool operator==(const FieldConfig&) const = default;

 private:
  std::uint64_t q_;
  int bit_length_q_;
};

// A residue in [0, q). Mixing residues of different moduli throws.
class FieldElement {
 public:
  FieldElement() : value_(0), q_(0) {}
  FieldElement(std::uint64_t value, const FieldConfig& cfg);

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return q_; }

  bool is_zero() const { return value_ == 0; }
  bool operator==(const FieldElement&) const = default;

 private:
  friend FieldElement make_unchecked(std::uint64_t value, std::uint64_t q);
  std::uint64_t value_;
  std::uint64_t q_;
};

FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);
FieldElement neg(const FieldElement& a);
// a != 0; satisfies a * inv(a) == 1.
FieldElement inv(const FieldElement& a);
// Square-and-multiply; pow(a, 0) == 1 for every a, including a == 0.
FieldElement pow(const FieldElement& a, std::uint64_t e);

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return add(a, b); }
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return sub(a, b); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) { return mul(a, b); }
inline FieldElement operator-(const FieldElement& a) { return neg(a); }

// Decimal-string serialization; exact across 64-bit values.
std::string to_string(const FieldElement& a);
FieldElement element_from_string(const std::string& s, const FieldConfig& cfg);

// Coefficients with the constant term first; degree == size - 1.
class DensePolynomial {
 public:
  explicit DensePolynomial(std::vector<FieldElement> coefficients);

  const std::vector<FieldElement>& coefficients() const { return coefficients_; }
  std::size_t degree() const { return coefficients_.size() - 1; }
  const FieldElement& constant_term() const { return coefficients_.front(); }

  // Horner evaluation.
  FieldElement eval(const FieldElement& x) const;

 private:
  std::vector<FieldElement> coefficients_;
};

// Value at 0 of the unique interpolant through the given points.
// All x must be distinct and nonzero.
FieldElement interpolate_at_zero(const std::vector<std::pair<FieldElement, FieldElement>>& points);

// Lagrange weights at 0 for the given abscissas (distinct, nonzero):
// interpolate_at_zero(points) == sum_i weight[i] * y[i].
std::vector<FieldElement> lagrange_weights_at_zero(const std::vector<FieldElement>& xs);

// Uniform over [0, q) by rejection sampling; no modulo bias.
FieldElement sample_uniform(const FieldConfig& cfg, Rng& rng);
// Uniform over [1, q).
FieldElement sample_nonzero(const FieldConfig& cfg, Rng& rng);

}  // namespace mpcmp::field
