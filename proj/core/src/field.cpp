#include "mpcmp/field.hpp"

#include <bit>

namespace mpcmp::field {

namespace {

using u128 = unsigned __int128;

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  // a, b < q; avoids overflow for any q < 2^64.
  return a >= q - b && b != 0 ? a - (q - b) : a + b;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return a >= b ? a - b : a + (q - b);
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % q);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t q) {
  std::uint64_t acc = 1 % q;
  std::uint64_t base = a % q;
  while (e != 0) {
    if (e & 1) acc = mul_mod(acc, base, q);
    base = mul_mod(base, base, q);
    e >>= 1;
  }
  return acc;
}

void require_same_modulus(const FieldElement& a, const FieldElement& b) {
  if (a.modulus() != b.modulus())
    throw std::invalid_argument("field: modulus mismatch between operands");
}

}  // namespace

int bit_length(std::uint64_t v) { return 64 - std::countl_zero(v); }

bool is_probable_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // Deterministic witness set for all 64-bit integers.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < r - 1; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

FieldConfig::FieldConfig(std::uint64_t q) : q_(q), bit_length_q_(bit_length(q - 1)) {
  if (q < 3) throw std::invalid_argument("field: modulus must be at least 3");
  if (!is_probable_prime(q))
    throw std::invalid_argument("field: modulus " + std::to_string(q) + " is not prime");
}

FieldElement make_unchecked(std::uint64_t value, std::uint64_t q) {
  FieldElement e;
  e.value_ = value;
  e.q_ = q;
  return e;
}

FieldElement::FieldElement(std::uint64_t value, const FieldConfig& cfg)
    : value_(value % cfg.q()), q_(cfg.q()) {}

FieldElement add(const FieldElement& a, const FieldElement& b) {
  require_same_modulus(a, b);
  return make_unchecked(add_mod(a.value(), b.value(), a.modulus()), a.modulus());
}

FieldElement sub(const FieldElement& a, const FieldElement& b) {
  require_same_modulus(a, b);
  return make_unchecked(sub_mod(a.value(), b.value(), a.modulus()), a.modulus());
}

FieldElement mul(const FieldElement& a, const FieldElement& b) {
  require_same_modulus(a, b);
  return make_unchecked(mul_mod(a.value(), b.value(), a.modulus()), a.modulus());
}

FieldElement neg(const FieldElement& a) {
  return make_unchecked(a.value() == 0 ? 0 : a.modulus() - a.value(), a.modulus());
}

FieldElement inv(const FieldElement& a) {
  if (a.value() == 0) throw std::domain_error("field: division by zero");
  return make_unchecked(pow_mod(a.value(), a.modulus() - 2, a.modulus()), a.modulus());
}

FieldElement pow(const FieldElement& a, std::uint64_t e) {
  if (e == 0) return make_unchecked(1 % a.modulus(), a.modulus());
  return make_unchecked(pow_mod(a.value(), e, a.modulus()), a.modulus());
}

std::string to_string(const FieldElement& a) { return std::to_string(a.value()); }

FieldElement element_from_string(const std::string& s, const FieldConfig& cfg) {
  if (s.empty()) throw std::invalid_argument("field: empty element string");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("field: bad element string '" + s + "'");
    std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
    if (v > (UINT64_MAX - digit) / 10)
      throw std::invalid_argument("field: element string overflows 64 bits");
    v = v * 10 + digit;
  }
  if (v >= cfg.q()) throw std::invalid_argument("field: element " + s + " not reduced mod q");
  return FieldElement(v, cfg);
}

DensePolynomial::DensePolynomial(std::vector<FieldElement> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty())
    throw std::invalid_argument("field: polynomial needs at least one coefficient");
  for (const auto& c : coefficients_) require_same_modulus(c, coefficients_.front());
}

FieldElement DensePolynomial::eval(const FieldElement& x) const {
  require_same_modulus(x, coefficients_.front());
  FieldElement acc = coefficients_.back();
  for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it)
    acc = add(mul(acc, x), *it);
  return acc;
}

std::vector<FieldElement> lagrange_weights_at_zero(const std::vector<FieldElement>& xs) {
  if (xs.empty()) throw std::invalid_argument("field: interpolation needs at least one point");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].is_zero()) throw std::invalid_argument("field: interpolation abscissa must be nonzero");
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (xs[i] == xs[j]) throw std::invalid_argument("field: duplicate interpolation abscissa");
  }
  std::vector<FieldElement> weights;
  weights.reserve(xs.size());
  const std::uint64_t q = xs.front().modulus();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    FieldElement num = make_unchecked(1 % q, q);
    FieldElement den = num;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      num = mul(num, xs[j]);
      den = mul(den, sub(xs[j], xs[i]));
    }
    weights.push_back(mul(num, inv(den)));
  }
  return weights;
}

FieldElement interpolate_at_zero(const std::vector<std::pair<FieldElement, FieldElement>>& points) {
  std::vector<FieldElement> xs;
  xs.reserve(points.size());
  for (const auto& [x, y] : points) {
    require_same_modulus(x, y);
    xs.push_back(x);
  }
  const auto weights = lagrange_weights_at_zero(xs);
  FieldElement acc = make_unchecked(0, points.front().first.modulus());
  for (std::size_t i = 0; i < points.size(); ++i) acc = add(acc, mul(weights[i], points[i].second));
  return acc;
}

FieldElement sample_uniform(const FieldConfig& cfg, Rng& rng) {
  const int bits = bit_length(cfg.q() - 1);
  const std::uint64_t mask = bits >= 64 ? UINT64_MAX : (1ULL << bits) - 1;
  for (;;) {
    std::uint64_t v = rng.next_u64() & mask;
    if (v < cfg.q()) return FieldElement(v, cfg);
  }
}

FieldElement sample_nonzero(const FieldConfig& cfg, Rng& rng) {
  for (;;) {
    FieldElement v = sample_uniform(cfg, rng);
    if (!v.is_zero()) return v;
  }
}

}  // namespace mpcmp::field
