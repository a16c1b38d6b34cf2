#include "mpcmp/mpc.hpp"

#include <algorithm>
#include <stdexcept>

namespace mpcmp::mpc {

using field::FieldElement;

namespace {

void require_shared(const runtime::Session& s, const Shared& x) {
  if (static_cast<int>(x.size()) != s.cfg().n)
    throw std::invalid_argument("mpc: sharing needs one share per party");
}

int max_degree(const Shared& x) {
  int d = 0;
  for (const auto& sh : x) d = std::max(d, sh.degree_hint);
  return d;
}

}  // namespace

Shared mul_shares(runtime::Session& s, const Shared& x, const Shared& y, std::string_view step) {
  require_shared(s, x);
  require_shared(s, y);
  // Local products sit on a degree-2T polynomial; resharing each point
  // with degree T and recombining with the all-party Lagrange weights
  // interpolates it back down.
  Shared out = s.weighted_dealing_sum(
      [&x, &y](int party) { return field::mul(x[party - 1].value, y[party - 1].value); },
      s.all_party_weights(), step);
  s.counter().bump(s.label(step));
  return out;
}

Shared affine(runtime::Session& s, const std::vector<Shared>& terms,
              const std::vector<FieldElement>& coeffs, const FieldElement& constant) {
  if (terms.size() != coeffs.size())
    throw std::invalid_argument("mpc: affine needs one coefficient per term");
  Shared out(s.cfg().n);
  int degree = 0;
  for (const auto& t : terms) {
    require_shared(s, t);
    degree = std::max(degree, max_degree(t));
  }
  for (int p = 1; p <= s.cfg().n; ++p) {
    FieldElement acc = constant;
    for (std::size_t k = 0; k < terms.size(); ++k)
      acc = field::add(acc, field::mul(coeffs[k], terms[k][p - 1].value));
    out[p - 1] = sharing::Share{p, acc, degree};
  }
  return out;
}

Shared constant_shared(runtime::Session& s, const FieldElement& c) {
  Shared out(s.cfg().n);
  for (int p = 1; p <= s.cfg().n; ++p) out[p - 1] = sharing::Share{p, c, 0};
  return out;
}

Shared add_shared(runtime::Session& s, const Shared& a, const Shared& b) {
  const FieldElement one(1, s.fieldcfg());
  return affine(s, {a, b}, {one, one}, FieldElement(0, s.fieldcfg()));
}

Shared sub_shared(runtime::Session& s, const Shared& a, const Shared& b) {
  const FieldElement one(1, s.fieldcfg());
  return affine(s, {a, b}, {one, field::neg(one)}, FieldElement(0, s.fieldcfg()));
}

Shared add_const(runtime::Session& s, const Shared& a, const FieldElement& c) {
  return affine(s, {a}, {FieldElement(1, s.fieldcfg())}, c);
}

SharedVec sub_vec(runtime::Session& /*s*/, const SharedVec& a, const SharedVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("mpc: vector size mismatch");
  SharedVec out(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (a[p].values.size() != b[p].values.size())
      throw std::invalid_argument("mpc: vector length mismatch");
    out[p].party = a[p].party;
    out[p].degree_hint = std::max(a[p].degree_hint, b[p].degree_hint);
    out[p].values.reserve(a[p].values.size());
    for (std::size_t i = 0; i < a[p].values.size(); ++i)
      out[p].values.push_back(field::sub(a[p].values[i], b[p].values[i]));
  }
  return out;
}

Shared product_fold(runtime::Session& s, const std::vector<Shared>& factors,
                    std::string_view step) {
  if (factors.empty()) throw std::invalid_argument("mpc: empty product");
  Shared acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = mul_shares(s, acc, factors[i], step);
  return acc;
}

Shared pow_shares(runtime::Session& s, const Shared& x, std::uint64_t e, std::string_view step) {
  require_shared(s, x);
  if (e == 0) return constant_shared(s, FieldElement(1, s.fieldcfg()));
  const int bits = field::bit_length(e);
  std::vector<Shared> powers;  // powers[k] shares x^(2^k)
  powers.reserve(bits);
  powers.push_back(x);
  for (int k = 1; k < bits; ++k)
    powers.push_back(mul_shares(s, powers[k - 1], powers[k - 1], step));
  Shared acc;
  bool have = false;
  for (int k = 0; k < bits; ++k) {
    if (((e >> k) & 1) == 0) continue;
    if (!have) {
      acc = powers[k];
      have = true;
    } else {
      acc = mul_shares(s, acc, powers[k], step);
    }
  }
  return acc;
}

Shared select(runtime::Session& s, const Shared& g, const Shared& a, const Shared& b,
              std::string_view step) {
  // a + g*(b - a): a when g=0, b when g=1.
  return add_shared(s, a, mul_shares(s, g, sub_shared(s, b, a), step));
}

SharedVec select_vec(runtime::Session& s, const Shared& g, const SharedVec& a, const SharedVec& b,
                     std::string_view step) {
  if (a.empty() || a.size() != b.size()) throw std::invalid_argument("mpc: vector size mismatch");
  const std::size_t len = a.front().values.size();
  SharedVec out(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) {
    out[p].party = a[p].party;
    out[p].degree_hint = s.cfg().t;
    out[p].values.resize(len, FieldElement(0, s.fieldcfg()));
  }
  for (std::size_t i = 0; i < len; ++i) {
    Shared sel = select(s, g, vector_component(a, i), vector_component(b, i), step);
    for (std::size_t p = 0; p < a.size(); ++p) out[p].values[i] = sel[p].value;
  }
  return out;
}

Shared vector_component(const SharedVec& v, std::size_t i) {
  Shared out(v.size());
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (i >= v[p].values.size()) throw std::out_of_range("mpc: vector component out of range");
    out[p] = sharing::Share{v[p].party, v[p].values[i], v[p].degree_hint};
  }
  return out;
}

Shared last_component(const SharedVec& v) {
  if (v.empty() || v.front().values.empty())
    throw std::invalid_argument("mpc: empty shared vector");
  return vector_component(v, v.front().values.size() - 1);
}

}  // namespace mpcmp::mpc
