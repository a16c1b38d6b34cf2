#include "mpcmp/sharing.hpp"

#include <stdexcept>
#include <string>

#include "mpcmp/mpc.hpp"
#include "mpcmp/runtime.hpp"

namespace mpcmp::sharing {

using field::FieldElement;

ProtocolConfig make_config(int n, int t, std::uint64_t q, int l, std::uint64_t seed,
                           encoding::Mode mode, std::vector<FieldElement> alphas) {
  ProtocolConfig cfg;
  cfg.n = n;
  cfg.t = t;
  cfg.field = field::FieldConfig(q);
  cfg.l = l;
  cfg.mode = mode;
  cfg.seed = seed;
  if (alphas.empty()) {
    for (int i = 1; i <= n; ++i)
      cfg.alphas.push_back(FieldElement(static_cast<std::uint64_t>(i), cfg.field));
  } else {
    cfg.alphas = std::move(alphas);
  }
  validate_config(cfg);
  return cfg;
}

void validate_config(const ProtocolConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("config: need at least one party");
  if (cfg.t < 0) throw std::invalid_argument("config: threshold must be nonnegative");
  if (cfg.n < 2 * cfg.t + 1)
    throw std::invalid_argument("config: secure multiplication requires n >= 2t+1 (got n=" +
                                std::to_string(cfg.n) + ", t=" + std::to_string(cfg.t) + ")");
  if (static_cast<int>(cfg.alphas.size()) != cfg.n)
    throw std::invalid_argument("config: need one evaluation point per party");
  for (int i = 0; i < cfg.n; ++i) {
    if (cfg.alphas[i].modulus() != cfg.field.q())
      throw std::invalid_argument("config: evaluation point modulus mismatch");
    if (cfg.alphas[i].is_zero())
      throw std::invalid_argument("config: evaluation points must be nonzero");
    for (int j = i + 1; j < cfg.n; ++j)
      if (cfg.alphas[i] == cfg.alphas[j])
        throw std::invalid_argument("config: evaluation points must be distinct");
  }
  if (cfg.l < 1 || cfg.l > 58)
    throw std::invalid_argument("config: input bit length must be in [1, 58]");
  if (cfg.mode == encoding::Mode::kSentinel) {
    if ((1ULL << (cfg.l + 2)) >= cfg.field.q())
      throw std::invalid_argument("config: field too small for encodings, need 2^(L+2) < q");
  } else {
    if ((1ULL << cfg.l) > cfg.field.q())
      throw std::invalid_argument("config: field too small for inputs, need 2^L <= q");
  }
}

Shared share_secret(const FieldElement& s, const ProtocolConfig& cfg, field::Rng& rng) {
  if (s.modulus() != cfg.field.q())
    throw std::invalid_argument("sharing: secret modulus does not match config");
  std::vector<FieldElement> coeffs;
  coeffs.reserve(cfg.t + 1);
  coeffs.push_back(s);
  for (int i = 0; i < cfg.t; ++i) coeffs.push_back(field::sample_uniform(cfg.field, rng));
  const field::DensePolynomial p(std::move(coeffs));
  Shared shares;
  shares.reserve(cfg.n);
  for (int i = 1; i <= cfg.n; ++i)
    shares.push_back(Share{i, p.eval(cfg.alphas[i - 1]), cfg.t});
  return shares;
}

SharedVec share_vector(const std::vector<FieldElement>& values, const ProtocolConfig& cfg,
                       field::Rng& rng) {
  SharedVec out(cfg.n);
  for (int i = 1; i <= cfg.n; ++i) {
    out[i - 1].party = i;
    out[i - 1].degree_hint = cfg.t;
    out[i - 1].values.reserve(values.size());
  }
  for (const auto& v : values) {
    Shared s = share_secret(v, cfg, rng);
    for (int i = 0; i < cfg.n; ++i) out[i].values.push_back(s[i].value);
  }
  return out;
}

FieldElement reconstruct(const Shared& shares, const ProtocolConfig& cfg) {
  if (shares.empty()) throw std::invalid_argument("sharing: no shares to reconstruct from");
  int degree = 0;
  for (const auto& sh : shares) {
    if (sh.party < 1 || sh.party > cfg.n)
      throw std::invalid_argument("sharing: share party index out of range");
    degree = std::max(degree, sh.degree_hint);
  }
  for (std::size_t i = 0; i < shares.size(); ++i)
    for (std::size_t j = i + 1; j < shares.size(); ++j)
      if (shares[i].party == shares[j].party)
        throw std::invalid_argument("sharing: duplicate party in reconstruction set");
  if (static_cast<int>(shares.size()) < degree + 1)
    throw std::invalid_argument("sharing: insufficient shares, need " + std::to_string(degree + 1) +
                                " for degree " + std::to_string(degree));
  std::vector<std::pair<FieldElement, FieldElement>> points;
  points.reserve(shares.size());
  for (const auto& sh : shares) points.emplace_back(cfg.alphas[sh.party - 1], sh.value);
  return field::interpolate_at_zero(points);
}

Shared joint_random_secret(runtime::Session& session) {
  const auto& cfg = session.cfg();
  auto contribution = [&session, &cfg](int party) -> FieldElement {
    if (session.hooks().jrand_contribution) {
      if (auto forced = session.hooks().jrand_contribution(party, session.jrand_attempt))
        return FieldElement(*forced, cfg.field);
    }
    return field::sample_uniform(cfg.field, session.rng(party));
  };
  const std::vector<FieldElement> ones(cfg.n, FieldElement(1, cfg.field));
  Shared out = session.weighted_dealing_sum(contribution, ones, "jrand");
  session.counter().bump(session.label("jrand"));
  return out;
}

Shared joint_random_nonzero(runtime::Session& session) {
  session.push_scope("jrandnz");
  for (int attempt = 0; attempt < kJointRandomNonzeroMaxRetries; ++attempt) {
    session.jrand_attempt = attempt;
    Shared candidate = joint_random_secret(session);
    Shared indicator = mpc::pow_shares(session, candidate, session.fieldcfg().q() - 1, "zero");
    FieldElement bit = session.reveal(indicator, "reveal");
    if (!bit.is_zero()) {
      session.jrand_attempt = 0;
      session.pop_scope();
      return candidate;
    }
  }
  session.jrand_attempt = 0;
  session.pop_scope();
  throw std::runtime_error("sharing: joint random nonzero exhausted its retry budget");
}

}  // namespace mpcmp::sharing
