#pragma once

// Interactive arithmetic on degree-T sharings. Linear operations are
// party-local; multiplication costs one degree-reduction round: each
// party multiplies its shares locally (a degree-2T point), reshares that
// point with a fresh degree-T polynomial, and combines the sub-shares it
// receives with the Lagrange weights for interpolation at zero over all
// N points. Requires N >= 2T+1.

#include <cstdint>
#include <string_view>
#include <vector>

#include "mpcmp/runtime.hpp"
#include "mpcmp/sharing.hpp"

namespace mpcmp::mpc {

using sharing::Shared;
using sharing::SharedVec;

// Degree-T sharing of x*y; exactly one invocation, charged to `step`.
Shared mul_shares(runtime::Session& s, const Shared& x, const Shared& y,
                  std::string_view step = "fold");

// Party-local weighted sum plus constant; no interaction, no invocations.
Shared affine(runtime::Session& s, const std::vector<Shared>& terms,
              const std::vector<field::FieldElement>& coeffs, const field::FieldElement& constant);

// The same public constant held by every party as a degree-0 share.
Shared constant_shared(runtime::Session& s, const field::FieldElement& c);

Shared add_shared(runtime::Session& s, const Shared& a, const Shared& b);
Shared sub_shared(runtime::Session& s, const Shared& a, const Shared& b);
Shared add_const(runtime::Session& s, const Shared& a, const field::FieldElement& c);

// Componentwise difference of two shared vectors.
SharedVec sub_vec(runtime::Session& s, const SharedVec& a, const SharedVec& b);

// Left fold of mul_shares; exactly factors.size()-1 invocations.
Shared product_fold(runtime::Session& s, const std::vector<Shared>& factors,
                    std::string_view step = "fold");

// x^e by shared squaring: bit_length(e)-1 squarings plus one multiply per
// set bit beyond the first. For e = q-1 this is the zero-indicator core
// and stays within 2*(bit_length(q-1)) - 2 invocations.
Shared pow_shares(runtime::Session& s, const Shared& x, std::uint64_t e,
                  std::string_view step = "zero");

// g*b + (1-g)*a for a shared bit g: a when g=0, b when g=1. One
// invocation per selected component.
Shared select(runtime::Session& s, const Shared& g, const Shared& a, const Shared& b,
              std::string_view step = "select");
SharedVec select_vec(runtime::Session& s, const Shared& g, const SharedVec& a, const SharedVec& b,
                     std::string_view step = "select");

// Views a single coordinate of a shared vector as a shared scalar.
Shared vector_component(const SharedVec& v, std::size_t i);
Shared last_component(const SharedVec& v);

}  // namespace mpcmp::mpc
