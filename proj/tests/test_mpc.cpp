#include "doctest.h"
#include "mpcmp/mpc.hpp"
#include "mpcmp/runtime.hpp"

using namespace mpcmp;
using sharing::Shared;

namespace {

struct Fixture {
  sharing::ProtocolConfig cfg;
  runtime::InMemoryTransport transport;
  runtime::Session session;

  Fixture(int n, int t, std::uint64_t q, std::uint64_t seed = 1, int l = 1)
      : cfg(sharing::make_config(n, t, q, l, seed, encoding::Mode::kRaw)),
        transport(n),
        session(cfg, transport) {}

  field::FieldElement fe(std::uint64_t v) { return field::FieldElement(v, cfg.field); }
  Shared deal(std::uint64_t v) { return session.deal(1, fe(v), "share"); }
  std::uint64_t open(const Shared& x) { return sharing::reconstruct(x, cfg).value(); }
};

}  // namespace

TEST_CASE("share multiplication") {
  Fixture f(3, 1, 11);
  auto x = f.deal(3);
  auto y = f.deal(4);
  CHECK(f.open(mpc::mul_shares(f.session, x, y)) == 1);  // 12 mod 11
  CHECK(f.open(mpc::mul_shares(f.session, x, f.deal(0))) == 0);
}

TEST_CASE("multiplication output reconstructs from any t+1 shares") {
  Fixture f(5, 2, 257);
  auto prod = mpc::mul_shares(f.session, f.deal(12), f.deal(20));
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      for (int c = b + 1; c < 5; ++c) {
        Shared subset{prod[a], prod[b], prod[c]};
        CHECK(sharing::reconstruct(subset, f.cfg).value() == 240);
      }
}

TEST_CASE("random products against plaintext") {
  Fixture f(5, 2, field::kMersenne61, 3);
  field::Rng rng(10);
  for (int i = 0; i < 1000; ++i) {
    auto a = field::sample_uniform(f.cfg.field, rng);
    auto b = field::sample_uniform(f.cfg.field, rng);
    auto prod = mpc::mul_shares(f.session, f.session.deal(1, a, "share"),
                                f.session.deal(2, b, "share"));
    REQUIRE(sharing::reconstruct(prod, f.cfg) == field::mul(a, b));
  }
}

TEST_CASE("affine combinations are local") {
  Fixture f(3, 1, 257);
  auto x = f.deal(100);
  auto y = f.deal(30);
  const auto msgs_before = f.session.transcript().messages.size();
  const auto count_before = f.session.counter().total;

  auto diff = mpc::sub_shared(f.session, x, y);
  CHECK(f.open(diff) == 70);
  auto combo = mpc::affine(f.session, {x, y}, {f.fe(2), f.fe(3)}, f.fe(5));
  CHECK(f.open(combo) == (200 + 90 + 5) % 257);
  auto zero = mpc::sub_shared(f.session, x, x);
  CHECK(f.open(zero) == 0);

  CHECK(f.session.transcript().messages.size() == msgs_before);
  CHECK(f.session.counter().total == count_before);

  // A public constant is a degree-0 sharing: every party holds it.
  auto c = mpc::constant_shared(f.session, f.fe(9));
  for (const auto& sh : c) {
    CHECK(sh.value.value() == 9);
    CHECK(sh.degree_hint == 0);
  }
}

TEST_CASE("vector subtraction matches the plaintext difference") {
  auto cfg = sharing::make_config(3, 1, field::kMersenne61, 4, 2);
  runtime::InMemoryTransport transport(3);
  runtime::Session session(cfg, transport);
  encoding::PartitionVector va =
      encoding::partition_vector(10, 4, cfg.field, encoding::Mode::kSentinel);
  field::Rng rng(4);
  encoding::ZeroCodedVector vb =
      encoding::zero_coded_vector(9, 4, cfg.field, encoding::Mode::kSentinel, rng);
  auto va_sh = session.deal_vector(1, va.entries, "share");
  auto vb_sh = session.deal_vector(2, vb.entries, "share");
  auto diff = mpc::sub_vec(session, va_sh, vb_sh);
  for (int i = 0; i < 4; ++i) {
    auto expect = field::sub(va.entries[i], vb.entries[i]);
    CHECK(sharing::reconstruct(mpc::vector_component(diff, i), cfg) == expect);
  }
}

TEST_CASE("product folds") {
  Fixture f(3, 1, 11);
  std::vector<Shared> factors{f.deal(2), f.deal(3), f.deal(4)};
  const auto before = f.session.counter().total;
  CHECK(f.open(mpc::product_fold(f.session, factors)) == 2);  // 24 mod 11
  CHECK(f.session.counter().total - before == 2);             // k-1 invocations

  const auto single_before = f.session.counter().total;
  CHECK(f.open(mpc::product_fold(f.session, {factors[0]})) == 2);
  CHECK(f.session.counter().total == single_before);  // no invocation

  CHECK_THROWS_AS(mpc::product_fold(f.session, {}), std::invalid_argument);
}

TEST_CASE("folds with a planted zero vanish") {
  Fixture f(3, 1, 257, 5);
  field::Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 4);
    const int zero_at = static_cast<int>(rng.next_u64() % k);
    std::vector<Shared> factors;
    for (int i = 0; i < k; ++i)
      factors.push_back(f.deal(i == zero_at ? 0 : 1 + rng.next_u64() % 256));
    REQUIRE(f.open(mpc::product_fold(f.session, factors)) == 0);
  }
}

TEST_CASE("shared exponentiation") {
  Fixture f(3, 1, 11);
  SUBCASE("fermat cases") {
    CHECK(f.open(mpc::pow_shares(f.session, f.deal(3), 10)) == 1);
    CHECK(f.open(mpc::pow_shares(f.session, f.deal(0), 10)) == 0);
  }
  SUBCASE("invocation count is squarings plus extra set bits") {
    // q-1 = 10 = 1010b: 3 squarings + 1 combining multiply.
    auto x = f.deal(7);
    const auto before = f.session.counter().total;
    mpc::pow_shares(f.session, x, 10);
    CHECK(f.session.counter().total - before == 4);
  }
  SUBCASE("identity and constant exponents") {
    auto x = f.deal(7);
    const auto before = f.session.counter().total;
    CHECK(f.open(mpc::pow_shares(f.session, x, 1)) == 7);
    CHECK(f.open(mpc::pow_shares(f.session, x, 0)) == 1);
    CHECK(f.session.counter().total == before);
  }
}

TEST_CASE("exponentiation invocation counts across fields") {
  for (std::uint64_t q : std::initializer_list<std::uint64_t>{11, 13, 257}) {
    Fixture f(3, 1, q);
    auto x = f.deal(2);
    const auto before = f.session.counter().total;
    auto out = mpc::pow_shares(f.session, x, q - 1);
    const int lq = f.cfg.field.bit_length_q();
    const int pop = __builtin_popcountll(q - 1);
    CHECK(f.session.counter().total - before ==
          static_cast<std::uint64_t>(lq - 1 + pop - 1));
    CHECK(f.open(out) == 1);
  }
}

TEST_CASE("oblivious selection") {
  Fixture f(3, 1, 257);
  auto a = f.deal(11);
  auto b = f.deal(22);
  CHECK(f.open(mpc::select(f.session, f.deal(0), a, b)) == 11);
  CHECK(f.open(mpc::select(f.session, f.deal(1), a, b)) == 22);
}

TEST_CASE("vector selection matches a plaintext mux") {
  auto cfg = sharing::make_config(3, 1, field::kMersenne61, 4, 8);
  runtime::InMemoryTransport transport(3);
  runtime::Session session(cfg, transport);
  field::Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t g = rng.next_u64() & 1;
    std::vector<field::FieldElement> av, bv;
    for (int i = 0; i < 3; ++i) {
      av.push_back(field::sample_uniform(cfg.field, rng));
      bv.push_back(field::sample_uniform(cfg.field, rng));
    }
    auto a_sh = session.deal_vector(1, av, "share");
    auto b_sh = session.deal_vector(2, bv, "share");
    auto g_sh = session.deal(3, field::FieldElement(g, cfg.field), "share");
    const auto before = session.counter().total;
    auto out = mpc::select_vec(session, g_sh, a_sh, b_sh);
    REQUIRE(session.counter().total - before == 3);  // one per component
    for (int i = 0; i < 3; ++i) {
      REQUIRE(sharing::reconstruct(mpc::vector_component(out, i), cfg) ==
              (g == 0 ? av[i] : bv[i]));
    }
  }
}

TEST_CASE("length mismatches are rejected") {
  auto cfg = sharing::make_config(3, 1, field::kMersenne61, 4, 8);
  runtime::InMemoryTransport transport(3);
  runtime::Session session(cfg, transport);
  field::FieldElement one(1, cfg.field);
  auto a = session.deal_vector(1, {one, one}, "share");
  auto b = session.deal_vector(2, {one, one, one}, "share");
  CHECK_THROWS_AS(mpc::sub_vec(session, a, b), std::invalid_argument);
  auto x = session.deal(1, one, "share");
  CHECK_THROWS_AS(mpc::affine(session, {x}, {one, one}, one), std::invalid_argument);
}
