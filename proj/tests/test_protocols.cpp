#include <map>
#include <set>

#include "doctest.h"
#include "mpcmp/protocols.hpp"
#include "oracles.hpp"

using namespace mpcmp;
using protocols::OwnedInput;
using protocols::Verdict;
using sharing::Shared;

namespace {

struct Net {
  sharing::ProtocolConfig cfg;
  runtime::InMemoryTransport transport;
  runtime::Session session;

  Net(int n, int t, std::uint64_t q, int l, std::uint64_t seed = 1,
      encoding::Mode mode = encoding::Mode::kSentinel)
      : cfg(sharing::make_config(n, t, q, l, seed, mode)), transport(n), session(cfg, transport) {}

  std::uint64_t open(const Shared& x) { return sharing::reconstruct(x, cfg).value(); }
};

std::vector<OwnedInput> owned(const std::vector<std::uint64_t>& values, int n) {
  std::vector<OwnedInput> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.push_back(OwnedInput{static_cast<int>(i % static_cast<std::size_t>(n)) + 1, values[i]});
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Every message group delivering a reconstruction set (>= t+1 senders to
// one receiver in one step) must be a labeled reveal or a dealing round
// (one message per dealer polynomial), and the reveal events must be
// exactly the expected ones.
void check_reveal_discipline(const runtime::Transcript& t, int threshold,
                             const std::vector<std::string>& expected_reveal_steps) {
  std::map<std::tuple<int, std::string, int>, std::set<int>> senders;
  for (const auto& m : t.messages) senders[{m.round, m.step, m.to}].insert(m.from);
  for (const auto& [key, froms] : senders) {
    if (static_cast<int>(froms.size()) < threshold + 1) continue;
    const std::string& step = std::get<1>(key);
    const bool is_reveal = ends_with(step, "reveal");
    const bool is_dealing_round = ends_with(step, "jrand") || ends_with(step, "fold") ||
                                  ends_with(step, "mask") || ends_with(step, "zero") ||
                                  ends_with(step, "select");
    CHECK((is_reveal || is_dealing_round));
  }
  std::multiset<std::string> seen;
  for (const auto& r : t.reveals) seen.insert(r.step);
  std::multiset<std::string> expected(expected_reveal_steps.begin(), expected_reveal_steps.end());
  CHECK(seen == expected);
}

}  // namespace

TEST_CASE("secure comparison reveals only the masked product") {
  Net net(3, 1, field::kMersenne61, 4, 11);
  auto outcome = protocols::secure_compare(net.session, 1, 10, 2, 9);
  CHECK(outcome.revealed.is_zero());
  CHECK(outcome.verdict == Verdict::kFirstGreater);
  check_reveal_discipline(net.session.transcript(), net.cfg.t,
                          {"cmp/jrandnz/reveal", "cmp/reveal"});
}

TEST_CASE("comparison verdicts") {
  {
    Net net(3, 1, field::kMersenne61, 4, 12);
    auto outcome = protocols::secure_compare(net.session, 1, 9, 2, 10);
    CHECK(!outcome.revealed.is_zero());
    CHECK(outcome.verdict == Verdict::kNotGreater);
  }
  for (std::uint64_t a : std::initializer_list<std::uint64_t>{0, 7, 15}) {
    Net net(3, 1, field::kMersenne61, 4, 13 + a);
    CHECK(protocols::secure_compare(net.session, 1, a, 2, a).verdict == Verdict::kNotGreater);
  }
}

TEST_CASE("comparison agrees with plaintext exhaustively at l=3") {
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b) {
      Net net(3, 1, 257, 3, 100 + 8 * a + b);
      auto outcome = protocols::secure_compare(net.session, 1, a, 2, b);
      REQUIRE((outcome.verdict == Verdict::kFirstGreater) == (a > b));
    }
}

TEST_CASE("zero indicator is exact over a whole field") {
  for (std::uint64_t x = 0; x < 13; ++x) {
    Net net(3, 1, 13, 1, 40 + x, encoding::Mode::kRaw);
    auto shared = net.session.deal(1, field::FieldElement(x, net.cfg.field), "share");
    auto ind = protocols::zero_indicator(net.session, shared);
    REQUIRE(net.open(ind) == (x == 0 ? 0 : 1));
    CHECK(net.session.transcript().reveals.empty());
  }
}

TEST_CASE("equality test is exact over all pairs") {
  for (std::uint64_t x = 0; x < 11; ++x)
    for (std::uint64_t y = 0; y < 11; ++y) {
      Net net(3, 1, 11, 1, 60 + 11 * x + y, encoding::Mode::kRaw);
      auto xs = net.session.deal(1, field::FieldElement(x, net.cfg.field), "share");
      auto ys = net.session.deal(2, field::FieldElement(y, net.cfg.field), "share");
      REQUIRE(net.open(protocols::equality_test(net.session, xs, ys)) == (x == y ? 0 : 1));
    }
}

namespace {

protocols::GateValue encode_and_deal(Net& net, int owner, std::uint64_t value,
                                     std::optional<std::uint64_t> index = std::nullopt) {
  return protocols::share_encoded_input(net.session, owner, value, net.cfg.l, index, false);
}

}  // namespace

TEST_CASE("comparison indicator gate stays shared") {
  Net net(3, 1, field::kMersenne61, 4, 70);
  auto a = encode_and_deal(net, 1, 10);
  auto b = encode_and_deal(net, 2, 9);
  auto g = protocols::sci(net.session, a.partition, b.zero_coded);
  CHECK(net.open(g) == 0);  // first greater
  CHECK(net.session.transcript().reveals.empty());

  auto c = encode_and_deal(net, 1, 9);
  auto d = encode_and_deal(net, 2, 9);
  CHECK(net.open(protocols::sci(net.session, c.partition, d.zero_coded)) == 1);  // equal
}

TEST_CASE("indicator gate agrees with plaintext exhaustively at l=3") {
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b) {
      Net net(3, 1, 257, 3, 200 + 8 * a + b);
      auto ga = encode_and_deal(net, 1, a);
      auto gb = encode_and_deal(net, 2, b);
      auto g = protocols::sci(net.session, ga.partition, gb.zero_coded);
      REQUIRE(net.open(g) == (a > b ? 0 : 1));
    }
}

TEST_CASE("comparison gate forwards the encodings of the maximum") {
  Net net(3, 1, field::kMersenne61, 4, 80);
  auto a = encode_and_deal(net, 1, 10);
  auto b = encode_and_deal(net, 2, 9);
  auto out = protocols::scg(net.session, a, b);
  // Last partition entry decodes to the max value.
  auto last = net.open(mpc::last_component(out.partition));
  CHECK(encoding::decode_last_entry(field::FieldElement(last, net.cfg.field), 4) == 10);
  // The full output equals a's vectors (selection, not re-encoding).
  for (int i = 0; i < 4; ++i) {
    CHECK(net.open(mpc::vector_component(out.partition, i)) ==
          net.open(mpc::vector_component(a.partition, i)));
    CHECK(net.open(mpc::vector_component(out.zero_coded, i)) ==
          net.open(mpc::vector_component(a.zero_coded, i)));
  }
  CHECK(net.session.transcript().reveals.empty());
}

TEST_CASE("comparison gate ties select the second operand") {
  Net net(3, 1, field::kMersenne61, 4, 81);
  auto a = encode_and_deal(net, 1, 9);
  auto b = encode_and_deal(net, 2, 9);
  auto out = protocols::scg(net.session, a, b);
  for (int i = 0; i < 4; ++i) {
    CHECK(net.open(mpc::vector_component(out.zero_coded, i)) ==
          net.open(mpc::vector_component(b.zero_coded, i)));
  }
}

TEST_CASE("chained gates compute a running maximum") {
  field::Rng rng(82);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t a = rng.next_u64() % 16, b = rng.next_u64() % 16,
                        c = rng.next_u64() % 16;
    Net net(3, 1, field::kMersenne61, 4, 8200 + trial);
    auto ga = encode_and_deal(net, 1, a);
    auto gb = encode_and_deal(net, 2, b);
    auto gc = encode_and_deal(net, 3, c);
    auto out = protocols::scg(net.session, protocols::scg(net.session, ga, gb), gc);
    auto last = net.open(mpc::last_component(out.partition));
    REQUIRE(encoding::decode_last_entry(field::FieldElement(last, net.cfg.field), 4) ==
            oracles::max_of({a, b, c}));
  }
}

TEST_CASE("extended gate carries the winner index") {
  Net net(3, 1, field::kMersenne61, 4, 83);
  auto a = encode_and_deal(net, 1, 10, 1);
  auto b = encode_and_deal(net, 2, 9, 2);
  auto out = protocols::escg(net.session, a, b);
  CHECK(net.open(*out.index) == 1);

  auto c = encode_and_deal(net, 1, 5, 1);
  auto d = encode_and_deal(net, 2, 5, 2);
  CHECK(net.open(*protocols::escg(net.session, c, d).index) == 2);  // tie -> second operand
}

TEST_CASE("four-bidder tournaments pick the plaintext winner") {
  field::Rng rng(84);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::uint64_t> bids;
    for (int i = 0; i < 4; ++i) bids.push_back(rng.next_u64() % 8);
    Net net(4, 1, 257, 3, 84000 + trial);
    auto r = protocols::max_circuit(net.session, owned(bids, 4), true);
    REQUIRE(r.value == oracles::max_of(bids));
    REQUIRE(*r.winner_index == oracles::argmax_last(bids));
  }
}

TEST_CASE("max circuit") {
  SUBCASE("known inputs") {
    Net net(4, 1, field::kMersenne61, 4, 90);
    auto r = protocols::max_circuit(net.session, owned({3, 9, 4, 1}, 4), false);
    CHECK(r.value == 9);
    check_reveal_discipline(net.session.transcript(), net.cfg.t, {"max/reveal"});
  }
  SUBCASE("single input needs no gates") {
    Net net(3, 1, field::kMersenne61, 4, 91);
    auto r = protocols::max_circuit(net.session, {{1, 13}}, false);
    CHECK(r.value == 13);
    CHECK(net.session.counter().total == 0);
  }
  SUBCASE("winner index via the extended gate") {
    Net net(4, 1, field::kMersenne61, 4, 92);
    auto r = protocols::max_circuit(net.session, owned({3, 9, 4, 1}, 4), true);
    CHECK(r.value == 9);
    CHECK(r.winner_index == 2);
  }
  SUBCASE("invocation bound") {
    const int k = 6;
    Net net(3, 1, 257, 3, 93);
    std::vector<std::uint64_t> vals;
    for (int i = 0; i < k; ++i) vals.push_back(static_cast<std::uint64_t>((3 * i) % 8));
    protocols::max_circuit(net.session, owned(vals, 3), false);
    const std::uint64_t lq = net.cfg.field.bit_length_q();
    CHECK(net.session.counter().total <= (k - 1) * (5 * lq + 2));
  }
  SUBCASE("tournament winners match the oracle") {
    field::Rng rng(94);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::uint64_t> vals;
      const int k = 2 + static_cast<int>(rng.next_u64() % 6);
      for (int i = 0; i < k; ++i) vals.push_back(rng.next_u64() % 16);
      Net net(3, 1, field::kMersenne61, 4, 9400 + trial);
      auto r = protocols::max_circuit(net.session, owned(vals, 3), true);
      REQUIRE(r.value == oracles::max_of(vals));
      REQUIRE(*r.winner_index == oracles::argmax_last(vals));
    }
  }
}

TEST_CASE("min circuit") {
  {
    Net net(3, 1, field::kMersenne61, 4, 95);
    CHECK(protocols::min_circuit(net.session, owned({3, 9, 4}, 3)).value == 3);
  }
  {
    Net net(3, 1, field::kMersenne61, 4, 96);
    CHECK(protocols::min_circuit(net.session, {{2, 11}}).value == 11);
  }
  // Complement identity across a spread of l=3 triples.
  for (std::uint64_t packed = 0; packed < 512; packed += 7) {
    const std::uint64_t a = packed & 7, b = (packed >> 3) & 7, c = (packed >> 6) & 7;
    Net net(3, 1, 257, 3, 9700 + packed);
    REQUIRE(protocols::min_circuit(net.session, owned({a, b, c}, 3)).value ==
            oracles::min_of({a, b, c}));
  }
}

TEST_CASE("median circuit") {
  {
    Net net(3, 1, field::kMersenne61, 4, 101);
    auto r = protocols::median_circuit(net.session, owned({5, 1, 9}, 3));
    CHECK(r.value == 5);
    CHECK(r.owner == 1);
  }
  {
    Net net(4, 1, field::kMersenne61, 4, 102);
    // Four distinct inputs: the element with exactly two smaller others.
    CHECK(protocols::median_circuit(net.session, owned({1, 2, 3, 4}, 4)).value == 3);
  }
  {
    Net net(1, 0, field::kMersenne61, 4, 103);
    CHECK(protocols::median_circuit(net.session, {{1, 7}}).value == 7);
  }
  SUBCASE("ties without preprocessing exhaust the scan") {
    Net net(3, 1, field::kMersenne61, 4, 104);
    CHECK_THROWS_AS(protocols::median_circuit(net.session, owned({5, 5, 5}, 3)),
                    std::runtime_error);
  }
  SUBCASE("tie-safe preprocessing handles duplicates") {
    Net net(3, 1, field::kMersenne61, 4, 105);
    CHECK(protocols::median_circuit(net.session, owned({7, 7, 2}, 3), true).value == 7);
    Net net2(3, 1, field::kMersenne61, 4, 106);
    CHECK(protocols::median_circuit(net2.session, owned({5, 5, 5}, 3), true).value == 5);
  }
  SUBCASE("random distinct sets against the sort oracle") {
    field::Rng rng(107);
    for (int trial = 0; trial < 30; ++trial) {
      std::set<std::uint64_t> distinct;
      while (distinct.size() < 5) distinct.insert(rng.next_u64() % 64);
      std::vector<std::uint64_t> vals(distinct.begin(), distinct.end());
      // Shuffle deterministically.
      for (std::size_t i = vals.size(); i > 1; --i)
        std::swap(vals[i - 1], vals[rng.next_u64() % i]);
      Net net(5, 2, field::kMersenne61, 6, 10700 + trial);
      REQUIRE(protocols::median_circuit(net.session, owned(vals, 5)).value ==
              oracles::median_of(vals));
    }
  }
}

TEST_CASE("rank circuit") {
  {
    Net net(3, 1, field::kMersenne61, 4, 110);
    CHECK(protocols::rank_circuit(net.session, owned({5, 1, 9}, 3), 0).value == 9);
  }
  {
    Net net(3, 1, field::kMersenne61, 4, 111);
    CHECK(protocols::rank_circuit(net.session, owned({5, 1, 9}, 3), 2).value == 1);
  }
  {
    Net net(3, 1, field::kMersenne61, 4, 112);
    CHECK_THROWS_AS(protocols::rank_circuit(net.session, owned({5, 1, 9}, 3), 3),
                    std::invalid_argument);
  }
  SUBCASE("every rank of random distinct sets") {
    field::Rng rng(113);
    for (int trial = 0; trial < 10; ++trial) {
      std::set<std::uint64_t> distinct;
      while (distinct.size() < 4) distinct.insert(rng.next_u64() % 16);
      std::vector<std::uint64_t> vals(distinct.begin(), distinct.end());
      std::swap(vals[0], vals[3]);
      for (int t = 0; t < 4; ++t) {
        Net net(4, 1, field::kMersenne61, 4, 11300 + 10 * trial + t);
        REQUIRE(protocols::rank_circuit(net.session, owned(vals, 4), t).value ==
                oracles::rank_of(vals, t));
      }
    }
  }
}

TEST_CASE("outlier distances") {
  Net net(4, 1, field::kMersenne61, 4, 120);
  // Three clients, the extra party acts as the server.
  auto d = protocols::outlier_distances(net.session, owned({1, 5, 9}, 3), 4);
  CHECK(d == std::vector<std::uint64_t>{16, 0, 16});

  // Routing: distance reconstruction sets reach only the server.
  for (const auto& m : net.session.transcript().messages) {
    if (m.step.find("/d") != std::string::npos && ends_with(m.step, "reveal")) CHECK(m.to == 4);
  }

  SUBCASE("properties on random distinct inputs") {
    field::Rng rng(121);
    for (int trial = 0; trial < 20; ++trial) {
      std::set<std::uint64_t> distinct;
      while (distinct.size() < 3) distinct.insert(rng.next_u64() % 16);
      std::vector<std::uint64_t> vals(distinct.begin(), distinct.end());
      std::swap(vals[0], vals[2]);
      Net n2(4, 1, field::kMersenne61, 4, 12100 + trial);
      auto dd = protocols::outlier_distances(n2.session, owned(vals, 3), 4);
      REQUIRE(dd == oracles::outlier_distances_of(vals));
      std::uint64_t zeros = 0;
      for (auto v : dd) zeros += (v == 0);
      REQUIRE(zeros == 1);  // exactly the median's own distance
    }
  }
}

TEST_CASE("maximin") {
  {
    Net net(4, 1, field::kMersenne61, 4, 130);
    auto r = protocols::maximin(net.session, {owned({3, 7}, 4), {{3, 5}, {4, 6}}});
    CHECK(r.value == 5);
    CHECK(r.group == 2);
  }
  {
    Net net(3, 1, field::kMersenne61, 4, 131);
    auto r = protocols::maximin(net.session, {owned({9, 4, 6}, 3)});
    CHECK(r.value == 4);
    CHECK(r.group == 1);
  }
  SUBCASE("random instances against the oracle") {
    field::Rng rng(132);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<std::vector<std::uint64_t>> groups(3);
      for (auto& g : groups)
        for (int i = 0; i < 3; ++i) g.push_back(rng.next_u64() % 16);
      Net net(3, 1, field::kMersenne61, 4, 13200 + trial);
      std::vector<std::vector<OwnedInput>> owned_groups;
      int owner = 1;
      for (const auto& g : groups) {
        std::vector<OwnedInput> og;
        for (auto v : g) {
          og.push_back({owner, v});
          owner = owner % 3 + 1;
        }
        owned_groups.push_back(og);
      }
      auto r = protocols::maximin(net.session, owned_groups);
      auto expect = oracles::maximin_of(groups);
      REQUIRE(r.value == expect.value);
      REQUIRE(r.group == expect.group);
    }
  }
  {
    Net net(3, 1, field::kMersenne61, 4, 133);
    CHECK_THROWS_AS(protocols::maximin(net.session, {owned({1, 2}, 3), {}}),
                    std::invalid_argument);
  }
}

TEST_CASE("circuits require sentinel encodings") {
  Net net(3, 1, 11, 1, 140, encoding::Mode::kRaw);
  CHECK_THROWS_AS(protocols::max_circuit(net.session, {{1, 1}}, false), std::invalid_argument);
  CHECK_THROWS_AS(protocols::median_circuit(net.session, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("inputs out of range are rejected") {
  Net net(3, 1, field::kMersenne61, 4, 141);
  CHECK_THROWS_AS(protocols::secure_compare(net.session, 1, 16, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(protocols::max_circuit(net.session, {{1, 16}}, false), std::invalid_argument);
}
