#pragma once

// Execution machinery for the protocols: point-to-point messages, a
// replayable transcript, pluggable transports (deterministic in-memory
// and TCP loopback), and the Session that runs parties through
// synchronized rounds.
//
// Every cross-party effect flows through the transport as an explicit
// Message, and a received share is always parsed back from its wire
// payload, so both transports exercise the same serialization. Links are
// private by model assumption; the TCP transport does not encrypt.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpcmp/invocation_counter.hpp"
#include "mpcmp/sharing.hpp"

namespace mpcmp::runtime {

// One point-to-point transmission. Broadcast is N-1 explicit sends.
struct Message {
  std::string session_id;
  int round = 0;
  std::string step;
  int from = 0;  // 1-based party indices
  int to = 0;
  std::vector<std::string> payload;  // field elements as decimal strings

  bool operator==(const Message&) const = default;
};

// Single-line record form used on the wire and in transcript files.
std::string format_message(const Message& m);
Message parse_message(const std::string& line);

struct RevealEvent {
  int round = 0;
  std::string step;
  std::string value;

  bool operator==(const RevealEvent&) const = default;
};

// Replayable record of a session: config and run parameters, every
// message in send order, every reconstruction event, and the final
// invocation counters.
struct Transcript {
  sharing::ProtocolConfig cfg;
  std::string protocol;
  std::map<std::string, std::string> params;  // inputs=, groups=, ...
  std::string session_id;

  std::vector<Message> messages;
  std::vector<RevealEvent> reveals;
  std::map<std::string, std::uint64_t> counters;
  std::uint64_t counter_total = 0;
  std::vector<std::string> party_outputs;

  // Messages visible to one party: its own sends plus what it received.
  std::vector<Message> party_view(int party) const;
};

void export_transcript(const Transcript& t, const std::string& path);
Transcript import_transcript(const std::string& path);

// Point-to-point delivery with per-(from,to) FIFO order. Sends to self
// are rejected. begin_round is a synchronization hook.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual int parties() const = 0;
  virtual void begin_round(int /*round*/) {}
  virtual void send(const Message& m) = 0;
  virtual Message recv(int to, int from) = 0;
};

// Synchronous queues; a recv with no pending message is a protocol bug
// and throws immediately.
class InMemoryTransport : public Transport {
 public:
  explicit InMemoryTransport(int n);
  int parties() const override { return n_; }
  void send(const Message& m) override;
  Message recv(int to, int from) override;

 private:
  int n_;
  std::vector<std::deque<Message>> queues_;  // (from-1)*n + (to-1)
};

// Full localhost mesh; party i listens on base_port + i. Frames are a
// 4-byte big-endian length followed by one message record. Round
// barriers are imposed with per-round acknowledgment frames.
class TcpTransport : public Transport {
 public:
  TcpTransport(int n, int base_port, int timeout_ms = 10000);
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  int parties() const override { return n_; }
  void begin_round(int round) override;
  void send(const Message& m) override;
  Message recv(int to, int from) override;

 private:
  int fd(int owner, int peer) const;
  void send_frame(int owner, int peer, const std::string& record);
  std::string recv_frame(int owner, int peer);

  int n_;
  std::vector<int> fds_;  // endpoint fd of (owner,peer), owner-major
};

// Test-only overrides; production runs leave these empty.
struct TestHooks {
  // Replaces party's contribution in joint random secret generation.
  // attempt is the regeneration count within joint_random_nonzero.
  std::function<std::optional<std::uint64_t>(int party, int attempt)> jrand_contribution;
};

// Runs N logical parties through synchronized rounds. Each party owns a
// deterministic rng derived from the config seed and its index; protocol
// code keeps per-party state confined to that party's slot and moves
// data only through the round primitives below.
class Session {
 public:
  Session(sharing::ProtocolConfig cfg, Transport& transport, std::string session_id = "session");

  const sharing::ProtocolConfig& cfg() const { return cfg_; }
  const field::FieldConfig& fieldcfg() const { return cfg_.field; }
  int n() const { return cfg_.n; }
  int t() const { return cfg_.t; }
  int round() const { return round_; }
  field::Rng& rng(int party);

  // Step labels compose as scope/.../step; scopes identify gates.
  void push_scope(std::string_view scope);
  void pop_scope();
  std::string label(std::string_view step) const;

  // One round: owner deals a fresh degree-T sharing of value.
  sharing::Shared deal(int owner, const field::FieldElement& value, std::string_view step);
  // One round: componentwise dealing with independent randomness.
  sharing::SharedVec deal_vector(int owner, const std::vector<field::FieldElement>& values,
                                 std::string_view step);
  // One round: every party deals contribution(party) as a degree-T
  // sharing and weights its received sub-shares; party i ends up with
  // sum_j weight_j * subshare_{j->i}.
  sharing::Shared weighted_dealing_sum(
      const std::function<field::FieldElement(int)>& contribution,
      const std::vector<field::FieldElement>& weights, std::string_view step);
  // One round: all-to-all broadcast of shares, interpolated at zero by
  // every party; records a reveal event.
  field::FieldElement reveal(const sharing::Shared& x, std::string_view step);
  // One round: shares sent to a single party, which reconstructs.
  field::FieldElement reveal_to(const sharing::Shared& x, int server, std::string_view step);

  // Lagrange weights at zero over all N evaluation points.
  const std::vector<field::FieldElement>& all_party_weights() const { return weights_; }

  mpc::InvocationCounter& counter() { return counter_; }
  Transcript& transcript() { return transcript_; }
  TestHooks& hooks() { return hooks_; }

  bool record_messages = true;
  std::function<void(const Message&)> message_observer;
  int jrand_attempt = 0;

 private:
  void dispatch(Message m);
  Message take(int to, int from, int round, const std::string& step);
  field::FieldElement parse_element(const std::string& s) const;

  sharing::ProtocolConfig cfg_;
  Transport& transport_;
  std::string session_id_;
  int round_ = 0;
  std::vector<field::Rng> rngs_;
  std::vector<field::FieldElement> weights_;
  std::vector<std::string> scopes_;
  mpc::InvocationCounter counter_;
  Transcript transcript_;
  TestHooks hooks_;
};

// Protocol driver shared by the CLI and transcript replay.
struct RunSpec {
  std::string protocol;  // compare sci max min median rank auction minimax outliers
  std::vector<std::uint64_t> inputs;
  std::vector<std::vector<std::uint64_t>> groups;
  int rank_t = 0;
  int server = 0;  // 0 = last party
  bool tie_safe = false;
};

struct RunOptions {
  bool record_messages = true;
  std::string session_id;  // default: protocol name
  TestHooks hooks;
  std::function<void(const Message&)> message_observer;
};

struct RunResult {
  std::vector<std::string> party_outputs;
  Transcript transcript;
};

RunResult run_session(const RunSpec& spec, const sharing::ProtocolConfig& cfg, Transport& transport,
                      const RunOptions& options = {});

struct ReplayReport {
  bool identical = false;
  std::string detail;            // "identical" or a description of the divergence
  int first_divergent_line = 0;  // 1-based line in the transcript file, 0 if none
};

// Re-executes the transcript's run with the recorded config and seed and
// diffs messages and outputs against the file.
ReplayReport replay_transcript(const std::string& path);

// Recovers the run parameters recorded in a transcript header.
RunSpec spec_from_transcript(const Transcript& t);

}  // namespace mpcmp::runtime
