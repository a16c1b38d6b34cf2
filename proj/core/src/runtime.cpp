#include "mpcmp/runtime.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpcmp::runtime {

using field::FieldElement;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string expect_field(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.size() < prefix.size() || token.compare(0, prefix.size(), prefix) != 0)
    throw std::invalid_argument("record: expected '" + key + "=', got '" + token + "'");
  return token.substr(prefix.size());
}

int parse_int(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("record: empty integer field");
  return std::stoi(s);
}

std::uint64_t parse_u64(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("record: empty integer field");
  return std::stoull(s);
}

}  // namespace

std::string format_message(const Message& m) {
  std::ostringstream os;
  os << "msg session=" << m.session_id << " round=" << m.round << " step=" << m.step
     << " from=" << m.from << " to=" << m.to << " payload=";
  for (std::size_t i = 0; i < m.payload.size(); ++i) {
    if (i) os << ',';
    os << m.payload[i];
  }
  return os.str();
}

Message parse_message(const std::string& line) {
  const auto tokens = split(line, ' ');
  if (tokens.size() != 7 || tokens[0] != "msg")
    throw std::invalid_argument("record: malformed message line '" + line + "'");
  Message m;
  m.session_id = expect_field(tokens[1], "session");
  m.round = parse_int(expect_field(tokens[2], "round"));
  m.step = expect_field(tokens[3], "step");
  m.from = parse_int(expect_field(tokens[4], "from"));
  m.to = parse_int(expect_field(tokens[5], "to"));
  const std::string payload = expect_field(tokens[6], "payload");
  if (!payload.empty()) m.payload = split(payload, ',');
  return m;
}

std::vector<Message> Transcript::party_view(int party) const {
  std::vector<Message> out;
  for (const auto& m : messages)
    if (m.to == party || m.from == party) out.push_back(m);
  return out;
}

// --------------------------------------------------------------------------
// in-memory transport

InMemoryTransport::InMemoryTransport(int n) : n_(n), queues_(static_cast<std::size_t>(n) * n) {}

void InMemoryTransport::send(const Message& m) {
  if (m.from < 1 || m.from > n_ || m.to < 1 || m.to > n_)
    throw std::invalid_argument("transport: party index out of range");
  if (m.from == m.to) throw std::invalid_argument("transport: message to self rejected");
  queues_[static_cast<std::size_t>(m.from - 1) * n_ + (m.to - 1)].push_back(m);
}

Message InMemoryTransport::recv(int to, int from) {
  if (from < 1 || from > n_ || to < 1 || to > n_)
    throw std::invalid_argument("transport: party index out of range");
  auto& q = queues_[static_cast<std::size_t>(from - 1) * n_ + (to - 1)];
  if (q.empty())
    throw std::runtime_error("transport: no pending message from " + std::to_string(from) +
                             " to " + std::to_string(to));
  Message m = std::move(q.front());
  q.pop_front();
  return m;
}

// --------------------------------------------------------------------------
// TCP loopback transport

namespace {

void write_all(int fd, const void* buf, std::size_t len) {
  const char* p = static_cast<const char*>(buf);
  while (len > 0) {
    ssize_t w = ::write(fd, p, len);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(std::string("transport: write failed: ") + std::strerror(errno));
    }
    p += w;
    len -= static_cast<std::size_t>(w);
  }
}

void read_all(int fd, void* buf, std::size_t len) {
  char* p = static_cast<char*>(buf);
  while (len > 0) {
    ssize_t r = ::read(fd, p, len);
    if (r == 0) throw std::runtime_error("transport: peer disconnected");
    if (r < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK)
        throw std::runtime_error("transport: receive timeout");
      throw std::runtime_error(std::string("transport: read failed: ") + std::strerror(errno));
    }
    p += r;
    len -= static_cast<std::size_t>(r);
  }
}

}  // namespace

int TcpTransport::fd(int owner, int peer) const {
  return fds_[static_cast<std::size_t>(owner - 1) * n_ + (peer - 1)];
}

TcpTransport::TcpTransport(int n, int base_port, int timeout_ms)
    : n_(n), fds_(static_cast<std::size_t>(n) * n, -1) {
  std::vector<int> listeners(n + 1, -1);
  auto fail = [&](const std::string& what) {
    for (int fd : listeners)
      if (fd >= 0) ::close(fd);
    for (int fd : fds_)
      if (fd >= 0) ::close(fd);
    throw std::runtime_error("transport: " + what + ": " + std::strerror(errno));
  };
  for (int i = 1; i <= n; ++i) {
    int ls = ::socket(AF_INET, SOCK_STREAM, 0);
    if (ls < 0) fail("socket");
    listeners[i] = ls;
    int one = 1;
    ::setsockopt(ls, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(base_port + i));
    if (::bind(ls, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) fail("bind");
    if (::listen(ls, n) < 0) fail("listen");
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      // Party j dials party i's listener, then identifies itself.
      int c = ::socket(AF_INET, SOCK_STREAM, 0);
      if (c < 0) fail("socket");
      fds_[static_cast<std::size_t>(j - 1) * n_ + (i - 1)] = c;
      sockaddr_in addr{};
      addr.sin_family = AF_INET;
      addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
      addr.sin_port = htons(static_cast<std::uint16_t>(base_port + i));
      if (::connect(c, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) fail("connect");
      int a = ::accept(listeners[i], nullptr, nullptr);
      if (a < 0) fail("accept");
      fds_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)] = a;
      send_frame(j, i, "hello from=" + std::to_string(j));
      std::string hello = recv_frame(i, j);
      if (hello != "hello from=" + std::to_string(j)) {
        errno = EPROTO;
        fail("handshake");
      }
    }
  }
  for (int i = 1; i <= n; ++i) ::close(listeners[i]);
  timeval tv{};
  tv.tv_sec = timeout_ms / 1000;
  tv.tv_usec = (timeout_ms % 1000) * 1000;
  for (int fd : fds_) {
    if (fd < 0) continue;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
}

TcpTransport::~TcpTransport() {
  for (int fd : fds_)
    if (fd >= 0) ::close(fd);
}

void TcpTransport::send_frame(int owner, int peer, const std::string& record) {
  std::uint32_t len = htonl(static_cast<std::uint32_t>(record.size()));
  write_all(fd(owner, peer), &len, sizeof(len));
  write_all(fd(owner, peer), record.data(), record.size());
}

std::string TcpTransport::recv_frame(int owner, int peer) {
  std::uint32_t len = 0;
  read_all(fd(owner, peer), &len, sizeof(len));
  len = ntohl(len);
  if (len > (1u << 24)) throw std::runtime_error("transport: oversized frame");
  std::string record(len, '\0');
  read_all(fd(owner, peer), record.data(), len);
  return record;
}

void TcpTransport::begin_round(int round) {
  if (n_ == 1) return;
  const std::string tag = "ack round=" + std::to_string(round);
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      if (j != i) send_frame(i, j, tag + " from=" + std::to_string(i));
  for (int i = 1; i <= n_; ++i) {
    for (int j = 1; j <= n_; ++j) {
      if (j == i) continue;
      std::string got = recv_frame(i, j);
      if (got != tag + " from=" + std::to_string(j))
        throw std::runtime_error("transport: round desync at party " + std::to_string(i) +
                                 ", expected '" + tag + "' from " + std::to_string(j) + ", got '" +
                                 got + "'");
    }
  }
}

void TcpTransport::send(const Message& m) {
  if (m.from < 1 || m.from > n_ || m.to < 1 || m.to > n_)
    throw std::invalid_argument("transport: party index out of range");
  if (m.from == m.to) throw std::invalid_argument("transport: message to self rejected");
  send_frame(m.from, m.to, format_message(m));
}

Message TcpTransport::recv(int to, int from) {
  std::string record = recv_frame(to, from);
  if (record.compare(0, 4, "msg ") != 0)
    throw std::runtime_error("transport: expected message frame, got '" + record + "'");
  return parse_message(record);
}

// --------------------------------------------------------------------------
// session

Session::Session(sharing::ProtocolConfig cfg, Transport& transport, std::string session_id)
    : cfg_(std::move(cfg)), transport_(transport), session_id_(std::move(session_id)) {
  sharing::validate_config(cfg_);
  if (transport_.parties() != cfg_.n)
    throw std::invalid_argument("session: transport sized for " +
                                std::to_string(transport_.parties()) + " parties, config has " +
                                std::to_string(cfg_.n));
  rngs_.reserve(cfg_.n);
  for (int p = 1; p <= cfg_.n; ++p)
    rngs_.emplace_back(field::splitmix64(cfg_.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(p))));
  weights_ = field::lagrange_weights_at_zero(cfg_.alphas);
  transcript_.cfg = cfg_;
  transcript_.session_id = session_id_;
}

field::Rng& Session::rng(int party) {
  if (party < 1 || party > cfg_.n) throw std::invalid_argument("session: party index out of range");
  return rngs_[party - 1];
}

void Session::push_scope(std::string_view scope) { scopes_.emplace_back(scope); }

void Session::pop_scope() {
  if (scopes_.empty()) throw std::logic_error("session: scope underflow");
  scopes_.pop_back();
}

std::string Session::label(std::string_view step) const {
  std::string out;
  for (const auto& s : scopes_) {
    out += s;
    out += '/';
  }
  out += step;
  return out;
}

void Session::dispatch(Message m) {
  if (record_messages) transcript_.messages.push_back(m);
  if (message_observer) message_observer(m);
  transport_.send(m);
}

Message Session::take(int to, int from, int round, const std::string& step) {
  Message m = transport_.recv(to, from);
  if (m.session_id != session_id_ || m.round != round || m.step != step || m.from != from ||
      m.to != to)
    throw std::runtime_error("session: unexpected message '" + format_message(m) +
                             "' while waiting for step " + step + " round " +
                             std::to_string(round) + " from " + std::to_string(from) + " to " +
                             std::to_string(to));
  return m;
}

FieldElement Session::parse_element(const std::string& s) const {
  return field::element_from_string(s, cfg_.field);
}

sharing::Shared Session::deal(int owner, const FieldElement& value, std::string_view step) {
  if (owner < 1 || owner > cfg_.n) throw std::invalid_argument("session: dealer index out of range");
  const std::string lbl = label(step);
  const sharing::Shared dealt = sharing::share_secret(value, cfg_, rng(owner));
  ++round_;
  transport_.begin_round(round_);
  for (int j = 1; j <= cfg_.n; ++j) {
    if (j == owner) continue;
    dispatch(Message{session_id_, round_, lbl, owner, j, {field::to_string(dealt[j - 1].value)}});
  }
  sharing::Shared out(cfg_.n);
  for (int j = 1; j <= cfg_.n; ++j) {
    if (j == owner) {
      out[j - 1] = dealt[j - 1];
      continue;
    }
    Message m = take(j, owner, round_, lbl);
    if (m.payload.size() != 1) throw std::runtime_error("session: bad dealing payload size");
    out[j - 1] = sharing::Share{j, parse_element(m.payload[0]), cfg_.t};
  }
  return out;
}

sharing::SharedVec Session::deal_vector(int owner, const std::vector<FieldElement>& values,
                                        std::string_view step) {
  if (owner < 1 || owner > cfg_.n) throw std::invalid_argument("session: dealer index out of range");
  if (values.empty()) throw std::invalid_argument("session: empty vector dealing");
  const std::string lbl = label(step);
  const sharing::SharedVec dealt = sharing::share_vector(values, cfg_, rng(owner));
  ++round_;
  transport_.begin_round(round_);
  for (int j = 1; j <= cfg_.n; ++j) {
    if (j == owner) continue;
    std::vector<std::string> payload;
    payload.reserve(values.size());
    for (const auto& v : dealt[j - 1].values) payload.push_back(field::to_string(v));
    dispatch(Message{session_id_, round_, lbl, owner, j, std::move(payload)});
  }
  sharing::SharedVec out(cfg_.n);
  for (int j = 1; j <= cfg_.n; ++j) {
    out[j - 1].party = j;
    out[j - 1].degree_hint = cfg_.t;
    if (j == owner) {
      out[j - 1].values = dealt[j - 1].values;
      continue;
    }
    Message m = take(j, owner, round_, lbl);
    if (m.payload.size() != values.size())
      throw std::runtime_error("session: bad vector dealing payload size");
    out[j - 1].values.reserve(values.size());
    for (const auto& s : m.payload) out[j - 1].values.push_back(parse_element(s));
  }
  return out;
}

sharing::Shared Session::weighted_dealing_sum(
    const std::function<FieldElement(int)>& contribution,
    const std::vector<FieldElement>& weights, std::string_view step) {
  if (static_cast<int>(weights.size()) != cfg_.n)
    throw std::invalid_argument("session: need one combining weight per party");
  const std::string lbl = label(step);
  std::vector<sharing::Shared> dealt;
  dealt.reserve(cfg_.n);
  for (int p = 1; p <= cfg_.n; ++p) dealt.push_back(sharing::share_secret(contribution(p), cfg_, rng(p)));
  ++round_;
  transport_.begin_round(round_);
  for (int p = 1; p <= cfg_.n; ++p)
    for (int j = 1; j <= cfg_.n; ++j) {
      if (j == p) continue;
      dispatch(Message{session_id_, round_, lbl, p, j, {field::to_string(dealt[p - 1][j - 1].value)}});
    }
  sharing::Shared out(cfg_.n);
  for (int j = 1; j <= cfg_.n; ++j) {
    FieldElement acc(0, cfg_.field);
    for (int p = 1; p <= cfg_.n; ++p) {
      FieldElement sub_share = (p == j)
                                   ? dealt[p - 1][j - 1].value
                                   : parse_element(take(j, p, round_, lbl).payload.at(0));
      acc = field::add(acc, field::mul(weights[p - 1], sub_share));
    }
    out[j - 1] = sharing::Share{j, acc, cfg_.t};
  }
  return out;
}

FieldElement Session::reveal(const sharing::Shared& x, std::string_view step) {
  if (static_cast<int>(x.size()) != cfg_.n)
    throw std::invalid_argument("session: reveal needs one share per party");
  const std::string lbl = label(step);
  ++round_;
  transport_.begin_round(round_);
  for (int from = 1; from <= cfg_.n; ++from)
    for (int to = 1; to <= cfg_.n; ++to) {
      if (to == from) continue;
      dispatch(Message{session_id_, round_, lbl, from, to, {field::to_string(x[from - 1].value)}});
    }
  std::optional<FieldElement> common;
  for (int to = 1; to <= cfg_.n; ++to) {
    std::vector<std::pair<FieldElement, FieldElement>> points;
    points.reserve(cfg_.n);
    for (int from = 1; from <= cfg_.n; ++from) {
      FieldElement v =
          (from == to) ? x[to - 1].value : parse_element(take(to, from, round_, lbl).payload.at(0));
      points.emplace_back(cfg_.alphas[from - 1], v);
    }
    FieldElement val = field::interpolate_at_zero(points);
    if (!common) {
      common = val;
    } else if (!(*common == val)) {
      throw std::runtime_error("session: parties reconstructed different values at step " + lbl);
    }
  }
  transcript_.reveals.push_back(RevealEvent{round_, lbl, field::to_string(*common)});
  return *common;
}

FieldElement Session::reveal_to(const sharing::Shared& x, int server, std::string_view step) {
  if (server < 1 || server > cfg_.n) throw std::invalid_argument("session: server index out of range");
  if (static_cast<int>(x.size()) != cfg_.n)
    throw std::invalid_argument("session: reveal needs one share per party");
  const std::string lbl = label(step);
  ++round_;
  transport_.begin_round(round_);
  for (int from = 1; from <= cfg_.n; ++from) {
    if (from == server) continue;
    dispatch(Message{session_id_, round_, lbl, from, server, {field::to_string(x[from - 1].value)}});
  }
  std::vector<std::pair<FieldElement, FieldElement>> points;
  points.reserve(cfg_.n);
  for (int from = 1; from <= cfg_.n; ++from) {
    FieldElement v = (from == server) ? x[server - 1].value
                                      : parse_element(take(server, from, round_, lbl).payload.at(0));
    points.emplace_back(cfg_.alphas[from - 1], v);
  }
  FieldElement val = field::interpolate_at_zero(points);
  transcript_.reveals.push_back(RevealEvent{round_, lbl, field::to_string(val)});
  return val;
}

// --------------------------------------------------------------------------
// transcript files

namespace {

std::string mode_name(encoding::Mode m) {
  return m == encoding::Mode::kSentinel ? "sentinel" : "raw";
}

encoding::Mode mode_from_name(const std::string& s) {
  if (s == "sentinel") return encoding::Mode::kSentinel;
  if (s == "raw") return encoding::Mode::kRaw;
  throw std::invalid_argument("record: unknown encoding mode '" + s + "'");
}

}  // namespace

void export_transcript(const Transcript& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("transcript: cannot open '" + path + "' for writing");
  // One config record up front, messages and events after it.
  out << "config n=" << t.cfg.n << " t=" << t.cfg.t << " q=" << t.cfg.field.q() << " l=" << t.cfg.l
      << " mode=" << mode_name(t.cfg.mode) << " alphas=";
  for (int i = 0; i < t.cfg.n; ++i) {
    if (i) out << ',';
    out << t.cfg.alphas[i].value();
  }
  out << " seed=" << t.cfg.seed << " protocol=" << t.protocol << " session=" << t.session_id;
  for (const auto& [k, v] : t.params) out << ' ' << k << '=' << v;
  out << '\n';
  for (const auto& m : t.messages) out << format_message(m) << '\n';
  for (const auto& r : t.reveals)
    out << "reveal round=" << r.round << " step=" << r.step << " value=" << r.value << '\n';
  for (const auto& [step, n] : t.counters) out << "counter step=" << step << " count=" << n << '\n';
  out << "counter_total count=" << t.counter_total << '\n';
  for (std::size_t p = 0; p < t.party_outputs.size(); ++p)
    out << "output party=" << (p + 1) << " record=" << t.party_outputs[p] << '\n';
  if (!out) throw std::runtime_error("transcript: write to '" + path + "' failed");
}

Transcript import_transcript(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("transcript: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("transcript: missing config line");
  Transcript t;
  {
    const auto tokens = split(line, ' ');
    if (tokens.size() < 10 || tokens[0] != "config")
      throw std::invalid_argument("transcript: malformed config line in '" + path + "'");
    const int n = parse_int(expect_field(tokens[1], "n"));
    const int tt = parse_int(expect_field(tokens[2], "t"));
    const std::uint64_t q = parse_u64(expect_field(tokens[3], "q"));
    const int l = parse_int(expect_field(tokens[4], "l"));
    const encoding::Mode mode = mode_from_name(expect_field(tokens[5], "mode"));
    const auto alpha_strs = split(expect_field(tokens[6], "alphas"), ',');
    const std::uint64_t seed = parse_u64(expect_field(tokens[7], "seed"));
    field::FieldConfig fc(q);
    std::vector<FieldElement> alphas;
    for (const auto& a : alpha_strs) alphas.push_back(FieldElement(parse_u64(a), fc));
    t.cfg = sharing::make_config(n, tt, q, l, seed, mode, std::move(alphas));
    t.protocol = expect_field(tokens[8], "protocol");
    t.session_id = expect_field(tokens[9], "session");
    for (std::size_t i = 10; i < tokens.size(); ++i) {
      const auto eq = tokens[i].find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("transcript: malformed run parameter '" + tokens[i] + "'");
      t.params[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.compare(0, 4, "msg ") == 0) {
      t.messages.push_back(parse_message(line));
    } else if (line.compare(0, 7, "reveal ") == 0) {
      const auto tokens = split(line, ' ');
      if (tokens.size() != 4) throw std::invalid_argument("transcript: malformed reveal line");
      t.reveals.push_back(RevealEvent{parse_int(expect_field(tokens[1], "round")),
                                      expect_field(tokens[2], "step"),
                                      expect_field(tokens[3], "value")});
    } else if (line.compare(0, 8, "counter ") == 0) {
      const auto tokens = split(line, ' ');
      if (tokens.size() != 3) throw std::invalid_argument("transcript: malformed counter line");
      t.counters[expect_field(tokens[1], "step")] = parse_u64(expect_field(tokens[2], "count"));
    } else if (line.compare(0, 14, "counter_total ") == 0) {
      const auto tokens = split(line, ' ');
      if (tokens.size() != 2) throw std::invalid_argument("transcript: malformed counter total");
      t.counter_total = parse_u64(expect_field(tokens[1], "count"));
    } else if (line.compare(0, 7, "output ") == 0) {
      const std::string party_prefix = "output party=";
      const auto rec = line.find(" record=");
      if (line.compare(0, party_prefix.size(), party_prefix) != 0 || rec == std::string::npos)
        throw std::invalid_argument("transcript: malformed output line");
      const int party = parse_int(line.substr(party_prefix.size(), rec - party_prefix.size()));
      if (party != static_cast<int>(t.party_outputs.size()) + 1)
        throw std::invalid_argument("transcript: output lines out of order");
      t.party_outputs.push_back(line.substr(rec + 8));
    } else {
      throw std::invalid_argument("transcript: unrecognized line '" + line + "'");
    }
  }
  return t;
}

}  // namespace mpcmp::runtime
