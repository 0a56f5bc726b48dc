#include "protocol.hpp"

#include "error.hpp"

namespace votkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_path(std::string_view path) {
  if (path.empty()) raise(ErrorKind::Protocol, "empty frame path");
  for (char c : path)
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') raise(ErrorKind::Protocol, "frame path contains whitespace");
}

Region protocol_region(std::string_view token, std::string_view line) {
  try {
    return parse_region(token);
  } catch (const Error& e) {
    raise(ErrorKind::Protocol, "bad region in '" + std::string(line) + "': " + e.what());
  }
}

}  // namespace

std::string format_message(const Message& m) {
  return std::visit(overloaded{
                        [](const HelloMessage& h) { return "hello version=" + std::to_string(h.version); },
                        [](const InitializeMessage& i) {
                          check_path(i.path);
                          return "initialize " + i.path + " " + format_region(i.region);
                        },
                        [](const FrameMessage& f) {
                          check_path(f.path);
                          return "frame " + f.path;
                        },
                        [](const StatusMessage& s) { return "status " + format_region(s.region); },
                        [](const QuitMessage&) { return std::string("quit"); },
                    },
                    m);
}

Message parse_message(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  const std::string shown(line.substr(0, 80));
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t sp = line.find(' ', pos);
    const std::size_t end = sp == std::string_view::npos ? line.size() : sp;
    tokens.push_back(line.substr(pos, end - pos));
    if (sp == std::string_view::npos) break;
    pos = sp + 1;
  }
  for (auto t : tokens)
    if (t.empty()) raise(ErrorKind::Protocol, "malformed line '" + shown + "'");

  const auto kind = tokens[0];
  auto expect = [&](std::size_t n) {
    if (tokens.size() != n) raise(ErrorKind::Protocol, "wrong token count in '" + shown + "'");
  };
  if (kind == "hello") {
    expect(2);
    if (tokens[1].substr(0, 8) != "version=") raise(ErrorKind::Protocol, "malformed hello '" + shown + "'");
    const auto v = tokens[1].substr(8);
    if (v != "1") raise(ErrorKind::Protocol, "unsupported protocol version '" + std::string(v) + "'");
    return HelloMessage{kProtocolVersion};
  }
  if (kind == "initialize") {
    expect(3);
    check_path(tokens[1]);
    return InitializeMessage{std::string(tokens[1]), protocol_region(tokens[2], shown)};
  }
  if (kind == "frame") {
    expect(2);
    check_path(tokens[1]);
    return FrameMessage{std::string(tokens[1])};
  }
  if (kind == "status") {
    expect(2);
    return StatusMessage{protocol_region(tokens[1], shown)};
  }
  if (kind == "quit") {
    expect(1);
    return QuitMessage{};
  }
  raise(ErrorKind::Protocol, "unknown message '" + shown + "'");
}

std::vector<TranscriptLine> check_transcript(std::string_view text, const std::string& where) {
  std::vector<TranscriptLine> out;
  enum class State { AwaitHello, AwaitRequest, AwaitStatus, Closed } state = State::AwaitHello;
  bool initialized = false;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const std::string loc = where + ":" + std::to_string(line_no) + ": ";
    if (raw.size() < 3 || (raw[0] != '>' && raw[0] != '<') || raw[1] != ' ')
      raise(ErrorKind::Protocol, loc + "expected '> ' or '< ' prefix");
    TranscriptLine tl;
    tl.from_evaluator = raw[0] == '>';
    try {
      tl.message = parse_message(raw.substr(2));
    } catch (const Error& e) {
      raise(ErrorKind::Protocol, loc + e.what());
    }
    const auto& m = tl.message;
    switch (state) {
      case State::AwaitHello:
        if (tl.from_evaluator || !std::holds_alternative<HelloMessage>(m))
          raise(ErrorKind::Protocol, loc + "session must open with the tracker's hello");
        state = State::AwaitRequest;
        break;
      case State::AwaitRequest:
        if (!tl.from_evaluator) raise(ErrorKind::Protocol, loc + "tracker spoke out of turn");
        if (std::holds_alternative<InitializeMessage>(m)) {
          initialized = true;
          state = State::AwaitStatus;
        } else if (std::holds_alternative<FrameMessage>(m)) {
          if (!initialized) raise(ErrorKind::Protocol, loc + "frame before initialize");
          state = State::AwaitStatus;
        } else if (std::holds_alternative<QuitMessage>(m)) {
          state = State::Closed;
        } else {
          raise(ErrorKind::Protocol, loc + "not an evaluator request");
        }
        break;
      case State::AwaitStatus:
        if (tl.from_evaluator || !std::holds_alternative<StatusMessage>(m))
          raise(ErrorKind::Protocol, loc + "expected a status reply");
        state = State::AwaitRequest;
        break;
      case State::Closed: raise(ErrorKind::Protocol, loc + "traffic after quit");
    }
    out.push_back(std::move(tl));
  }
  if (state != State::Closed) raise(ErrorKind::Protocol, where + ": transcript does not end with quit");
  return out;
}

}  // namespace votkit
