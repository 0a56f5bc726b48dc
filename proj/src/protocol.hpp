#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geometry.hpp"

namespace votkit {

inline constexpr int kProtocolVersion = 1;

struct HelloMessage {
  int version = kProtocolVersion;
};
struct InitializeMessage {
  std::string path;
  Region region;
};
struct FrameMessage {
  std::string path;
};
struct StatusMessage {
  Region region;
};
struct QuitMessage {};

using Message = std::variant<HelloMessage, InitializeMessage, FrameMessage, StatusMessage, QuitMessage>;

/// One protocol line without the terminating newline.
std::string format_message(const Message& m);
/// Parses one line (a trailing newline is tolerated); throws Protocol on any deviation from the grammar.
Message parse_message(std::string_view line);

/// Direction of a recorded transcript line: `>` evaluator to tracker, `<` tracker to evaluator.
struct TranscriptLine {
  bool from_evaluator = true;
  Message message;
};

/// Parses and checks a recorded session: hello first, request/reply alternation, initialize before frames,
/// nothing after quit. Returns the parsed lines; throws Protocol naming the line on violation.
std::vector<TranscriptLine> check_transcript(std::string_view text, const std::string& where);

}  // namespace votkit
