#pragma once

// Serial line protocol between the host and the servo microcontroller.
//
//   frame := 'P' digits 'T' digits '\n'
//
// Each digits group is a decimal angle in [0, 180]. Encoding never emits
// leading zeros; decoding accepts them. A frame is at most 12 octets.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "pantilt/control.hpp"

namespace pantilt::protocol {

inline constexpr int kMaxAngle = 180;
inline constexpr std::size_t kMaxFrameOctets = 12;

enum class ErrorKind { bad_char, out_of_range, overlong, incomplete_frame };

const char* to_string(ErrorKind kind);

struct NoEvent {
  friend bool operator==(const NoEvent&, const NoEvent&) = default;
};
struct CommandEvent {
  ServoCommand command;
  friend bool operator==(const CommandEvent&, const CommandEvent&) = default;
};
struct ErrorEvent {
  ErrorKind kind;
  friend bool operator==(const ErrorEvent&, const ErrorEvent&) = default;
};

using ParserEvent = std::variant<NoEvent, CommandEvent, ErrorEvent>;

enum class Phase : std::uint8_t {
  awaiting_p,    // between frames
  reading_pan,   // after 'P', no pan digit yet
  awaiting_t,    // at least one pan digit seen
  reading_tilt,  // after 'T'
};

struct ParserState {
  Phase phase = Phase::awaiting_p;
  // Set after an error: octets are dropped silently until the next 'P'.
  bool discarding = false;
  std::uint16_t pan = 0;
  std::uint16_t tilt = 0;
  std::uint8_t tilt_digits = 0;
  std::uint8_t length = 0;  // octets consumed in the current frame

  friend bool operator==(const ParserState&, const ParserState&) = default;
};

struct FeedResult {
  ParserState state;
  ParserEvent event;
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(ErrorKind kind, std::size_t offset);
  ErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  ErrorKind kind_;
  std::size_t offset_;
};

/// Exact frame bytes "P<pan>T<tilt>\n". Throws std::invalid_argument for
/// angles outside [0, 180].
std::string encode_command(const ServoCommand& cmd);

/// Consumes one octet. Never throws; every octet value is accepted.
FeedResult parser_feed(const ParserState& state, std::uint8_t octet);

/// Decodes bytes that must form exactly one valid frame.
ServoCommand decode_line(std::string_view bytes);

// Stateful convenience over parser_feed for stream readers.
class Parser {
 public:
  ParserEvent feed(std::uint8_t octet) {
    auto result = parser_feed(state_, octet);
    state_ = result.state;
    return result.event;
  }
  const ParserState& state() const { return state_; }
  bool mid_frame() const { return state_.phase != Phase::awaiting_p; }

 private:
  ParserState state_;
};

}  // namespace pantilt::protocol
