#include "pantilt/protocol.hpp"

#include <stdexcept>

namespace pantilt::protocol {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::bad_char: return "bad_char";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::overlong: return "overlong";
    case ErrorKind::incomplete_frame: return "incomplete_frame";
  }
  return "?";
}

DecodeError::DecodeError(ErrorKind kind, std::size_t offset)
    : std::runtime_error(std::string("protocol error: ") + to_string(kind) + " at offset " +
                         std::to_string(offset)),
      kind_(kind),
      offset_(offset) {}

std::string encode_command(const ServoCommand& cmd) {
  if (cmd.pan < 0 || cmd.pan > kMaxAngle || cmd.tilt < 0 || cmd.tilt > kMaxAngle)
    throw std::invalid_argument("servo angles must be within [0, 180]");
  return "P" + std::to_string(cmd.pan) + "T" + std::to_string(cmd.tilt) + "\n";
}

namespace {

bool is_digit(std::uint8_t c) { return c >= '0' && c <= '9'; }

ParserState frame_start() {
  ParserState s;
  s.phase = Phase::reading_pan;
  s.length = 1;
  return s;
}

FeedResult fail(ErrorKind kind) {
  ParserState s;
  s.discarding = true;
  return {s, ErrorEvent{kind}};
}

// Appends a digit; false when the angle would leave [0, 180].
bool accumulate(std::uint16_t& acc, std::uint8_t digit) {
  const unsigned next = acc * 10u + static_cast<unsigned>(digit - '0');
  if (next > static_cast<unsigned>(kMaxAngle)) return false;
  acc = static_cast<std::uint16_t>(next);
  return true;
}

}  // namespace

FeedResult parser_feed(const ParserState& state, std::uint8_t octet) {
  if (state.phase == Phase::awaiting_p) {
    if (octet == 'P') return {frame_start(), NoEvent{}};
    if (state.discarding) return {state, NoEvent{}};
    return fail(ErrorKind::bad_char);
  }

  // A 'P' inside a frame abandons it and starts a new one, so a valid frame
  // after any garbage prefix is always recovered.
  if (octet == 'P') return {frame_start(), ErrorEvent{ErrorKind::bad_char}};

  ParserState s = state;
  if (++s.length > kMaxFrameOctets) return fail(ErrorKind::overlong);

  switch (s.phase) {
    case Phase::reading_pan:
    case Phase::awaiting_t:
      if (is_digit(octet)) {
        if (!accumulate(s.pan, octet)) return fail(ErrorKind::out_of_range);
        s.phase = Phase::awaiting_t;
        return {s, NoEvent{}};
      }
      if (octet == 'T' && s.phase == Phase::awaiting_t) {
        s.phase = Phase::reading_tilt;
        return {s, NoEvent{}};
      }
      return fail(ErrorKind::bad_char);

    case Phase::reading_tilt:
      if (is_digit(octet)) {
        if (!accumulate(s.tilt, octet)) return fail(ErrorKind::out_of_range);
        if (s.tilt_digits < 255) ++s.tilt_digits;
        return {s, NoEvent{}};
      }
      if (octet == '\n' && s.tilt_digits > 0) {
        const ServoCommand cmd{s.pan, s.tilt};
        return {ParserState{}, CommandEvent{cmd}};
      }
      return fail(ErrorKind::bad_char);

    case Phase::awaiting_p:
      break;
  }
  return fail(ErrorKind::bad_char);
}

ServoCommand decode_line(std::string_view bytes) {
  ParserState state;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    auto [next, event] = parser_feed(state, static_cast<std::uint8_t>(bytes[i]));
    state = next;
    if (const auto* err = std::get_if<ErrorEvent>(&event)) throw DecodeError(err->kind, i);
    if (const auto* cmd = std::get_if<CommandEvent>(&event)) {
      if (i + 1 != bytes.size()) throw DecodeError(ErrorKind::bad_char, i + 1);
      return cmd->command;
    }
  }
  throw DecodeError(ErrorKind::incomplete_frame, bytes.size());
}

}  // namespace pantilt::protocol
