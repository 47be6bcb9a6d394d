#pragma once

#include <string>

#include "unitalcap/channel.hpp"
#include "unitalcap/recovery.hpp"

// Text IO. Channel JSON:
//   {"d_in": int, "d_out": int, "kraus": [op, ...]}
// where an operator is an array of rows and each entry is [re, im].
// Code JSON:
//   {"n": int, "d": int, "d_T": int, "d_C": int, "encoder": rows}
// with the same complex encoding. Parsing validates the CPTP / isometry
// invariants; serialization round-trips doubles exactly.

namespace unitalcap {

// Malformed text or schema violations; the message carries the line number
// when the underlying JSON parser reports a byte offset.
struct ParseError : Error {
  using Error::Error;
};

KrausChannel channel_from_json(const std::string& text);
std::string channel_to_json(const KrausChannel& ch);
KrausChannel load_channel(const std::string& path);
void save_channel(const std::string& path, const KrausChannel& ch);

CodeSpec code_from_json(const std::string& text);
std::string code_to_json(const CodeSpec& code);
CodeSpec load_code(const std::string& path);
void save_code(const std::string& path, const CodeSpec& code);

}  // namespace unitalcap
