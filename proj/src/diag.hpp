// Shared diagnostics: source locations, error categories, and the exception
// type every pipeline stage uses to report failure. Errors carry a location
// and a human-readable message; the C API and CLI map categories to codes.
#pragma once

#include <stdexcept>
#include <string>

namespace vtkit {

struct SourceLoc {
  int line = 0;  // 1-based; 0 means unknown
  int col = 0;
};

enum class ErrCat {
  Syntax,      // lexing or parsing failure
  Type,        // type or resolution failure
  NotFound,    // named method or def absent
  Invalid,     // bad argument to an API entry point
  Runtime,     // evaluation failure surfaced through an API boundary
  Io,          // filesystem trouble
  Internal,    // invariant breach inside the toolkit
};

class VtError : public std::runtime_error {
 public:
  VtError(ErrCat cat, SourceLoc loc, const std::string& msg)
      : std::runtime_error(format(loc, msg)), cat(cat), loc(loc), plain(msg) {}

  ErrCat cat;
  SourceLoc loc;
  std::string plain;

  static std::string format(SourceLoc loc, const std::string& msg) {
    if (loc.line <= 0) return msg;
    return std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + msg;
  }
};

[[noreturn]] inline void fail(ErrCat cat, SourceLoc loc, const std::string& msg) {
  throw VtError(cat, loc, msg);
}

}  // namespace vtkit
