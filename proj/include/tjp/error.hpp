#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tjp {

enum class ErrorKind {
  configuration,
  domain,
  window_too_large,
  empty_corpus,
  degenerate_mask,
  degenerate_field,
  undefined_metric,
  format,
  unsupported,
  manifest,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI (and callers that want to skip, e.g., too-small scales) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace tjp
