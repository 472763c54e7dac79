#pragma once

#include <stdexcept>
#include <string>

namespace macroforge {

/// Malformed or inconsistent input (unknown variable, bad document, dangling id).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource cap (ball size, enumeration budget) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's documented precondition (e.g. combine on an
/// unchained pair).
class MisuseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An internal invariant was violated; always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace macroforge
