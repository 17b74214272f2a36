#pragma once

#include <stdexcept>
#include <string>

namespace hd0l {

/// A letter or alphabet does not belong where an operation expects it.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A mechanically checked internal invariant failed.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A configured resource bound (length, iteration cap) was exhausted.
class ResourceLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent system document.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define HD0L_ASSERT(cond, msg)                                                 \
  do {                                                                         \
    if (!(cond))                                                               \
      throw ::hd0l::InternalError(std::string("assertion failed: ") + (msg));  \
  } while (false)

} // namespace hd0l
