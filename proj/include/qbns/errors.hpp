#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbns {

/// Elements, paths or chains that do not belong to the model they are used with.
class ModelMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented preconditions.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size limit (ball radius, vertex count, cell count, iterations) was hit.
/// Reported instead of silently truncating.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::string what, std::size_t requested, std::size_t cap)
      : std::runtime_error(what + ": requested " + std::to_string(requested) + ", cap " +
                           std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::size_t requested() const { return requested_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

}  // namespace qbns
