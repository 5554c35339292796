#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace arraylab {

// Malformed or out-of-domain input.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed the configured state cap.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, long double required, std::uint64_t cap);
  long double required() const { return required_; }
  std::uint64_t cap() const { return cap_; }

 private:
  long double required_;
  std::uint64_t cap_;
};

std::uint64_t enumeration_cap();
void set_enumeration_cap(std::uint64_t cap);

// Throws CapacityError when `states` exceeds the cap.
void require_capacity(long double states, const std::string& what);

// Scoped override, used by tests and the CLI.
class CapGuard {
 public:
  explicit CapGuard(std::uint64_t cap);
  ~CapGuard();
  CapGuard(const CapGuard&) = delete;
  CapGuard& operator=(const CapGuard&) = delete;

 private:
  std::uint64_t saved_;
};

}  // namespace arraylab
