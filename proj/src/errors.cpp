#include "arraylab/errors.hpp"

#include <atomic>
#include <sstream>

namespace arraylab {

namespace {
std::atomic<std::uint64_t> g_cap{std::uint64_t{1} << 26};

std::string capacity_message(const std::string& what, long double required, std::uint64_t cap) {
  std::ostringstream os;
  os << "capacity exceeded: " << what << " needs " << static_cast<double>(required)
     << " states (cap " << cap << ")";
  return os.str();
}
}  // namespace

CapacityError::CapacityError(const std::string& what, long double required, std::uint64_t cap)
    : std::runtime_error(capacity_message(what, required, cap)), required_(required), cap_(cap) {}

std::uint64_t enumeration_cap() { return g_cap.load(); }
void set_enumeration_cap(std::uint64_t cap) { g_cap.store(cap); }

void require_capacity(long double states, const std::string& what) {
  auto cap = enumeration_cap();
  if (states > static_cast<long double>(cap)) throw CapacityError(what, states, cap);
}

CapGuard::CapGuard(std::uint64_t cap) : saved_(enumeration_cap()) { set_enumeration_cap(cap); }
CapGuard::~CapGuard() { set_enumeration_cap(saved_); }

}  // namespace arraylab
