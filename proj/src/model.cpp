#include "arraylab/model.hpp"

#include "arraylab/errors.hpp"

#include <cmath>
#include <set>

namespace arraylab {

ConfigCodec::ConfigCodec(int alphabet, std::size_t length) : m_(alphabet), length_(length) {
  if (alphabet < 1) throw DomainError("alphabet must be nonempty");
  long double states = std::pow(static_cast<long double>(alphabet), static_cast<long double>(length));
  if (states > static_cast<long double>(std::uint64_t{1} << 62))
    throw CapacityError("configuration space", states, std::uint64_t{1} << 62);
  place_.resize(length);
  std::uint64_t p = 1;
  for (std::size_t j = 0; j < length; ++j) {
    place_[j] = p;
    p *= static_cast<std::uint64_t>(alphabet);
  }
  size_ = p;
}

Symbol ConfigCodec::digit(std::uint64_t index, std::size_t j) const {
  return static_cast<Symbol>((index / place_[j]) % static_cast<std::uint64_t>(m_));
}

std::vector<Symbol> ConfigCodec::decode(std::uint64_t index) const {
  std::vector<Symbol> out(length_);
  for (std::size_t j = 0; j < length_; ++j) {
    out[j] = static_cast<Symbol>(index % static_cast<std::uint64_t>(m_));
    index /= static_cast<std::uint64_t>(m_);
  }
  return out;
}

std::uint64_t ConfigCodec::encode(const std::vector<Symbol>& digits) const {
  std::uint64_t idx = 0;
  for (std::size_t j = 0; j < length_; ++j) idx += static_cast<std::uint64_t>(digits[j]) * place_[j];
  return idx;
}

std::uint64_t ConfigCodec::project(std::uint64_t index, const std::vector<std::size_t>& positions) const {
  std::uint64_t out = 0;
  std::uint64_t p = 1;
  for (auto pos : positions) {
    out += static_cast<std::uint64_t>(digit(index, pos)) * p;
    p *= static_cast<std::uint64_t>(m_);
  }
  return out;
}

ArrayModel::ArrayModel(int n, int d, int alphabet) : n_(n), d_(d), m_(alphabet) {
  if (d < 1 || n < d || n > kMaxGround) throw DomainError("array needs 1 <= d <= n <= 63");
  if (alphabet < 1) throw DomainError("alphabet must be nonempty");
}

std::uint64_t ArrayModel::entry_count() const { return binomial(n_, d_); }

void ArrayModel::check_index(Subset s) const {
  if (s.size() != d_ || s.max() > n_)
    throw DomainError("index " + s.to_string() + " is not a " + std::to_string(d_) + "-subset of [" +
                      std::to_string(n_) + "]");
}

void ArrayModel::check_symbol(Symbol a) const {
  if (a < 0 || a >= m_) throw DomainError("symbol " + std::to_string(a) + " not in the alphabet");
}

Rational ArrayModel::probability(const EventQuery& q) const {
  for (auto& [s, a] : q.constraints()) {
    check_index(s);
    check_symbol(a);
  }
  if (q.contradictory()) return 0;
  if (q.empty()) return 1;
  return do_probability(q);
}

std::vector<Rational> ArrayModel::joint_law(const std::vector<Subset>& coords) const {
  std::set<Subset> seen;
  for (auto s : coords) {
    check_index(s);
    if (!seen.insert(s).second) throw DomainError("joint_law: repeated coordinate " + s.to_string());
  }
  long double states = std::pow(static_cast<long double>(m_), static_cast<long double>(coords.size()));
  require_capacity(states, "joint law over " + std::to_string(coords.size()) + " entries");
  return do_joint_law(coords);
}

std::vector<Rational> ArrayModel::do_joint_law(const std::vector<Subset>& coords) const {
  ConfigCodec codec(m_, coords.size());
  std::vector<Rational> law(codec.size());
  for (std::uint64_t idx = 0; idx < codec.size(); ++idx) {
    EventQuery q;
    auto digits = codec.decode(idx);
    for (std::size_t j = 0; j < coords.size(); ++j) q.require(coords[j], digits[j]);
    law[idx] = coords.empty() ? Rational(1) : do_probability(q);
  }
  return law;
}

Rational event_probability(const ArrayModel& model, const EventQuery& q) { return model.probability(q); }

Rational moment(const ArrayModel& model, const std::vector<Subset>& family) {
  if (model.alphabet_size() != 2) throw DomainError("moment needs a boolean alphabet");
  if (family.empty()) throw DomainError("moment needs a nonempty family");
  return model.probability(EventQuery::all_equal(family, 1));
}

std::vector<Rational> subarray_law(const ArrayModel& model, Subset J) {
  if (J.size() < model.d() || J.max() > model.n()) throw DomainError("subarray_law: need |J| >= d inside [n]");
  return model.joint_law(array_entries(J, model.d()));
}

}  // namespace arraylab
