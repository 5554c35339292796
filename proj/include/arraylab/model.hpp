#pragma once

#include "arraylab/event_query.hpp"
#include "arraylab/random.hpp"
#include "arraylab/rational.hpp"
#include "arraylab/subset.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace arraylab {

/// Mixed-radix configuration index: coordinate j contributes a_j * m^j.
class ConfigCodec {
 public:
  ConfigCodec(int alphabet, std::size_t length);
  int alphabet() const { return m_; }
  std::size_t length() const { return length_; }
  std::uint64_t size() const { return size_; }
  Symbol digit(std::uint64_t index, std::size_t j) const;
  std::vector<Symbol> decode(std::uint64_t index) const;
  std::uint64_t encode(const std::vector<Symbol>& digits) const;
  /// Index of the sub-configuration formed by the listed coordinate positions.
  std::uint64_t project(std::uint64_t index, const std::vector<std::size_t>& positions) const;

 private:
  int m_;
  std::size_t length_;
  std::uint64_t size_;
  std::vector<std::uint64_t> place_;
};

/// Law of a finite d-dimensional random array on [n] over {0, ..., m-1},
/// exposed through an exact event-probability oracle. Immutable once built.
class ArrayModel {
 public:
  virtual ~ArrayModel() = default;

  int n() const { return n_; }
  int d() const { return d_; }
  int alphabet_size() const { return m_; }
  std::uint64_t entry_count() const;
  virtual std::string kind() const = 0;

  /// P(all constraints of q hold). Validates q; contradictory queries give 0.
  Rational probability(const EventQuery& q) const;

  /// Joint law of (X_c)_{c in coords}, indexed by ConfigCodec(m, |coords|).
  std::vector<Rational> joint_law(const std::vector<Subset>& coords) const;

  /// One configuration over C([n], d) in colex order.
  virtual std::vector<Symbol> sample(Rng& rng) const = 0;

  /// Parameters as a model-spec document.
  virtual nlohmann::json to_json() const = 0;

  void check_index(Subset s) const;
  void check_symbol(Symbol a) const;

 protected:
  ArrayModel(int n, int d, int alphabet);
  virtual Rational do_probability(const EventQuery& q) const = 0;
  /// Default: one oracle call per configuration.
  virtual std::vector<Rational> do_joint_law(const std::vector<Subset>& coords) const;

 private:
  int n_;
  int d_;
  int m_;
};

using ModelPtr = std::shared_ptr<const ArrayModel>;

Rational event_probability(const ArrayModel& model, const EventQuery& q);
/// E[prod_{s in F} X_s] for a boolean model.
Rational moment(const ArrayModel& model, const std::vector<Subset>& family);
/// Law of the subarray X_J over C(J, d) in colex order.
std::vector<Rational> subarray_law(const ArrayModel& model, Subset J);

}  // namespace arraylab
