#pragma once

#include "arraylab/latent.hpp"
#include "arraylab/model.hpp"

#include <utility>
#include <vector>

namespace arraylab {

/// Independent entries, each with the same law on the alphabet.
class IidEntries final : public ArrayModel {
 public:
  IidEntries(int n, int d, std::vector<Rational> symbol_law);
  std::string kind() const override { return "iid_entries"; }
  const std::vector<Rational>& symbol_law() const { return law_; }
  std::vector<Symbol> sample(Rng& rng) const override;
  nlohmann::json to_json() const override;

 protected:
  Rational do_probability(const EventQuery& q) const override;
  std::vector<Rational> do_joint_law(const std::vector<Subset>& coords) const override;

 private:
  std::vector<Rational> law_;
};

/// Explicit law over all m^{C(n,d)} configurations (entries in colex order).
class DenseTable final : public ArrayModel {
 public:
  DenseTable(int n, int d, int alphabet, std::vector<Rational> probabilities);
  std::string kind() const override { return "dense_table"; }
  const std::vector<Rational>& table() const { return table_; }
  std::vector<Symbol> sample(Rng& rng) const override;
  nlohmann::json to_json() const override;

 protected:
  Rational do_probability(const EventQuery& q) const override;
  std::vector<Rational> do_joint_law(const std::vector<Subset>& coords) const override;

 private:
  std::vector<Rational> table_;
};

/// X_s = 1_A(xi_{i_1}, ..., xi_{i_d}) for i.i.d. uniform labels xi_i in [V].
class GraphSampling final : public ArrayModel {
 public:
  /// A is closed under coordinate permutations first; see added_by_closure().
  GraphSampling(int n, TupleTable A);
  std::string kind() const override { return "graph_sampling"; }
  int vertices() const { return A_.vertices; }
  const TupleTable& set() const { return A_; }
  std::uint64_t added_by_closure() const { return added_; }
  std::vector<Symbol> sample(Rng& rng) const override;
  std::vector<Symbol> evaluate(const std::vector<int>& labels) const;
  nlohmann::json to_json() const override;

 protected:
  Rational do_probability(const EventQuery& q) const override;
  std::vector<Rational> do_joint_law(const std::vector<Subset>& coords) const override;

 private:
  TupleTable A_;
  std::uint64_t added_ = 0;
};

/// Boolean two-dimensional array: with probability 1/2 i.i.d. fair entries, otherwise
/// X_{ij} = [xi_i = xi_j] for fair bits xi.
class ClosedFormTwoDim final : public ArrayModel {
 public:
  explicit ClosedFormTwoDim(int n);
  std::string kind() const override { return "appendix_a_2d"; }
  std::vector<Symbol> sample(Rng& rng) const override;
  nlohmann::json to_json() const override;
  /// Probability that the latent equality structure satisfies q: 2^{c - |support|} or 0.
  static Rational latent_part(const EventQuery& q);

 protected:
  Rational do_probability(const EventQuery& q) const override;
};

/// With probability 1/2 i.i.d. fair entries, otherwise X_s = H(xi_{i_1}, ..., xi_{i_d}) where
/// H(v) = 1 iff an even number of the d faces v_{[d] - i} fall outside A.
class HighDimSemiRandom final : public ArrayModel {
 public:
  /// A is a symmetric subset of V^{d-1}; the array dimension is A.arity + 1.
  HighDimSemiRandom(int n, TupleTable A);
  std::string kind() const override { return "appendix_a_highd"; }
  const TupleTable& set() const { return A_; }
  const GraphSampling& latent() const { return latent_; }
  static TupleTable parity_lift(const TupleTable& A);
  std::vector<Symbol> sample(Rng& rng) const override;
  nlohmann::json to_json() const override;

 protected:
  Rational do_probability(const EventQuery& q) const override;
  std::vector<Rational> do_joint_law(const std::vector<Subset>& coords) const override;

 private:
  TupleTable A_;
  GraphSampling latent_;
};

class Mixture final : public ArrayModel {
 public:
  explicit Mixture(std::vector<std::pair<Rational, ModelPtr>> components);
  std::string kind() const override { return "mixture"; }
  const std::vector<std::pair<Rational, ModelPtr>>& components() const { return parts_; }
  std::vector<Symbol> sample(Rng& rng) const override;
  nlohmann::json to_json() const override;

 protected:
  Rational do_probability(const EventQuery& q) const override;
  std::vector<Rational> do_joint_law(const std::vector<Subset>& coords) const override;

 private:
  std::vector<std::pair<Rational, ModelPtr>> parts_;
};

/// X_s = prod_{i in s} xi_i with independent xi_i ~ Bernoulli(p_i).
class ProductArray final : public ArrayModel {
 public:
  ProductArray(std::vector<Rational> p, int d);
  std::string kind() const override { return "product"; }
  const std::vector<Rational>& p() const { return p_; }
  std::vector<Symbol> sample(Rng& rng) const override;
  nlohmann::json to_json() const override;

 protected:
  Rational do_probability(const EventQuery& q) const override;
  std::vector<Rational> do_joint_law(const std::vector<Subset>& coords) const override;

 private:
  std::vector<Rational> p_;
};

/// Uniform over boolean configurations with exactly k ones among C(n, d) entries.
class FixedSizeER final : public ArrayModel {
 public:
  FixedSizeER(int n, int d, std::uint64_t ones);
  std::string kind() const override { return "fixed_size_er"; }
  std::uint64_t ones() const { return k_; }
  std::vector<Symbol> sample(Rng& rng) const override;
  nlohmann::json to_json() const override;

 protected:
  Rational do_probability(const EventQuery& q) const override;

 private:
  std::uint64_t k_;
  Integer total_;
};

/// (d-1)-dimensional array on [n-1]: X~_t = X_{t + {n}}.
class RestrictedLast final : public ArrayModel {
 public:
  explicit RestrictedLast(ModelPtr source);
  std::string kind() const override { return "restrict_last"; }
  const ModelPtr& source() const { return source_; }
  std::vector<Symbol> sample(Rng& rng) const override;
  nlohmann::json to_json() const override;
  Subset lift(Subset t) const { return t.with(source_->n()); }

 protected:
  Rational do_probability(const EventQuery& q) const override;
  std::vector<Rational> do_joint_law(const std::vector<Subset>& coords) const override;

 private:
  ModelPtr source_;
};

/// (d-1)-dimensional array on [n-2] over pairs: X'_t = (X_{t + {n-1}}, X_{t + {n}}).
/// The pair (a, b) is the symbol a + m*b.
class Doubled final : public ArrayModel {
 public:
  explicit Doubled(ModelPtr source);
  std::string kind() const override { return "doubling"; }
  const ModelPtr& source() const { return source_; }
  Symbol pair_symbol(Symbol a, Symbol b) const { return a + source_->alphabet_size() * b; }
  std::vector<Symbol> sample(Rng& rng) const override;
  nlohmann::json to_json() const override;

 protected:
  Rational do_probability(const EventQuery& q) const override;
  std::vector<Rational> do_joint_law(const std::vector<Subset>& coords) const override;

 private:
  ModelPtr source_;
};

}  // namespace arraylab
