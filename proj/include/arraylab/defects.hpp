#pragma once

#include "arraylab/boxes.hpp"
#include "arraylab/model.hpp"

#include <map>
#include <variant>
#include <vector>

namespace arraylab {

struct SubsetPairWitness {
  Subset J;
  Subset K;
};

struct BoxWitness {
  BoxSpec box;
  Symbol symbol = 0;
};

struct FamilyWitness {
  std::vector<Subset> family;
  std::vector<Symbol> assignment;
};

/// A in F_J and B in F_K as unions of atoms; atoms are configuration indices of X_J and X_K
/// (ConfigCodec over C(J, d), resp. C(K, d), in colex order).
struct EventPairWitness {
  Subset J;
  Subset K;
  std::vector<std::uint64_t> atoms_A;
  std::vector<std::uint64_t> atoms_B;
};

using Witness = std::variant<std::monostate, SubsetPairWitness, BoxWitness, FamilyWitness, EventPairWitness>;

struct DefectReport {
  Rational value = 0;
  Witness witness;
  std::uint64_t scanned = 0;
  bool capped = false;
  std::string method;
  std::map<int, Rational> per_size;  // e.g. the spreadability maximum for each |J|

  double value_double() const { return to_double(value); }
};

struct DefectOptions {
  int workers = 1;
  /// Candidate budget; 0 means the global enumeration cap.
  std::uint64_t max_candidates = 0;
};

enum class BoxMode { one_sided, absolute };

/// Default largest subarray size for spreadability scans: min(n, floor(n/2) + 1).
int default_spread_size(const ArrayModel& model);

/// max over |J| = |K| = m in [d, size_cap] of the total variation between the laws of X_J and X_K.
DefectReport spreadability_defect(const ArrayModel& model, int size_cap, const DefectOptions& opt = {});

DefectReport box_independence_defect(const ArrayModel& model, const std::vector<Symbol>& S, BoxMode mode,
                                     const DefectOptions& opt = {});

/// Entry k-1 covers families of size k with support at most n/2.
std::vector<DefectReport> gamma_independence_defect(const ArrayModel& model, const std::vector<Symbol>& S, int k_max,
                                                    const DefectOptions& opt = {});

/// sup |P(A and B) - P(A)P(B)| over A in F_J, B in F_K, max J < min K, |J| + |K| <= l.
DefectReport dissociativity_defect(const ArrayModel& model, int l, const DefectOptions& opt = {});

/// sup |P(A and B) - P(A)P(B)| over A in F_J, B in F_K for one pair of disjoint J, K.
DefectReport mixing_coefficient(const ArrayModel& model, Subset J, Subset K);

/// Recomputes the quantity a witness certifies. For spreadability the witness alone fixes the value.
Rational reevaluate(const ArrayModel& model, const DefectReport& report, BoxMode mode = BoxMode::absolute);

/// Result of maximizing |sum_{a in A, b in B} M(a, b)| over row sets A and column sets B.
struct BilinearMax {
  Rational value = 0;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  bool exact = true;
  std::string method;
};

/// Rows of M must each sum to zero and columns too (as for P(a,b) - P(a)P(b)).
BilinearMax bilinear_event_max(const std::vector<std::vector<Rational>>& M);

/// Total variation distance between two laws on the same index set.
Rational total_variation(const std::vector<Rational>& p, const std::vector<Rational>& q);

nlohmann::json witness_json(const Witness& w);
nlohmann::json report_json(const DefectReport& r);

}  // namespace arraylab
