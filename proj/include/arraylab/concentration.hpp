#pragma once

#include "arraylab/defects.hpp"
#include "arraylab/model.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace arraylab {

/// prod_{s in family} x_s - c.
struct MonomialMinusConstant {
  std::vector<Subset> family;
  Rational c = 0;
};

/// Indicator of the set of configurations of X_{[j]} listed in atoms
/// (ConfigCodec over C([j], d) in colex order).
struct IndicatorLift {
  int j = 0;
  std::vector<std::uint64_t> atoms;
};

/// Values over all configurations of C([n], d) in colex order.
struct ExplicitTable {
  std::vector<Rational> values;
};

/// Values over the configurations of the listed entries, in the listed order.
struct LocalTable {
  std::vector<Subset> coords;
  std::vector<Rational> values;
};

using FunctionSpec = std::variant<MonomialMinusConstant, IndicatorLift, ExplicitTable, LocalTable>;

/// Entries the function reads, in the order its values are indexed by.
std::vector<Subset> function_coords(const ArrayModel& model, const FunctionSpec& f);
/// The same function as a LocalTable.
LocalTable as_local(const ArrayModel& model, const FunctionSpec& f);
/// prod_{s in family} x_s - E[prod_{s in family} X_s].
FunctionSpec centered_monomial(const ArrayModel& model, const std::vector<Subset>& family);

/// A random variable measurable with respect to the entries in `conditioned`.
/// Rows are indexed by configurations of `coords` (ConfigCodec(alphabet, |coords|)).
/// `coords` is a subfamily of `conditioned` that already determines the value.
struct RandomVariableTable {
  Subset J;
  std::vector<Subset> conditioned;
  std::vector<Subset> coords;
  int alphabet = 2;
  std::vector<Rational> probability;
  std::vector<Rational> value;

  Rational mean() const;
  bool reduced() const { return coords.size() < conditioned.size(); }
};

/// E[f(X) | F_J]; rows with zero probability carry value 0.
RandomVariableTable conditional_expectation(const ArrayModel& model, const FunctionSpec& f, Subset J);
/// E[f(X) | X_E] for a family E of entries.
RandomVariableTable conditional_expectation(const ArrayModel& model, const FunctionSpec& f,
                                            const std::vector<Subset>& entries);
/// The variable f(X) itself, tabulated over its own coordinates.
RandomVariableTable function_table(const ArrayModel& model, const FunctionSpec& f);
FunctionSpec as_function(const RandomVariableTable& g);

/// (sum P |v|^p)^{1/p}; p = infinity gives the largest |v| over rows of positive probability.
double lp_norm(const RandomVariableTable& g, double p);
double lp_norm(const ArrayModel& model, const FunctionSpec& f, double p);
/// sum P v^2, exactly.
Rational second_moment(const RandomVariableTable& g);
/// g - c.
RandomVariableTable shifted(RandomVariableTable g, const Rational& c);
/// E[g(X) 1_C(X)] for an event C on arbitrary entries.
Rational expectation_on(const ArrayModel& model, const RandomVariableTable& g, const EventQuery& C);

/// P(|g| <= eps).
Rational concentration_probability(const RandomVariableTable& g, double eps);
Rational concentration_probability(const ArrayModel& model, const FunctionSpec& f, Subset J, double eps);
/// P(|g - center| >= t).
Rational tail_probability(const RandomVariableTable& g, const Rational& center, const Rational& t);

struct Increment {
  RandomVariableTable table;  // d_i, measurable with respect to A_i
  std::vector<double> norms;  // aligned with the requested exponents
};

struct DoobDecomposition {
  Rational mean = 0;
  std::vector<RandomVariableTable> conditional;  // E[f | A_i], i = 1..m
  std::vector<Increment> increments;
};

/// Doob martingale of f(X) along A_i = sigma(X_{J_1}, ..., X_{J_i}).
DoobDecomposition doob_increments(const ArrayModel& model, const FunctionSpec& f, const std::vector<Subset>& blocks,
                                  const std::vector<double>& exponents = {2.0}, int workers = 1);

/// Successive blocks of k elements of I, in increasing order; m = floor(|I| / k).
std::vector<Subset> successive_blocks(Subset I, int k);

struct SelectionReport {
  std::vector<Subset> blocks;
  int i0 = 0;  // 1-based
  Subset J;
  bool interval = false;
  double p = 2;
  double r = 1.5;
  double scale = 0;                 // ||f - E f||_p
  std::vector<double> increment_norms;  // ||d_i||_p / scale
  double achieved = 0;              // ||d_{i0}||_p / scale
  double increment_bound = 0;       // (m (p - 1))^{-1/2}
  double conditional_deviation = 0;  // ||E[f | F_J] - E f||_r / scale
  std::optional<double> beta;
  std::optional<double> moment_bound;  // (p-1)^{-1/2} sqrt(2k / |I|) + 10 beta^{1/r - 1/p}
  bool increment_bound_holds() const;
  bool moment_bound_holds() const;
};

/// Energy-increment choice of a k-block of I; r defaults to (p + 1) / 2.
SelectionReport energy_increment_select(const ArrayModel& model, const FunctionSpec& f, double p, Subset I, int k,
                                        std::optional<double> beta = std::nullopt,
                                        std::optional<double> r = std::nullopt, int workers = 1);

struct TheoremConstants {
  double beta = 0;
  double log_beta = 0;
  long long ell = 0;
  double C_2d = 0;
  double log_C_2d = 0;
  double C_gen = 0;
  double log_C_gen = 0;
  double c_dissoc = 0;
  double C_simult = 0;
  double log_C_simult = 0;
};

/// Overflowing values are +inf; the log forms stay finite.
TheoremConstants theorem_constants(int d, int m, double p, double eps, int k);

struct WitnessRow {
  Subset I;
  Rational tail;  // P(|E[f | F_I] - E f| >= beta / 2)
  bool holds = false;
};

struct DissociativityWitness {
  FunctionSpec f;
  Rational beta = 0;  // sup over B in F_K of |P(A and B) - P(A) P(B)|, K = {j+1, ..., j+k}
  std::vector<std::uint64_t> atoms_B;
  Rational spreadability = 0;
  bool spreadable_within_tolerance = true;
  std::vector<WitnessRow> rows;
  bool vacuous() const { return beta == 0; }
  bool all_hold() const;
};

/// Indicator f of the lift of A' and its anti-concentration over every I in C([n], l).
/// Without atoms, A is taken from the mixing witness between [j] and K.
DissociativityWitness dissociativity_witness(const ArrayModel& model, int j, int k, int l,
                                             std::optional<std::vector<std::uint64_t>> atoms = std::nullopt,
                                             double tolerance = 1e-9);

struct Instance {
  Rational weight;
  ModelPtr model;
  FunctionSpec f;
};

struct SimultaneousReport {
  std::vector<Subset> blocks;
  int i0 = 0;  // 1-based
  std::vector<double> average_square;              // sum_v weight_v (||d_i^v||_p / scale_v)^2
  std::vector<std::vector<double>> normalized;     // [v][i]
  std::vector<std::size_t> good;                   // indices v in G
  double threshold = 0;                            // (m (p - 1))^{-1/4}
  double good_weight = 0;
  double guaranteed_weight = 0;                    // 1 - (m (p - 1))^{-1/4}
};

SimultaneousReport simultaneous_select(const std::vector<Instance>& instances, double p, Subset I, int k,
                                       int workers = 1);

nlohmann::json table_json(const RandomVariableTable& g);
nlohmann::json selection_json(const SelectionReport& r);
nlohmann::json constants_json(const TheoremConstants& c);
nlohmann::json witness_json(const DissociativityWitness& w);
nlohmann::json simultaneous_json(const SimultaneousReport& r);

}  // namespace arraylab
