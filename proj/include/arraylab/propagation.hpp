#pragma once

#include "arraylab/defects.hpp"
#include "arraylab/model.hpp"

#include <vector>

namespace arraylab {

double theta1(double eta, double theta, int d, int n);
double theta2(double eta, double theta, int d, int n);
double theta3(double eta, double theta, int d, int n);

/// gamma_k(eta, theta, d, n) for k = 1..k_max together with the intermediate sequences.
/// Sequence entries are indexed by k - 1. eta = 0 and theta = 0 are admitted as limits.
struct GammaTable {
  double eta = 0;
  double theta = 0;
  int d = 1;
  int n = 2;
  int k_max = 1;
  double theta1 = 0;
  double theta2 = 0;
  double theta3 = 0;
  std::vector<double> gamma1;
  std::vector<double> gamma2;
  std::vector<double> gamma3;
  std::vector<double> gamma4;
  std::vector<double> gamma;
  std::vector<std::vector<int>> profile;  // maximizing composition k_1 + ... + k_u = k
  bool monotone = true;

  double at(int k) const { return gamma.at(static_cast<std::size_t>(k - 1)); }
};

/// For d >= 2 the first-level sequence is gamma_k(eta, theta1, d-1, n-1) + (k+1) eta.
/// The maximum over compositions is exact (dynamic programming over the number of parts).
GammaTable gamma_table(double eta, double theta, int d, int n, int k_max);
double gamma_value(double eta, double theta, int d, int n, int k);

/// Largest admissible k: C(floor(n/2), d), or floor(n/2) when d = 1.
std::uint64_t gamma_k_limit(int d, int n);
/// Largest number of parts u with u <= n/2 - d.
int gamma_part_limit(int d, int n);

/// 100 k 2^d (n^{-1/4^d} + eta^{1/4^d} + theta^{1/4^d}).
double closed_bound(int k, int d, int n, double eta, double theta);
/// 400 k (n^{-1/16} + eta^{1/16} + theta^{1/16}).
double closed_bound_2d(int k, int n, double eta, double theta);

struct PropagationRow {
  int k = 0;
  Rational defect = 0;
  double gamma = 0;
  bool holds = false;
  std::vector<int> witness_profile;
  bool profile_within_parts = true;
};

struct PropagationReport {
  DefectReport spreadability;
  DefectReport box;
  double eta = 0;
  double theta = 0;
  std::vector<PropagationRow> rows;
  bool passed() const;
};

/// Measures eta* and the one-sided theta*, then checks the gamma-independence defect against gamma_k(eta*, theta*).
PropagationReport verify_propagation(const ArrayModel& model, const std::vector<Symbol>& S, int k_max,
                                     const DefectOptions& opt = {});

ModelPtr restrict_last(ModelPtr model);
ModelPtr doubling(ModelPtr model);

struct LemmaCheck {
  double eta = 0;
  double theta = 0;
  Rational derived_defect = 0;
  double bound = 0;
  bool holds = false;
};

/// One-sided box defect of X~_t = X_{t + {n}} against theta1(eta*, theta*).
LemmaCheck check_restriction(const ModelPtr& model, const std::vector<Symbol>& S, const DefectOptions& opt = {});
/// One-sided box defect of the doubled array on diagonal symbols (a, a) against theta2(eta*, theta*).
LemmaCheck check_doubling(const ModelPtr& model, const std::vector<Symbol>& S, const DefectOptions& opt = {});

nlohmann::json gamma_json(const GammaTable& g);
nlohmann::json propagation_json(const PropagationReport& r);
nlohmann::json lemma_json(const LemmaCheck& c);

}  // namespace arraylab
