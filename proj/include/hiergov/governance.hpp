#ifndef HIERGOV_GOVERNANCE_HPP
#define HIERGOV_GOVERNANCE_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hiergov::governance {

// One (subgroup size, PoA, PoM) measurement of a sweep.
struct GovernanceSample {
  int n = 0;
  double poa = 0.0;
  double pom = 0.0;
  double raw_performance = 0.0;  // psi_dis
  double raw_cost = 0.0;         // phi_dis
};

// (psi_opt - psi_dis) / psi_opt, clamped to [0,1] when outside by < 1e-9.
double poa_general(double psi_opt, double psi_dis);

// Combination function of (PoA, PoM).
class Gamma {
 public:
  enum class Kind { Euclidean, WeightedEuclidean, WeightedSum };

  static Gamma euclidean() { return Gamma(Kind::Euclidean, 0.5); }
  // sqrt(w PoA^2 + (1 - w) PoM^2)
  static Gamma weighted_euclidean(double weight) {
    return Gamma(Kind::WeightedEuclidean, weight);
  }
  // w PoA + (1 - w) PoM
  static Gamma weighted_sum(double weight) { return Gamma(Kind::WeightedSum, weight); }

  // "euclidean", "weighted-euclidean(w)" or "weighted-sum(w)".
  static Gamma parse(std::string_view spec);

  Kind kind() const { return kind_; }
  double weight() const { return weight_; }
  std::string name() const;

  // Unchecked evaluation; the solver may probe slightly outside [0,1].
  double operator()(double poa, double pom) const;

 private:
  Gamma(Kind kind, double weight);
  Kind kind_;
  double weight_;
};

// Gamma(poa, pom) with both arguments required to lie in [0,1].
double pog(double poa, double pom, const Gamma& gamma = Gamma::euclidean());

// PoA as a function of PoM: f(x) = a / (x + b) + c.
struct FittedRelationship {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double residual = 0.0;  // sum of squared errors
  double x_min = 0.0;
  double x_max = 1.0;

  double operator()(double x) const { return a / (x + b) + c; }
};

// Least squares over (a, b, c). The model is linear in (a, c) for fixed b, so
// the search runs over b alone: a log grid on [1e-4, 1], exact (a, c) for each
// b, golden-section on the best bracket, then Levenberg-Marquardt on all three.
FittedRelationship fit_relationship(std::span<const GovernanceSample> samples);

// Coefficient of determination of the fit on the given samples.
double r_squared(const FittedRelationship& fit, std::span<const GovernanceSample> samples);

struct PoGResult {
  double optimal_x = 0.0;    // PoM at the optimum
  double optimal_pog = 0.0;  // Gamma(f(x*), x*)
  int optimal_n = 0;         // sampled n whose PoM is nearest to x*
  std::string gamma_name;
};

// Minimises Gamma(f(x), x) over [x_min, x_max]: 10^4-point scan, then
// golden-section refinement to |dx| < 1e-7.
PoGResult optimal_pog(const FittedRelationship& curve, const Gamma& gamma,
                      std::span<const GovernanceSample> samples);

// Golden-section minimum of f on [lo, hi] (f assumed unimodal there).
template <class F>
double golden_section(F&& f, double lo, double hi, double tolerance);

}  // namespace hiergov::governance

#include "hiergov/detail/golden_section.hpp"

#endif
