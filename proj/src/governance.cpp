#include "hiergov/governance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>

#include "hiergov/error.hpp"

namespace hiergov::governance {

namespace {

constexpr double kRangeTolerance = 1e-9;

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", w);
  return buf;
}

// Exact least squares for (a, c) at fixed b.
struct LinearFit {
  double a = 0.0;
  double c = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

LinearFit solve_linear(std::span<const GovernanceSample> s, double b) {
  double su = 0.0, suu = 0.0, sy = 0.0, suy = 0.0;
  for (const auto& p : s) {
    const double u = 1.0 / (p.pom + b);
    su += u;
    suu += u * u;
    sy += p.poa;
    suy += u * p.poa;
  }
  const double n = static_cast<double>(s.size());
  const double det = n * suu - su * su;
  LinearFit fit;
  if (!(std::abs(det) > 0.0) || !std::isfinite(det)) return fit;
  fit.a = (n * suy - su * sy) / det;
  fit.c = (sy - fit.a * su) / n;
  double sse = 0.0;
  for (const auto& p : s) {
    const double r = p.poa - fit.a / (p.pom + b) - fit.c;
    sse += r * r;
  }
  fit.sse = sse;
  return fit;
}

double sse_of(std::span<const GovernanceSample> s, double a, double b, double c) {
  double sse = 0.0;
  for (const auto& p : s) {
    const double r = p.poa - a / (p.pom + b) - c;
    sse += r * r;
  }
  return sse;
}

// Solves the 3x3 system m x = v by Gaussian elimination with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> v,
            std::array<double, 3>& x) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (!(std::abs(m[pivot][col]) > 1e-300)) return false;
    std::swap(m[col], m[pivot]);
    std::swap(v[col], v[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int k = col; k < 3; ++k) m[r][k] -= f * m[col][k];
      v[r] -= f * v[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double acc = v[r];
    for (int k = r + 1; k < 3; ++k) acc -= m[r][k] * x[k];
    x[r] = acc / m[r][r];
  }
  return true;
}

// Levenberg-Marquardt polish of all three coefficients.
void polish(std::span<const GovernanceSample> s, double x_min, FittedRelationship& fit) {
  double a = fit.a, b = fit.b, c = fit.c;
  double sse = sse_of(s, a, b, c);
  double damping = 1e-6;
  for (int iter = 0; iter < 100 && sse > 0.0; ++iter) {
    std::array<std::array<double, 3>, 3> jtj{};
    std::array<double, 3> jtr{};
    for (const auto& p : s) {
      const double u = 1.0 / (p.pom + b);
      const std::array<double, 3> j = {u, -a * u * u, 1.0};
      const double r = p.poa - a * u - c;
      for (int i = 0; i < 3; ++i) {
        jtr[i] += j[i] * r;
        for (int k = 0; k < 3; ++k) jtj[i][k] += j[i] * j[k];
      }
    }
    bool improved = false;
    for (int attempt = 0; attempt < 20; ++attempt) {
      auto m = jtj;
      for (int i = 0; i < 3; ++i) m[i][i] += damping * (1.0 + jtj[i][i]);
      std::array<double, 3> step{};
      if (!solve3(m, jtr, step)) {
        damping *= 10.0;
        continue;
      }
      const double na = a + step[0], nb = b + step[1], nc = c + step[2];
      if (x_min + nb > 0.0) {
        const double nsse = sse_of(s, na, nb, nc);
        if (nsse < sse) {
          const double gain = sse - nsse;
          a = na;
          b = nb;
          c = nc;
          sse = nsse;
          damping = std::max(damping * 0.1, 1e-15);
          improved = true;
          if (gain <= 1e-30 + 1e-15 * sse) iter = 100;
          break;
        }
      }
      damping *= 10.0;
    }
    if (!improved) break;
  }
  fit.a = a;
  fit.b = b;
  fit.c = c;
  fit.residual = sse;
}

}  // namespace

double poa_general(double psi_opt, double psi_dis) {
  if (psi_opt == 0.0) throw Error(ErrorKind::UndefinedRatio, "optimal performance is zero");
  const double value = (psi_opt - psi_dis) / psi_opt;
  if (value < -kRangeTolerance || value > 1.0 + kRangeTolerance) {
    throw Error(ErrorKind::InconsistentInputs,
                "decentralized performance is inconsistent with the optimum");
  }
  if (value < 0.0 || value > 1.0) {
    std::clog << "warning: PoA " << value << " clamped to [0, 1]\n";
    return std::clamp(value, 0.0, 1.0);
  }
  return value;
}

Gamma::Gamma(Kind kind, double weight) : kind_(kind), weight_(weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "Gamma weight must lie in [0, 1]");
  }
}

Gamma Gamma::parse(std::string_view spec) {
  if (spec == "euclidean") return euclidean();
  const auto open = spec.find('(');
  if (open == std::string_view::npos || spec.back() != ')') {
    throw Error(ErrorKind::InvalidConfiguration, "unknown Gamma '" + std::string(spec) + "'");
  }
  const auto head = spec.substr(0, open);
  const std::string arg(spec.substr(open + 1, spec.size() - open - 2));
  char* end = nullptr;
  const double w = std::strtod(arg.c_str(), &end);
  if (arg.empty() || end != arg.c_str() + arg.size()) {
    throw Error(ErrorKind::InvalidConfiguration, "bad Gamma weight in '" + std::string(spec) + "'");
  }
  if (head == "weighted-euclidean") return weighted_euclidean(w);
  if (head == "weighted-sum") return weighted_sum(w);
  throw Error(ErrorKind::InvalidConfiguration, "unknown Gamma '" + std::string(spec) + "'");
}

std::string Gamma::name() const {
  switch (kind_) {
    case Kind::Euclidean: return "euclidean";
    case Kind::WeightedEuclidean: return "weighted-euclidean(" + format_weight(weight_) + ")";
    case Kind::WeightedSum: return "weighted-sum(" + format_weight(weight_) + ")";
  }
  return "unknown";
}

double Gamma::operator()(double poa, double pom) const {
  switch (kind_) {
    case Kind::Euclidean: return std::sqrt(poa * poa + pom * pom);
    case Kind::WeightedEuclidean:
      return std::sqrt(weight_ * poa * poa + (1.0 - weight_) * pom * pom);
    case Kind::WeightedSum: return weight_ * poa + (1.0 - weight_) * pom;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double pog(double poa, double pom, const Gamma& gamma) {
  if (!(poa >= 0.0 && poa <= 1.0 && pom >= 0.0 && pom <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "PoA and PoM must lie in [0, 1]");
  }
  return gamma(poa, pom);
}

FittedRelationship fit_relationship(std::span<const GovernanceSample> samples) {
  if (samples.size() < 4) {
    throw Error(ErrorKind::InsufficientData, "at least 4 samples are needed for a fit");
  }
  FittedRelationship fit;
  fit.x_min = fit.x_max = samples.front().pom;
  for (const auto& s : samples) {
    if (!std::isfinite(s.pom) || !std::isfinite(s.poa)) {
      throw Error(ErrorKind::InvalidInput, "non-finite sample");
    }
    fit.x_min = std::min(fit.x_min, s.pom);
    fit.x_max = std::max(fit.x_max, s.pom);
  }
  if (!(fit.x_max > fit.x_min)) {
    throw Error(ErrorKind::InsufficientData, "all samples share the same PoM");
  }
  // b is searched on the positive side of -x_min so the pole stays left of the data.
  const double offset = -fit.x_min;

  constexpr int kGrid = 400;
  constexpr double kLo = 1e-4;
  constexpr double kHi = 1.0;
  std::vector<double> grid(kGrid);
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kGrid; ++k) {
    grid[k] = offset + kLo * std::pow(kHi / kLo, static_cast<double>(k) / (kGrid - 1));
    const double sse = solve_linear(samples, grid[k]).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = k;
    }
  }

  // Golden section on log(b - offset) inside the bracket around the best node.
  const double lo = std::log(best > 0 ? grid[best - 1] - offset : kLo * 0.5);
  const double hi = std::log(best + 1 < kGrid ? grid[best + 1] - offset : kHi * 2.0);
  auto profile = [&](double t) { return solve_linear(samples, offset + std::exp(t)).sse; };
  const double t = golden_section(profile, lo, hi, 1e-12);
  double b = offset + std::exp(t);
  LinearFit lin = solve_linear(samples, b);
  if (!(lin.sse <= best_sse)) {
    b = grid[best];
    lin = solve_linear(samples, b);
  }
  fit.a = lin.a;
  fit.b = b;
  fit.c = lin.c;
  fit.residual = lin.sse;

  polish(samples, fit.x_min, fit);

  if (!std::isfinite(fit.a) || !std::isfinite(fit.b) || !std::isfinite(fit.c)) {
    throw Error(ErrorKind::FitRejected, "fit did not converge to finite coefficients");
  }
  if (fit.x_min + fit.b <= 0.0) {
    throw Error(ErrorKind::FitRejected, "fitted curve has a pole inside the sample domain");
  }
  return fit;
}

double r_squared(const FittedRelationship& fit, std::span<const GovernanceSample> samples) {
  double mean = 0.0;
  for (const auto& s : samples) mean += s.poa;
  mean /= static_cast<double>(samples.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (const auto& s : samples) {
    ss_tot += (s.poa - mean) * (s.poa - mean);
    const double r = s.poa - fit(s.pom);
    ss_res += r * r;
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

PoGResult optimal_pog(const FittedRelationship& curve, const Gamma& gamma,
                      std::span<const GovernanceSample> samples) {
  if (samples.empty()) throw Error(ErrorKind::InvalidInput, "no samples to map onto");
  const double lo = curve.x_min;
  const double hi = curve.x_max;
  auto objective = [&](double x) { return gamma(curve(x), x); };

  constexpr int kScan = 10000;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  const double h = (hi - lo) / kScan;
  for (int k = 0; k <= kScan; ++k) {
    const double v = objective(lo + h * k);
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::Solver, "PoG objective is not finite on the sample domain");
    }
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }

  PoGResult result;
  result.gamma_name = gamma.name();
  if (h > 0.0) {
    const double a = lo + h * std::max(best - 1, 0);
    const double b = lo + h * std::min(best + 1, kScan);
    const double x = golden_section(objective, a, b, 1e-7);
    result.optimal_x = objective(x) <= best_value ? x : lo + h * best;
  } else {
    result.optimal_x = lo;
  }
  result.optimal_pog = objective(result.optimal_x);

  // Nearest sampled PoM; ties go to the smaller n.
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double d = std::abs(s.pom - result.optimal_x);
    if (d < nearest || (d == nearest && s.n < result.optimal_n)) {
      nearest = d;
      result.optimal_n = s.n;
    }
  }
  return result;
}

}  // namespace hiergov::governance
