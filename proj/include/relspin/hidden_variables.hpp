#pragma once

// Non-contextual local hidden-variables model for helicity-restricted
// observables, and the factorization test for product expectation values.
//
// Responses are indicator functions of finite unions of half-open intervals on
// [0, 1) and the weight is piecewise constant, so every expectation is an
// exact finite sum over the merged breakpoints.

#include "relspin/spin_operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace relspin {

/// Indicator of a union of half-open intervals [lo, hi) within [0, 1).
struct Response {
  std::vector<std::pair<double, double>> intervals;

  int operator()(double lambda) const {
    for (const auto& [lo, hi] : intervals)
      if (lambda >= lo && lambda < hi) return 1;
    return 0;
  }
};

/// Piecewise-constant probability density on [0, 1).
struct Density {
  std::vector<double> breaks{0.0, 1.0};  // strictly increasing, from 0 to 1
  std::vector<double> values{1.0};       // one per segment

  double operator()(double lambda) const {
    for (std::size_t k = 0; k < values.size(); ++k)
      if (lambda >= breaks[k] && lambda < breaks[k + 1]) return values[k];
    return 0.0;
  }
  double integral() const {
    double s = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) s += values[k] * (breaks[k + 1] - breaks[k]);
    return s;
  }
};

struct HVModel {
  Response up_a, down_a;
  Response up_b, down_b;
  Density rho;
};

/// Uniform weight; U_a = U_b = 1 on [0, 1/2), D = 1 - U.
inline HVModel build_helicity_hv_model() {
  const Response up{{{0.0, 0.5}}};
  const Response down{{{0.5, 1.0}}};
  return HVModel{up, down, up, down, Density{}};
}

/// Checks U + D = 1, U D = 0, U_a = U_b, D_a = D_b on a uniform grid of
/// `samples` points, plus rho >= 0 and unit total weight.
inline bool well_formed(const HVModel& m, int samples = 4096) {
  for (int k = 0; k < samples; ++k) {
    const double l = (k + 0.5) / samples;
    const int ua = m.up_a(l), da = m.down_a(l), ub = m.up_b(l), db = m.down_b(l);
    if (ua + da != 1 || ua * da != 0 || ub + db != 1 || ub * db != 0) return false;
    if (ua != ub || da != db) return false;
    if (m.rho(l) < 0.0) return false;
  }
  return std::abs(m.rho.integral() - 1.0) <= 1e-15;
}

// ---------------------------------------------------------------------------
// Labels.

enum class HVParty { a, b };

struct HelicityContext {};
struct GenericAxisContext {
  SpinAxis axis;
};
using ProjectorContext = std::variant<HelicityContext, GenericAxisContext>;

/// P_a(+-) or P_b(+-) in a given projector context.
struct ProjectorLabel {
  HVParty party;
  Sign sign;
  ProjectorContext context = HelicityContext{};
};

/// The helicity operator h of one party (eigenvalues +-1/2; the antifermion
/// operator carries the opposite sign).
struct HelicityObservableLabel {
  HVParty party;
};

using HVFactor = std::variant<ProjectorLabel, HelicityObservableLabel>;

class ModelUndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require_helicity(const HVFactor& f) {
  if (const auto* p = std::get_if<ProjectorLabel>(&f)) {
    if (!std::holds_alternative<HelicityContext>(p->context)) {
      throw ModelUndefinedError("hidden-variables model undefined for this context: only helicity projectors exist");
    }
  }
}

inline double hv_factor_value(const HVModel& m, const HVFactor& f, double lambda) {
  if (const auto* p = std::get_if<ProjectorLabel>(&f)) {
    const bool a = p->party == HVParty::a;
    const Response& r = p->sign == Sign::plus ? (a ? m.up_a : m.up_b) : (a ? m.down_a : m.down_b);
    return r(lambda);
  }
  const auto& h = std::get<HelicityObservableLabel>(f);
  if (h.party == HVParty::a) return 0.5 * (m.up_a(lambda) - m.down_a(lambda));
  return -0.5 * (m.up_b(lambda) - m.down_b(lambda));
}

inline std::vector<double> breakpoints(const HVModel& m) {
  std::vector<double> pts = m.rho.breaks;
  for (const Response* r : {&m.up_a, &m.down_a, &m.up_b, &m.down_b})
    for (const auto& [lo, hi] : r->intervals) {
      pts.push_back(lo);
      pts.push_back(hi);
    }
  std::vector<double> out;
  for (double x : pts)
    if (x >= 0.0 && x <= 1.0) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Exact integral of rho(lambda) times the product of the factors' response values.
inline double hv_expectation(const HVModel& m, std::span<const HVFactor> factors) {
  for (const auto& f : factors) detail::require_helicity(f);
  const std::vector<double> pts = detail::breakpoints(m);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double lo = pts[k], hi = pts[k + 1];
    const double mid = 0.5 * (lo + hi);
    double prod = m.rho(mid);
    for (const auto& f : factors) prod *= detail::hv_factor_value(m, f, mid);
    total += prod * (hi - lo);
  }
  return total;
}

inline double hv_expectation(const HVModel& m, std::initializer_list<HVFactor> factors) {
  return hv_expectation(m, std::span<const HVFactor>(factors.begin(), factors.size()));
}

struct MonteCarloEstimate {
  double mean;
  double standard_error;
};

/// Sampled counterpart of hv_expectation, drawing lambda from rho by inverse CDF.
inline MonteCarloEstimate hv_expectation_monte_carlo(const HVModel& m, std::span<const HVFactor> factors,
                                                     std::size_t samples, std::uint64_t seed) {
  for (const auto& f : factors) detail::require_helicity(f);
  if (samples < 2) throw std::invalid_argument("hv_expectation_monte_carlo: need at least two samples");
  std::vector<double> cdf{0.0};
  for (std::size_t k = 0; k < m.rho.values.size(); ++k)
    cdf.push_back(cdf.back() + m.rho.values[k] * (m.rho.breaks[k + 1] - m.rho.breaks[k]));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, cdf.back());
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = uni(rng);
    std::size_t k = 0;
    while (k + 1 < m.rho.values.size() && u >= cdf[k + 1]) ++k;
    const double lambda = m.rho.breaks[k] + (u - cdf[k]) / m.rho.values[k];
    double prod = 1.0;
    for (const auto& f : factors) prod *= detail::hv_factor_value(m, f, lambda);
    sum += prod;
    sum_sq += prod * prod;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq / n - mean * mean) * n / (n - 1.0));
  return MonteCarloEstimate{mean, std::sqrt(var / n)};
}

// ---------------------------------------------------------------------------
// Quantum-mechanical side.

/// Joint label probabilities p[electron][positron] = |A|^2 (0 = "+", 1 = "-").
using JointTable = std::array<std::array<double, 2>, 2>;

inline JointTable qm_helicity_correlations(const TwoPartyState& state) {
  JointTable t{};
  const double n2 = state.amplitudes().squaredNorm();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t[i][j] = std::norm(state.amplitudes()(i, j)) / n2;
  return t;
}

/// QM expectation of a product of helicity projectors and helicity operators.
inline double qm_helicity_expectation(const TwoPartyState& state, std::span<const HVFactor> factors) {
  if (!state.basis().is_helicity()) throw std::invalid_argument("helicity factors need a helicity-basis state");
  Mat2 ea = Mat2::Identity(), eb = Mat2::Identity();
  for (const auto& f : factors) {
    detail::require_helicity(f);
    Mat2 m = Mat2::Zero();
    HVParty party;
    if (const auto* p = std::get_if<ProjectorLabel>(&f)) {
      m(index_of(p->sign), index_of(p->sign)) = 1.0;
      party = p->party;
    } else {
      party = std::get<HelicityObservableLabel>(f).party;
      m = helicity_operator(party == HVParty::a ? Party::electron : Party::positron, state.kinematics()).matrix;
    }
    (party == HVParty::a ? ea : eb) = (party == HVParty::a ? ea : eb) * m;
  }
  const Mat2& a = state.amplitudes();
  return (a.adjoint() * ea * a * eb.transpose()).trace().real();
}

struct HVMatchReport {
  bool match;
  JointTable qm;
  JointTable hv;
  JointTable delta;  // hv - qm
  double max_abs_delta;
};

/// Compares the canonical model's four joint helicity probabilities with the state's.
inline HVMatchReport hv_matches_qm(const TwoPartyState& state, double tol = tolerance::algebraic) {
  if (!state.basis().is_helicity()) throw std::invalid_argument("hv_matches_qm: state must be in the helicity basis");
  const HVModel model = build_helicity_hv_model();
  HVMatchReport rep{};
  rep.qm = qm_helicity_correlations(state);
  rep.max_abs_delta = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      rep.hv[i][j] = hv_expectation(model, {ProjectorLabel{HVParty::a, sign_at(i)}, ProjectorLabel{HVParty::b, sign_at(j)}});
      rep.delta[i][j] = rep.hv[i][j] - rep.qm[i][j];
      rep.max_abs_delta = std::max(rep.max_abs_delta, std::abs(rep.delta[i][j]));
    }
  rep.match = rep.max_abs_delta <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Factorization test.

struct FactorizationResult {
  double lhs;  // <P_a x P_b>
  double rhs;  // <P_a> <P_b>
  double delta;
  bool separable_consistent;
};

/// Projector onto the fermion label `target`, in the state's label basis.
inline Mat2 electron_projector(const TwoPartyState& state, const SpinLabel& target) {
  const auto carriers = label_spinors(state.basis(), state.kinematics());
  const TwoSpinor xi = make_xi(target);
  Eigen::Vector2cd c;
  for (int t = 0; t < 2; ++t) c[t] = carriers.electron[t].c.dot(xi.c);
  return c * c.adjoint();
}

/// Projector onto the antifermion label `target` (carrier xi(-s)), in the
/// state's label basis; antifermion labels transform conjugately.
inline Mat2 positron_projector(const TwoPartyState& state, const SpinLabel& target) {
  const auto carriers = label_spinors(state.basis(), state.kinematics());
  const TwoSpinor eta = make_xi(target.axis, flip(target.sign));
  Eigen::Vector2cd d;
  for (int t = 0; t < 2; ++t) d[t] = std::conj(carriers.positron[t].c.dot(eta.c));
  return d * d.adjoint();
}

inline FactorizationResult factorization_test(const TwoPartyState& state, const SpinLabel& s_a, const SpinLabel& s_b,
                                              double tol = tolerance::algebraic) {
  const Mat2& a = state.amplitudes();
  const Mat2 pa = electron_projector(state, s_a);
  const Mat2 pb = positron_projector(state, s_b);
  auto expect = [&](const Mat2& left, const Mat2& right) {
    return (a.adjoint() * left * a * right.transpose()).trace().real();
  };
  const Mat2 one = Mat2::Identity();
  const double lhs = expect(pa, pb);
  const double rhs = expect(pa, one) * expect(one, pb);
  return FactorizationResult{lhs, rhs, lhs - rhs, std::abs(lhs - rhs) < tol};
}

}  // namespace relspin
