#pragma once

// Two-party expectations, correlation matrices and the CHSH functional.
//
// Observables entering correlations are scaled by 2 so that the Wigner spin
// has eigenvalues +-1; the classical CHSH bound is then 2 and the quantum
// bound 2 sqrt(2). Suppressed (dispersion-full) components keep their reduced
// norm, e.g. the transverse modified Dirac spin has scaled norm r = m/E. This
// scaling gives the ModifiedDirac CHSH curve 2 sqrt(1 + r^4).

#include "relspin/nelder_mead.hpp"
#include "relspin/spin_operators.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <limits>
#include <vector>
#include <stdexcept>

namespace relspin {

/// <Psi| O_L x O_R |Psi> with O_L on the fermion and O_R on the antifermion.
inline double two_party_expectation(const TwoPartyState& state, const PartyObservable& left,
                                    const PartyObservable& right) {
  if (left.party != Party::electron || right.party != Party::positron) {
    throw std::invalid_argument("two_party_expectation: expected (electron, positron) observables");
  }
  detail::require_frame(state.basis(), state.kinematics(), left);
  detail::require_frame(state.basis(), state.kinematics(), right);
  if (!is_hermitian(left.matrix) || !is_hermitian(right.matrix)) {
    throw std::invalid_argument("two_party_expectation: observable is not Hermitian");
  }
  const Mat2& a = state.amplitudes();
  const Complex z = (a.adjoint() * left.matrix * a * right.matrix.transpose()).trace();
  return detail::real_part_checked(z, left.matrix.norm() * right.matrix.norm());
}

/// Right-handed frame (e1, e2, e3 = p). e1 is the first of x, y, z with
/// |component along p| < 1/sqrt(2), orthogonalized against p; e2 = p x e1.
inline std::array<UnitVector, 3> correlation_frame(const UnitVector& p) {
  const Vec3& pv = p.vec();
  int k = 0;
  while (std::abs(pv[k]) >= std::sqrt(0.5)) ++k;
  Vec3 seed = Vec3::Zero();
  seed[k] = 1.0;
  const UnitVector e1 = UnitVector::normalized(seed - seed.dot(pv) * pv);
  const UnitVector e2 = UnitVector::normalized(pv.cross(e1.vec()));
  return {e1, e2, p};
}

struct CorrelationMatrix {
  Eigen::Matrix3d t;
  Family family;
  Kinematics kin;
};

inline void require_correlation_family(Family family) {
  if (family == Family::helicity) {
    throw std::invalid_argument("correlation family must be wigner, modified_dirac or magnetic_moment");
  }
}

/// E(a, b) = <(2 O_a) x (2 O_b)> for one observable family.
inline double correlation(const TwoPartyState& state, Family family, const UnitVector& a, const UnitVector& b) {
  const Kinematics& kin = state.kinematics();
  const PartyObservable left = make_observable(family, a, Party::electron, kin, state.basis());
  const PartyObservable right = make_observable(family, b, Party::positron, kin, state.basis());
  return 4.0 * two_party_expectation(state, left, right);
}

inline CorrelationMatrix correlation_matrix(const TwoPartyState& state, Family family) {
  require_correlation_family(family);
  const auto frame = correlation_frame(state.kinematics().direction());
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = correlation(state, family, frame[i], frame[j]);
  return CorrelationMatrix{t, family, state.kinematics()};
}

/// Correlation matrix of the pseudoscalar decay state, third axis along p.
inline CorrelationMatrix correlation_matrix(const Kinematics& kin, Family family, const Basis& basis) {
  return correlation_matrix(build_state(kin, Vertex::pseudoscalar, basis), family);
}

/// Closed-form CHSH maximum over all measurement directions: twice the root of
/// the sum of the two largest squared singular values of T.
inline double horodecki_bound(const Eigen::Matrix3d& t) {
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(t).singularValues();  // descending
  return 2.0 * std::sqrt(sv[0] * sv[0] + sv[1] * sv[1]);
}

inline double horodecki_bound(const CorrelationMatrix& t) { return horodecki_bound(t.t); }

struct CHSHSettings {
  UnitVector a;
  UnitVector a_prime;
  UnitVector b;
  UnitVector b_prime;
};

/// E(a,b) + E(a,b') + E(a',b) - E(a',b').
inline double chsh_value(const TwoPartyState& state, Family family, const CHSHSettings& s) {
  require_correlation_family(family);
  return correlation(state, family, s.a, s.b) + correlation(state, family, s.a, s.b_prime) +
         correlation(state, family, s.a_prime, s.b) - correlation(state, family, s.a_prime, s.b_prime);
}

struct CHSHResult {
  double value;
  CHSHSettings settings;
  int iterations;
  bool converged;
};

struct CHSHSearchOptions {
  /// Grid points per in-plane angle in the coarse stage.
  int grid_points = 24;
  /// Simplex iterations per refinement pass.
  int max_iterations = 200;
  /// Refinement passes; each re-centres the local angle charts on the current best.
  int max_passes = 12;
};

namespace detail {

inline double chsh_bilinear(const Eigen::Matrix3d& t, const Vec3& a, const Vec3& a2, const Vec3& b, const Vec3& b2) {
  return a.dot(t * (b + b2)) + a2.dot(t * (b - b2));
}

/// Chart around v0 in which v0 sits on the equator: (theta, phi) = (pi/2, 0).
struct LocalChart {
  Vec3 pole_x, pole_y, pole_z;

  explicit LocalChart(const Vec3& v0) : pole_x(v0) {
    const auto frame = correlation_frame(UnitVector::normalized(v0));
    pole_y = frame[0].vec();
    pole_z = frame[1].vec();
  }
  Vec3 at(double theta, double phi) const {
    return std::sin(theta) * (std::cos(phi) * pole_x + std::sin(phi) * pole_y) + std::cos(theta) * pole_z;
  }
};

}  // namespace detail

/// Maximizes the CHSH value of the pseudoscalar decay state over the four unit
/// measurement directions. Coarse stage: every setting restricted to one
/// coordinate plane of the correlation frame, `grid_points` angles each, first
/// best in lexicographic order wins ties. Fine stage: Nelder-Mead on the eight
/// spherical angles, expressed in charts centred on the incumbent so that no
/// vector starts at a coordinate pole.
inline CHSHResult chsh_maximize(const Kinematics& kin, Family family, const CHSHSearchOptions& opt = {}) {
  require_correlation_family(family);
  if (opt.grid_points < 2 || opt.max_iterations < 1 || opt.max_passes < 1) {
    throw std::invalid_argument("chsh_maximize: invalid search options");
  }
  const TwoPartyState state = build_state(kin, Vertex::pseudoscalar, Basis::axis(kin.direction()));
  const CorrelationMatrix corr = correlation_matrix(state, family);
  const Eigen::Matrix3d& t = corr.t;

  // Coarse grid.
  const int n = opt.grid_points;
  constexpr double two_pi = 6.283185307179586476925286766559;
  std::array<Vec3, 4> best_vecs;
  double best = -std::numeric_limits<double>::infinity();
  const std::array<std::array<int, 2>, 3> planes{{{0, 1}, {1, 2}, {0, 2}}};
  for (const auto& plane : planes) {
    std::vector<Vec3> dirs(n, Vec3::Zero());
    for (int k = 0; k < n; ++k) {
      const double ang = two_pi * k / n;
      dirs[k][plane[0]] = std::cos(ang);
      dirs[k][plane[1]] = std::sin(ang);
    }
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(i, j) = dirs[i].dot(t * dirs[j]);
    for (int i = 0; i < n; ++i)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j = 0; j < n; ++j)
          for (int j2 = 0; j2 < n; ++j2) {
            const double v = c(i, j) + c(i, j2) + c(i2, j) - c(i2, j2);
            if (v > best) {
              best = v;
              best_vecs = {dirs[i], dirs[i2], dirs[j], dirs[j2]};
            }
          }
  }

  // Local refinement.
  int iterations = 0;
  bool converged = false;
  double step = 0.5 * two_pi / n;
  for (int pass = 0; pass < opt.max_passes; ++pass) {
    const std::array<detail::LocalChart, 4> charts{detail::LocalChart(best_vecs[0]), detail::LocalChart(best_vecs[1]),
                                                   detail::LocalChart(best_vecs[2]), detail::LocalChart(best_vecs[3])};
    auto unpack = [&](const std::array<double, 8>& x) {
      std::array<Vec3, 4> v;
      for (int k = 0; k < 4; ++k) v[k] = charts[k].at(x[2 * k], x[2 * k + 1]);
      return v;
    };
    auto objective = [&](const std::array<double, 8>& x) {
      const auto v = unpack(x);
      return -detail::chsh_bilinear(t, v[0], v[1], v[2], v[3]);
    };
    constexpr double half_pi = 1.5707963267948966192313216916398;
    const std::array<double, 8> start{half_pi, 0, half_pi, 0, half_pi, 0, half_pi, 0};
    SimplexOptions so;
    so.initial_step = step;
    so.max_iterations = opt.max_iterations;
    const auto res = nelder_mead_minimize(objective, start, so);
    iterations += res.iterations;
    const double improved = -res.value;
    const double gain = improved - best;
    if (improved > best) {
      best = improved;
      best_vecs = unpack(res.x);
      for (auto& v : best_vecs) v.normalize();
    }
    if (res.converged && gain <= 1e-13) {
      converged = true;
      break;
    }
    step = std::max(1e-4, 0.25 * step);
  }

  const auto frame = correlation_frame(kin.direction());
  auto to_lab = [&](const Vec3& v) {
    return UnitVector::normalized(v[0] * frame[0].vec() + v[1] * frame[1].vec() + v[2] * frame[2].vec());
  };
  CHSHSettings settings{to_lab(best_vecs[0]), to_lab(best_vecs[1]), to_lab(best_vecs[2]), to_lab(best_vecs[3])};
  return CHSHResult{chsh_value(state, family, settings), settings, iterations, converged};
}

}  // namespace relspin
