#pragma once

// Two-photon decay of a pseudoscalar through E.B, analysed with linear
// polarizers. Nothing here depends on an energy or mass scale.

#include "relspin/nelder_mead.hpp"
#include "relspin/spinor.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <limits>

namespace relspin {

/// Amplitudes over linear polarization labels (0 = x, 1 = y) of the photon
/// moving along +z and its partner along -z, in one fixed transverse frame.
struct PhotonPairState {
  Mat2 amplitudes;
};

/// amplitude[e1][e2] proportional to (e1 x e2).k with k = z, normalized;
/// gives (|xy> - |yx>)/sqrt(2).
inline PhotonPairState build_photon_state() {
  const std::array<Vec3, 2> pol{Vec3::UnitX(), Vec3::UnitY()};
  const Vec3 k = Vec3::UnitZ();
  Mat2 a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = pol[i].cross(pol[j]).dot(k);
  return PhotonPairState{a / a.norm()};
}

/// Probability that both photons pass linear analyzers at angles phi1, phi2.
inline double joint_pass_probability(const PhotonPairState& s, double phi1, double phi2) {
  const Eigen::Vector2cd a1(std::cos(phi1), std::sin(phi1));
  const Eigen::Vector2cd a2(std::cos(phi2), std::sin(phi2));
  return std::norm(a1.dot(s.amplitudes * a2.conjugate()));
}

/// E = P(same outcome) - P(different outcome) for analyzers at phi1, phi2.
inline double polarization_correlation(const PhotonPairState& s, double phi1, double phi2) {
  constexpr double quarter = 1.5707963267948966192313216916398;
  const double same = joint_pass_probability(s, phi1, phi2) + joint_pass_probability(s, phi1 + quarter, phi2 + quarter);
  const double diff = joint_pass_probability(s, phi1, phi2 + quarter) + joint_pass_probability(s, phi1 + quarter, phi2);
  return (same - diff) / (same + diff);
}

/// Analyzer angles (alpha, alpha') for the first photon and (beta, beta') for the second.
struct PhotonAngles {
  double a, a_prime, b, b_prime;
};

inline double photon_chsh_value(const PhotonPairState& s, const PhotonAngles& x) {
  return polarization_correlation(s, x.a, x.b) + polarization_correlation(s, x.a, x.b_prime) +
         polarization_correlation(s, x.a_prime, x.b) - polarization_correlation(s, x.a_prime, x.b_prime);
}

/// Correlations written as E = c(2 phi1)^T T c(2 phi2), c(t) = (cos t, sin t).
/// T is read off four analyzer pairs.
inline Eigen::Matrix2d photon_correlation_matrix(const PhotonPairState& s) {
  constexpr double eighth = 0.78539816339744830961566084581988;
  Eigen::Matrix2d t;
  t(0, 0) = polarization_correlation(s, 0.0, 0.0);
  t(0, 1) = polarization_correlation(s, 0.0, eighth);
  t(1, 0) = polarization_correlation(s, eighth, 0.0);
  t(1, 1) = polarization_correlation(s, eighth, eighth);
  return t;
}

/// Closed-form maximum 2 sqrt(t1^2 + t2^2) of the doubled-angle correlation.
inline double photon_chsh_bound(const PhotonPairState& s) {
  const Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2d>(photon_correlation_matrix(s)).singularValues();
  return 2.0 * std::sqrt(sv[0] * sv[0] + sv[1] * sv[1]);
}

struct PhotonCHSHResult {
  double value;
  PhotonAngles angles;
  int iterations;
  bool converged;
};

/// Grid over the four analyzer angles in [0, pi) followed by simplex refinement.
inline PhotonCHSHResult photon_chsh_maximize(const PhotonPairState& s, int grid_points = 24, int max_iterations = 200) {
  constexpr double pi = 3.1415926535897932384626433832795;
  const int n = grid_points;
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = polarization_correlation(s, pi * i / n, pi * j / n);
  double best = -std::numeric_limits<double>::infinity();
  std::array<double, 4> x{};
  for (int i = 0; i < n; ++i)
    for (int i2 = 0; i2 < n; ++i2)
      for (int j = 0; j < n; ++j)
        for (int j2 = 0; j2 < n; ++j2) {
          const double v = c(i, j) + c(i, j2) + c(i2, j) - c(i2, j2);
          if (v > best) {
            best = v;
            x = {pi * i / n, pi * i2 / n, pi * j / n, pi * j2 / n};
          }
        }
  auto objective = [&](const std::array<double, 4>& y) {
    return -photon_chsh_value(s, PhotonAngles{y[0], y[1], y[2], y[3]});
  };
  SimplexOptions so;
  so.initial_step = 0.5 * pi / n;
  so.max_iterations = max_iterations;
  const auto res = nelder_mead_minimize(objective, x, so);
  if (-res.value > best) x = res.x;
  const PhotonAngles angles{x[0], x[1], x[2], x[3]};
  return PhotonCHSHResult{photon_chsh_value(s, angles), angles, res.iterations, res.converged};
}

/// Maximal CHSH value of the two-photon state; takes no kinematic input.
inline double photon_chsh_max() { return photon_chsh_maximize(build_photon_state()).value; }

/// Same state over circular labels (0 = R = (x + i y)/sqrt 2, 1 = L = (x - i y)/sqrt 2).
inline Mat2 to_circular_basis(const PhotonPairState& s) {
  const double h = std::sqrt(0.5);
  Mat2 u;  // rows: <R|, <L| in the (x, y) basis
  u << h, Complex(0.0, -h), h, Complex(0.0, h);
  return u * s.amplitudes * u.transpose();
}

}  // namespace relspin
