#pragma once

// Single-party spin observables in the fixed-momentum sector, as 2x2 matrices
// on one party's label space.
//
// Each family reduces to a real "effective direction" v and an overall sign:
//
//   family            v                                fermion  antifermion
//   Wigner            e                                  +1/2      -1/2
//   ModifiedDirac     r e_T + (e.p) p                    +1/2      -1/2
//   MagneticMoment    e_T + r (e.p) p                    +1/2      +1/2
//
// with r = m/E and e_T = e - (e.p) p. The fermion matrix is
// M[s'][s] = (sign/2) xi(s')^dagger (v.sigma) xi(s); the antifermion matrix uses
// the transposed carrier order M[s'][s] = (sign/2) eta(s)^dagger (v.sigma) eta(s'),
// where eta(s) is the spinor inside v(-p, s). The antifermion longitudinal term
// uses the fermion direction p, which reproduces the helicity operator
// diag(+1/2, -1/2) for the fermion and -diag(+1/2, -1/2) for the antifermion.

#include "relspin/decay_state.hpp"

#include <Eigen/Eigenvalues>

#include <optional>
#include <stdexcept>
#include <string>

namespace relspin {

enum class Family { wigner, modified_dirac, magnetic_moment, helicity };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::wigner: return "wigner";
    case Family::modified_dirac: return "modified_dirac";
    case Family::magnetic_moment: return "magnetic_moment";
    case Family::helicity: return "helicity";
  }
  return "unknown";
}

struct PartyObservable {
  Mat2 matrix;
  Party party;
  Family family;
  std::optional<UnitVector> direction;  // absent for helicity
  Kinematics kin;
  Basis basis;
};

namespace detail {

inline Vec3 effective_direction(Family family, const Vec3& e, const Kinematics& kin) {
  const Vec3& p = kin.direction().vec();
  const double r = kin.mass_ratio();
  const double along = e.dot(p);
  const Vec3 transverse = e - along * p;
  switch (family) {
    case Family::wigner: return e;
    case Family::modified_dirac:
    case Family::helicity: return r * transverse + along * p;
    case Family::magnetic_moment: return transverse + r * along * p;
  }
  throw std::logic_error("effective_direction: unknown family");
}

inline double party_sign(Family family, Party party) {
  if (party == Party::electron || family == Family::magnetic_moment) return 1.0;
  return -1.0;
}

/// (sign/2) carrier sandwich of v.sigma with the party's label ordering.
inline Mat2 label_matrix(const Vec3& v, double sign, Party party, const LabelSpinors& carriers) {
  const Mat2 op = sigma_dot(v);
  const auto& c = carriers.of(party);
  Mat2 m;
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 2; ++col) {
      m(row, col) = party == Party::electron ? c[row].c.dot(op * c[col].c) : c[col].c.dot(op * c[row].c);
    }
  }
  return 0.5 * sign * m;
}

inline PartyObservable make_observable(Family family, const UnitVector& e, Party party, const Kinematics& kin,
                                       const Basis& basis) {
  const Vec3 v = effective_direction(family, e.vec(), kin);
  const Mat2 m = label_matrix(v, party_sign(family, party), party, label_spinors(basis, kin));
  return PartyObservable{m, party, family, e, kin, basis};
}

}  // namespace detail

/// Rest-frame (Wigner) spin along `e`; independent of the momentum.
inline PartyObservable wigner_spin(const UnitVector& e, Party party, const Kinematics& kin, const Basis& basis) {
  return detail::make_observable(Family::wigner, e, party, kin, basis);
}

/// Laboratory spin from the spin part of the Noether charge: transverse
/// components suppressed by m/E.
inline PartyObservable modified_dirac_spin(const UnitVector& e, Party party, const Kinematics& kin,
                                           const Basis& basis) {
  return detail::make_observable(Family::modified_dirac, e, party, kin, basis);
}

/// psibar S psi: longitudinal component suppressed by m/E, and the antifermion
/// enters with the same sign as the fermion.
inline PartyObservable magnetic_moment_op(const UnitVector& e, Party party, const Kinematics& kin,
                                          const Basis& basis) {
  return detail::make_observable(Family::magnetic_moment, e, party, kin, basis);
}

/// Longitudinal modified Dirac spin, expressed in the helicity basis.
inline PartyObservable helicity_operator(Party party, const Kinematics& kin) {
  const Basis basis = Basis::helicity();
  const Vec3 v = detail::effective_direction(Family::helicity, kin.direction().vec(), kin);
  const Mat2 m = detail::label_matrix(v, detail::party_sign(Family::helicity, party), party, label_spinors(basis, kin));
  return PartyObservable{m, party, Family::helicity, std::nullopt, kin, basis};
}

inline PartyObservable make_observable(Family family, const UnitVector& e, Party party, const Kinematics& kin,
                                       const Basis& basis) {
  if (family == Family::helicity) {
    const PartyObservable h = helicity_operator(party, kin);
    if (!(basis == h.basis)) throw std::invalid_argument("helicity observable exists only in the helicity basis");
    return h;
  }
  return detail::make_observable(family, e, party, kin, basis);
}

inline bool is_hermitian(const Mat2& m, double tol = tolerance::algebraic) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// Expectation values.

/// A single fermion or antifermion in a label superposition.
struct OneParticleState {
  Party party;
  Eigen::Vector2cd amplitudes;
  Basis basis;
  Kinematics kin;

  static OneParticleState label(Party party, Sign s, const Basis& basis, const Kinematics& kin) {
    Eigen::Vector2cd a = Eigen::Vector2cd::Zero();
    a[index_of(s)] = 1.0;
    return OneParticleState{party, a, basis, kin};
  }
};

namespace detail {

inline void require_frame(const Basis& sb, const Kinematics& sk, const PartyObservable& o) {
  if (!same_frame(sb, sk, o.basis, o.kin)) throw std::invalid_argument("basis mismatch between state and observable");
}

inline double real_part_checked(Complex z, double scale) {
  if (std::abs(z.imag()) > tolerance::algebraic * std::max(1.0, scale)) {
    throw std::logic_error("expectation value has an imaginary part: " + std::to_string(z.imag()));
  }
  return z.real();
}

/// Action on the amplitude array A[s][s']: the fermion matrix multiplies from
/// the left, the antifermion matrix acts on the column index (A M^T).
inline Mat2 apply(const PartyObservable& o, const Mat2& amps) {
  return o.party == Party::electron ? Mat2(o.matrix * amps) : Mat2(amps * o.matrix.transpose());
}

}  // namespace detail

/// <Psi| O x 1 |Psi> or <Psi| 1 x O |Psi>.
inline double single_party_expectation(const TwoPartyState& state, const PartyObservable& o) {
  detail::require_frame(state.basis(), state.kinematics(), o);
  if (!is_hermitian(o.matrix)) throw std::invalid_argument("observable is not Hermitian");
  const Complex z = (state.amplitudes().adjoint() * detail::apply(o, state.amplitudes())).trace();
  return detail::real_part_checked(z, o.matrix.norm());
}

inline double single_party_expectation(const OneParticleState& state, const PartyObservable& o) {
  detail::require_frame(state.basis, state.kin, o);
  if (o.party != state.party) throw std::invalid_argument("observable and state belong to different parties");
  const Eigen::Vector2cd a = state.amplitudes / state.amplitudes.norm();
  return detail::real_part_checked(a.dot(o.matrix * a), o.matrix.norm());
}

/// Eigenvalues of an observable and its spread in a given state.
struct Dispersion {
  Eigen::Vector2d eigenvalues;
  double mean;
  double variance;
};

inline Dispersion dispersion(const TwoPartyState& state, const PartyObservable& o) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(o.matrix);
  const double mean = single_party_expectation(state, o);
  PartyObservable squared = o;
  squared.matrix = o.matrix * o.matrix;
  const double second = single_party_expectation(state, squared);
  return Dispersion{es.eigenvalues(), mean, second - mean * mean};
}

inline Eigen::Vector2d eigenvalues(const PartyObservable& o) {
  return Eigen::SelfAdjointEigenSolver<Mat2>(o.matrix).eigenvalues();
}

// ---------------------------------------------------------------------------
// Two-party operator algebra on the 4-dimensional label space.

/// Kronecker product acting on the row-major 4-vector of amplitudes
/// (index 2 s + s').
inline Mat4 two_party_operator(const Mat2& electron, const Mat2& right) {
  Mat4 out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(2 * a + c, 2 * b + d) = electron(a, b) * right(c, d);
  return out;
}

/// Total Wigner spin along `e`, acting on both parties.
inline Mat4 total_wigner_spin(const UnitVector& e, const Kinematics& kin, const Basis& basis) {
  const Mat2 one = Mat2::Identity();
  return two_party_operator(wigner_spin(e, Party::electron, kin, basis).matrix, one) +
         two_party_operator(one, wigner_spin(e, Party::positron, kin, basis).matrix);
}

}  // namespace relspin
