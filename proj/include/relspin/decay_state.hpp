#pragma once

// Two-party spin state of the decay products in the fixed back-to-back
// momentum sector.
//
// Every label space carries a pair of "carrier" two-spinors per party: the
// fermion label s is carried by xi(s) (the upper block of u), the antifermion
// label s' by the spinor sitting in the lower block of v, i.e. xi(-s') in a
// generic-axis basis. Amplitudes, observables and basis changes are all built
// from these carriers, so one phase convention governs everything.
//
// Helicity basis convention: both carriers are eigenspinors of sigma.p with
// eigenvalue equal to the label, taken from make_xi(p, h). With this choice the
// pseudoscalar decay gives (|++> + |-->)/sqrt(2) for every momentum direction.
// Using make_xi(-p, -h) for the antifermion instead would introduce a
// direction-dependent relative phase (e.g. |++> - |--> along +z).

#include "relspin/spinor.hpp"

#include <optional>
#include <utility>
#include <stdexcept>
#include <string>

namespace relspin {

enum class Party { electron, positron };

inline std::string to_string(Party p) { return p == Party::electron ? "electron" : "positron"; }
inline std::string to_string(Vertex v) { return v == Vertex::pseudoscalar ? "pseudoscalar" : "scalar"; }

class Basis {
 public:
  enum class Kind { generic_axis, helicity };

  static Basis axis(const SpinAxis& s) { return Basis(Kind::generic_axis, s); }
  static Basis helicity() { return Basis(Kind::helicity, std::nullopt); }

  Kind kind() const noexcept { return kind_; }
  bool is_helicity() const noexcept { return kind_ == Kind::helicity; }
  /// Quantization axis of a generic-axis basis.
  const SpinAxis& spin_axis() const {
    if (!axis_) throw std::logic_error("Basis: helicity basis has no fixed spin axis");
    return *axis_;
  }

  bool operator==(const Basis& o) const { return kind_ == o.kind_ && axis_ == o.axis_; }

 private:
  Basis(Kind k, std::optional<SpinAxis> a) : kind_(k), axis_(std::move(a)) {}
  Kind kind_;
  std::optional<SpinAxis> axis_;
};

/// Carrier spinors for both parties, indexed by label (0 = "+", 1 = "-").
struct LabelSpinors {
  std::array<TwoSpinor, 2> electron;
  std::array<TwoSpinor, 2> positron;

  const std::array<TwoSpinor, 2>& of(Party p) const { return p == Party::electron ? electron : positron; }
};

inline LabelSpinors label_spinors(const Basis& basis, const Kinematics& kin) {
  LabelSpinors out;
  for (int i = 0; i < 2; ++i) {
    const Sign s = sign_at(i);
    if (basis.is_helicity()) {
      out.electron[i] = make_xi(kin.direction(), s);
      out.positron[i] = make_xi(kin.direction(), s);
    } else {
      out.electron[i] = make_xi(basis.spin_axis(), s);
      out.positron[i] = make_xi(basis.spin_axis(), flip(s));
    }
  }
  return out;
}

/// Two bases agree when they produce the same carriers for the same momentum.
inline bool same_frame(const Basis& a, const Kinematics& ka, const Basis& b, const Kinematics& kb) {
  if (!(a == b)) return false;
  return !a.is_helicity() || ka.direction() == kb.direction();
}

class VanishingAmplitudeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Amplitudes A[s][s'] over (fermion label, antifermion label); the state is
/// sum A[s][s'] a^dagger(p, s) b^dagger(-p, s') |0>.
class TwoPartyState {
 public:
  /// Wraps arbitrary amplitudes, normalizing them. Throws on a zero array.
  static TwoPartyState from_amplitudes(const Mat2& amplitudes, const Basis& basis, const Kinematics& kin,
                                       std::optional<Vertex> vertex = std::nullopt) {
    const double n = amplitudes.norm();
    if (!(n > 0.0)) throw VanishingAmplitudeError("TwoPartyState: all amplitudes vanish");
    return TwoPartyState(amplitudes / n, basis, kin, vertex);
  }

  const Mat2& amplitudes() const noexcept { return amps_; }
  Complex amplitude(Sign electron, Sign positron) const { return amps_(index_of(electron), index_of(positron)); }
  const Basis& basis() const noexcept { return basis_; }
  const Kinematics& kinematics() const noexcept { return kin_; }
  const std::optional<Vertex>& vertex() const noexcept { return vertex_; }

  /// Row-major 4-vector: index 2*electron_label + positron_label.
  Eigen::Vector4cd vector() const {
    Eigen::Vector4cd v;
    v << amps_(0, 0), amps_(0, 1), amps_(1, 0), amps_(1, 1);
    return v;
  }

  double norm() const { return amps_.norm(); }

  /// Multiplies by the phase that makes the first nonzero amplitude (row-major)
  /// real and positive.
  TwoPartyState gauge_fixed() const {
    const double cut = tolerance::algebraic * amps_.cwiseAbs().maxCoeff();
    const Eigen::Vector4cd v = vector();
    for (int i = 0; i < 4; ++i) {
      if (std::abs(v[i]) > cut) {
        const Complex phase = std::conj(v[i]) / std::abs(v[i]);
        Mat2 fixed = amps_ * phase;
        fixed(i / 2, i % 2) = std::abs(v[i]);
        return TwoPartyState(fixed, basis_, kin_, vertex_);
      }
    }
    return *this;
  }

 private:
  TwoPartyState(const Mat2& a, const Basis& b, const Kinematics& k, std::optional<Vertex> v)
      : amps_(a), basis_(b), kin_(k), vertex_(v) {}
  Mat2 amps_;
  Basis basis_;
  Kinematics kin_;
  std::optional<Vertex> vertex_;
};

/// Normalized decay state: A[s][s'] proportional to ubar(p, s) Gamma v(-p, s'),
/// gauge fixed so the first nonzero amplitude is real positive.
inline TwoPartyState build_state(const Kinematics& kin, Vertex vertex, const Basis& basis) {
  const LabelSpinors carriers = label_spinors(basis, kin);
  Mat2 amps;
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      amps(s, t) = vertex_amplitude_from(kin, vertex, carriers.electron[s], carriers.positron[t]);
    }
  }
  if (!(amps.norm() > 0.0) || (vertex == Vertex::scalar && kin.at_threshold())) {
    throw VanishingAmplitudeError("vanishing amplitude at threshold: the " + to_string(vertex) +
                                  " vertex does not couple at rest");
  }
  return TwoPartyState::from_amplitudes(amps, basis, kin, vertex).gauge_fixed();
}

/// Relabeling matrix W[t][s] = carrier_new(t)^dagger carrier_old(s).
inline Mat2 relabeling(const std::array<TwoSpinor, 2>& old_carriers, const std::array<TwoSpinor, 2>& new_carriers) {
  Mat2 w;
  for (int t = 0; t < 2; ++t) {
    for (int s = 0; s < 2; ++s) w(t, s) = new_carriers[t].c.dot(old_carriers[s].c);
  }
  return w;
}

/// Re-expresses the state in another label basis. The fermion amplitudes
/// transform with W_e, the antifermion ones with the conjugate of W_p:
/// A_new = W_e A W_p^dagger. No gauge fixing is applied.
inline TwoPartyState change_basis(const TwoPartyState& state, const Basis& new_basis) {
  const Kinematics& kin = state.kinematics();
  if (same_frame(state.basis(), kin, new_basis, kin)) return state;
  const LabelSpinors from = label_spinors(state.basis(), kin);
  const LabelSpinors to = label_spinors(new_basis, kin);
  const Mat2 we = relabeling(from.electron, to.electron);
  const Mat2 wp = relabeling(from.positron, to.positron);
  const Mat2 amps = we * state.amplitudes() * wp.adjoint();
  return TwoPartyState::from_amplitudes(amps, new_basis, kin, state.vertex());
}

/// True when a = e^{i chi} b for some chi, entrywise within `tol`.
inline bool equal_up_to_phase(const Mat2& a, const Mat2& b, double tol = tolerance::algebraic) {
  const Complex overlap = (b.adjoint() * a).trace();
  const double mag = std::abs(overlap);
  if (mag == 0.0) return a.norm() <= tol && b.norm() <= tol;
  const Complex phase = overlap / mag;
  return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace relspin
