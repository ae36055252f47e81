#pragma once

// Two- and four-component spinor algebra in the Dirac (Bjorken-Drell)
// representation: Pauli and gamma matrices, rest-frame two-spinors for an
// arbitrary spin axis, boosted Dirac solutions u and v, and the bilinears
// built from them.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace relspin {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr Complex kI{0.0, 1.0};

namespace tolerance {
/// Exact algebraic identities.
inline constexpr double algebraic = 1e-12;
/// Values produced by the CHSH optimizer against closed forms.
inline constexpr double optimizer = 1e-9;
/// Analytic integrals and optimizer-vs-oracle agreement.
inline constexpr double analytic = 1e-6;
}  // namespace tolerance

enum class Sign : int { plus = +1, minus = -1 };

constexpr int value(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign flip(Sign s) noexcept { return s == Sign::plus ? Sign::minus : Sign::plus; }
/// Label index used by every 2x2 label-space array: 0 is "+", 1 is "-".
constexpr int index_of(Sign s) noexcept { return s == Sign::plus ? 0 : 1; }
constexpr Sign sign_at(int index) noexcept { return index == 0 ? Sign::plus : Sign::minus; }

/// A direction in 3-space. Construction rejects vectors whose norm differs
/// from one by more than the algebraic tolerance.
class UnitVector {
 public:
  explicit UnitVector(const Vec3& v) : v_(v) {
    if (!std::isfinite(v.norm()) || std::abs(v.norm() - 1.0) > tolerance::algebraic) {
      throw std::domain_error("UnitVector: norm " + std::to_string(v.norm()) + " is not 1");
    }
  }
  UnitVector(double x, double y, double z) : UnitVector(Vec3(x, y, z)) {}

  /// Normalizes an arbitrary nonzero vector.
  static UnitVector normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::domain_error("UnitVector: cannot normalize zero vector");
    return UnitVector(Vec3(v / n));
  }
  static UnitVector from_angles(double theta, double phi) {
    return UnitVector(Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)));
  }
  static UnitVector x() { return UnitVector(1.0, 0.0, 0.0); }
  static UnitVector y() { return UnitVector(0.0, 1.0, 0.0); }
  static UnitVector z() { return UnitVector(0.0, 0.0, 1.0); }

  const Vec3& vec() const noexcept { return v_; }
  double operator[](int i) const { return v_[i]; }

  double theta() const { return std::acos(std::clamp(v_.z(), -1.0, 1.0)); }
  /// Azimuth; zero on the polar axis (including the -z pole).
  double phi() const {
    if (v_.x() == 0.0 && v_.y() == 0.0) return 0.0;
    return std::atan2(v_.y(), v_.x());
  }

  UnitVector operator-() const { return UnitVector(Vec3(-v_)); }
  bool operator==(const UnitVector& o) const { return v_ == o.v_; }

 private:
  Vec3 v_;
};

using SpinAxis = UnitVector;

/// A spin quantization choice for one particle: the axis and the sign of the
/// projection along it.
struct SpinLabel {
  SpinAxis axis;
  Sign sign;
};

struct TwoSpinor {
  Eigen::Vector2cd c;

  Complex operator[](int i) const { return c[i]; }
  double norm() const { return c.norm(); }
  bool operator==(const TwoSpinor& o) const { return c == o.c; }
};

enum class SpinorKind { particle, antiparticle };

struct DiracSpinor {
  Eigen::Vector4cd c;
  SpinorKind kind;

  Eigen::Vector2cd upper() const { return c.head<2>(); }
  Eigen::Vector2cd lower() const { return c.tail<2>(); }
};

// ---------------------------------------------------------------------------
// Kinematics of the two-body decay M -> f fbar at rest.

class Kinematics {
 public:
  /// `fermion_mass` m > 0, `parent_mass` M >= 2m; the fermion travels along
  /// `direction` and the antifermion opposite to it.
  Kinematics(double fermion_mass, double parent_mass, UnitVector direction = UnitVector::z())
      : m_(fermion_mass), big_m_(parent_mass), dir_(direction) {
    if (!(fermion_mass > 0.0) || !std::isfinite(fermion_mass)) {
      throw std::invalid_argument("Kinematics: fermion mass must be positive");
    }
    if (!(parent_mass >= 2.0 * fermion_mass) || !std::isfinite(parent_mass)) {
      throw std::invalid_argument("Kinematics: parent mass must be at least twice the fermion mass");
    }
    e_ = 0.5 * parent_mass;
    p_ = std::sqrt((e_ - m_) * (e_ + m_));
  }

  /// Unit fermion mass, parent mass 2/r, so that m/E = r.
  static Kinematics from_mass_ratio(double r, UnitVector direction = UnitVector::z()) {
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("Kinematics: mass ratio must lie in (0, 1]");
    return Kinematics(1.0, 2.0 / r, direction);
  }

  double fermion_mass() const noexcept { return m_; }
  double parent_mass() const noexcept { return big_m_; }
  double energy() const noexcept { return e_; }
  double momentum_magnitude() const noexcept { return p_; }
  const UnitVector& direction() const noexcept { return dir_; }
  Vec3 momentum() const { return p_ * dir_.vec(); }
  /// m/E, one at threshold and vanishing in the ultra-relativistic limit.
  double mass_ratio() const noexcept { return m_ / e_; }
  bool at_threshold() const noexcept { return p_ == 0.0; }

  /// Same energies with the momentum direction reversed (the antifermion leg).
  Kinematics reversed() const { return Kinematics(m_, big_m_, -dir_); }

 private:
  double m_;
  double big_m_;
  UnitVector dir_;
  double e_ = 0.0;
  double p_ = 0.0;
};

// ---------------------------------------------------------------------------
// Matrices.

inline Mat2 pauli(int k) {
  Mat2 s;
  switch (k) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -kI, kI, 0; break;
    case 2: s << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli: index must be 0, 1 or 2");
  }
  return s;
}

/// v . sigma for a real 3-vector.
inline Mat2 sigma_dot(const Vec3& v) {
  return v.x() * pauli(0) + v.y() * pauli(1) + v.z() * pauli(2);
}

namespace gamma {

inline Mat4 blocks(const Mat2& a, const Mat2& b, const Mat2& c, const Mat2& d) {
  Mat4 g;
  g << a, b, c, d;
  return g;
}

/// gamma^0 = diag(1, 1, -1, -1).
inline Mat4 g0() {
  const Mat2 one = Mat2::Identity();
  return blocks(one, Mat2::Zero(), Mat2::Zero(), -one);
}

/// Spatial gamma^k (k = 1, 2, 3) = [[0, sigma_k], [-sigma_k, 0]].
inline Mat4 gk(int k) {
  if (k < 1 || k > 3) throw std::out_of_range("gamma::gk: index must be 1, 2 or 3");
  const Mat2 s = pauli(k - 1);
  return blocks(Mat2::Zero(), s, -s, Mat2::Zero());
}

/// gamma_5 with identity off-diagonal blocks.
inline Mat4 g5() {
  const Mat2 one = Mat2::Identity();
  return blocks(Mat2::Zero(), one, one, Mat2::Zero());
}

/// Spin matrix S^k = diag(sigma_k, sigma_k) / 2 (k = 0, 1, 2).
inline Mat4 spin(int k) {
  const Mat2 s = 0.5 * pauli(k);
  return blocks(s, Mat2::Zero(), Mat2::Zero(), s);
}

}  // namespace gamma

// ---------------------------------------------------------------------------
// Rest-frame two-spinors.

/// Eigenspinor of (s . sigma) with eigenvalue `sign`, in the fixed phase
/// convention xi(+) = (cos(t/2), e^{i p} sin(t/2)),
/// xi(-) = (-e^{-i p} sin(t/2), cos(t/2)), with p = 0 on the polar axis.
inline TwoSpinor make_xi(const SpinAxis& axis, Sign sign) {
  const Vec3& s = axis.vec();
  const double z = std::clamp(s.z(), -1.0, 1.0);
  const double c = std::sqrt(0.5 * (1.0 + z));
  const double sn = std::sqrt(0.5 * (1.0 - z));
  const double rho = std::hypot(s.x(), s.y());
  const Complex phase = rho == 0.0 ? Complex(1.0, 0.0) : Complex(s.x() / rho, s.y() / rho);
  TwoSpinor xi;
  if (sign == Sign::plus) {
    xi.c << c, phase * sn;
  } else {
    xi.c << -std::conj(phase) * sn, c;
  }
  return xi;
}

inline TwoSpinor make_xi(const SpinLabel& label) { return make_xi(label.axis, label.sign); }

/// (xi'^dagger sigma_k xi) for k = x, y, z.
inline CVec3 pauli_bilinear(const TwoSpinor& left, const TwoSpinor& right) {
  CVec3 out;
  for (int k = 0; k < 3; ++k) out[k] = left.c.dot(pauli(k) * right.c);  // dot() conjugates the left operand
  return out;
}

// ---------------------------------------------------------------------------
// Dirac solutions.

namespace detail {
inline double boost_norm(const Kinematics& kin) {
  return std::sqrt((kin.energy() + kin.fermion_mass()) / (2.0 * kin.energy()));
}
inline Mat2 boost_block(const Kinematics& kin) {
  return sigma_dot(kin.momentum()) / (kin.energy() + kin.fermion_mass());
}
}  // namespace detail

/// u(p, .) built from an explicit rest-frame spinor.
inline DiracSpinor dirac_u_from(const Kinematics& kin, const TwoSpinor& xi) {
  DiracSpinor u{Eigen::Vector4cd::Zero(), SpinorKind::particle};
  u.c.head<2>() = xi.c;
  u.c.tail<2>() = detail::boost_block(kin) * xi.c;
  u.c *= detail::boost_norm(kin);
  return u;
}

/// v(p, .) built from the rest-frame spinor that sits in its lower block.
inline DiracSpinor dirac_v_from(const Kinematics& kin, const TwoSpinor& eta) {
  DiracSpinor v{Eigen::Vector4cd::Zero(), SpinorKind::antiparticle};
  v.c.head<2>() = detail::boost_block(kin) * eta.c;
  v.c.tail<2>() = eta.c;
  v.c *= detail::boost_norm(kin);
  return v;
}

inline DiracSpinor dirac_u(const Kinematics& kin, const SpinAxis& axis, Sign sign) {
  return dirac_u_from(kin, make_xi(axis, sign));
}

/// v(p, s) carries xi(-s) in its lower block.
inline DiracSpinor dirac_v(const Kinematics& kin, const SpinAxis& axis, Sign sign) {
  return dirac_v_from(kin, make_xi(axis, flip(sign)));
}

/// Dirac adjoint psi^dagger gamma^0 as a row vector.
inline Eigen::RowVector4cd dirac_bar(const DiracSpinor& psi) { return psi.c.adjoint() * gamma::g0(); }

enum class Vertex { pseudoscalar, scalar };

inline const Mat4& vertex_matrix(Vertex vertex) {
  static const Mat4 g5 = gamma::g5();
  static const Mat4 one = Mat4::Identity();
  return vertex == Vertex::pseudoscalar ? g5 : one;
}

/// ubar(p, xi) Gamma v(-p, eta) with explicit rest-frame spinors: `xi` for
/// the fermion and `eta` for the lower block of the antifermion solution.
inline Complex vertex_amplitude_from(const Kinematics& kin, Vertex vertex, const TwoSpinor& xi, const TwoSpinor& eta) {
  const DiracSpinor u = dirac_u_from(kin, xi);
  const DiracSpinor v = dirac_v_from(kin.reversed(), eta);
  return (dirac_bar(u) * vertex_matrix(vertex) * v.c)(0, 0);
}

/// ubar(p, s) Gamma v(-p, s') for the back-to-back decay products.
inline Complex vertex_amplitude(const Kinematics& kin, Vertex vertex, const SpinLabel& electron,
                                const SpinLabel& positron) {
  return vertex_amplitude_from(kin, vertex, make_xi(electron), make_xi(positron.axis, flip(positron.sign)));
}

/// Largest componentwise residual of u^dagger(s') S^m u(s) - ubar(s') gamma^m gamma_5 u(s) / 2
/// over m = 1, 2, 3.
inline double axial_identity_residual(const Kinematics& kin, const SpinLabel& left, const SpinLabel& right) {
  const DiracSpinor ul = dirac_u(kin, left.axis, left.sign);
  const DiracSpinor ur = dirac_u(kin, right.axis, right.sign);
  const Mat4 g5 = gamma::g5();
  double worst = 0.0;
  for (int m = 1; m <= 3; ++m) {
    const Complex spin_side = ul.c.dot(gamma::spin(m - 1) * ur.c);
    const Complex axial_side = 0.5 * (dirac_bar(ul) * gamma::gk(m) * g5 * ur.c)(0, 0);
    worst = std::max(worst, std::abs(spin_side - axial_side));
  }
  return worst;
}

}  // namespace relspin
