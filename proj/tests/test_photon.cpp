#include "relspin/correlations.hpp"
#include "relspin/photon.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <type_traits>

using namespace relspin;
using Catch::Matchers::WithinAbs;

namespace {
const double pi = std::acos(-1.0);
const double tsirelson = 2.0 * std::sqrt(2.0);
}  // namespace

TEST_CASE("photon pair state", "[photon]") {
  const PhotonPairState s = build_photon_state();
  CHECK(s.amplitudes(0, 0) == 0.0);
  CHECK(s.amplitudes(1, 1) == 0.0);
  CHECK_THAT(std::abs(s.amplitudes(0, 1)), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  CHECK(std::abs(s.amplitudes(0, 1) + s.amplitudes(1, 0)) < 1e-15);
  CHECK_THAT(s.amplitudes.norm(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("joint pass probability goes as sin^2 of the angle difference", "[photon]") {
  const PhotonPairState s = build_photon_state();
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double a = 0.31 * i, b = -0.17 * j;
      CHECK_THAT(joint_pass_probability(s, a, b), WithinAbs(0.5 * std::pow(std::sin(a - b), 2), 1e-12));
    }
}

TEST_CASE("polarization correlation", "[photon]") {
  const PhotonPairState s = build_photon_state();
  CHECK_THAT(polarization_correlation(s, 0.4, 0.4), WithinAbs(-1.0, 1e-12));
  CHECK_THAT(polarization_correlation(s, 0.4 + pi / 2, 0.4), WithinAbs(1.0, 1e-12));
  CHECK_THAT(polarization_correlation(s, pi / 4, 0.0), WithinAbs(0.0, 1e-12));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double a = pi * i / 10, b = pi * j / 10 + 0.05;
      CHECK_THAT(polarization_correlation(s, a, b), WithinAbs(-std::cos(2 * (a - b)), 1e-12));
      CHECK_THAT(polarization_correlation(s, a + 0.7, b + 0.7), WithinAbs(polarization_correlation(s, a, b), 1e-12));
    }
}

TEST_CASE("photon CHSH", "[photon]") {
  const PhotonPairState s = build_photon_state();
  // the textbook analyzer set {0, pi/4; pi/8, 3pi/8} saturates the bound once the pi/4 analyzer
  // takes the unprimed slot; in the other order the four terms cancel
  CHECK_THAT(std::abs(photon_chsh_value(s, {pi / 4, 0.0, pi / 8, 3 * pi / 8})), WithinAbs(tsirelson, 1e-9));
  CHECK_THAT(photon_chsh_value(s, {0.0, pi / 4, pi / 8, 3 * pi / 8}), WithinAbs(0.0, 1e-12));
  CHECK_THAT(std::abs(photon_chsh_value(s, {0.3, 0.3, 0.3, 0.3})), WithinAbs(2.0, 1e-12));
  CHECK_THAT(photon_chsh_bound(s), WithinAbs(tsirelson, 1e-12));
  const PhotonCHSHResult best = photon_chsh_maximize(s);
  CHECK_THAT(best.value, WithinAbs(tsirelson, 1e-9));
  CHECK_THAT(best.value, WithinAbs(photon_chsh_bound(s), 1e-6));
  CHECK_THAT(photon_chsh_max(), WithinAbs(tsirelson, 1e-9));
  static_assert(std::is_invocable_r_v<double, decltype(photon_chsh_max)>);
}

TEST_CASE("photon CHSH matches fermions at threshold and exceeds them below", "[photon]") {
  const double photon = photon_chsh_max();
  for (double r : {1.0, 0.9, 0.5, 0.1, 0.01}) {
    const double fermion = chsh_maximize(Kinematics::from_mass_ratio(r), Family::modified_dirac).value;
    if (r == 1.0)
      CHECK_THAT(photon, WithinAbs(fermion, 1e-6));
    else
      CHECK(photon > fermion);
  }
}

TEST_CASE("circular basis", "[photon]") {
  const Mat2 c = to_circular_basis(build_photon_state());
  CHECK_THAT(c.norm(), WithinAbs(1.0, 1e-15));
  // (|xy> - |yx>)/sqrt2 is proportional to |RL> - |LR> up to phase; RR and LL vanish
  CHECK(std::abs(c(0, 0)) < 1e-15);
  CHECK(std::abs(c(1, 1)) < 1e-15);
  CHECK_THAT(std::abs(c(0, 1)), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
}
