#pragma once

// JSON views of states and hidden-variables reports.
//
// TwoPartyState:
//   { "vertex": "pseudoscalar"|"scalar"|null,
//     "basis": { "kind": "axis"|"helicity", "axis": [x, y, z], "theta": t, "phi": p },
//     "kinematics": { "fermion_mass", "parent_mass", "energy", "momentum_magnitude",
//                     "mass_ratio", "direction": [x, y, z] },
//     "labels": ["+", "-"],
//     "amplitudes": [[[re, im], [re, im]], [[re, im], [re, im]]] }   // [electron][positron]

#include "relspin/hidden_variables.hpp"

#include "json.hpp"

#include <string>

namespace relspin {

using Json = nlohmann::json;

inline Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

inline Json to_json(const Kinematics& k) {
  return Json{{"fermion_mass", k.fermion_mass()},
              {"parent_mass", k.parent_mass()},
              {"energy", k.energy()},
              {"momentum_magnitude", k.momentum_magnitude()},
              {"mass_ratio", k.mass_ratio()},
              {"direction", to_json(k.direction().vec())}};
}

/// The helicity basis reports the momentum direction as its axis.
inline Json to_json(const Basis& b, const Kinematics& k) {
  const UnitVector& axis = b.is_helicity() ? k.direction() : b.spin_axis();
  return Json{{"kind", b.is_helicity() ? "helicity" : "axis"},
              {"axis", to_json(axis.vec())},
              {"theta", axis.theta()},
              {"phi", axis.phi()}};
}

inline Json to_json(const Mat2& m) {
  Json rows = Json::array();
  for (int i = 0; i < 2; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 2; ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

inline Json to_json(const TwoPartyState& s) {
  return Json{{"vertex", s.vertex() ? Json(to_string(*s.vertex())) : Json(nullptr)},
              {"basis", to_json(s.basis(), s.kinematics())},
              {"kinematics", to_json(s.kinematics())},
              {"labels", Json::array({"+", "-"})},
              {"amplitudes", to_json(s.amplitudes())}};
}

inline Json joint_table_json(const JointTable& t) {
  return Json{{"++", t[0][0]}, {"+-", t[0][1]}, {"-+", t[1][0]}, {"--", t[1][1]}};
}

inline Json to_json(const SpinLabel& l) {
  return Json{{"axis", to_json(l.axis.vec())}, {"sign", l.sign == Sign::plus ? "+" : "-"}};
}

inline Json hv_report_json(const TwoPartyState& state, const HVMatchReport& rep) {
  return Json{{"test", "helicity"},
              {"inputs", Json{{"state", to_json(state)}}},
              {"qm", joint_table_json(rep.qm)},
              {"hv", joint_table_json(rep.hv)},
              {"delta", joint_table_json(rep.delta)},
              {"max_abs_delta", rep.max_abs_delta},
              {"verdict", rep.match ? "match" : "mismatch"}};
}

inline Json factorization_report_json(const TwoPartyState& state, const SpinLabel& s_a, const SpinLabel& s_b,
                                      const FactorizationResult& r) {
  return Json{{"test", "factorization"},
              {"inputs", Json{{"state", to_json(state)}, {"sprime", to_json(s_a)}, {"sdprime", to_json(s_b)}}},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"delta", r.delta},
              {"verdict", r.separable_consistent ? "factorizes" : "inseparable"}};
}

}  // namespace relspin
