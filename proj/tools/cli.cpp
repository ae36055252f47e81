#include "cli.hpp"

#include "relspin/json_io.hpp"
#include "relspin/relspin.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace relspin::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> parse_doubles(const std::string& text, char sep = ',') {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  return out;
}

/// "axis:THETA,PHI" or "helicity".
Basis parse_basis(const std::string& text) {
  if (text == "helicity") return Basis::helicity();
  if (text.rfind("axis:", 0) == 0) {
    const auto v = parse_doubles(text.substr(5));
    if (v.size() == 2) return Basis::axis(UnitVector::from_angles(v[0], v[1]));
  }
  throw UsageError("basis must be 'helicity' or 'axis:THETA,PHI', got '" + text + "'");
}

UnitVector parse_direction(const std::string& text) {
  const auto v = parse_doubles(text);
  if (v.size() != 2) throw UsageError("direction must be 'THETA,PHI', got '" + text + "'");
  return UnitVector::from_angles(v[0], v[1]);
}

/// "<axis>,<sign>" with axis one of x, y, z, -x, -y, -z or THETA:PHI and sign + or -.
SpinLabel parse_spin_label(const std::string& text) {
  const auto comma = text.rfind(',');
  if (comma == std::string::npos) throw UsageError("spin label must be '<axis>,<+|->', got '" + text + "'");
  const std::string axis = text.substr(0, comma);
  const std::string sign = text.substr(comma + 1);
  if (sign != "+" && sign != "-") throw UsageError("spin sign must be '+' or '-', got '" + sign + "'");
  const Sign s = sign == "+" ? Sign::plus : Sign::minus;
  if (axis == "x") return {UnitVector::x(), s};
  if (axis == "y") return {UnitVector::y(), s};
  if (axis == "z") return {UnitVector::z(), s};
  if (axis == "-x") return {-UnitVector::x(), s};
  if (axis == "-y") return {-UnitVector::y(), s};
  if (axis == "-z") return {-UnitVector::z(), s};
  const auto v = parse_doubles(axis, ':');
  if (v.size() != 2) throw UsageError("spin axis must be x, y, z, -x, -y, -z or THETA:PHI, got '" + axis + "'");
  return {UnitVector::from_angles(v[0], v[1]), s};
}

Family parse_family(const std::string& f) {
  if (f == "wigner") return Family::wigner;
  if (f == "dirac") return Family::modified_dirac;
  if (f == "moment") return Family::magnetic_moment;
  throw UsageError("unknown family '" + f + "'");
}

bool same_label(const SpinLabel& a, const SpinLabel& b) { return a.axis == b.axis && a.sign == b.sign; }

// ---------------------------------------------------------------------------

struct StateArgs {
  std::optional<double> mass_ratio;
  std::optional<double> parent_mass;
  std::optional<double> fermion_mass;
  std::string vertex = "ps";
  std::string basis = "axis:0,0";
  std::string direction = "0,0";
  std::string format = "json";
};

int cmd_state(const StateArgs& a, std::ostream& out, std::ostream& err) {
  const UnitVector dir = parse_direction(a.direction);
  std::optional<Kinematics> kin;
  try {
    if (a.parent_mass) {
      kin.emplace(*a.fermion_mass, *a.parent_mass, dir);
    } else {
      kin.emplace(Kinematics::from_mass_ratio(a.mass_ratio.value_or(1.0), dir));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Vertex vertex = a.vertex == "ps" ? Vertex::pseudoscalar : Vertex::scalar;
  const Basis basis = parse_basis(a.basis);
  try {
    const TwoPartyState state = build_state(*kin, vertex, basis);
    if (a.format == "json") {
      out << to_json(state).dump(2) << "\n";
    } else {
      out << "vertex " << to_string(vertex) << "  m/E " << fmt12(kin->mass_ratio()) << "\n";
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const Complex z = state.amplitudes()(i, j);
          out << (i == 0 ? '+' : '-') << (j == 0 ? '+' : '-') << "  " << fmt12(z.real()) << " " << fmt12(z.imag())
              << "\n";
        }
    }
  } catch (const VanishingAmplitudeError& e) {
    err << "error: " << e.what() << "\n";
    return kContractViolation;
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct ScanArgs {
  double r_min = 0.01;
  double r_max = 1.0;
  int steps = 12;
  std::string spacing = "linear";
  std::vector<double> r_values;
  std::string family = "dirac";
  std::string output = "-";
  std::string format = "csv";
  int grid_points = 24;
  int max_iterations = 200;
};

struct ScanRow {
  double r;
  double chsh_max;
  double chsh_oracle;
  Eigen::Vector3d diag;
  bool converged;
};

std::vector<double> scan_grid(const ScanArgs& a) {
  if (!a.r_values.empty()) {
    for (double r : a.r_values)
      if (!(r > 0.0 && r <= 1.0)) throw UsageError("mass ratios must lie in (0, 1]");
    return a.r_values;
  }
  if (!(a.r_min > 0.0 && a.r_max <= 1.0 && a.r_min <= a.r_max)) {
    throw UsageError("need 0 < r-min <= r-max <= 1");
  }
  if (a.steps < 1) throw UsageError("steps must be at least 1");
  std::vector<double> rs;
  for (int i = 0; i < a.steps; ++i) {
    const double f = a.steps == 1 ? 0.0 : static_cast<double>(i) / (a.steps - 1);
    rs.push_back(a.spacing == "log" ? a.r_min * std::pow(a.r_max / a.r_min, f) : a.r_min + f * (a.r_max - a.r_min));
  }
  if (a.steps > 1) rs.back() = a.r_max;
  return rs;
}

ScanRow scan_row(double r, Family family, const CHSHSearchOptions& opt) {
  const Kinematics kin = Kinematics::from_mass_ratio(r);
  const CHSHResult res = chsh_maximize(kin, family, opt);
  const CorrelationMatrix t = correlation_matrix(kin, family, Basis::axis(kin.direction()));
  return ScanRow{r, res.value, horodecki_bound(t), t.t.diagonal(), res.converged};
}

int cmd_chsh_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
  const Family family = parse_family(a.family);
  const std::vector<double> rs = scan_grid(a);
  CHSHSearchOptions opt;
  opt.grid_points = a.grid_points;
  opt.max_iterations = a.max_iterations;

  // Rows are independent; results are collected and written in grid order.
  std::vector<std::future<ScanRow>> jobs;
  for (double r : rs) jobs.push_back(std::async(std::launch::async, scan_row, r, family, opt));
  std::vector<ScanRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());

  std::ostringstream body;
  if (a.format == "csv") {
    body << "r,chsh_max,chsh_oracle,t_xx,t_yy,t_zz,converged\n";
    for (const auto& row : rows) {
      body << fmt12(row.r) << ',' << fmt12(row.chsh_max) << ',' << fmt12(row.chsh_oracle) << ',' << fmt12(row.diag[0])
           << ',' << fmt12(row.diag[1]) << ',' << fmt12(row.diag[2]) << ',' << (row.converged ? "true" : "false")
           << "\n";
    }
  } else {
    Json j{{"family", a.family}, {"rows", Json::array()}};
    for (const auto& row : rows) {
      j["rows"].push_back(Json{{"r", row.r},
                               {"chsh_max", row.chsh_max},
                               {"chsh_oracle", row.chsh_oracle},
                               {"t_xx", row.diag[0]},
                               {"t_yy", row.diag[1]},
                               {"t_zz", row.diag[2]},
                               {"converged", row.converged}});
    }
    body << j.dump(2) << "\n";
  }

  for (const auto& row : rows) {
    if (!row.converged) err << "warning: optimizer did not converge at r = " << fmt12(row.r) << "\n";
  }

  if (a.output == "-") {
    out << body.str();
  } else {
    std::ofstream f(a.output, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + a.output + "'");
    f << body.str();
    if (!f) throw UsageError("failed writing output file '" + a.output + "'");
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct PlotArgs {
  std::string csv;
  std::string output = "-";
};

int cmd_gnuplot(const PlotArgs& a, std::ostream& out) {
  std::ostringstream s;
  s << "# CHSH maximum versus m/E\n"
    << "set datafile separator ','\n"
    << "set xlabel 'm/E'\n"
    << "set ylabel 'max CHSH'\n"
    << "set yrange [1.9:2.9]\n"
    << "set key bottom right\n"
    << "plot '" << a.csv << "' every ::1 using 1:2 with points pt 7 title 'optimizer', \\\n"
    << "     '" << a.csv << "' every ::1 using 1:3 with lines title 'closed form', \\\n"
    << "     2 with lines dt 2 title 'classical bound', \\\n"
    << "     2*sqrt(2) with lines dt 3 title 'quantum bound'\n";
  if (a.output == "-") {
    out << s.str();
  } else {
    std::ofstream f(a.output);
    if (!f) throw UsageError("cannot open output file '" + a.output + "'");
    f << s.str();
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct HVArgs {
  std::string test;
  double mass_ratio = 0.01;
  std::string sprime = "z,+";
  std::string sdprime = "z,+";
};

int cmd_hv_check(const HVArgs& a, std::ostream& out) {
  if (a.test == "helicity") {
    const TwoPartyState state = build_state(Kinematics::from_mass_ratio(a.mass_ratio), Vertex::pseudoscalar,
                                            Basis::helicity());
    const HVMatchReport rep = hv_matches_qm(state);
    out << hv_report_json(state, rep).dump(2) << "\n";
    return rep.match ? kSuccess : kContractViolation;
  }
  const SpinLabel s_a = parse_spin_label(a.sprime);
  const SpinLabel s_b = parse_spin_label(a.sdprime);
  const TwoPartyState state = build_state(Kinematics::from_mass_ratio(1.0), Vertex::pseudoscalar,
                                          Basis::axis(UnitVector::z()));
  const FactorizationResult r = factorization_test(state, s_a, s_b);
  out << factorization_report_json(state, s_a, s_b, r).dump(2) << "\n";
  // Only equal settings carry a prediction (factorization must fail).
  if (same_label(s_a, s_b) && r.separable_consistent) return kContractViolation;
  return kSuccess;
}

// ---------------------------------------------------------------------------

int cmd_photon(const std::vector<double>& angles, std::ostream& out) {
  const PhotonPairState state = build_photon_state();
  const PhotonCHSHResult best = photon_chsh_maximize(state);
  Json j{{"chsh_max", best.value},
         {"chsh_bound", photon_chsh_bound(state)},
         {"optimal_angles", Json::array({best.angles.a, best.angles.a_prime, best.angles.b, best.angles.b_prime})},
         {"converged", best.converged}};
  if (angles.size() == 2) {
    j["angles"] = angles;
    j["correlation"] = polarization_correlation(state, angles[0], angles[1]);
  } else if (angles.size() == 4) {
    j["angles"] = angles;
    j["chsh"] = photon_chsh_value(state, PhotonAngles{angles[0], angles[1], angles[2], angles[3]});
  } else if (!angles.empty()) {
    throw UsageError("--angles takes 2 values (correlation) or 4 values (CHSH)");
  }
  out << j.dump(2) << "\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin correlations, CHSH values and hidden-variables checks for pseudoscalar pair decay"};
  app.name("relspin");
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style key = value file; command-line flags take precedence");

  StateArgs state_args;
  auto* state = app.add_subcommand("state", "Print the decay spin state");
  auto* mr = state->add_option("--mass-ratio", state_args.mass_ratio, "m/E in (0, 1]");
  auto* pm = state->add_option("--parent-mass", state_args.parent_mass, "Parent mass M");
  auto* fm = state->add_option("--fermion-mass", state_args.fermion_mass, "Fermion mass m");
  pm->needs(fm);
  fm->needs(pm);
  mr->excludes(pm)->excludes(fm);
  state->add_option("--vertex", state_args.vertex, "ps (pseudoscalar) or s (scalar)")
      ->check(CLI::IsMember({"ps", "s"}))
      ->capture_default_str();
  state->add_option("--basis", state_args.basis, "axis:THETA,PHI or helicity")->capture_default_str();
  state->add_option("--direction", state_args.direction, "Fermion momentum direction THETA,PHI")
      ->capture_default_str();
  state->add_option("--format", state_args.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("chsh-scan", "Maximal CHSH value and correlation diagonal over a mass-ratio grid");
  scan->add_option("--r-min", scan_args.r_min, "Smallest m/E")->capture_default_str();
  scan->add_option("--r-max", scan_args.r_max, "Largest m/E")->capture_default_str();
  scan->add_option("--steps", scan_args.steps, "Number of rows")->capture_default_str();
  scan->add_option("--spacing", scan_args.spacing, "linear or log")
      ->check(CLI::IsMember({"linear", "log"}))
      ->capture_default_str();
  scan->add_option("--r-values", scan_args.r_values, "Explicit comma-separated m/E list (overrides the range)")
      ->delimiter(',');
  scan->add_option("--family", scan_args.family, "wigner, dirac or moment")
      ->check(CLI::IsMember({"wigner", "dirac", "moment"}))
      ->capture_default_str();
  scan->add_option("--output,-o", scan_args.output, "Output path, '-' for stdout")->capture_default_str();
  scan->add_option("--format", scan_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  scan->add_option("--grid-points", scan_args.grid_points, "Coarse grid points per angle")
      ->check(CLI::Range(2, 96))
      ->capture_default_str();
  scan->add_option("--max-iterations", scan_args.max_iterations, "Simplex iterations per refinement pass")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  PlotArgs plot_args;
  auto* plot = app.add_subcommand("gnuplot-script", "Write a gnuplot script for a chsh-scan CSV");
  plot->add_option("--csv", plot_args.csv, "CSV produced by chsh-scan")->required();
  plot->add_option("--output,-o", plot_args.output, "Script path, '-' for stdout")->capture_default_str();

  HVArgs hv_args;
  auto* hv = app.add_subcommand("hv-check", "Hidden-variables reproduction or factorization test");
  hv->add_option("--test", hv_args.test, "helicity or factorization")
      ->required()
      ->check(CLI::IsMember({"helicity", "factorization"}));
  hv->add_option("--mass-ratio", hv_args.mass_ratio, "m/E of the helicity-basis state")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  hv->add_option("--sprime", hv_args.sprime, "Fermion projector label <axis>,<+|->")->capture_default_str();
  hv->add_option("--sdprime", hv_args.sdprime, "Antifermion projector label <axis>,<+|->")->capture_default_str();

  std::vector<double> photon_angles;
  auto* photon = app.add_subcommand("photon", "Two-photon linear-polarization correlations");
  photon->add_option("--angles", photon_angles, "Analyzer angles in radians: 2 (correlation) or 4 (CHSH)")
      ->delimiter(',');

  std::vector<const char*> argv{"relspin"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) out << sub->help();
      return kSuccess;
    }
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*state) return cmd_state(state_args, out, err);
    if (*scan) return cmd_chsh_scan(scan_args, out, err);
    if (*plot) return cmd_gnuplot(plot_args, out);
    if (*hv) return cmd_hv_check(hv_args, out);
    if (*photon) return cmd_photon(photon_angles, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace relspin::cli
