#pragma once

// Deterministic Nelder-Mead simplex minimizer over a fixed-size parameter
// array. No randomness; ties are broken by vertex index so the same input
// always walks the same path.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace relspin {

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x;
  double value;
  int iterations;
  bool converged;
};

struct SimplexOptions {
  double initial_step = 0.05;
  int max_iterations = 200;
  /// Stop once the spread of function values across the simplex falls below this.
  double value_tolerance = 1e-14;
  /// ...and the largest vertex displacement from the best vertex is below this.
  double step_tolerance = 1e-9;
};

template <std::size_t N, class F>
SimplexResult<N> nelder_mead_minimize(F&& f, const std::array<double, N>& start, const SimplexOptions& opt = {}) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> pts;
  std::array<double, N + 1> vals;
  pts[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    pts[i + 1] = start;
    pts[i + 1][i] += opt.initial_step;
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = f(pts[i]);

  std::array<std::size_t, N + 1> order;
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::array<Point, N + 1> p2;
    std::array<double, N + 1> v2;
    for (std::size_t i = 0; i <= N; ++i) {
      p2[i] = pts[order[i]];
      v2[i] = vals[order[i]];
    }
    pts = p2;
    vals = v2;
  };
  auto blend = [](const Point& a, const Point& b, double t) {
    Point out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  int it = 0;
  bool converged = false;
  for (; it < opt.max_iterations; ++it) {
    sort_simplex();
    double spread = 0.0;
    for (std::size_t i = 1; i <= N; ++i)
      for (std::size_t k = 0; k < N; ++k) spread = std::max(spread, std::abs(pts[i][k] - pts[0][k]));
    if (vals[N] - vals[0] <= opt.value_tolerance && spread <= opt.step_tolerance) {
      converged = true;
      break;
    }
    Point centroid{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) centroid[k] += pts[i][k] / static_cast<double>(N);

    const Point reflected = blend(centroid, pts[N], -1.0);
    const double fr = f(reflected);
    if (fr < vals[0]) {
      const Point expanded = blend(centroid, pts[N], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[N] = expanded;
        vals[N] = fe;
      } else {
        pts[N] = reflected;
        vals[N] = fr;
      }
      continue;
    }
    if (fr < vals[N - 1]) {
      pts[N] = reflected;
      vals[N] = fr;
      continue;
    }
    const bool outside = fr < vals[N];
    const Point contracted = outside ? blend(centroid, reflected, 0.5) : blend(centroid, pts[N], 0.5);
    const double fc = f(contracted);
    if (fc < std::min(fr, vals[N])) {
      pts[N] = contracted;
      vals[N] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= N; ++i) {
      pts[i] = blend(pts[0], pts[i], 0.5);
      vals[i] = f(pts[i]);
    }
  }
  sort_simplex();
  return SimplexResult<N>{pts[0], vals[0], it, converged};
}

}  // namespace relspin
