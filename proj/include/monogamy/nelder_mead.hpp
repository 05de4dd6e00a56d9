#pragma once

// Derivative-free Nelder-Mead minimization over a fixed-dimension box-free
// parameter space.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace monogamy {

struct NelderMeadOptions {
  int max_iterations = 200;
  // Converged once the simplex extent around the best vertex and the spread
  // of vertex values are both below these.
  double x_tolerance = 1e-6;
  double f_tolerance = 1e-8;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

template <std::size_t N>
struct NelderMeadResult {
  std::array<double, N> x{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes `f` starting from the simplex {start, start + step_i e_i}.
template <std::size_t N, typename F>
NelderMeadResult<N> nelder_mead(F&& f, const std::array<double, N>& start,
                                const std::array<double, N>& step, const NelderMeadOptions& opt = {}) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> pts;
  std::array<double, N + 1> vals;
  pts[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    pts[i + 1] = start;
    pts[i + 1][i] += step[i];
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = f(pts[i]);

  auto combine = [](const Point& a, const Point& b, double t) {
    // a + t (b - a)
    Point out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  NelderMeadResult<N> result;
  std::array<std::size_t, N + 1> order;
  for (int iter = 0;; ++iter) {
    for (std::size_t i = 0; i <= N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[N - 1];

    double extent = 0.0;
    for (std::size_t i = 0; i <= N; ++i) {
      for (std::size_t d = 0; d < N; ++d) extent = std::max(extent, std::abs(pts[i][d] - pts[best][d]));
    }
    const double spread = vals[worst] - vals[best];
    result.iterations = iter;
    if (extent < opt.x_tolerance && spread < opt.f_tolerance) {
      result.converged = true;
      break;
    }
    if (iter >= opt.max_iterations) break;

    Point centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < N; ++d) centroid[d] += pts[i][d] / static_cast<double>(N);
    }

    const Point reflected = combine(centroid, pts[worst], -opt.reflection);
    const double f_reflected = f(reflected);
    if (f_reflected < vals[best]) {
      const Point expanded = combine(centroid, pts[worst], -opt.expansion);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        pts[worst] = expanded;
        vals[worst] = f_expanded;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < vals[second_worst]) {
      pts[worst] = reflected;
      vals[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < vals[worst];
    const Point contracted =
        outside ? combine(centroid, reflected, opt.contraction) : combine(centroid, pts[worst], opt.contraction);
    const double f_contracted = f(contracted);
    if (f_contracted < (outside ? f_reflected : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      pts[i] = combine(pts[best], pts[i], opt.shrink);
      vals[i] = f(pts[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= N; ++i) {
    if (vals[i] < vals[best]) best = i;
  }
  result.x = pts[best];
  result.value = vals[best];
  return result;
}

}  // namespace monogamy
