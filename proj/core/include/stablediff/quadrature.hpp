#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "stablediff/error.hpp"

namespace stablediff {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

template <class T>
struct QuadResult {
  T value = 0;
  T error = 0;
  T previous = 0;  // estimate before the last refinement
  int intervals = 0;
  bool converged = false;
};

namespace detail {

inline constexpr long double kKronrodNodes[8] = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
inline constexpr long double kKronrodWeights[8] = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
inline constexpr long double kGaussWeights[4] = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

template <class T>
struct Panel {
  T a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gauss_kronrod_15(F& f, T a, T b) {
  const T center = (a + b) / 2;
  const T half = (b - a) / 2;
  const T fc = f(center);
  T kronrod = fc * T(kKronrodWeights[7]);
  T gauss = fc * T(kGaussWeights[3]);
  for (int j = 0; j < 7; ++j) {
    const T dx = half * T(kKronrodNodes[j]);
    const T s = f(center - dx) + f(center + dx);
    kronrod += T(kKronrodWeights[j]) * s;
    if (j % 2 == 1) gauss += T(kGaussWeights[j / 2]) * s;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

// Adaptive Gauss–Kronrod (7/15) on a finite interval, bisecting the panel with
// the largest error estimate first.
template <class T, class F>
QuadResult<T> integrate(F&& f, T a, T b, const QuadOptions& opt = {}) {
  QuadResult<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  auto first = detail::gauss_kronrod_15<T>(f, a, b);
  {
    const T tol = std::max(T(opt.abs_tol), T(opt.rel_tol) * std::abs(first.value));
    if (first.error <= tol && std::isfinite(first.value)) {
      out.value = out.previous = first.value;
      out.error = first.error;
      out.intervals = 1;
      out.converged = true;
      return out;
    }
  }
  std::priority_queue<detail::Panel<T>> heap;
  T total = first.value, err = first.error;
  heap.push(first);
  out.previous = total;
  int n = 1;
  auto done = [&] {
    const T tol = std::max(T(opt.abs_tol), T(opt.rel_tol) * std::abs(total));
    return err <= tol || !std::isfinite(err);
  };
  while (!done() && n < opt.max_intervals) {
    auto p = heap.top();
    heap.pop();
    const T mid = (p.a + p.b) / 2;
    if (mid <= p.a || mid >= p.b) {
      heap.push(p);
      break;
    }
    auto l = detail::gauss_kronrod_15<T>(f, p.a, mid);
    auto r = detail::gauss_kronrod_15<T>(f, mid, p.b);
    out.previous = total;
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++n;
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  T sum = 0, esum = 0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = esum;
  out.intervals = n;
  const T tol = std::max(T(opt.abs_tol), T(opt.rel_tol) * std::abs(sum));
  out.converged = std::isfinite(sum) && esum <= tol * 1.0001;
  return out;
}

template <class T, class F>
T integrate_or_throw(F&& f, T a, T b, const QuadOptions& opt = {}) {
  auto r = integrate<T>(f, a, b, opt);
  if (!r.converged) {
    throw Error(ErrorCode::QuadratureNonConvergence, "adaptive quadrature did not converge",
                {{"a", double(a)},
                 {"b", double(b)},
                 {"estimate", double(r.value)},
                 {"previous_estimate", double(r.previous)},
                 {"error_estimate", double(r.error)}});
  }
  return r.value;
}

}  // namespace stablediff
