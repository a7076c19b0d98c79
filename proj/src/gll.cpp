// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/gll.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hexsem {

std::pair<double, double> legendre(int n, double t)
{
  double pm1 = 1.0, p = t;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * t * p - (k - 1.0) * pm1) / k;
    pm1 = p;
    p = pk;
  }
  // P'_n from the standard identity; at t = +-1 it reduces to n(n+1)/2 * t^(n+1).
  double dp;
  if (std::abs(1.0 - t * t) < 1e-14) {
    dp = 0.5 * n * (n + 1.0) * (t > 0 ? 1.0 : ((n % 2 == 0) ? -1.0 : 1.0));
  } else {
    dp = n * (pm1 - t * p) / (1.0 - t * t);
  }
  return {p, dp};
}

void gll_nodes_weights(int n, std::vector<Real>& nodes, std::vector<Real>& weights)
{
  if (n < 1) throw std::invalid_argument("gll order must be >= 1, got " + std::to_string(n));
  nodes.assign(n + 1, Real(0));
  weights.assign(n + 1, Real(0));

  std::vector<double> t(n + 1, 0.0);
  t[0] = -1.0;
  t[n] = 1.0;
  // Interior nodes: Newton on f = (1-t^2) P'_n.  The Legendre ODE gives
  // f' = -n(n+1) P_n, so the update needs a single recurrence evaluation.
  for (int i = 1; i < n; ++i) {
    double x = -std::cos(M_PI * i / n); // Chebyshev-Lobatto initial guess
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double f = (1.0 - x * x) * dp;
      const double df = -static_cast<double>(n) * (n + 1.0) * p;
      const double dx = f / df;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    t[i] = x;
  }
  // Enforce the exact node symmetry t_i = -t_{n-i}.
  for (int i = 0; i <= n / 2; ++i) {
    const double s = 0.5 * (t[i] - t[n - i]);
    t[i] = s;
    t[n - i] = -s;
  }

  for (int i = 0; i <= n; ++i) {
    const auto [p, dp] = legendre(n, t[i]);
    (void)dp;
    nodes[i] = static_cast<Real>(t[i]);
    weights[i] = static_cast<Real>(2.0 / (n * (n + 1.0) * p * p));
  }
}

std::vector<Real> derivation_matrix(int n, const std::vector<Real>& nodes)
{
  const int np = n + 1;
  std::vector<Real> d(static_cast<std::size_t>(np) * np, Real(0));
  std::vector<double> ln(np);
  for (int i = 0; i < np; ++i) ln[i] = legendre(n, nodes[i]).first;
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < np; ++j) {
      if (i != j) {
        d[static_cast<std::size_t>(i) * np + j] =
            static_cast<Real>(ln[j] / (ln[i] * (static_cast<double>(nodes[j]) - nodes[i])));
      }
    }
  }
  d[0] = static_cast<Real>(-0.25 * n * (n + 1.0));
  d[static_cast<std::size_t>(np) * np - 1] = static_cast<Real>(0.25 * n * (n + 1.0));
  return d;
}

std::vector<Real> coarse_vandermonde(int n, const std::vector<Real>& nodes)
{
  const int np = n + 1;
  const std::size_t nloc = static_cast<std::size_t>(np) * np * np;
  std::vector<Real> b(8 * nloc);
  auto hat = [](int which, Real t) { return which == 0 ? Real(0.5) * (1 - t) : Real(0.5) * (1 + t); };
  for (int corner = 0; corner < 8; ++corner) {
    const int ci = corner & 1, cj = (corner >> 1) & 1, ck = (corner >> 2) & 1;
    std::size_t node = 0;
    for (int k = 0; k < np; ++k)
      for (int j = 0; j < np; ++j)
        for (int i = 0; i < np; ++i, ++node)
          b[corner * nloc + node] = hat(ci, nodes[i]) * hat(cj, nodes[j]) * hat(ck, nodes[k]);
  }
  return b;
}

GllBasis make_gll_basis(int order)
{
  GllBasis basis;
  basis.order = order;
  gll_nodes_weights(order, basis.nodes, basis.weights);
  basis.deriv = derivation_matrix(order, basis.nodes);
  basis.coarse_vandermonde = coarse_vandermonde(order, basis.nodes);
  return basis;
}

} // namespace hexsem
