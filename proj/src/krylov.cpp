// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/krylov.hpp"

#include <cmath>
#include <stdexcept>

namespace hexsem {

double dot(std::span<const Real> a, std::span<const Real> b)
{
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

double norm2(std::span<const Real> a) { return std::sqrt(dot(a, a)); }

PcgResult pcg(const LinearOp& apply_A, const LinearOp& apply_P, std::span<const Real> b,
              const PcgConfig& config)
{
  if (!(config.rel_tolerance > 0) || !(config.rel_tolerance < 1))
    throw std::invalid_argument("pcg: rel_tolerance must lie in (0,1)");
  if (config.max_iterations < 1) throw std::invalid_argument("pcg: max_iterations must be >= 1");

  const std::size_t n = b.size();
  PcgResult out;
  out.u.assign(n, Real(0));

  Vector r(b.begin(), b.end()); // r_0 = b - A*0
  Vector z(n), p(n), f(n);

  const double r0_norm = norm2(r);
  if (config.record_history) out.residual_history.push_back(static_cast<Real>(r0_norm));
  if (r0_norm == 0.0) return out;

  apply_P(r, z);
  p = z;
  double zr = dot(z, r);

  for (int k = 0; k < config.max_iterations; ++k) {
    if (config.record_history) out.zr_history.push_back(static_cast<Real>(zr));
    apply_A(p, f);
    const double pf = dot(p, f);
    if (!(pf > 0)) {
      out.status = PcgStatus::breakdown;
      out.diagnostic = "indefinite operator: p.Ap = " + std::to_string(pf) + " at iteration " +
                       std::to_string(k);
      return out;
    }
    const double alpha = zr / pf;
    for (std::size_t i = 0; i < n; ++i) {
      out.u[i] += static_cast<Real>(alpha) * p[i];
      r[i] -= static_cast<Real>(alpha) * f[i];
    }
    out.iterations = k + 1;
    const double rn = norm2(r);
    if (config.record_history) out.residual_history.push_back(static_cast<Real>(rn));
    if (rn / r0_norm <= config.rel_tolerance) return out;

    apply_P(r, z);
    const double zr_next = dot(z, r);
    const double beta = zr_next / zr;
    zr = zr_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + static_cast<Real>(beta) * p[i];
  }
  out.status = PcgStatus::max_iterations;
  out.diagnostic = "not converged within " + std::to_string(config.max_iterations) + " iterations";
  return out;
}

} // namespace hexsem
