// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/fine.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "hexsem/geometry.hpp"

namespace hexsem {

PencilFactorization build_pencil(const GllBasis& basis)
{
  const int n = basis.order;
  const int np = n + 1;
  const int p = n + 3;

  // d_ij = sum_m D_im D_jm rho_m, the discrete second derivative on [-1,1].
  std::vector<double> d(static_cast<std::size_t>(np) * np, 0.0);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) {
      double s = 0;
      for (int m = 0; m < np; ++m)
        s += static_cast<double>(basis.d(i, m)) * basis.d(j, m) * basis.weights[m];
      d[static_cast<std::size_t>(i) * np + j] = s;
    }

  PencilFactorization out;
  out.order = n;
  out.p = p;
  out.K_ext.assign(static_cast<std::size_t>(p) * p, Real(0));
  out.M_ext.assign(p, Real(0));

  // Assemble the element lattice restricted to nodes [-1, n+1]; node q lives
  // at storage index q+1. Offsets beyond +-2 cannot touch the kept range.
  for (int o = -2; o <= 2; ++o)
    for (int a = 0; a <= n; ++a) {
      const int pa = o * n + a;
      if (pa < -1 || pa > n + 1) continue;
      out.M_ext[pa + 1] += basis.weights[a];
      for (int b = 0; b <= n; ++b) {
        const int pb = o * n + b;
        if (pb < -1 || pb > n + 1) continue;
        out.K_ext[static_cast<std::size_t>(pa + 1) * p + (pb + 1)] +=
            static_cast<Real>(d[static_cast<std::size_t>(a) * np + b]);
      }
    }

  // Symmetrized eigenproblem: S = M^-1/2 K M^-1/2, then V = Q^T M^1/2 and
  // V^-1 = M^-1/2 Q give L = M^-1 K = V^-1 diag(lambda) V.
  Eigen::MatrixXd S(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      S(i, j) = static_cast<double>(out.K_ext[static_cast<std::size_t>(i) * p + j]) /
                std::sqrt(static_cast<double>(out.M_ext[i]) * out.M_ext[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (S + S.transpose()));
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("pencil eigen-solve failed for order " + std::to_string(n));

  out.lambda.resize(p);
  out.V.resize(static_cast<std::size_t>(p) * p);
  out.V_inv.resize(static_cast<std::size_t>(p) * p);
  for (int i = 0; i < p; ++i) {
    out.lambda[i] = static_cast<Real>(eig.eigenvalues()(i));
    if (!(out.lambda[i] > 0))
      throw std::runtime_error("pencil eigenvalue " + std::to_string(i) +
                               " is not positive for order " + std::to_string(n));
  }
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      out.V[static_cast<std::size_t>(i) * p + j] =
          static_cast<Real>(eig.eigenvectors()(j, i) * std::sqrt(static_cast<double>(out.M_ext[j])));
      out.V_inv[static_cast<std::size_t>(i) * p + j] =
          static_cast<Real>(eig.eigenvectors()(i, j) / std::sqrt(static_cast<double>(out.M_ext[i])));
    }
  return out;
}

unsigned long long FineCounters::ops_model(long long ne, int n)
{
  const unsigned long long p = n + 3;
  return static_cast<unsigned long long>(ne) * (6 * p * p * p * p + 15 * p * p * p);
}

unsigned long long FineCounters::words_model(long long ne, int n)
{
  const unsigned long long p = n + 3;
  return static_cast<unsigned long long>(ne) * (3 * p * p * p + 4 * p * p);
}

namespace {

// out[.., d, ..] = sum_a mat[d*p+a] in[.., a, ..] along the given axis;
// counts one op per multiply-add.
inline void tensor_pass(int p, int axis, const Real* mat, const Real* in, Real* out,
                        unsigned long long& ops)
{
  const int p2 = p * p;
  if (axis == 0) {
    for (int k = 0; k < p; ++k)
      for (int j = 0; j < p; ++j) {
        const Real* col = in + (k * p + j) * p;
        Real* dst = out + (k * p + j) * p;
        for (int dd = 0; dd < p; ++dd) {
          Real s = 0;
          const Real* row = mat + dd * p;
          for (int a = 0; a < p; ++a) s += row[a] * col[a];
          dst[dd] = s;
        }
      }
  } else if (axis == 1) {
    for (int k = 0; k < p; ++k)
      for (int dd = 0; dd < p; ++dd) {
        const Real* row = mat + dd * p;
        for (int i = 0; i < p; ++i) {
          Real s = 0;
          for (int a = 0; a < p; ++a) s += row[a] * in[(k * p + a) * p + i];
          out[(k * p + dd) * p + i] = s;
        }
      }
  } else {
    for (int dd = 0; dd < p; ++dd) {
      const Real* row = mat + dd * p;
      for (int j = 0; j < p; ++j)
        for (int i = 0; i < p; ++i) {
          Real s = 0;
          for (int a = 0; a < p; ++a) s += row[a] * in[(a * p + j) * p + i];
          out[(dd * p + j) * p + i] = s;
        }
    }
  }
  ops += static_cast<unsigned long long>(p2) * p * p;
}

} // namespace

void solve_subdomain(const PencilFactorization& pencil, std::span<const Real> r_sub,
                     std::array<Real, 3> h, Real kappa, Real c, std::span<Real> z_sub,
                     unsigned long long* ops)
{
  const int p = pencil.p;
  const std::size_t nsub = static_cast<std::size_t>(p) * p * p;
  if (r_sub.size() != nsub || z_sub.size() != nsub)
    throw std::invalid_argument("solve_subdomain: vector length mismatch");
  if (!(h[0] > 0 && h[1] > 0 && h[2] > 0)) throw std::invalid_argument("h must be positive");
  if (!(kappa > 0) || c < 0) throw std::invalid_argument("need kappa > 0, c >= 0");

  unsigned long long local = 0;
  std::vector<Real> w(nsub), t(nsub);

  const Real svol = Real(8) / (h[0] * h[1] * h[2]);
  const Real ihx2 = Real(1) / (h[0] * h[0]);
  const Real ihy2 = Real(1) / (h[1] * h[1]);
  const Real ihz2 = Real(1) / (h[2] * h[2]);
  const Real kappa4 = 4 * kappa;
  const auto& M = pencil.M_ext;

  // r' = 8/(hx hy hz) * r / (M_ii M_jj M_kk)
  std::size_t node = 0;
  for (int k = 0; k < p; ++k)
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < p; ++i, ++node)
        w[node] = svol * r_sub[node] / (M[i] * M[j] * M[k]);

  tensor_pass(p, 0, pencil.V.data(), w.data(), t.data(), local);
  tensor_pass(p, 1, pencil.V.data(), t.data(), w.data(), local);
  tensor_pass(p, 2, pencil.V.data(), w.data(), t.data(), local);

  node = 0;
  for (int f = 0; f < p; ++f)
    for (int e = 0; e < p; ++e)
      for (int dd = 0; dd < p; ++dd, ++node)
        t[node] /= kappa4 * (pencil.lambda[dd] * ihx2 + pencil.lambda[e] * ihy2 +
                             pencil.lambda[f] * ihz2) + c;
  local += 15ull * nsub; // pointwise stage, counted in model units

  tensor_pass(p, 0, pencil.V_inv.data(), t.data(), w.data(), local);
  tensor_pass(p, 1, pencil.V_inv.data(), w.data(), t.data(), local);
  tensor_pass(p, 2, pencil.V_inv.data(), t.data(), z_sub.data(), local);

  if (ops) *ops += local;
}

FinePreconditioner::FinePreconditioner(const HexMesh& mesh, const GllBasis& basis,
                                       const IndexMaps& maps, Vector kappa, Vector c)
    : maps_(&maps), pencil_(build_pencil(basis)), kappa_(std::move(kappa)), c_(std::move(c))
{
  const gid ne = mesh.num_elements();
  if (kappa_.size() != static_cast<std::size_t>(ne) || c_.size() != static_cast<std::size_t>(ne))
    throw std::invalid_argument("kappa/c must hold one value per element");
  hx_.resize(ne);
  hy_.resize(ne);
  hz_.resize(ne);
  for (gid e = 0; e < ne; ++e) {
    const auto h = element_dimensions(mesh, e);
    hx_[e] = h[0];
    hy_[e] = h[1];
    hz_[e] = h[2];
  }
  const std::size_t nsub = maps.sub_nodes_per_element();
  r_sub_.resize(nsub);
  z_sub_.resize(nsub);
  counters_.order = basis.order;
  counters_.num_elements = ne;
}

void FinePreconditioner::apply(std::span<const Real> r_global, std::span<Real> z_global)
{
  const gid n = maps_->num_global;
  if (r_global.size() != static_cast<std::size_t>(n) ||
      z_global.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("fine apply: vector length mismatch");
  std::fill(z_global.begin(), z_global.end(), Real(0));

  const gid ne = static_cast<gid>(counters_.num_elements);
  const std::size_t nsub = maps_->sub_nodes_per_element();
  unsigned long long ops = 0;
  for (gid e = 0; e < ne; ++e) {
    const gid* sub = maps_->sub_l2g.data() + e * nsub;
    for (std::size_t s = 0; s < nsub; ++s)
      r_sub_[s] = sub[s] == IndexMaps::kNoNode ? Real(0) : r_global[sub[s]];
    solve_subdomain(pencil_, r_sub_, {hx_[e], hy_[e], hz_[e]}, kappa_[e], c_[e], z_sub_, &ops);
    for (std::size_t s = 0; s < nsub; ++s)
      if (sub[s] != IndexMaps::kNoNode) z_global[sub[s]] += z_sub_[s];
  }
  counters_.applications += 1;
  counters_.ops_measured += ops;
}

void FinePreconditioner::apply_parallel(std::span<const Real> r_global, std::span<Real> z_global,
                                        int threads)
{
  const gid n = maps_->num_global;
  if (r_global.size() != static_cast<std::size_t>(n) ||
      z_global.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("fine apply: vector length mismatch");
  const gid ne = static_cast<gid>(counters_.num_elements);
  const std::size_t nsub = maps_->sub_nodes_per_element();
  if (threads < 1) threads = 1;

  z_all_.resize(static_cast<std::size_t>(ne) * nsub);
  std::vector<unsigned long long> ops_per(threads, 0);
  auto worker = [&](int t) {
    Vector rbuf(nsub);
    for (gid e = t; e < ne; e += threads) {
      const gid* sub = maps_->sub_l2g.data() + e * nsub;
      for (std::size_t s = 0; s < nsub; ++s)
        rbuf[s] = sub[s] == IndexMaps::kNoNode ? Real(0) : r_global[sub[s]];
      solve_subdomain(pencil_, rbuf, {hx_[e], hy_[e], hz_[e]}, kappa_[e], c_[e],
                      std::span<Real>(z_all_.data() + e * nsub, nsub), &ops_per[t]);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& th : pool) th.join();

  std::fill(z_global.begin(), z_global.end(), Real(0));
  for (gid e = 0; e < ne; ++e) {
    const gid* sub = maps_->sub_l2g.data() + e * nsub;
    const Real* zs = z_all_.data() + e * nsub;
    for (std::size_t s = 0; s < nsub; ++s)
      if (sub[s] != IndexMaps::kNoNode) z_global[sub[s]] += zs[s];
  }
  counters_.applications += 1;
  for (auto o : ops_per) counters_.ops_measured += o;
}

} // namespace hexsem
