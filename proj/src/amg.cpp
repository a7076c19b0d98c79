// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#include "hexsem/amg.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hexsem {

void CsrMatrix::multiply(std::span<const Real> x, std::span<Real> y) const
{
  for (gid i = 0; i < n; ++i) {
    Real s = 0;
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

CsrMatrix csr_from_triplets(gid n, std::vector<std::pair<std::pair<gid, gid>, Real>> trips)
{
  std::sort(trips.begin(), trips.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  CsrMatrix m;
  m.n = n;
  m.ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < trips.size();) {
    std::size_t j = i;
    Real s = 0;
    while (j < trips.size() && trips[j].first == trips[i].first) s += trips[j++].second;
    m.ptr[trips[i].first.first + 1]++;
    m.col.push_back(trips[i].first.second);
    m.val.push_back(s);
    i = j;
  }
  for (gid i = 0; i < n; ++i) m.ptr[i + 1] += m.ptr[i];
  return m;
}

namespace {

constexpr Real kJacobiOmega = Real(2) / 3;
constexpr int kSmoothSweeps = 2;
constexpr gid kCoarsestSize = 64;
constexpr int kAggregateTarget = 8;

// Greedy root aggregation with size target 8. Phase 1 seeds aggregates at
// nodes whose neighborhood is untouched (root plus its strongest neighbors);
// phase 2 attaches leftovers to their strongest neighboring aggregate;
// isolated rows (masked identities) stay singletons. Returns the group count.
gid aggregate_pass(const CsrMatrix& A, std::vector<gid>& group)
{
  group.assign(A.n, -1);
  gid next = 0;
  std::vector<int> agg_size;
  std::vector<std::pair<Real, gid>> nbrs;

  for (gid i = 0; i < A.n; ++i) {
    if (group[i] >= 0) continue;
    bool clean = true;
    nbrs.clear();
    for (std::size_t k = A.ptr[i]; k < A.ptr[i + 1]; ++k) {
      const gid j = A.col[k];
      if (j == i || A.val[k] == Real(0)) continue;
      if (group[j] >= 0) {
        clean = false;
        break;
      }
      nbrs.push_back({-std::abs(A.val[k]), j});
    }
    if (!clean) continue;
    group[i] = next;
    std::sort(nbrs.begin(), nbrs.end());
    int size = 1;
    for (const auto& [neg, j] : nbrs) {
      if (size >= kAggregateTarget) break;
      group[j] = next;
      ++size;
    }
    agg_size.push_back(size);
    ++next;
  }

  for (gid i = 0; i < A.n; ++i) {
    if (group[i] >= 0) continue;
    gid best = -1;
    Real best_val = 0;
    bool best_small = false;
    for (std::size_t k = A.ptr[i]; k < A.ptr[i + 1]; ++k) {
      const gid j = A.col[k];
      if (j == i || group[j] < 0 || A.val[k] == Real(0)) continue;
      const Real a = std::abs(A.val[k]);
      const bool small = agg_size[group[j]] < kAggregateTarget;
      if (best < 0 || (small && !best_small) || (small == best_small && a > best_val)) {
        best = group[j];
        best_val = a;
        best_small = small;
      }
    }
    if (best >= 0) {
      group[i] = best;
      ++agg_size[best];
    } else {
      group[i] = next;
      agg_size.push_back(1);
      ++next;
    }
  }
  return next;
}

CsrMatrix galerkin(const CsrMatrix& A, const std::vector<gid>& agg, gid nc)
{
  std::vector<std::pair<std::pair<gid, gid>, Real>> trips;
  trips.reserve(A.nnz());
  for (gid i = 0; i < A.n; ++i)
    for (std::size_t k = A.ptr[i]; k < A.ptr[i + 1]; ++k)
      trips.push_back({{agg[i], agg[A.col[k]]}, A.val[k]});
  return csr_from_triplets(nc, std::move(trips));
}

} // namespace

struct AmgHierarchy::Impl {
  struct Level {
    CsrMatrix A;
    std::vector<Real> inv_diag;
    std::vector<gid> aggregate; // row -> next-level row
    gid n_coarse = 0;
  };
  std::vector<Level> levels;
  CsrMatrix coarsest;
  Eigen::SparseMatrix<double> coarsest_eigen;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> direct;

  void check_diag(const CsrMatrix& A, std::vector<Real>& inv_diag) const
  {
    inv_diag.assign(A.n, Real(0));
    for (gid i = 0; i < A.n; ++i) {
      Real d = 0;
      for (std::size_t k = A.ptr[i]; k < A.ptr[i + 1]; ++k)
        if (A.col[k] == i) d = A.val[k];
      if (!(d > 0))
        throw std::runtime_error("amg: non-positive diagonal at row " + std::to_string(i));
      inv_diag[i] = 1 / d;
    }
  }

  void setup(CsrMatrix fine)
  {
    CsrMatrix A = std::move(fine);
    while (A.n > kCoarsestSize) {
      Level lvl;
      check_diag(A, lvl.inv_diag);

      std::vector<gid> agg;
      const gid nc = aggregate_pass(A, agg);
      // Masked identity rows never aggregate; stop once real progress ends.
      if (nc > static_cast<gid>(0.95 * A.n)) break;
      CsrMatrix coarse = galerkin(A, agg, nc);

      lvl.aggregate = std::move(agg);
      lvl.n_coarse = nc;
      lvl.A = std::move(A);
      A = std::move(coarse);
      levels.push_back(std::move(lvl));
    }

    coarsest = std::move(A);
    {
      std::vector<Real> tmp;
      check_diag(coarsest, tmp);
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(coarsest.nnz());
    for (gid i = 0; i < coarsest.n; ++i)
      for (std::size_t k = coarsest.ptr[i]; k < coarsest.ptr[i + 1]; ++k)
        trips.emplace_back(i, coarsest.col[k], static_cast<double>(coarsest.val[k]));
    coarsest_eigen.resize(coarsest.n, coarsest.n);
    coarsest_eigen.setFromTriplets(trips.begin(), trips.end());
    direct.compute(coarsest_eigen);
    if (direct.info() != Eigen::Success)
      throw std::runtime_error("amg: coarsest-level Cholesky failed (matrix not SPD?)");
  }

  void direct_solve(std::span<const Real> r, std::span<Real> z) const
  {
    Eigen::VectorXd rhs(coarsest.n);
    for (gid i = 0; i < coarsest.n; ++i) rhs(i) = static_cast<double>(r[i]);
    const Eigen::VectorXd x = direct.solve(rhs);
    for (gid i = 0; i < coarsest.n; ++i) z[i] = static_cast<Real>(x(i));
  }

  // One multigrid cycle at level l; coarse corrections are accelerated by a
  // frozen two-iteration PCG (the K-cycle).
  void cycle(std::size_t l, std::span<const Real> r, std::span<Real> z) const
  {
    if (l == levels.size()) {
      direct_solve(r, z);
      return;
    }
    const Level& lvl = levels[l];
    const gid n = lvl.A.n;
    std::vector<Real> rho(n), tmp(n);

    auto smooth = [&](int sweeps) {
      for (int s = 0; s < sweeps; ++s) {
        lvl.A.multiply(z, tmp);
        for (gid i = 0; i < n; ++i)
          z[i] += kJacobiOmega * lvl.inv_diag[i] * (r[i] - tmp[i]);
      }
    };

    for (gid i = 0; i < n; ++i) z[i] = kJacobiOmega * lvl.inv_diag[i] * r[i];
    smooth(kSmoothSweeps - 1);
    lvl.A.multiply(z, tmp);
    for (gid i = 0; i < n; ++i) rho[i] = r[i] - tmp[i];

    std::vector<Real> rc(lvl.n_coarse, 0), ec(lvl.n_coarse, 0);
    for (gid i = 0; i < n; ++i) rc[lvl.aggregate[i]] += rho[i];
    ksolve(l + 1, rc, ec);
    for (gid i = 0; i < n; ++i) z[i] += ec[lvl.aggregate[i]];

    smooth(kSmoothSweeps);
  }

  // Exactly two PCG iterations on A_l e = b, preconditioned by cycle(l).
  void ksolve(std::size_t l, std::span<const Real> b, std::span<Real> x) const
  {
    if (l == levels.size()) {
      direct_solve(b, x);
      return;
    }
    const CsrMatrix& A = l < levels.size() ? levels[l].A : coarsest;
    const gid n = A.n;
    std::vector<Real> r(b.begin(), b.end()), z(n), p(n), f(n);
    std::fill(x.begin(), x.end(), Real(0));

    cycle(l, r, z);
    double zr = 0;
    for (gid i = 0; i < n; ++i) zr += static_cast<double>(z[i]) * r[i];
    p.assign(z.begin(), z.end());
    for (int it = 0; it < 2; ++it) {
      A.multiply(p, f);
      double pf = 0;
      for (gid i = 0; i < n; ++i) pf += static_cast<double>(p[i]) * f[i];
      if (!(pf > 0) || !(std::abs(zr) > 0)) return;
      const double alpha = zr / pf;
      for (gid i = 0; i < n; ++i) {
        x[i] += static_cast<Real>(alpha) * p[i];
        r[i] -= static_cast<Real>(alpha) * f[i];
      }
      if (it == 1) break;
      cycle(l, r, z);
      double zr_next = 0;
      for (gid i = 0; i < n; ++i) zr_next += static_cast<double>(z[i]) * r[i];
      const double beta = zr_next / zr;
      zr = zr_next;
      for (gid i = 0; i < n; ++i) p[i] = z[i] + static_cast<Real>(beta) * p[i];
    }
  }
};

AmgHierarchy::AmgHierarchy(CsrMatrix fine) : impl_(std::make_unique<Impl>())
{
  impl_->setup(std::move(fine));
}

AmgHierarchy::~AmgHierarchy() = default;
AmgHierarchy::AmgHierarchy(AmgHierarchy&&) noexcept = default;
AmgHierarchy& AmgHierarchy::operator=(AmgHierarchy&&) noexcept = default;

void AmgHierarchy::apply(std::span<const Real> r, std::span<Real> z) const
{
  if (r.size() != z.size()) throw std::invalid_argument("amg apply: length mismatch");
  impl_->cycle(0, r, z);
}

AmgStats AmgHierarchy::stats() const
{
  AmgStats s;
  std::size_t nnz0 = 0, total = 0;
  for (const auto& lvl : impl_->levels) {
    s.levels.push_back({lvl.A.n, lvl.A.nnz()});
    if (nnz0 == 0) nnz0 = lvl.A.nnz();
    total += lvl.A.nnz();
  }
  s.levels.push_back({impl_->coarsest.n, impl_->coarsest.nnz()});
  if (nnz0 == 0) nnz0 = impl_->coarsest.nnz();
  total += impl_->coarsest.nnz();
  s.operator_complexity = nnz0 ? static_cast<double>(total) / nnz0 : 0.0;
  return s;
}

int AmgHierarchy::num_levels() const { return static_cast<int>(impl_->levels.size()) + 1; }

const CsrMatrix& AmgHierarchy::level_matrix(int l) const
{
  if (l < static_cast<int>(impl_->levels.size())) return impl_->levels[l].A;
  return impl_->coarsest;
}

const std::vector<gid>& AmgHierarchy::aggregates(int l) const
{
  return impl_->levels.at(l).aggregate;
}

} // namespace hexsem
