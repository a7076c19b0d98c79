// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hexsem/gll.hpp"

using namespace hexsem;

namespace {
double monomial_integral(int k) { return k % 2 ? 0.0 : 2.0 / (k + 1); }

double quad(const GllBasis& b, int power)
{
  double s = 0;
  for (int i = 0; i <= b.order; ++i) s += b.weights[i] * std::pow(b.nodes[i], power);
  return s;
}
} // namespace

TEST_CASE("order 1 basis is the endpoint rule")
{
  const GllBasis b = make_gll_basis(1);
  CHECK(b.nodes[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(b.nodes[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("order 2 nodes and weights")
{
  // oracle: interior node is the root of (1-t^2) P2'(t) = -3t(1-t^2),
  // weights from 2/(n(n+1) P_n(t_i)^2)
  const GllBasis b = make_gll_basis(2);
  CHECK(b.nodes[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(b.weights[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(b.weights[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(quad(b, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(quad(b, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("order 4 quadrature is exact to degree 7 and fails at degree 8")
{
  const GllBasis b = make_gll_basis(4);
  CHECK(std::abs(quad(b, 6) - 2.0 / 7.0) < 1e-12);
  CHECK(std::abs(quad(b, 8) - 2.0 / 9.0) > 1e-6);
}

TEST_CASE("quadrature exactness up to 2n-1, failure at 2n")
{
  for (int n = 1; n <= 7; ++n) {
    const GllBasis b = make_gll_basis(n);
    for (int k = 0; k <= 2 * n - 1; ++k)
      CHECK(std::abs(quad(b, k) - monomial_integral(k)) < 1e-12);
    if (n >= 2) CHECK(std::abs(quad(b, 2 * n) - monomial_integral(2 * n)) > 1e-8);
  }
}

TEST_CASE("node and weight symmetry")
{
  for (int n = 1; n <= 9; ++n) {
    const GllBasis b = make_gll_basis(n);
    CHECK(b.nodes.front() == -1.0);
    CHECK(b.nodes.back() == 1.0);
    for (int i = 0; i <= n; ++i) {
      CHECK(b.nodes[i] == doctest::Approx(-b.nodes[n - i]).epsilon(1e-15));
      CHECK(b.weights[i] == doctest::Approx(b.weights[n - i]).epsilon(1e-14));
      if (i > 0) CHECK(b.nodes[i] > b.nodes[i - 1]);
      CHECK(b.weights[i] > 0);
    }
  }
}

TEST_CASE("rejects order zero") { CHECK_THROWS(make_gll_basis(0)); }

TEST_CASE("derivation matrix order 1")
{
  const GllBasis b = make_gll_basis(1);
  CHECK(b.d(0, 0) == doctest::Approx(-0.5));
  CHECK(b.d(0, 1) == doctest::Approx(-0.5));
  CHECK(b.d(1, 0) == doctest::Approx(0.5));
  CHECK(b.d(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("derivative of a constant vanishes: columns of D sum to zero")
{
  for (int n = 1; n <= 7; ++n) {
    const GllBasis b = make_gll_basis(n);
    for (int j = 0; j <= n; ++j) {
      double col = 0;
      for (int i = 0; i <= n; ++i) col += b.d(i, j);
      CHECK(std::abs(col) < 1e-12);
    }
  }
}

TEST_CASE("derivative of t is one")
{
  for (int n = 1; n <= 7; ++n) {
    const GllBasis b = make_gll_basis(n);
    for (int j = 0; j <= n; ++j) {
      double s = 0;
      for (int m = 0; m <= n; ++m) s += b.d(m, j) * b.nodes[m];
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("differentiation is exact on sampled polynomials")
{
  // oracle: d/dt t^2 = 2t at the nodes
  const GllBasis b = make_gll_basis(3);
  for (int j = 0; j <= 3; ++j) {
    double s = 0;
    for (int m = 0; m <= 3; ++m) s += b.d(m, j) * b.nodes[m] * b.nodes[m];
    CHECK(std::abs(s - 2.0 * b.nodes[j]) < 1e-12);
  }
}

TEST_CASE("coarse Vandermonde")
{
  const GllBasis b = make_gll_basis(2);
  const std::size_t nloc = 27;
  REQUIRE(b.coarse_vandermonde.size() == 8 * nloc);

  SUBCASE("corner column is a Kronecker delta")
  {
    for (int corner = 0; corner < 8; ++corner)
      CHECK(b.coarse_vandermonde[corner * nloc + 0] ==
            doctest::Approx(corner == 0 ? 1.0 : 0.0).epsilon(1e-15));
  }
  SUBCASE("columns sum to one")
  {
    for (std::size_t node = 0; node < nloc; ++node) {
      double s = 0;
      for (int corner = 0; corner < 8; ++corner)
        s += b.coarse_vandermonde[corner * nloc + node];
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("center node sees 1/8 from every corner")
  {
    const std::size_t center = (1 * 3 + 1) * 3 + 1;
    for (int corner = 0; corner < 8; ++corner)
      CHECK(b.coarse_vandermonde[corner * nloc + center] == doctest::Approx(0.125));
  }
}
