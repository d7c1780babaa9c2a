#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmsem/basis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace mmsem;

namespace {

// Monomial coefficients of the Legendre polynomial of degree n by Bonnet's
// recursion, independent of the library's evaluator.
std::vector<double> legendre_coefficients(int n) {
  std::vector<double> p0{1.0};
  if (n == 0) return p0;
  std::vector<double> p1{0.0, 1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> p2(k + 2, 0.0);
    for (int i = 0; i <= k; ++i) p2[i + 1] += (2.0 * k + 1.0) * p1[i] / (k + 1.0);
    for (int i = 0; i < k; ++i) p2[i] -= k * p0[i] / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

double integrate(const QuadratureRule& r, double a, double b, auto&& f) {
  double s = 0.0;
  for (int q = 0; q < r.size(); ++q) s += r.weights[q] * f(0.5 * (a + b) + 0.5 * (b - a) * r.nodes[q]);
  return 0.5 * (b - a) * s;
}

double exact_monomial_integral(int m) { return m % 2 == 1 ? 0.0 : 2.0 / (m + 1); }

}  // namespace

TEST_CASE("GLL grid of order one and two") {
  const GllGrid g1 = gll_grid(1);
  CHECK(g1.nodes()[0] == doctest::Approx(-1.0));
  CHECK(g1.nodes()[1] == doctest::Approx(1.0));
  CHECK(g1.weights()[0] == doctest::Approx(1.0));
  CHECK(g1.weights()[1] == doctest::Approx(1.0));

  const GllGrid g2 = gll_grid(2);
  REQUIRE(g2.rule.size() == 3);
  CHECK(g2.nodes()[1] == doctest::Approx(0.0));
  CHECK(g2.weights()[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(g2.weights()[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(g2.weights()[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("GLL grid of order four in closed form") {
  const GllGrid g = gll_grid(4);
  const double a = std::sqrt(3.0 / 7.0);
  const std::vector<double> nodes{-1.0, -a, 0.0, a, 1.0};
  const std::vector<double> weights{0.1, 49.0 / 90.0, 32.0 / 45.0, 49.0 / 90.0, 0.1};
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(g.nodes()[i] - nodes[i]) < 1e-15);
    CHECK(std::abs(g.weights()[i] - weights[i]) < 1e-14);
  }
}

TEST_CASE("GLL grid structure for orders one to thirty") {
  for (int n = 1; n <= 30; ++n) {
    const GllGrid g = gll_grid(n);
    REQUIRE(g.rule.size() == n + 1);
    CHECK(g.nodes().front() == -1.0);
    CHECK(g.nodes().back() == 1.0);
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      CHECK(g.weights()[i] > 0.0);
      CHECK(std::abs(g.nodes()[i] + g.nodes()[n - i]) < 1e-14);
      if (i > 0) CHECK(g.nodes()[i] > g.nodes()[i - 1]);
      sum += g.weights()[i];
    }
    CHECK(std::abs(sum - 2.0) < 1e-13);
  }
}

TEST_CASE("interior GLL nodes are roots of the Legendre derivative") {
  for (int n = 2; n <= 16; ++n) {
    const auto dp = derivative(legendre_coefficients(n));
    const GllGrid g = gll_grid(n);
    for (int i = 1; i < n; ++i) CHECK(std::abs(horner(dp, g.nodes()[i])) < 1e-10 * n * n);
  }
}

TEST_CASE("legendre evaluation matches the monomial expansion") {
  for (int n = 0; n <= 10; ++n) {
    const auto c = legendre_coefficients(n);
    for (double x : {-1.0, -0.7, 0.1, 0.55, 1.0}) CHECK(std::abs(legendre(n, x) - horner(c, x)) < 1e-13);
  }
}

TEST_CASE("GLL quadrature is exact up to degree 2N-1 and not at 2N") {
  for (int n = 1; n <= 20; ++n) {
    const GllGrid g = gll_grid(n);
    for (int m = 0; m <= 2 * n; ++m) {
      double s = 0.0;
      for (int i = 0; i <= n; ++i) s += g.weights()[i] * std::pow(g.nodes()[i], m);
      const double err = std::abs(s - exact_monomial_integral(m));
      if (m <= 2 * n - 1)
        CHECK(err < 1e-13);
      else
        CHECK(err > 1e-13);
    }
  }
}

TEST_CASE("Gauss-Legendre quadrature is exact up to degree 2n-1") {
  for (int points = 1; points <= 20; ++points) {
    const QuadratureRule r = gauss_legendre(points);
    for (int m = 0; m <= 2 * points - 1; ++m) {
      double s = 0.0;
      for (int q = 0; q < points; ++q) s += r.weights[q] * std::pow(r.nodes[q], m);
      CHECK(std::abs(s - exact_monomial_integral(m)) < 1e-13);
    }
  }
}

TEST_CASE("invalid orders are rejected") {
  CHECK_THROWS_AS(gll_grid(0), std::invalid_argument);
  CHECK_THROWS_AS(gll_grid(-3), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
  CHECK_THROWS_AS(MimeticBasis(0), std::invalid_argument);
}

TEST_CASE("Lagrange polynomials are cardinal on the grid") {
  for (int n = 1; n <= 16; ++n) {
    const MimeticBasis b(n);
    const auto x = b.grid().nodes();
    for (int i = 0; i <= n; ++i)
      for (int p = 0; p <= n; ++p) CHECK(std::abs(b.nodal().value(i, x[p]) - (i == p ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("partition of unity and its derivative") {
  for (int n = 1; n <= 12; ++n) {
    const MimeticBasis b(n);
    std::vector<double> l(n + 1), dl(n + 1);
    b.nodal().values(0.3, l);
    b.nodal().derivatives(0.3, dl);
    double sl = 0.0, sdl = 0.0;
    for (int i = 0; i <= n; ++i) {
      sl += l[i];
      sdl += dl[i];
    }
    CHECK(std::abs(sl - 1.0) < 1e-13);
    CHECK(std::abs(sdl) < 1e-11);
  }
}

TEST_CASE("Lagrange derivatives agree with centred differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> point(-0.95, 0.95);
  const double step = 1e-5;
  for (int n : {1, 2, 5, 9}) {
    const MimeticBasis b(n);
    for (int trial = 0; trial < 20; ++trial) {
      const double x = point(rng);
      for (int i = 0; i <= n; ++i) {
        const double fd = (b.nodal().value(i, x + step) - b.nodal().value(i, x - step)) / (2 * step);
        CHECK(std::abs(b.nodal().derivative(i, x) - fd) < 1e-6 * n * n);
      }
    }
  }
  // At the nodes, one-sided at the interval ends.
  const MimeticBasis b(4);
  for (int p = 0; p <= 4; ++p) {
    const double x = b.grid().nodes()[p];
    const double a = std::clamp(x - step, -1.0, 1.0);
    const double c = std::clamp(x + step, -1.0, 1.0);
    for (int i = 0; i <= 4; ++i) {
      const double fd = (b.nodal().value(i, c) - b.nodal().value(i, a)) / (c - a);
      CHECK(std::abs(b.nodal().derivative(i, x) - fd) < 1e-3);
    }
  }
}

TEST_CASE("Lagrange derivatives stay accurate next to a node") {
  for (int n : {3, 8, 16}) {
    const MimeticBasis b(n);
    std::vector<double> at(n + 1), near(n + 1);
    for (int p = 1; p < n; ++p)
      for (double offset : {1e-13, -1e-11, 1e-9}) {
        const double x = b.grid().nodes()[p];
        b.nodal().derivatives(x, at);
        b.nodal().derivatives(x + offset, near);
        for (int i = 0; i <= n; ++i) CHECK(std::abs(near[i] - at[i]) < 1e-12 * n * n + 1e4 * n * std::abs(offset));
      }
  }
}

TEST_CASE("basis index out of range throws") {
  const MimeticBasis b(3);
  CHECK_THROWS_AS(b.nodal().value(4, 0.0), std::out_of_range);
  CHECK_THROWS_AS(b.nodal().derivative(-1, 0.0), std::out_of_range);
  CHECK_THROWS_AS(b.edge().value(3, 0.0), std::out_of_range);
  CHECK_THROWS_AS(tensor_eval_two(b, 3, 0, 0.0, 0.0), std::out_of_range);
  CHECK_THROWS_AS(tensor_eval_zero(b, 0, 4, 0.0, 0.0), std::out_of_range);
}

TEST_CASE("edge polynomial of order one is constant one half") {
  const MimeticBasis b(1);
  for (double x : {-1.0, -0.3, 0.0, 0.8, 1.0}) CHECK(std::abs(b.edge().value(0, x) - 0.5) < 1e-15);
}

TEST_CASE("edge polynomials are minus the accumulated Lagrange derivatives") {
  const MimeticBasis b(6);
  for (double x : {-0.9, -0.2, 0.33, 0.71}) {
    double acc = 0.0;
    for (int i = 0; i < 6; ++i) {
      acc -= b.nodal().derivative(i, x);
      CHECK(std::abs(b.edge().value(i, x) - acc) < 1e-12);
    }
    // Summing all N+1 derivatives closes the telescoping sum.
    CHECK(std::abs(acc - b.nodal().derivative(6, x)) < 1e-11);
  }
}

TEST_CASE("edge polynomials integrate to one over their own interval") {
  for (int n = 1; n <= 14; ++n) {
    const MimeticBasis b(n);
    const auto x = b.grid().nodes();
    const QuadratureRule gauss = gauss_legendre(n + 2);
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < n; ++p) {
        const double v = integrate(gauss, x[p], x[p + 1], [&](double s) { return b.edge().value(i, s); });
        CHECK(std::abs(v - (i == p ? 1.0 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("edge reconstruction of the interval lengths is the constant one") {
  for (int n = 1; n <= 10; ++n) {
    const MimeticBasis b(n);
    const auto x = b.grid().nodes();
    std::vector<double> e(n);
    for (int k = 0; k < 50; ++k) {
      const double s = -1.0 + 2.0 * k / 49.0;
      b.edge().values(s, e);
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += (x[i + 1] - x[i]) * e[i];
      CHECK(std::abs(v - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("reduction after reconstruction is the identity") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int n : {1, 3, 6, 10}) {
    const MimeticBasis b(n);
    const auto x = b.grid().nodes();
    const QuadratureRule gauss = gauss_legendre(n + 2);
    std::vector<double> a(n + 1), c(n);
    for (double& v : a) v = coef(rng);
    for (double& v : c) v = coef(rng);
    auto nodal = [&](double s) {
      double v = 0.0;
      for (int i = 0; i <= n; ++i) v += a[i] * b.nodal().value(i, s);
      return v;
    };
    auto edge = [&](double s) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += c[i] * b.edge().value(i, s);
      return v;
    };
    for (int p = 0; p <= n; ++p) CHECK(std::abs(nodal(x[p]) - a[p]) < 1e-12);
    for (int p = 0; p < n; ++p) CHECK(std::abs(integrate(gauss, x[p], x[p + 1], edge) - c[p]) < 1e-12);
  }
}

TEST_CASE("derivative of the nodal interpolant equals the edge interpolant of differences") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int n : {1, 2, 4, 8, 12}) {
    const MimeticBasis b(n);
    std::vector<double> a(n + 1);
    for (double& v : a) v = coef(rng);
    for (int k = 0; k < 25; ++k) {
      const double s = coef(rng);
      double lhs = 0.0, rhs = 0.0;
      for (int i = 0; i <= n; ++i) lhs += a[i] * b.nodal().derivative(i, s);
      for (int i = 0; i < n; ++i) rhs += (a[i + 1] - a[i]) * b.edge().value(i, s);
      CHECK(std::abs(lhs - rhs) < 1e-12 * n);
    }
  }
}

TEST_CASE("tensor product bases") {
  const int n = 4;
  const MimeticBasis b(n);
  const auto x = b.grid().nodes();
  const QuadratureRule gauss = gauss_legendre(n + 2);

  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q)
          CHECK(std::abs(tensor_eval_zero(b, i, j, x[p], x[q]) - (i == p && j == q ? 1.0 : 0.0)) < 1e-12);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          const double v = integrate(gauss, x[q], x[q + 1], [&](double eta) {
            return integrate(gauss, x[p], x[p + 1], [&](double xi) { return tensor_eval_two(b, i, j, xi, eta); });
          });
          CHECK(std::abs(v - (i == p && j == q ? 1.0 : 0.0)) < 1e-12);
        }

  // d(xi) component along xi-directed cells [x_p, x_{p+1}] x {x_q}, and the
  // d(eta) component along eta-directed cells {x_p} x [x_q, x_{q+1}].
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q <= n; ++q) {
          const double along_xi = integrate(
              gauss, x[p], x[p + 1], [&](double xi) { return tensor_eval_one(b, Direction::xi, i, j, xi, x[q]); });
          CHECK(std::abs(along_xi - (i == p && j == q ? 1.0 : 0.0)) < 1e-12);
          const double along_eta = integrate(
              gauss, x[p], x[p + 1], [&](double eta) { return tensor_eval_one(b, Direction::eta, j, i, x[q], eta); });
          CHECK(std::abs(along_eta - (i == p && j == q ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("tabulated values match direct evaluation") {
  const MimeticBasis b(5);
  const std::vector<double> pts{-1.0, -0.4, 0.05, 0.9};
  const BasisTable t = tabulate(b, pts);
  for (int q = 0; q < 4; ++q) {
    for (int i = 0; i <= 5; ++i) {
      CHECK(t.l(q, i) == doctest::Approx(b.nodal().value(i, pts[q])).epsilon(1e-14));
      CHECK(t.dl(q, i) == doctest::Approx(b.nodal().derivative(i, pts[q])).epsilon(1e-14));
    }
    for (int i = 0; i < 5; ++i) CHECK(t.e(q, i) == doctest::Approx(b.edge().value(i, pts[q])).epsilon(1e-14));
  }
}

TEST_CASE("copied basis owns its grid") {
  const auto make = [] { return MimeticBasis(3); };
  const MimeticBasis copy(make());
  CHECK(copy.order() == 3);
  CHECK(std::abs(copy.edge().value(0, copy.grid().nodes()[0]) - copy.edge().value(0, -1.0)) == 0.0);
  CHECK(std::abs(copy.nodal().value(1, copy.grid().nodes()[1]) - 1.0) < 1e-15);
}
