#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tvb/bochner.hpp"
#include "tvb/catalog.hpp"

using namespace tvb;

namespace {

std::vector<CatalogEntry> bochner_flat_charts() {
  return {example1(), example2(1.0), example2(0.4), example3(), example4(), example4("x1^2 - x2^2"), flat()};
}

double scale_of(const Tensor& t) { return std::max(1.0, t.max_abs()); }

// S²(K) × S²(K): Kähler and Einstein, but not Bochner-flat.
std::shared_ptr<Chart> two_spheres() {
  ChartSpec s;
  s.name = "s2xs2";
  s.coords = default_coords(4);
  const Expr a = parse("4/(1 + x1^2 + x2^2)^2", s.coords);
  const Expr b = parse("4/(1 + x3^2 + x4^2)^2", s.coords);
  s.g.assign(16, Expr::constant(0.0));
  s.g[0] = a;
  s.g[5] = a;
  s.g[10] = b;
  s.g[15] = b;
  s.J = standard_structure(4);
  return std::make_shared<Chart>(std::move(s));
}

std::vector<double> random_vec(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(d);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("complex space form tensor has constant holomorphic curvature and is Kähler") {
  std::mt19937_64 rng(21);
  for (int d : {4, 6}) {
    const auto h = oracle::random_hermitian(rng, d);
    const double c = 1.7;
    const Tensor R = complex_space_form_tensor(h.g, h.J, c);
    for (int k = 0; k < 20; ++k) {
      const auto x = random_vec(rng, d), y = random_vec(rng, d), z = random_vec(rng, d), w = random_vec(rng, d);
      CHECK(hol_sect_curv(R, h.g, h.J, x) == doctest::Approx(c).epsilon(1e-10));
      const double base = eval4(R, x, y, z, w);
      CHECK(eval4(R, x, y, tvb::apply(h.J, z), tvb::apply(h.J, w)) == doctest::Approx(base).epsilon(1e-10).scale(1.0));
    }
    const CurvatureData cd = curvature_from_tensor(h.g, h.J, R);
    const int n = d / 2;
    CHECK((cd.ricci - (0.5 * (n + 1) * c) * h.g).max_abs() < 1e-10);
    CHECK(cd.tau == doctest::Approx(n * (n + 1) * c));
    CHECK(cd.tau_star == doctest::Approx(n * (n + 1) * c));
  }
}

TEST_CASE("both Bochner branches annihilate complex space forms") {
  std::mt19937_64 rng(22);
  for (int n : {2, 3}) {
    const int d = 2 * n;
    for (double c : {1.0, -2.0, 0.25}) {
      const CurvatureData std_cd = csf_algebraic(n, c);
      CHECK(bochner_tensor(std_cd, n).max_abs() / scale_of(std_cd.riemann) < 1e-10);
      const auto h = oracle::random_hermitian(rng, d);
      const CurvatureData cd = curvature_from_tensor(h.g, h.J, complex_space_form_tensor(h.g, h.J, c));
      CHECK(bochner_tensor(cd, n).max_abs() / scale_of(cd.riemann) < 1e-10);
    }
  }
  // not trivially zero: a generic algebraic tensor is not annihilated
  const auto h = oracle::random_hermitian(rng, 4);
  const Tensor a = oracle::random_covariant(rng, 4, 2, true);
  const CurvatureData generic = curvature_from_tensor(h.g, h.J, kulkarni(a, h.g) + kulkarni(a, a));
  CHECK(bochner_tensor(generic, 2).max_abs() > 0.1);
}

TEST_CASE("flat input gives exactly zero") {
  const CatalogEntry e = flat();
  const CurvatureData cd = curvature(*e.chart, e.sample_point);
  CHECK(bochner_tensor(cd, 2).max_abs() == 0.0);
  CHECK(weyl_tensor(cd).max_abs() == 0.0);
  const CurvatureData z6 = csf_algebraic(3, 0.0);
  CHECK(bochner_tensor(z6, 3).max_abs() == 0.0);
}

TEST_CASE("branch and dimension errors") {
  const CurvatureData cd4 = csf_algebraic(2, 1.0);
  CHECK_THROWS_AS(bochner_tensor_higher(cd4, 2), std::invalid_argument);
  CHECK_THROWS_AS(bochner_tensor(cd4, 3), std::invalid_argument);
  CHECK_THROWS_AS(bochner_tensor(cd4, 1), std::invalid_argument);
  const CurvatureData cd6 = csf_algebraic(3, 1.0);
  CHECK_THROWS_AS(bochner_tensor_surface(cd6), std::invalid_argument);
  CHECK_THROWS_AS(csf_algebraic(4, 1.0), std::invalid_argument);
}

TEST_CASE("catalog charts are Bochner-flat, S2xS2 is not") {
  for (const auto& e : bochner_flat_charts()) {
    CAPTURE(e.name);
    for (const auto& p : oracle::random_points(e, 10, 51)) {
      const CurvatureData cd = curvature(*e.chart, p);
      CHECK(bochner_tensor(cd, 2).max_abs() / scale_of(cd.riemann) < 1e-8);
    }
  }
  const auto ss = two_spheres();
  const std::vector<double> p{0.2, 0.1, -0.3, 0.4};
  const CurvatureData cd = curvature(*ss, p);
  CHECK(bochner_tensor(cd, 2).max_abs() > 0.1);
}

TEST_CASE("Weyl tensor is trace-free and vanishes on conformally flat charts") {
  for (const auto& e : bochner_flat_charts()) {
    CAPTURE(e.name);
    for (const auto& p : oracle::random_points(e, 5, 52)) {
      const CurvatureData cd = curvature(*e.chart, p);
      const Tensor W = weyl_tensor(cd);
      CHECK(contract(W, 0, 3, &cd.g_inv).max_abs() / scale_of(cd.riemann) < 1e-10);
      CHECK(contract(W, 1, 2, &cd.g_inv).max_abs() / scale_of(cd.riemann) < 1e-10);
      if (e.name == "example1" || e.name == "example3" || e.name == "example4" || e.name == "flat")
        CHECK(W.max_abs() / scale_of(cd.riemann) < 1e-8);
      // closed form on Bochner-flat data
      CHECK((W - weyl_closed_form(cd)).max_abs() / scale_of(cd.riemann) < 1e-8);
    }
  }
}

TEST_CASE("reconstruction of R from Ricci data") {
  for (const auto& e : bochner_flat_charts()) {
    CAPTURE(e.name);
    for (const auto& p : oracle::random_points(e, 5, 53)) {
      const CurvatureData cd = curvature(*e.chart, p);
      const Tensor R = reconstruct_R(cd.ricci, cd.ricci_star, cd.tau, cd.tau_star, cd.g, cd.J);
      CHECK((R - cd.riemann).max_abs() / scale_of(cd.riemann) < 1e-8);
    }
  }
  const CurvatureData zero = csf_algebraic(2, 0.0);
  CHECK(reconstruct_R(zero.ricci, zero.ricci_star, 0, 0, zero.g, zero.J).max_abs() == 0.0);

  Tensor skew = Tensor::covariant(4, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(reconstruct_R(skew, zero.ricci_star, 0, 0, zero.g, zero.J), std::invalid_argument);
  Tensor bad_star = Tensor::covariant(4, 2);
  bad_star(0, 2) = 1.0;  // ρ*(e1,e3) = 1 but ρ*(Je3,Je1) = 0
  CHECK_THROWS_AS(reconstruct_R(zero.ricci, bad_star, 0, 0, zero.g, zero.J), std::invalid_argument);
}

TEST_CASE("Λ² basis") {
  const CurvatureData cd = csf_algebraic(2, 1.0);
  const Tensor E = adapted_frame(cd.g, cd.J);
  const Lambda2Basis b = lambda2_basis(E, cd.J);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(form_inner(b.forms[i], b.forms[j]) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0));
  const double r = 1 / std::sqrt(2.0);
  CHECK(std::abs(b.forms[0](0, 1)) == doctest::Approx(r));
  CHECK(std::abs(b.forms[0](2, 3)) == doctest::Approx(r));
  CHECK(b.forms[0](0, 1) == doctest::Approx(b.forms[0](2, 3)));
  int nonzero = 0;
  for (double x : b.forms[0].data()) nonzero += x != 0.0;
  CHECK(nonzero == 4);
  // Ω₀ = Ω/√2 in the frame
  const Tensor omega_f = to_frame(kahler_form(cd.g, cd.J), E, inverse(E));
  CHECK((omega_f - std::sqrt(2.0) * b.forms[0]).max_abs() < 1e-12);

  Tensor swapped = E;
  for (int i = 0; i < 4; ++i) std::swap(swapped(i, 1), swapped(i, 2));
  CHECK_THROWS_AS(lambda2_basis(swapped, cd.J), ContractViolation);
}

TEST_CASE("Weyl operator blocks match the closed form on Bochner-flat charts") {
  for (const auto& e : bochner_flat_charts()) {
    CAPTURE(e.name);
    for (const auto& p : oracle::random_points(e, 5, 54)) {
      const CurvatureData cd = curvature(*e.chart, p);
      const FrameData fd = to_adapted_frame(cd);
      const Tensor W = weyl_tensor(cd);
      const WeylBlocks blocks = weyl_operator(W, cd.g_inv, lambda2_basis(fd.frame, cd.J));
      const Mat6 closed = weyl_operator_closed_form(cd.tau, cd.tau_star, fd.ricci_star);
      const double s = scale_of(cd.riemann);
      double worst = 0.0, asym = 0.0;
      for (int a = 0; a < 6; ++a)
        for (int c = 0; c < 6; ++c) {
          worst = std::max(worst, std::abs(blocks.matrix[a][c] - closed[a][c]));
          asym = std::max(asym, std::abs(blocks.matrix[a][c] - blocks.matrix[c][a]));
        }
      CHECK(worst / s < 1e-8);
      CHECK(asym / s < 1e-10);
      double tr_plus = 0.0, tr_minus = 0.0;
      for (int a = 0; a < 3; ++a) {
        tr_plus += blocks.w_plus[a][a];
        tr_minus += blocks.w_minus[a][a];
      }
      CHECK(std::abs(tr_plus) / s < 1e-10);
      CHECK(std::abs(tr_minus) / s < 1e-10);

      const WeylNorms norms = wpm_norms(blocks);
      CHECK(norms.minus_sq / (s * s) < 1e-10);
      CHECK(norms.plus_sq == doctest::Approx(w_plus_sq_closed_form(cd.tau, cd.tau_star, fd.ricci_star))
                                 .epsilon(1e-8)
                                 .scale(s * s));
      // ‖W‖² = 4(‖W₊‖² + ‖W₋‖²)
      CHECK(norm_sq(W, cd.g, cd.g_inv) ==
            doctest::Approx(4 * (norms.plus_sq + norms.minus_sq)).epsilon(1e-8).scale(s * s));
    }
  }
}

TEST_CASE("Weyl operator on S2xS2 and error paths") {
  const auto ss = two_spheres();
  const CurvatureData cd = curvature(*ss, std::vector<double>{0.2, 0.1, -0.3, 0.4});
  const FrameData fd = to_adapted_frame(cd);
  const Lambda2Basis basis = lambda2_basis(fd.frame, cd.J);
  const WeylBlocks blocks = weyl_operator(weyl_tensor(cd), cd.g_inv, basis);
  CHECK(wpm_norms(blocks).minus_sq > 0.01);  // not self-dual
  CHECK_THROWS_AS(weyl_operator(cd.riemann, cd.g_inv, basis), ContractViolation);
  const CurvatureData flat_cd = csf_algebraic(2, 0.0);
  const WeylBlocks zero = weyl_operator(weyl_tensor(flat_cd), flat_cd.g_inv,
                                        lambda2_basis(adapted_frame(flat_cd.g, flat_cd.J), flat_cd.J));
  const WeylNorms zn = wpm_norms(zero);
  CHECK(zn.plus_sq == 0.0);
  CHECK(zn.minus_sq == 0.0);
}

TEST_CASE("G quantity") {
  Tensor rs = Tensor::covariant(4, 2);
  rs(0, 2) = 1.0;  // ρ*13 = 1
  rs(3, 1) = 1.0;  // ρ*42 = ρ*(Je3, Je1)
  const GQuantity G = g_quantity(rs);
  CHECK(G.full_sum == doctest::Approx(4.0));
  CHECK(G.closed_form == doctest::Approx(4.0));
  Tensor bad = Tensor::covariant(4, 2);
  bad(0, 2) = 1.0;
  CHECK_THROWS_AS(g_quantity(bad), ContractViolation);

  for (const auto& e : {example2(1.0), example3()}) {
    const CurvatureData cd = curvature(*e.chart, e.sample_point);
    CHECK(g_quantity(to_adapted_frame(cd).ricci_star).value() < 1e-10);
  }
}

TEST_CASE("characteristic densities") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (const auto& e : bochner_flat_charts()) {
    CAPTURE(e.name);
    for (const auto& p : oracle::random_points(e, 5, 55)) {
      const CurvatureData cd = curvature(*e.chart, p);
      const FrameData fd = to_adapted_frame(cd);
      const WeylBlocks blocks = weyl_operator(weyl_tensor(cd), cd.g_inv, lambda2_basis(fd.frame, cd.J));
      const double G = g_quantity(fd.ricci_star).value();
      const CharacteristicDensities dens = characteristic_integrands(cd, blocks, G);
      CHECK(dens.c1sq == dens.p1 + 2 * dens.chi);
      CHECK(dens.c1sq_bochner_flat == doctest::Approx(dens.p1_bochner_flat + 2 * dens.chi_bochner_flat).epsilon(1e-12).scale(1.0));
      const double s = std::max(1.0, std::abs(dens.chi) + std::abs(dens.p1));
      CHECK(std::abs(dens.p1 - dens.p1_bochner_flat) / s < 1e-7);
      CHECK(std::abs(dens.chi - dens.chi_bochner_flat) / s < 1e-7);
      // direct oracle for χ density
      const double chi = (norm_sq(cd.riemann, cd.g, cd.g_inv) - 4 * norm_sq(cd.ricci, cd.g, cd.g_inv) +
                          cd.tau * cd.tau) /
                         (32 * pi2);
      CHECK(dens.chi == doctest::Approx(chi).epsilon(1e-9).scale(1.0));
    }
  }
  const CatalogEntry ex3 = example3();
  const CurvatureData cd = curvature(*ex3.chart, ex3.sample_point);
  const FrameData fd = to_adapted_frame(cd);
  const WeylBlocks blocks = weyl_operator(weyl_tensor(cd), cd.g_inv, lambda2_basis(fd.frame, cd.J));
  const CharacteristicDensities dens = characteristic_integrands(cd, blocks, 0.0);
  CHECK(dens.p1 == doctest::Approx(0.0).scale(1.0));
  // τ²/6 - 2‖ρ - (τ/4)g‖² = 36/6 - 2·3 = 0 for ρ = diag(-2,-2,-2,0)
  CHECK(dens.chi == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(characteristic_integrands(csf_algebraic(3, 1.0), blocks, 0.0), std::invalid_argument);
}

TEST_CASE("u, v, w, h") {
  const CatalogEntry ex1 = example1();
  for (const auto& p : oracle::random_points(ex1, 5, 56)) {
    const CurvatureData cd = curvature(*ex1.chart, p);
    const Uvwh q = uvwh(to_adapted_frame(cd));
    const double expected = -(cd.tau_star - cd.tau) / 8;
    CHECK(q.u == doctest::Approx(expected).epsilon(1e-8));
    CHECK(q.v == doctest::Approx(expected).epsilon(1e-8));
    CHECK(std::abs(q.w) < 1e-10);
    CHECK(std::abs(q.h) < 1e-10);
  }
  const CatalogEntry f = flat();
  const Uvwh z = uvwh(to_adapted_frame(curvature(*f.chart, f.sample_point)));
  CHECK(z.u == 0.0);
  CHECK(z.v == 0.0);
  CHECK(z.w == 0.0);
  CHECK(z.h == 0.0);
}

TEST_CASE("‖R‖² decomposition") {
  for (const auto& e : bochner_flat_charts()) {
    CAPTURE(e.name);
    for (const auto& p : oracle::random_points(e, 5, 57)) {
      const CurvatureData cd = curvature(*e.chart, p);
      const double G = g_quantity(to_adapted_frame(cd).ricci_star).value();
      const NormDecomposition nd = curvature_norm_decomposition(cd, G);
      CHECK(nd.residual() / std::max(1.0, nd.lhs) < 1e-7);
      if (e.name == "example1") CHECK(nd.lhs == doctest::Approx(24.0));
    }
  }
  const CurvatureData ss = curvature(*two_spheres(), std::vector<double>{0.2, 0.1, -0.3, 0.4});
  CHECK_THROWS_AS(curvature_norm_decomposition(ss, 0.0), ContractViolation);
}

TEST_CASE("curvature identity for Bochner-flat and Hermitian charts") {
  for (const auto& e : bochner_flat_charts()) {
    CAPTURE(e.name);
    for (const auto& p : oracle::random_points(e, 5, 58)) {
      const CurvatureData cd = curvature(*e.chart, p);
      CHECK(gray_identity_residual(to_adapted_frame(cd)) / scale_of(cd.riemann) < 1e-8);
    }
  }
  // a generic algebraic tensor violates it
  std::mt19937_64 rng(59);
  const auto h = oracle::random_hermitian(rng, 4);
  const Tensor a = oracle::random_covariant(rng, 4, 2, true);
  const Tensor b = oracle::random_covariant(rng, 4, 2, true);
  const CurvatureData generic = curvature_from_tensor(h.g, h.J, kulkarni(a, b));
  CHECK(gray_identity_residual(to_adapted_frame(generic)) > 0.1);
}
