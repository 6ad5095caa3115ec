#include <gtest/gtest.h>

#include <random>

#include "blaschke/map.hpp"

using namespace blaschke;

namespace {

Complex random_a(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.05, 0.95), t(0.0, 2.0 * kPi);
  return std::polar(r(rng), t(rng));
}

Complex random_lambda(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> e(-9.0, -3.0), t(0.0, 2.0 * kPi);
  return std::polar(std::pow(10.0, e(rng)), t(rng));
}

}  // namespace

TEST(EvalMap, RealParameterAtOne) {
  const auto p = MapParams::perturbed(0.5, 0.001);
  const Complex v = eval_map(1.0, p);
  EXPECT_NEAR(v.real(), 1.001, 1e-15);
  EXPECT_EQ(v.imag(), 0.0);
}

TEST(EvalMap, PolesGiveInfinity) {
  const auto p = MapParams::perturbed(0.5, 0.001);
  EXPECT_TRUE(is_infinity(eval_map(2.0, p)));
  EXPECT_TRUE(is_infinity(eval_map(0.0, p)));
  EXPECT_TRUE(is_infinity(eval_map(infinity(), p)));
  EXPECT_TRUE(is_infinity(eval_map(2.0, MapParams::unperturbed(0.5))));
  EXPECT_TRUE(is_infinity(eval_map(0.0, MapParams::mcmullen(3, 2, 0.1))));
  EXPECT_FALSE(std::isnan(eval_map(0.0, p).real()));
}

TEST(EvalMap, UnperturbedMatchesZeroLambda) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    const Complex a = random_a(rng);
    const Complex z{u(rng), u(rng)};
    MapParams q = MapParams::perturbed(a, 1.0);
    q.lambda = 0.0;  // bypasses validation on purpose: the evaluator is unchecked
    EXPECT_EQ(MapEvaluator(q)(z), eval_map(z, MapParams::unperturbed(a)));
  }
}

TEST(EvalMap, InvalidParamsNameTheField) {
  try {
    eval_map(1.0, MapParams::perturbed(1.2, 1e-6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_params);
    EXPECT_EQ(e.detail().rfind("a:", 0), 0u);
  }
  EXPECT_THROW(eval_map(1.0, MapParams::perturbed(0.5, 0.0)), Error);
  EXPECT_THROW(eval_map(1.0, MapParams::mcmullen(1, 2, 0.1)), Error);
  EXPECT_THROW(eval_map(1.0, MapParams::mcmullen(3, 0, 0.1)), Error);
  EXPECT_NO_THROW(eval_map(1.0, MapParams::unperturbed(0.5)));
}

TEST(EvalMap, ConjugationSymmetry) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 200; ++i) {
    const auto p = MapParams::perturbed(random_a(rng), random_lambda(rng));
    const Complex z{u(rng), u(rng)};
    const Complex lhs = std::conj(eval_map(z, p));
    const Complex rhs = eval_map(std::conj(z), conj(p));
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(EvalMap, RealAxisInvariantForRealParameters) {
  const auto p = MapParams::perturbed(0.6, 3e-6);
  for (double x = -1.3; x < 1.3; x += 0.01) EXPECT_EQ(eval_map(x, p).imag(), 0.0);
}

TEST(EvalDerivative, VanishesAtClosedFormCriticalPoint) {
  const Complex cm = unperturbed_critical_points(0.5).c_minus;
  EXPECT_NEAR(cm.real(), (3.0 - std::sqrt(5.0)) / 2.0, 1e-15);
  EXPECT_LE(std::abs(eval_derivative(cm, MapParams::unperturbed(0.5))), 1e-14);
}

TEST(EvalDerivative, MatchesCentralDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const double h = 1e-6;
  int checked = 0;
  while (checked < 100) {
    const auto p = MapParams::perturbed(random_a(rng), random_lambda(rng));
    const Complex z{u(rng), u(rng)};
    if (std::abs(z) < 0.05 || std::abs(z - 1.0 / std::conj(p.a)) < 0.05) continue;
    const Complex fd = (eval_map(z + h, p) - eval_map(z - h, p)) / (2.0 * h);
    const Complex d = eval_derivative(z, p);
    EXPECT_LE(std::abs(d - fd), 1e-5 * std::max(1.0, std::abs(d))) << z;
    ++checked;
  }
}

TEST(EvalDerivative, McMullenPoleAtOrigin) {
  EXPECT_TRUE(is_infinity(eval_derivative(0.0, MapParams::mcmullen(3, 2, 0.01))));
}

TEST(PolynomialRoots, Quadratic) {
  const RootSet r = polynomial_roots(std::vector<Complex>{1.0, 0.0, -1.0});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r.roots[0].real(), -1.0, 1e-15);
  EXPECT_NEAR(r.roots[1].real(), 1.0, 1e-15);
  EXPECT_TRUE(r.all_converged());
}

TEST(PolynomialRoots, FifthRootsMatchDeMoivre) {
  const Complex a{0.0, 0.5};
  const Complex lambda = 1e-6;
  const Complex c = 2.0 * lambda / (3.0 * a);
  const RootSet r = polynomial_roots(std::vector<Complex>{1.0, 0.0, 0.0, 0.0, 0.0, -c});
  ASSERT_EQ(r.size(), 5u);
  const double mod = std::pow(std::abs(c), 0.2);
  const double arg = std::arg(c) / 5.0;
  for (int k = 0; k < 5; ++k) {
    const Complex expect = std::polar(mod, arg + 2.0 * kPi * k / 5.0);
    double best = 1e300;
    for (const Complex& z : r.roots) best = std::min(best, std::abs(z - expect));
    EXPECT_LE(best, 1e-14);
  }
}

TEST(PolynomialRoots, RandomDegreeSixResidual) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Complex> c(7);
    double cmax = 0.0;
    for (auto& ck : c) {
      ck = {g(rng), g(rng)};
      cmax = std::max(cmax, std::abs(ck));
    }
    const RootSet r = polynomial_roots(c);
    ASSERT_EQ(r.size(), 6u);
    EXPECT_LE(r.max_residual(), 1e-10 * cmax);
  }
}

TEST(PolynomialRoots, SortedAndDeterministic) {
  const std::vector<Complex> c{1.0, {0.3, -0.2}, 2.0, {0.0, 1.0}, -0.5};
  const RootSet r1 = polynomial_roots(c);
  const RootSet r2 = polynomial_roots(c);
  EXPECT_EQ(r1.roots, r2.roots);
  for (std::size_t i = 1; i < r1.size(); ++i) EXPECT_FALSE(lex_less(r1.roots[i], r1.roots[i - 1]));
}

TEST(PolynomialRoots, RejectsBadInput) {
  EXPECT_THROW(polynomial_roots(std::vector<Complex>{0.0, 1.0}), Error);
  EXPECT_THROW(polynomial_roots(std::vector<Complex>(18, 1.0)), Error);
}

TEST(Preimages, InfinityHasFixedStructure) {
  const auto p = MapParams::perturbed(0.5, 1e-6);
  const RootSet r = preimages_of_point(infinity(), p);
  ASSERT_EQ(r.size(), 6u);
  int zeros = 0, infs = 0, poles = 0;
  for (const Complex& z : r.roots) {
    if (is_infinity(z)) ++infs;
    else if (z == Complex{}) ++zeros;
    else if (std::abs(z - 2.0) < 1e-15) ++poles;
  }
  EXPECT_EQ(zeros, 2);
  EXPECT_EQ(poles, 1);
  EXPECT_EQ(infs, 3);
}

TEST(Preimages, VietaAtZero) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const auto p = MapParams::perturbed(random_a(rng), random_lambda(rng));
    const RootSet r = preimages_of_point(0.0, p);
    ASSERT_EQ(r.size(), 6u);
    Complex sum{}, prod{1.0};
    for (const Complex& z : r.roots) {
      sum += z;
      prod *= z;
    }
    EXPECT_LE(std::abs(sum - p.a), 1e-9);
    EXPECT_LE(std::abs(prod - p.lambda), 1e-9);
    EXPECT_LE(r.max_residual(), 1e-9);
  }
}

TEST(Preimages, RootsMapBackToTarget) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const auto p = MapParams::perturbed(random_a(rng), random_lambda(rng));
    const Complex w{u(rng), u(rng)};
    const RootSet r = preimages_of_point(w, p);
    for (const Complex& z : r.roots)
      EXPECT_LE(std::abs(eval_map(z, p) - w), 1e-9 * std::max(1.0, std::abs(w)));
  }
}

TEST(Preimages, ContinuousInTarget) {
  const auto p = MapParams::perturbed({0.0, 0.5}, 1e-6);
  const Complex w{0.7, 0.4};
  const RootSet r0 = preimages_of_point(w, p);
  const RootSet r1 = preimages_of_point(w + 1e-8, p);
  for (const Complex& z : r0.roots) {
    double best = 1e300;
    for (const Complex& y : r1.roots) best = std::min(best, std::abs(z - y));
    EXPECT_LE(best, 1e-3);
  }
}

TEST(Newton, FixedPointOne) {
  const NewtonResult r = newton_refine(1.0, NewtonTarget::fixed_point(), MapParams::unperturbed(0.5));
  EXPECT_EQ(r.root, Complex(1.0));
}

TEST(Newton, CriticalPointFromNearbySeed) {
  const NewtonResult r =
      newton_refine(0.38, NewtonTarget::critical_point(), MapParams::unperturbed(0.5));
  EXPECT_NEAR(r.root.real(), (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);
  EXPECT_LE(r.iterations, 50);
}

TEST(Newton, ContinuationStepIsCheap) {
  const Complex a{0.0, 0.5};
  const Complex seed = unperturbed_critical_points(a).c_minus;
  const NewtonResult r =
      newton_refine(seed, NewtonTarget::critical_point(), MapParams::perturbed(a, 1e-8));
  EXPECT_LE(r.iterations, 10);
  EXPECT_LE(std::abs(eval_derivative(r.root, MapParams::perturbed(a, 1e-8))), 1e-10);
}

TEST(Newton, PreimageTarget) {
  const auto p = MapParams::perturbed(0.5, 1e-6);
  const NewtonResult r = newton_refine(0.9, NewtonTarget::preimage_of(0.5), p);
  EXPECT_NEAR(std::abs(eval_map(r.root, p) - 0.5), 0.0, 1e-12);
}

TEST(Newton, ReportsFailure) {
  // target 2z^3 - 1 has a flat spot at 0
  const auto p = MapParams::mcmullen(2, 1, 1.0);
  try {
    newton_refine(0.0, NewtonTarget::critical_point(), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::derivative_vanished);
  }
  // z^2 + 1 from a real seed never leaves the real line
  const std::vector<Complex> c{1.0, 0.0, 1.0};
  EXPECT_FALSE(newton_polish(c, 0.5, 3).converged);
}

TEST(McMullen, PolynomialsAgreeWithMap) {
  const auto p = MapParams::mcmullen(3, 2, {0.01, 0.02});
  const RootSet r = polynomial_roots(critical_polynomial(p));
  ASSERT_EQ(r.size(), 5u);
  for (const Complex& c : r.roots) EXPECT_LE(std::abs(eval_derivative(c, p)), 1e-10);
  const RootSet f = polynomial_roots(fixed_point_polynomial(p));
  for (const Complex& z : f.roots) EXPECT_LE(std::abs(eval_map(z, p) - z), 1e-10);
}
