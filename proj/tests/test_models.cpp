#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "levydd/errors.hpp"
#include "levydd/models.hpp"

using namespace levydd;
using namespace std::complex_literals;

namespace {

std::vector<LevyModel> sample_models() {
  return {BrownianParams{0.1, 1.0},       BrownianParams{-0.7, 2.5},     ExpJumpParams{0.6, 4.0, 0.125},
          ExpJumpParams{0.3, 4.0, 0.125}, ExpJumpParams{2.0, 0.5, 3.0},  IGParams{1.0, 9.0, 1.0 / 3.0},
          IGParams{5.0, 2.0, 0.7},        IGParams{0.2, 0.5625, 4.0 / 3.0}};
}

// 4th-order central differences of u -> L(u) along the real axis.
struct Derivatives {
  Complex d1, d2, d3;
};

Derivatives real_derivatives(const LevyModel& m) {
  const double h = 1e-3;
  auto L = [&](double u) { return generator_eval(m, Complex(u, 0.0)); };
  const Complex f1 = L(h), fm1 = L(-h), f2 = L(2 * h), fm2 = L(-2 * h), f3 = L(3 * h), fm3 = L(-3 * h),
                f0 = L(0.0);
  Derivatives d;
  d.d1 = (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
  d.d2 = (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
  d.d3 = (-f3 + 8.0 * f2 - 13.0 * f1 + 13.0 * fm1 - 8.0 * fm2 + fm3) / (8.0 * h * h * h);
  return d;
}

}  // namespace

TEST_CASE("generator basics") {
  CHECK(generator_eval(BrownianParams{0.1, 1.0}, 0.0) == Complex(0.0, 0.0));
  for (const auto& m : sample_models()) CHECK(generator_eval(m, 0.0) == Complex(0.0, 0.0));

  const ExpJumpParams p{0.6, 4.0, 0.125};
  const Complex u = -1i / 0.125 * 0.5;
  const Complex direct = 1i * 0.6 * u - 1i * 4.0 * 0.125 * u / (1.0 + 1i * 0.125 * u);
  CHECK(std::abs(generator_eval(p, u) - direct) < 1e-14);
  CHECK_THROWS_AS(generator_eval(p, 1i / 0.125), SingularityError);
  CHECK_THROWS_AS(generator_eval(IGParams{1.0, 9.0, 1.0 / 3.0}, 2.0i), SingularityError);
  // just below the cut start i/(2 beta) = 1.5i is fine
  CHECK_NOTHROW(generator_eval(IGParams{1.0, 9.0, 1.0 / 3.0}, 1.4i));
}

TEST_CASE("characteristic exponents on the real line") {
  for (const auto& m : sample_models()) {
    for (double u = -30.0; u <= 30.0; u += 0.37) {
      const Complex l = generator_eval(m, u), lm = generator_eval(m, -u);
      CHECK(l.real() <= 1e-15);
      CHECK(std::abs(lm - std::conj(l)) < 1e-12 * (1.0 + std::abs(l)));
    }
  }
}

TEST_CASE("IG square root keeps a positive real part") {
  const IGParams p{1.0, 9.0, 1.0 / 3.0};
  // u just left and right of the cut: the two sides differ only in sign of Im
  const Complex left = generator_eval(p, Complex(-1e-9, 3.0)), right = generator_eval(p, Complex(1e-9, 3.0));
  CHECK(std::abs(left.real() - right.real()) < 1e-6);
  CHECK(left.real() < 9.0);
}

TEST_CASE("cumulants") {
  const auto c = cumulants_of(ExpJumpParams{0.6, 4.0, 0.125});
  CHECK(c.mu_hat == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(c.sigma_hat == doctest::Approx(0.35355339059327373).epsilon(1e-14));
  CHECK(c.kappa_hat == doctest::Approx(-1.0606601717798212).epsilon(1e-14));
  const auto b = cumulants_of(BrownianParams{0.3, 1.7});
  CHECK(b.mu_hat == 0.3);
  CHECK(b.sigma_hat == 1.7);
  CHECK(b.kappa_hat == 0.0);
  // mu - alpha beta = 1 - 3 = -2 for the IG example
  const auto g = cumulants_of(IGParams{1.0, 9.0, 1.0 / 3.0});
  CHECK(g.mu_hat == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(g.sigma_hat == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.kappa_hat == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("cumulants agree with derivatives of the generator") {
  for (const auto& m : sample_models()) {
    const auto c = cumulants_of(m);
    const auto d = real_derivatives(m);
    const double s3 = c.sigma_hat * c.sigma_hat * c.sigma_hat;
    CHECK(std::abs(c.mu_hat - (d.d1 / 1i).real()) < 1e-6);
    CHECK(std::abs(c.sigma_hat * c.sigma_hat + d.d2.real()) < 1e-5);
    CHECK(std::abs(c.kappa_hat * s3 - (1i * d.d3).real()) < 1e-4);
  }
}

TEST_CASE("model_from_cumulants inverts cumulants_of") {
  const auto m = model_from_cumulants({0.1, 0.35355339059327373, -1.0606601717798212}, Family::expjump);
  const auto& e = std::get<ExpJumpParams>(m);
  CHECK(e.mu == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(e.lambda == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(e.xi == doctest::Approx(0.125).epsilon(1e-13));

  const auto& b = std::get<BrownianParams>(model_from_cumulants({0.2, 1.3, 0.0}, Family::brownian));
  CHECK(b.mu == 0.2);
  CHECK(b.sigma == 1.3);

  const auto& g = std::get<IGParams>(model_from_cumulants({0.0, 1.0, -1.0}, Family::ig));
  CHECK(g.alpha == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(g.beta == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(g.mu == doctest::Approx(3.0).epsilon(1e-14));

  CHECK_THROWS_AS(model_from_cumulants({0.0, 1.0, 0.5}, Family::expjump), DomainError);
  CHECK_THROWS_AS(model_from_cumulants({0.0, 1.0, -0.5}, Family::brownian), DomainError);
  CHECK_THROWS_AS(model_from_cumulants({0.0, 0.0, -0.5}, Family::ig), DomainError);
  // alpha beta = 9/16 * 4/3 = 0.75 <= 1
  CHECK_THROWS_AS(model_from_cumulants({-1.0, 1.0, -4.0}, Family::ig), DomainError);
}

TEST_CASE("cumulant roundtrip over grids") {
  for (double mu_hat : {-0.5, 0.0, 0.5, 2.0})
    for (double sigma_hat : {0.3, 1.0, 4.0})
      for (double kappa : {-4.0, -1.0, -0.25, -0.05}) {
        for (Family f : {Family::expjump, Family::ig}) {
          const Cumulants target{mu_hat, sigma_hat, kappa};
          LevyModel m;
          try {
            m = model_from_cumulants(target, f);
          } catch (const DomainError&) {
            CHECK(f == Family::ig);
            continue;
          }
          const auto c = cumulants_of(m);
          CHECK(std::abs(c.mu_hat - mu_hat) < 1e-12);
          CHECK(std::abs(c.sigma_hat - sigma_hat) < 1e-12);
          CHECK(std::abs(c.kappa_hat - kappa) < 1e-12);
        }
        const auto c = cumulants_of(model_from_cumulants({mu_hat, sigma_hat, 0.0}, Family::brownian));
        CHECK(c.mu_hat == mu_hat);
        CHECK(c.sigma_hat == sigma_hat);
      }
}

TEST_CASE("small skew approaches the Brownian limit") {
  double prev_lambda = 0.0, prev_xi = 1e300;
  for (double kappa : {-1.0, -0.1, -0.01, -0.001}) {
    const auto& e = std::get<ExpJumpParams>(model_from_cumulants({0.0, 1.0, kappa}, Family::expjump));
    CHECK(e.lambda > prev_lambda);
    CHECK(e.xi < prev_xi);
    prev_lambda = e.lambda;
    prev_xi = e.xi;
  }
  CHECK(prev_xi < 1e-3);
}

TEST_CASE("Wiener-Hopf pole residuals") {
  std::vector<Complex> grid;
  for (double s : {1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) grid.emplace_back(s, 0.0);
  for (double y = -50.0; y <= 50.0; y += 2.5) grid.emplace_back(1.0, y);
  std::vector<LevyModel> models = sample_models();
  models.push_back(ExpJumpParams{0.5, 4.0, 0.125});  // mu = lambda xi
  for (const auto& m : models) {
    for (const Complex s : grid) {
      const auto pole = wh_pole(m, s);
      CHECK(std::abs(generator_eval(m, pole.u_plus) - s) / std::abs(s) < 1e-10);
      CHECK(pole.u_plus.imag() < 0.0);
      if (std::holds_alternative<IGParams>(m))
        CHECK(std::isnan(pole.u_minus.real()));
      else
        CHECK(std::abs(generator_eval(m, pole.u_minus) - s) / std::abs(s) < 1e-10);
    }
  }
}

TEST_CASE("pole worked values") {
  const auto b = wh_pole(BrownianParams{0.0, std::sqrt(2.0)}, 1.0);
  CHECK(std::abs(b.u_plus - Complex(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(b.u_minus - Complex(0.0, 1.0)) < 1e-15);
  // drift-dominated IG: u_plus(0) = 0; otherwise strictly below the axis
  CHECK(std::abs(wh_pole(IGParams{5.0, 2.0, 0.7}, 0.0).u_plus) < 1e-15);
  CHECK(wh_pole(IGParams{1.0, 9.0, 1.0 / 3.0}, 0.0).u_plus.imag() < 0.0);
  const ExpJumpParams e{0.6, 4.0, 0.125};
  const auto [s1, s2] = expjump_slit(e);
  CHECK_THROWS_AS(wh_pole(e, 0.5 * (s1 + s2)), SingularityError);
  CHECK_THROWS_AS(wh_pole(e, s1), SingularityError);
  CHECK_NOTHROW(wh_pole(e, Complex(0.5 * (s1 + s2), 1e-6)));
  CHECK_THROWS_AS(wh_pole(ExpJumpParams{-0.1, 4.0, 0.125}, 1.0), DomainError);
  // off the slit on the real axis both roots stay valid
  for (double s : {s1 - 1.0, 0.5 * s2}) {
    const auto pole = wh_pole(e, s);
    CHECK(std::abs(generator_eval(e, pole.u_plus) - s) < 1e-10 * std::abs(s));
  }
}

TEST_CASE("expjump slit") {
  const auto [lo, hi] = expjump_slit(ExpJumpParams{0.5, 4.0, 0.125});
  CHECK(hi == 0.0);
  CHECK(lo < 0.0);
  const auto [l2, h2] = expjump_slit(ExpJumpParams{0.6, 4.0, 0.125});
  CHECK(l2 == doctest::Approx(-8.0 * std::pow(std::sqrt(0.6) + std::sqrt(0.5), 2)).epsilon(1e-14));
  CHECK(h2 == doctest::Approx(-8.0 * std::pow(std::sqrt(0.6) - std::sqrt(0.5), 2)).epsilon(1e-12));
  CHECK(l2 <= h2);
  const auto [a, b] = expjump_w_args(ExpJumpParams{0.6, 4.0, 0.125});
  CHECK(a == -h2);
  CHECK(b == -l2);
  CHECK_THROWS_AS(expjump_slit(ExpJumpParams{0.0, 4.0, 0.125}), DomainError);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(BrownianParams{0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(validate(ExpJumpParams{0.1, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate(ExpJumpParams{0.1, 1.0, -1.0}), DomainError);
  CHECK_NOTHROW(validate(ExpJumpParams{-3.0, 1.0, 1.0}));
  CHECK_THROWS_AS(validate(IGParams{0.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate(IGParams{1.0, NAN, 1.0}), DomainError);
  CHECK(parse_family("ig") == Family::ig);
  CHECK_THROWS_AS(parse_family("gamma"), DomainError);
}

TEST_CASE("key-value text form") {
  for (const auto& m : sample_models()) {
    const auto back = model_from_key_values(parse_key_values(to_key_values(m)));
    CHECK(back.index() == m.index());
    CHECK(to_key_values(back) == to_key_values(m));
  }
  const auto text = to_key_values(Cumulants{0.0, 1.0, -1.0}, Family::ig);
  CHECK(text == "model=ig\nmu_hat=0\nsigma_hat=1\nkappa_hat=-1\n");
  const auto& g = std::get<IGParams>(model_from_key_values(parse_key_values(text)));
  CHECK(g.mu == doctest::Approx(3.0));
  const auto kv = parse_key_values("# comment line\nmodel=brownian mu=0.25\n  sigma=2\n");
  CHECK(kv.at("mu") == "0.25");
  CHECK(std::get<BrownianParams>(model_from_key_values(kv)).sigma == 2.0);
  CHECK_THROWS_AS(parse_key_values("model brownian"), DomainError);
  CHECK_THROWS_AS(model_from_key_values(parse_key_values("model=brownian mu=x sigma=1")), DomainError);
  CHECK_THROWS_AS(model_from_key_values(parse_key_values("model=brownian mu=1")), DomainError);
  CHECK_THROWS_AS(model_from_key_values(parse_key_values("mu=1 sigma=1")), DomainError);
}
