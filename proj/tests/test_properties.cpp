#include "evofam/properties.hpp"

#include "support/oracles.hpp"
#include "support/stock.hpp"

#include <doctest.h>

#include <cmath>

using namespace evofam;

namespace {

/// 2x2 nonautonomous nonsymmetric form on a weighted triple.
RandomBuild small_nonsymmetric() {
  Matrix mass(2, 2), v(2, 2);
  mass << Complex(2.0), Complex(0.3), Complex(0.3), Complex(1.0);
  v << Complex(3.0), Complex(0.5), Complex(0.5), Complex(2.5);
  auto triple = GelfandTriple::make(mass, v);
  Matrix A0(2, 2), B(2, 2);
  A0 << Complex(3.0), Complex(1.0, 0.5), Complex(-0.5), Complex(2.5);
  B << Complex(0.4), Complex(-0.3, 0.2), Complex(0.6), Complex(-0.2);
  NonautonomousForm form(
      triple, 1.0,
      [A0, B](double t) { return Matrix(A0 + std::sin(2.5 * t) * B); }, 100.0,
      1e-3, Modulus::power(2.5, 1.0), 0.5);
  return RandomBuild{triple, std::move(form)};
}

}  // namespace

TEST_CASE("evolution-family axioms") {
  auto stock = evofam::test::stock_test_form();
  const Subdivision lambda = Subdivision::random(1.0, 6, 7);

  SUBCASE("identity defect is exactly zero") {
    const auto triples = random_triples(1.0, 10, 11);
    const auto report = check_axioms(stock.form, lambda, triples);
    CHECK(report.maxIdentityDefect == 0.0);
  }
  SUBCASE("autonomous cocycle defect at rounding level") {
    const Matrix A0 = stock.form.evaluate(0.5);
    NonautonomousForm autonomous(
        stock.triple, 1.0, [A0](double) { return A0; }, 10.0, 0.1,
        Modulus::zero(), 0.5);
    const auto triples = random_triples(1.0, 25, 13);
    const auto report = check_axioms(autonomous, lambda, triples);
    CHECK(report.maxCocycleDefect <= 1e-11);
  }
  SUBCASE("nonautonomous cocycle defect within tolerance") {
    const auto triples = random_triples(1.0, 50, 17);
    const auto report = check_axioms(stock.form, lambda, triples);
    CHECK(report.maxCocycleDefect <= 1e-10);
  }
  SUBCASE("threaded evaluation is bit-identical") {
    const auto triples = random_triples(1.0, 20, 19);
    const auto serial = check_axioms(stock.form, lambda, triples, 1e-12, 1);
    const auto parallel = check_axioms(stock.form, lambda, triples, 1e-12, 4);
    CHECK(serial.maxCocycleDefect == parallel.maxCocycleDefect);
    CHECK(serial.maxIdentityDefect == parallel.maxIdentityDefect);
  }
  SUBCASE("malformed triples rejected") {
    const std::vector<std::array<double, 3>> bad{{0.2, 0.5, 0.9}};  // r < s
    CHECK_THROWS_AS(check_axioms(stock.form, lambda, bad), std::invalid_argument);
  }
}

TEST_CASE("returned-adjoint duality") {
  SUBCASE("autonomous Hermitian forms: both sides are exp(-(t-s)G)") {
    auto stock = evofam::test::stock_test_form();
    const Matrix K = stock.triple->v_gram();
    NonautonomousForm sym(
        stock.triple, 1.0, [K](double) { return K; }, 1.5, 0.5, Modulus::zero(),
        0.5);
    const Subdivision lambda = Subdivision::random(1.0, 5, 23);
    const auto pairs = random_pairs(1.0, 8, 29);
    const auto report = check_duality(sym, lambda, pairs);
    CHECK(report.maxDefect <= 1e-11);
  }
  SUBCASE("2x2 nonautonomous nonsymmetric form") {
    auto problem = small_nonsymmetric();
    const Subdivision lambda = Subdivision::random(1.0, 4, 31);
    const auto pairs = random_pairs(1.0, 10, 37);
    const auto report = check_duality(problem.form, lambda, pairs);
    CHECK(report.maxDefect <= 1e-10);
  }
  SUBCASE("wrong partition is loudly wrong") {
    auto stock = evofam::test::stock_test_form();
    const Subdivision lambda = Subdivision::random(1.0, 8, 41);
    const auto pairs = random_pairs(1.0, 10, 43, 0.2);
    const auto good = check_duality(stock.form, lambda, pairs);
    const auto bad = check_duality(stock.form, lambda, pairs,
                                   DualityVariant::WrongPartition);
    CHECK(good.maxDefect <= 1e-10);
    CHECK(bad.maxDefect > 1e-3);
  }
  SUBCASE("defect is invariant under rescaling shifts") {
    auto problem = small_nonsymmetric();
    const Subdivision lambda = Subdivision::random(1.0, 5, 47);
    const auto pairs = random_pairs(1.0, 6, 53);
    const double base = check_duality(problem.form, lambda, pairs).maxDefect;
    for (double w : {-1.0, 2.5}) {
      const double shifted =
          check_duality(problem.form.shifted(w), lambda, pairs).maxDefect;
      CHECK(std::abs(shifted - base) <= 1e-11);
    }
  }
  SUBCASE("pairs outside the triangle rejected") {
    auto stock = evofam::test::stock_test_form();
    const std::vector<std::pair<double, double>> bad{{0.2, 0.5}};
    CHECK_THROWS_AS(check_duality(stock.form, Subdivision::uniform(1.0, 4), bad),
                    std::invalid_argument);
  }
}

TEST_CASE("V-prime extension bound") {
  SUBCASE("autonomous Hermitian contraction generator stays below one") {
    auto stock = evofam::test::stock_test_form();
    const Matrix K = stock.triple->v_gram();
    NonautonomousForm sym(
        stock.triple, 1.0, [K](double) { return K; }, 1.5, 0.5, Modulus::zero(),
        0.5);
    const Subdivision lambda = Subdivision::uniform(1.0, 6);
    const auto pairs = random_pairs(1.0, 8, 59);
    const auto report = vprime_extension_bound(sym, lambda, pairs);
    CHECK(report.supDirect <= 1.0 + 1e-10);
    CHECK(report.supAdjointRoute <= 1.0 + 1e-10);
    // and the H/V norms are contractions as well
    const PropagatorCache cache(sym, lambda);
    for (const auto& [t, s] : pairs) {
      CHECK(stock.triple->op_norm(cache.eval(t, s), Space::H) <= 1.0 + 1e-10);
      CHECK(stock.triple->op_norm(cache.eval(t, s), Space::V) <= 1.0 + 1e-10);
    }
  }
  SUBCASE("the two sups agree on the stock form") {
    auto stock = evofam::test::stock_test_form();
    const Subdivision lambda = Subdivision::random(1.0, 6, 61);
    const auto pairs = random_pairs(1.0, 10, 67);
    const auto report = vprime_extension_bound(stock.form, lambda, pairs);
    CHECK(report.agreementDefect <= 1e-9);
    CHECK(report.supDirect > 0.0);
  }
}

TEST_CASE("norm-continuity modulus") {
  SUBCASE("autonomous increments depend only on elapsed time") {
    auto diag = evofam::test::diag_problem(
        (RealVector(3) << 1.0, 2.0, 4.0).finished());
    const Subdivision fine = Subdivision::uniform(1.0, 32);
    // Pairs with equal elapsed-time difference must produce equal
    // increments: U(t,s) = T(t-s).
    std::vector<PairOfPairs> grid;
    grid.push_back({0.55, 0.25, 0.75, 0.25});  // elapsed 0.30 vs 0.50
    grid.push_back({0.75, 0.45, 0.95, 0.45});  // same elapsed pair, shifted
    const std::vector<Space> spaces{Space::H};
    const auto tables = continuity_modulus(diag.form, fine, 0.1, grid, spaces);
    REQUIRE(tables.size() == 1);
    REQUIRE(tables[0].entries.size() == 2);
    CHECK(std::abs(tables[0].entries[0].increment -
                   tables[0].entries[1].increment) <= 1e-11);
  }
  SUBCASE("increments shrink with delta and the exponent is positive") {
    auto stock = evofam::test::stock_test_form();
    const Subdivision fine = Subdivision::uniform(1.0, 48);
    const auto grid = modulus_pair_grid(1.0, 0.1, 4, 7, 0.2, 0.002);
    const std::vector<Space> spaces{Space::V, Space::H, Space::Vprime};
    const auto tables =
        continuity_modulus(stock.form, fine, 0.1, grid, spaces);
    REQUIRE(tables.size() == 3);
    for (const auto& table : tables) {
      CHECK(table.fittedExponent > 0.0);
      // smallest-delta decile stays below the largest-delta decile
      std::vector<ModulusEntry> sorted = table.entries;
      std::sort(sorted.begin(), sorted.end(),
                [](const ModulusEntry& a, const ModulusEntry& b) {
                  return a.delta < b.delta;
                });
      const std::size_t decile = std::max<std::size_t>(1, sorted.size() / 10);
      double small_max = 0.0, large_max = 0.0;
      for (std::size_t i = 0; i < decile; ++i) {
        small_max = std::max(small_max, sorted[i].increment);
        large_max = std::max(large_max, sorted[sorted.size() - 1 - i].increment);
      }
      CHECK(small_max < large_max);
    }
  }
  SUBCASE("Hilbert-scale interpolation inequality per pair") {
    auto stock = evofam::test::stock_test_form();
    const Subdivision fine = Subdivision::uniform(1.0, 32);
    const auto grid = modulus_pair_grid(1.0, 0.1, 3, 5, 0.2, 0.005);
    const std::vector<Space> spaces{Space::V, Space::H, Space::Vprime};
    const auto tables = continuity_modulus(stock.form, fine, 0.1, grid, spaces);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = tables[0].entries[i].increment;
      const double h = tables[1].entries[i].increment;
      const double vp = tables[2].entries[i].increment;
      CHECK(h <= std::sqrt(v * vp) * (1 + 1e-6));
    }
  }
  SUBCASE("epsilon separation enforced") {
    auto stock = evofam::test::stock_test_form();
    const Subdivision fine = Subdivision::uniform(1.0, 8);
    const std::vector<Space> spaces{Space::H};
    std::vector<PairOfPairs> bad{{0.5, 0.45, 0.6, 0.4}};  // t - s < 0.1
    CHECK_THROWS_AS(continuity_modulus(stock.form, fine, 0.1, bad, spaces),
                    std::invalid_argument);
    CHECK_THROWS_AS(continuity_modulus(stock.form, fine, -1.0, {}, spaces),
                    std::invalid_argument);
  }
}
