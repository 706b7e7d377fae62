#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <set>

#include "bbo/benchmarks.hpp"
#include "bbo/reference.hpp"

using namespace bbo;

TEST_CASE("pair and triple index layout is a bijection in canonical order") {
  const int d = 7;
  std::size_t expected = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) CHECK(pair_index(d, i, j) == expected++);
  }
  CHECK(expected == pair_count(d));

  expected = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (int k = j + 1; k < d; ++k) CHECK(triple_index(d, i, j, k) == expected++);
    }
  }
  CHECK(expected == triple_count(d));
}

TEST_CASE("generate_qubo: coefficient counts and determinism") {
  const QuboInstance inst = generate_qubo(50, 123);
  CHECK(inst.linear.size() == 50);
  CHECK(inst.quadratic.size() == 1225);

  const QuboInstance again = generate_qubo(50, 123);
  CHECK(inst.linear == again.linear);
  CHECK(inst.quadratic == again.quadratic);

  const QuboInstance other = generate_qubo(50, 124);
  CHECK(inst.linear != other.linear);
}

TEST_CASE("generate_qubo: pooled coefficients look standard normal") {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const QuboInstance inst = generate_qubo(50, seed);
    for (double a : inst.linear) {
      sum += a;
      sum_sq += a * a;
      ++count;
    }
    for (double a : inst.quadratic) {
      sum += a;
      sum_sq += a * a;
      ++count;
    }
  }
  CHECK(count == 50u * (50 + 1225));
  const double mean = sum / static_cast<double>(count);
  const double var = sum_sq / static_cast<double>(count) - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("evaluate_qubo: zero, single-bit, and all-ones cases") {
  const QuboInstance inst = generate_qubo(4, 99);

  CHECK(evaluate_qubo(inst, BinaryVector(4)) == 0.0);

  for (int k = 0; k < 4; ++k) {
    BinaryVector e(4);
    e.set(k, true);
    CHECK(evaluate_qubo(inst, e) == doctest::Approx(inst.linear[k]).epsilon(1e-12));
  }

  // independent oracle: direct summation of the stored coefficients
  double total = 0.0;
  for (double a : inst.linear) total += a;
  for (double a : inst.quadratic) total += a;
  BinaryVector ones = BinaryVector::from_string("1111");
  CHECK(evaluate_qubo(inst, ones) == doctest::Approx(total).epsilon(1e-12));

  CHECK_THROWS_AS(evaluate_qubo(inst, BinaryVector(5)), std::invalid_argument);
}

TEST_CASE("evaluate_hubo: zero, two-bit, and all-ones cases") {
  const HuboInstance inst = generate_hubo(4, 77);
  CHECK(inst.cubic.size() == 4);

  CHECK(evaluate_hubo(inst, BinaryVector(4)) == 0.0);

  BinaryVector two(4);
  two.set(1, true);
  two.set(3, true);
  const double expected = inst.linear[1] + inst.linear[3] + inst.pair_coeff(1, 3);
  CHECK(evaluate_hubo(inst, two) == doctest::Approx(expected).epsilon(1e-12));

  double total = 0.0;
  for (double a : inst.linear) total += a;
  for (double a : inst.quadratic) total += a;
  for (double a : inst.cubic) total += a;
  CHECK(evaluate_hubo(inst, BinaryVector::from_string("1111")) ==
        doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("lifting a qubo to hubo preserves values everywhere") {
  const QuboInstance inst = generate_qubo(10, 5);
  const HuboInstance lifted = lift_to_hubo(inst);
  SeededRng rng(6);
  for (int i = 0; i < 200; ++i) {
    const BinaryVector x = BinaryVector::random(10, rng);
    CHECK(evaluate_qubo(inst, x) == doctest::Approx(evaluate_hubo(lifted, x)).epsilon(1e-12));
  }
}

TEST_CASE("generate_initial_points: distinctness and determinism") {
  const auto points = generate_initial_points(50, 50, 31);
  CHECK(points.size() == 50);
  std::set<std::string> unique;
  for (const auto& p : points) unique.insert(p.to_string());
  CHECK(unique.size() == 50);

  const auto again = generate_initial_points(50, 50, 31);
  for (std::size_t i = 0; i < points.size(); ++i) CHECK(points[i] == again[i]);

  // pigeonhole: d=2, n=4 must produce every pattern
  const auto all = generate_initial_points(2, 4, 8);
  std::set<std::string> patterns;
  for (const auto& p : all) patterns.insert(p.to_string());
  CHECK(patterns == std::set<std::string>{"00", "01", "10", "11"});

  CHECK_THROWS_AS(generate_initial_points(2, 5, 1), std::invalid_argument);
}

TEST_CASE("exhaustive reference: hand-enumerable 2-variable instance") {
  // f(x) = x1 + x2 - 3 x1 x2: values 0, 1, 1, -1 over the four points
  QuboInstance inst;
  inst.d = 2;
  inst.linear = {1.0, 1.0};
  inst.quadratic = {-3.0};
  const QuboObjective obj(inst);
  const ReferenceValue ref = exhaustive_reference(obj);
  CHECK(ref.value == doctest::Approx(-1.0).epsilon(1e-12));
  REQUIRE(ref.minimizer.has_value());
  CHECK(ref.minimizer->to_string() == "11");
  CHECK(ref.method == ReferenceMethod::exhaustive);
}

TEST_CASE("exhaustive reference is a lower bound at random points") {
  const QuboInstance inst = generate_qubo(12, 21);
  const QuboObjective obj(inst);
  const ReferenceValue ref = exhaustive_reference(obj);
  SeededRng rng(22);
  for (int i = 0; i < 1000; ++i) {
    CHECK(ref.value <= evaluate_qubo(inst, BinaryVector::random(12, rng)) + 1e-12);
  }
  CHECK(ref.value == doctest::Approx(evaluate_qubo(inst, *ref.minimizer)).epsilon(1e-12));
}

TEST_CASE("exhaustive reference refuses dimensions above the cap") {
  const QuboInstance inst = generate_qubo(30, 1);
  const QuboObjective obj(inst);
  CHECK_THROWS_AS(exhaustive_reference(obj, 25), std::invalid_argument);
}

TEST_CASE("multi-restart SA oracle matches exhaustive on small instances") {
  int matches = 0;
  for (int i = 0; i < 10; ++i) {
    const QuboInstance inst = generate_qubo(12, 400 + static_cast<std::uint64_t>(i));
    const QuboObjective obj(inst);
    const ReferenceValue exact = exhaustive_reference(obj);
    SeededRng rng(900 + static_cast<std::uint64_t>(i));
    const ReferenceValue sa = sa_reference(obj, SaOracleConfig{10, 500}, rng);
    CHECK(sa.value >= exact.value - 1e-9);
    if (std::abs(sa.value - exact.value) < 1e-9) ++matches;
  }
  CHECK(matches >= 8);
}

TEST_CASE("instance json round trip") {
  const QuboInstance inst = generate_qubo(6, 777);
  const nlohmann::json j = qubo_to_json(inst, 777);
  CHECK(j.at("kind") == "qubo");
  CHECK(j.at("seed") == 777);
  const QuboInstance back = qubo_from_json(j);
  CHECK(back.d == inst.d);
  CHECK(back.linear == inst.linear);
  CHECK(back.quadratic == inst.quadratic);

  const HuboInstance hubo = generate_hubo(5, 778);
  const HuboInstance hback = hubo_from_json(hubo_to_json(hubo, 778));
  CHECK(hback.linear == hubo.linear);
  CHECK(hback.quadratic == hubo.quadratic);
  CHECK(hback.cubic == hubo.cubic);
}
