#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bbo/metrics.hpp"

using namespace bbo;

TEST_CASE("relative gap formula") {
  CHECK(relative_gap(-5.0, -5.0) == 0.0);
  CHECK(relative_gap(-99.0, -100.0) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(relative_gap(-101.0, -100.0) == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK_THROWS_AS(relative_gap(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("value improvement reproduces the published percentages") {
  CHECK(std::abs(value_improvement(2.737e-3, 5.292e-5) - 98.07) < 0.01);
  CHECK(std::abs(value_improvement(1.352e-3, 5.292e-5) - 96.08) < 0.01);
  CHECK(std::abs(value_improvement(1.226e-2, 1.660e-3) - 86.46) < 0.01);
  CHECK(std::abs(value_improvement(8.000e-3, 1.660e-3) - 79.25) < 0.01);
  CHECK(value_improvement(0.5, 0.5) == 0.0);
  CHECK_THROWS_AS(value_improvement(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("iteration improvement") {
  // reached exactly at T/2
  std::vector<double> gaps(100, 1.0);
  for (std::size_t i = 49; i < gaps.size(); ++i) gaps[i] = 0.1;
  CHECK(iteration_improvement(gaps, 0.1, 100) == doctest::Approx(50.0).epsilon(1e-12));

  // never reached
  std::vector<double> flat(100, 1.0);
  CHECK(iteration_improvement(flat, 0.1, 100) == 0.0);

  // reached immediately
  std::vector<double> quick(500, 0.0);
  CHECK(iteration_improvement(quick, 0.5, 500) == doctest::Approx(99.8).epsilon(1e-12));

  CHECK_THROWS_AS(iteration_improvement(flat, 0.1, 99), std::invalid_argument);
}

TEST_CASE("aggregate: degenerate and simple cases") {
  const std::vector<double> series = {3.0, 2.0, 1.0};
  AggregateStats one = aggregate({series});
  CHECK(one.mean == series);
  CHECK(one.stderr_ == std::vector<double>{0.0, 0.0, 0.0});

  AggregateStats twin = aggregate({{2.0, 2.0}, {2.0, 2.0}});
  CHECK(twin.mean == std::vector<double>{2.0, 2.0});
  CHECK(twin.stderr_ == std::vector<double>{0.0, 0.0});

  // sd = sqrt(2), so the standard error is sqrt(2)/sqrt(2) = 1
  AggregateStats spread = aggregate({{0.0}, {2.0}});
  CHECK(spread.mean == std::vector<double>{1.0});
  CHECK(spread.stderr_[0] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(aggregate({{1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("hamming series over a trace") {
  RunTrace trace;
  trace.dim = 4;
  auto add = [&](int t, const std::string& bits) {
    IterationRecord rec;
    rec.t = t;
    rec.point = BinaryVector::from_string(bits);
    rec.source = t == 0 ? ProposalSource::init : ProposalSource::bocs;
    trace.records.push_back(rec);
  };
  add(0, "0000");
  add(0, "1000");
  add(1, "1110");
  add(2, "0001");
  add(3, "0000");

  const BinaryVector minimizer = BinaryVector::from_string("0000");
  CHECK(hamming_to_optimum_series(trace, minimizer) == std::vector<int>{3, 1, 0});
  CHECK(consecutive_proposal_distances(trace) == std::vector<int>{4, 1});
}
