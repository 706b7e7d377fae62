#include "bbo/benchmarks.hpp"

#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace bbo {

std::size_t pair_count(int d) {
  return static_cast<std::size_t>(d) * (d - 1) / 2;
}

std::size_t triple_count(int d) {
  if (d < 3) return 0;
  return static_cast<std::size_t>(d) * (d - 1) * (d - 2) / 6;
}

std::size_t pair_index(int d, int i, int j) {
  return static_cast<std::size_t>(i) * d - static_cast<std::size_t>(i) * (i + 1) / 2 +
         static_cast<std::size_t>(j - i - 1);
}

std::size_t triple_index(int d, int i, int j, int k) {
  // triples whose smallest element is < i, then pairs (j,k) within the tail
  const std::size_t before = triple_count(d) - triple_count(d - i);
  return before + pair_index(d - i - 1, j - i - 1, k - i - 1);
}

QuboInstance generate_qubo(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("generate_qubo: d must be >= 1");
  SeededRng rng(seed);
  QuboInstance inst;
  inst.d = d;
  inst.linear.resize(static_cast<std::size_t>(d));
  for (double& a : inst.linear) a = rng.normal();
  inst.quadratic.resize(pair_count(d));
  for (double& a : inst.quadratic) a = rng.normal();
  return inst;
}

HuboInstance generate_hubo(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("generate_hubo: d must be >= 1");
  SeededRng rng(seed);
  HuboInstance inst;
  inst.d = d;
  inst.linear.resize(static_cast<std::size_t>(d));
  for (double& a : inst.linear) a = rng.normal();
  inst.quadratic.resize(pair_count(d));
  for (double& a : inst.quadratic) a = rng.normal();
  inst.cubic.resize(triple_count(d));
  for (double& a : inst.cubic) a = rng.normal();
  return inst;
}

double evaluate_qubo(const QuboInstance& inst, const BinaryVector& x) {
  if (x.dim() != inst.d) throw std::invalid_argument("evaluate_qubo: dimension mismatch");
  double value = 0.0;
  for (int i = 0; i < inst.d; ++i) {
    if (!x[i]) continue;
    value += inst.linear[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < inst.d; ++j) {
      if (x[j]) value += inst.quadratic[pair_index(inst.d, i, j)];
    }
  }
  return value;
}

double evaluate_hubo(const HuboInstance& inst, const BinaryVector& x) {
  if (x.dim() != inst.d) throw std::invalid_argument("evaluate_hubo: dimension mismatch");
  double value = 0.0;
  for (int i = 0; i < inst.d; ++i) {
    if (!x[i]) continue;
    value += inst.linear[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < inst.d; ++j) {
      if (!x[j]) continue;
      value += inst.quadratic[pair_index(inst.d, i, j)];
      for (int k = j + 1; k < inst.d; ++k) {
        if (x[k]) value += inst.cubic[triple_index(inst.d, i, j, k)];
      }
    }
  }
  return value;
}

HuboInstance lift_to_hubo(const QuboInstance& inst) {
  HuboInstance lifted;
  lifted.d = inst.d;
  lifted.linear = inst.linear;
  lifted.quadratic = inst.quadratic;
  lifted.cubic.assign(triple_count(inst.d), 0.0);
  return lifted;
}

std::vector<BinaryVector> generate_initial_points(int d, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_initial_points: n must be >= 1");
  if (d <= 62 && static_cast<std::uint64_t>(n) > (1ULL << d)) {
    throw std::invalid_argument("generate_initial_points: n exceeds 2^d");
  }
  SeededRng rng(seed);
  std::vector<BinaryVector> points;
  std::unordered_set<BinaryVector, BinaryVectorHash> seen;
  points.reserve(static_cast<std::size_t>(n));
  while (points.size() < static_cast<std::size_t>(n)) {
    BinaryVector x = BinaryVector::random(d, rng);
    if (seen.insert(x).second) points.push_back(std::move(x));
  }
  return points;
}

namespace {

std::vector<std::vector<std::pair<int, double>>> build_pair_rows(
    int d, const std::vector<double>& quadratic) {
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double v = quadratic[pair_index(d, i, j)];
      rows[static_cast<std::size_t>(i)].emplace_back(j, v);
      rows[static_cast<std::size_t>(j)].emplace_back(i, v);
    }
  }
  return rows;
}

}  // namespace

class QuboWalker : public FlipWalker {
 public:
  QuboWalker(const QuboObjective& obj, BinaryVector start)
      : obj_(obj), x_(std::move(start)), value_(obj.evaluate(x_)) {
    const int d = obj_.dim();
    field_.assign(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (const auto& [j, v] : obj_.rows_[static_cast<std::size_t>(k)]) {
        if (x_[j]) s += v;
      }
      field_[static_cast<std::size_t>(k)] = s;
    }
  }

  const BinaryVector& point() const override { return x_; }
  double value() const override { return value_; }

  double flip_delta(int bit) const override {
    const double sign = x_[bit] ? -1.0 : 1.0;
    return sign * (obj_.inst_.linear[static_cast<std::size_t>(bit)] +
                   field_[static_cast<std::size_t>(bit)]);
  }

  void flip(int bit) override {
    const double delta = flip_delta(bit);
    const double sign = x_[bit] ? -1.0 : 1.0;
    for (const auto& [j, v] : obj_.rows_[static_cast<std::size_t>(bit)]) {
      field_[static_cast<std::size_t>(j)] += sign * v;
    }
    x_.flip(bit);
    value_ += delta;
  }

 private:
  const QuboObjective& obj_;
  BinaryVector x_;
  double value_;
  std::vector<double> field_;  // field_[k] = sum_j a_kj x_j
};

QuboObjective::QuboObjective(QuboInstance inst) : inst_(std::move(inst)) {
  rows_ = build_pair_rows(inst_.d, inst_.quadratic);
}

double QuboObjective::evaluate(const BinaryVector& x) const {
  return evaluate_qubo(inst_, x);
}

std::unique_ptr<FlipWalker> QuboObjective::make_walker(const BinaryVector& start) const {
  return std::make_unique<QuboWalker>(*this, start);
}

class HuboWalker : public FlipWalker {
 public:
  HuboWalker(const HuboObjective& obj, BinaryVector start)
      : obj_(obj), x_(std::move(start)), value_(obj.evaluate(x_)) {
    const int d = obj_.dim();
    field_.assign(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (const auto& [j, v] : obj_.rows_[static_cast<std::size_t>(k)]) {
        if (x_[j]) s += v;
      }
      field_[static_cast<std::size_t>(k)] = s;
    }
  }

  const BinaryVector& point() const override { return x_; }
  double value() const override { return value_; }

  double flip_delta(int bit) const override {
    const double sign = x_[bit] ? -1.0 : 1.0;
    double cubic = 0.0;
    for (const auto& [j, k, v] : obj_.cubic_rows_[static_cast<std::size_t>(bit)]) {
      if (x_[j] && x_[k]) cubic += v;
    }
    return sign * (obj_.inst_.linear[static_cast<std::size_t>(bit)] +
                   field_[static_cast<std::size_t>(bit)] + cubic);
  }

  void flip(int bit) override {
    const double delta = flip_delta(bit);
    const double sign = x_[bit] ? -1.0 : 1.0;
    for (const auto& [j, v] : obj_.rows_[static_cast<std::size_t>(bit)]) {
      field_[static_cast<std::size_t>(j)] += sign * v;
    }
    x_.flip(bit);
    value_ += delta;
  }

 private:
  const HuboObjective& obj_;
  BinaryVector x_;
  double value_;
  std::vector<double> field_;  // pairwise part only; cubic is summed on demand
};

HuboObjective::HuboObjective(HuboInstance inst) : inst_(std::move(inst)) {
  const int d = inst_.d;
  rows_ = build_pair_rows(d, inst_.quadratic);
  cubic_rows_.assign(static_cast<std::size_t>(d), {});
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (int k = j + 1; k < d; ++k) {
        const double v = inst_.cubic[triple_index(d, i, j, k)];
        cubic_rows_[static_cast<std::size_t>(i)].emplace_back(j, k, v);
        cubic_rows_[static_cast<std::size_t>(j)].emplace_back(i, k, v);
        cubic_rows_[static_cast<std::size_t>(k)].emplace_back(i, j, v);
      }
    }
  }
}

double HuboObjective::evaluate(const BinaryVector& x) const {
  return evaluate_hubo(inst_, x);
}

std::unique_ptr<FlipWalker> HuboObjective::make_walker(const BinaryVector& start) const {
  return std::make_unique<HuboWalker>(*this, start);
}

namespace {

nlohmann::json quadratic_entries(int d, const std::vector<double>& quadratic) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      arr.push_back({{"i", i}, {"j", j}, {"v", quadratic[pair_index(d, i, j)]}});
    }
  }
  return arr;
}

}  // namespace

nlohmann::json qubo_to_json(const QuboInstance& inst, std::uint64_t seed) {
  nlohmann::json j;
  j["kind"] = "qubo";
  j["d"] = inst.d;
  j["seed"] = seed;
  j["linear"] = inst.linear;
  j["quadratic"] = quadratic_entries(inst.d, inst.quadratic);
  j["cubic"] = nlohmann::json::array();
  return j;
}

nlohmann::json hubo_to_json(const HuboInstance& inst, std::uint64_t seed) {
  nlohmann::json j;
  j["kind"] = "hubo";
  j["d"] = inst.d;
  j["seed"] = seed;
  j["linear"] = inst.linear;
  j["quadratic"] = quadratic_entries(inst.d, inst.quadratic);
  nlohmann::json cubic = nlohmann::json::array();
  for (int i = 0; i < inst.d; ++i) {
    for (int j2 = i + 1; j2 < inst.d; ++j2) {
      for (int k = j2 + 1; k < inst.d; ++k) {
        cubic.push_back(
            {{"i", i}, {"j", j2}, {"k", k}, {"v", inst.cubic[triple_index(inst.d, i, j2, k)]}});
      }
    }
  }
  j["cubic"] = cubic;
  return j;
}

QuboInstance qubo_from_json(const nlohmann::json& j) {
  if (j.at("kind").get<std::string>() != "qubo") {
    throw std::invalid_argument("qubo_from_json: kind is not qubo");
  }
  QuboInstance inst;
  inst.d = j.at("d").get<int>();
  inst.linear = j.at("linear").get<std::vector<double>>();
  inst.quadratic.assign(pair_count(inst.d), 0.0);
  for (const auto& e : j.at("quadratic")) {
    inst.quadratic[pair_index(inst.d, e.at("i").get<int>(), e.at("j").get<int>())] =
        e.at("v").get<double>();
  }
  return inst;
}

HuboInstance hubo_from_json(const nlohmann::json& j) {
  if (j.at("kind").get<std::string>() != "hubo") {
    throw std::invalid_argument("hubo_from_json: kind is not hubo");
  }
  HuboInstance inst;
  inst.d = j.at("d").get<int>();
  inst.linear = j.at("linear").get<std::vector<double>>();
  inst.quadratic.assign(pair_count(inst.d), 0.0);
  for (const auto& e : j.at("quadratic")) {
    inst.quadratic[pair_index(inst.d, e.at("i").get<int>(), e.at("j").get<int>())] =
        e.at("v").get<double>();
  }
  inst.cubic.assign(triple_count(inst.d), 0.0);
  for (const auto& e : j.at("cubic")) {
    inst.cubic[triple_index(inst.d, e.at("i").get<int>(), e.at("j").get<int>(),
                            e.at("k").get<int>())] = e.at("v").get<double>();
  }
  return inst;
}

}  // namespace bbo
