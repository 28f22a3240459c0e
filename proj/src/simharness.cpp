#include "avw/simharness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "avw/combinatorics.hpp"
#include "avw/nullmodel.hpp"
#include "avw/numerics/special_functions.hpp"
#include "avw/parallel.hpp"
#include "avw/statistic.hpp"

namespace avw::sim {

namespace {

using numerics::Distribution;
using numerics::Family;

bool same_template(const DistributionTemplate& a, const DistributionTemplate& b) {
  return a.family == b.family && a.location == b.location && a.location_first == b.location_first &&
         a.variance == b.variance && a.variance_first == b.variance_first &&
         a.inverse_distance_correlation == b.inverse_distance_correlation &&
         a.lower == b.lower && a.upper == b.upper && a.shape == b.shape && a.scale == b.scale;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Univariate families with coordinates 1 and 2..dim possibly differing in location.
Distribution univariate_block(const DistributionTemplate& t, int dim, double location) {
  switch (t.family) {
    case Family::Uniform:
      return Distribution::uniform_iid(dim, t.lower + location, t.upper + location);
    case Family::Cauchy: return Distribution::cauchy(dim, location, t.scale);
    case Family::Gamma: return Distribution::gamma(dim, t.shape, t.scale);
    case Family::Pareto: return Distribution::pareto(dim, t.scale, t.shape);
    case Family::Normal:
    case Family::Product: break;
  }
  throw std::logic_error("univariate_block: unsupported family");
}

}  // namespace

Distribution DistributionTemplate::build(int dim) const {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (family == Family::Normal) {
    Vector mean = Vector::Constant(dim, location);
    if (location_first) mean(0) = *location_first;
    Vector sd = Vector::Constant(dim, std::sqrt(variance));
    if (variance_first) sd(0) = std::sqrt(*variance_first);
    Eigen::MatrixXd cov = inverse_distance_correlation ? numerics::inverse_distance_covariance(dim)
                                                       : Eigen::MatrixXd::Identity(dim, dim);
    cov = sd.asDiagonal() * cov * sd.asDiagonal();
    return Distribution::normal(std::move(mean), cov);
  }
  if (family == Family::Product) throw std::invalid_argument("product laws cannot be templated");
  if (variance != 1.0 || variance_first || inverse_distance_correlation) {
    throw std::invalid_argument("variance and correlation settings apply to normal laws only");
  }
  const bool shiftable = family == Family::Uniform || family == Family::Cauchy;
  if (!shiftable && (location != 0.0 || location_first)) {
    throw std::invalid_argument("location shifts apply to normal, uniform and cauchy laws only");
  }
  if (!location_first || *location_first == location) return univariate_block(*this, dim, location);
  std::vector<Distribution> parts;
  parts.push_back(univariate_block(*this, 1, *location_first));
  if (dim > 1) parts.push_back(univariate_block(*this, dim - 1, location));
  return Distribution::product(std::move(parts));
}

std::string DistributionTemplate::family_name() const { return numerics::to_string(family); }

std::string TestSpec::display_name() const {
  if (!label.empty()) return label;
  switch (kind) {
    case TestKind::Avw: {
      std::string s = "avw[" + tests::to_string(p1) + "]";
      if (direction == tests::Direction::YYvsXY) s += "[yy]";
      return s;
    }
    case TestKind::IndependentWilcoxon: return "independent_wilcoxon";
    case TestKind::Hotelling: return "hotelling";
  }
  return "unknown";
}

std::string to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::Level: return "level";
    case StudyKind::Power: return "power";
    case StudyKind::DimensionSweep: return "dimension_sweep";
  }
  return "unknown";
}

std::vector<std::pair<std::int64_t, std::int64_t>> ScenarioSpec::size_points() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (m.empty()) {
    for (auto v : n) out.emplace_back(v, v);
  } else if (n.size() == m.size()) {
    for (std::size_t i = 0; i < n.size(); ++i) out.emplace_back(n[i], m[i]);
  } else if (n.size() == 1) {
    for (auto v : m) out.emplace_back(n[0], v);
  } else if (m.size() == 1) {
    for (auto v : n) out.emplace_back(v, m[0]);
  } else {
    throw std::invalid_argument("n and m sweeps must have equal length or one entry");
  }
  return out;
}

void ScenarioSpec::validate() const {
  if (name.empty()) throw std::invalid_argument("scenario name must not be empty");
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
  if (n.empty() || dim.empty()) throw std::invalid_argument("n and dim sweeps must be nonempty");
  if (tests.empty()) throw std::invalid_argument("scenario lists no tests");
  for (const auto& [nn, mm] : size_points()) {
    if (nn < 5 || mm < 2) throw std::invalid_argument("every point needs n >= 5 and m >= 2");
  }
  for (int d : dim) {
    if (d < 1) throw std::invalid_argument("dimensions must be >= 1");
    null_dist.build(d);
    if (alt_dist) alt_dist->build(d);
  }
  for (const auto& t : tests) {
    if (t.direction == tests::Direction::Both) {
      throw std::invalid_argument("scenario tests take a single direction (xx or yy)");
    }
    if (const auto* v = std::get_if<tests::P1Value>(&t.p1)) {
      if (!(v->p > 0.5 && v->p <= 1.0)) throw std::invalid_argument("P1 value must lie in (1/2, 1]");
    }
    if (const auto* o = std::get_if<tests::P1Oracle>(&t.p1)) {
      for (int d : dim) {
        tests::P1Oracle filled = *o;
        if (filled.distribution.empty()) filled.distribution = null_dist.family_name();
        if (filled.dim < 1) filled.dim = d;
        try {
          tests::resolve_p1(filled, metric);
        } catch (const std::out_of_range& e) {
          throw std::invalid_argument(e.what());
        }
      }
    }
  }
}

const SimRow& SimResult::find(const std::string& test, std::int64_t n, int dim) const {
  for (const auto& r : rows) {
    if (r.test == test && r.n == n && r.dim == dim) return r;
  }
  throw std::out_of_range("no result row for test " + test);
}

namespace {

struct RepOutcome {
  std::int8_t decision = 0;
  double z = 0.0;
};

std::vector<SimRow> run_point(const ScenarioSpec& spec, std::size_t point_index, std::int64_t n,
                              std::int64_t m, int dim) {
  const auto start = std::chrono::steady_clock::now();
  const Distribution x_law = spec.null_dist.build(dim);
  const Distribution y_law = spec.alt_dist ? spec.alt_dist->build(dim) : x_law;
  const std::uint64_t seed = numerics::derive_seed(spec.base_seed, point_index);
  const std::size_t ntests = spec.tests.size();
  const auto reps = static_cast<std::size_t>(spec.reps);

  std::vector<nullmodel::P1Estimate> p1(ntests);
  for (std::size_t t = 0; t < ntests; ++t) {
    const auto& ts = spec.tests[t];
    if (ts.kind != TestKind::Avw) continue;
    tests::P1Choice choice = ts.p1;
    if (auto* o = std::get_if<tests::P1Oracle>(&choice)) {
      if (o->distribution.empty()) o->distribution = spec.null_dist.family_name();
      if (o->dim < 1) o->dim = dim;
    }
    p1[t] = tests::resolve_p1(choice, spec.metric);
  }

  std::vector<RepOutcome> cells(reps * ntests);
  std::vector<std::string> errors(reps * ntests);
  parallel_for(reps, spec.workers, [&](std::size_t k) {
    numerics::CounterRng rng(seed, k);
    const geometry::PointCloud xs(numerics::sample(x_law, n, rng), "x");
    const geometry::PointCloud ys(numerics::sample(y_law, m, rng), "y");
    std::optional<statistic::StatisticResult> stat_xx;
    std::optional<statistic::StatisticResult> stat_yy;
    auto stat_for = [&](tests::Direction d) -> const statistic::StatisticResult& {
      const bool yy = d == tests::Direction::YYvsXY;
      auto& slot = yy ? stat_yy : stat_xx;
      if (!slot) {
        const auto tables = yy ? geometry::build_distance_tables(ys, xs, spec.metric)
                               : geometry::build_distance_tables(xs, ys, spec.metric);
        slot = statistic::t_statistic_fast(tables);
      }
      return *slot;
    };
    for (std::size_t t = 0; t < ntests; ++t) {
      const auto& ts = spec.tests[t];
      RepOutcome& cell = cells[k * ntests + t];
      try {
        switch (ts.kind) {
          case TestKind::Avw: {
            const bool yy = ts.direction == tests::Direction::YYvsXY;
            const auto out = tests::decide(stat_for(ts.direction), yy ? m : n, yy ? n : m, p1[t],
                                           spec.alpha, ts.direction);
            cell = {static_cast<std::int8_t>(out.reject), out.z};
            break;
          }
          case TestKind::IndependentWilcoxon: {
            const auto out = tests::independent_wilcoxon_test(xs, ys, spec.metric, rng, spec.alpha);
            cell = {static_cast<std::int8_t>(out.reject), out.z};
            break;
          }
          case TestKind::Hotelling: {
            const auto out = tests::hotelling_t2_test(xs, ys, spec.alpha);
            cell = {static_cast<std::int8_t>(out.reject), out.z};
            break;
          }
        }
      } catch (const std::domain_error& e) {
        cell = {-1, 0.0};
        errors[k * ntests + t] = e.what();
      }
    }
  });
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<SimRow> rows;
  for (std::size_t t = 0; t < ntests; ++t) {
    SimRow row;
    row.scenario = spec.name;
    row.test = spec.tests[t].display_name();
    row.n = n;
    row.m = m;
    row.dim = dim;
    row.metric = spec.metric.name();
    row.reps = spec.reps;
    row.runtime_s = runtime;
    row.decisions.resize(reps);
    std::vector<double> zs;
    for (std::size_t k = 0; k < reps; ++k) {
      const RepOutcome& c = cells[k * ntests + t];
      row.decisions[k] = c.decision;
      if (c.decision < 0) {
        ++row.errors;
        if (!row.first_error) row.first_error = errors[k * ntests + t];
        continue;
      }
      row.rejections += c.decision;
      zs.push_back(c.z);
    }
    row.rate = static_cast<double>(row.rejections) / static_cast<double>(row.reps);
    row.se = std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(row.reps));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean_z = nan;
    row.var_z = nan;
    if (!zs.empty()) {
      long double s = 0.0L;
      for (double z : zs) s += z;
      const long double mean = s / static_cast<long double>(zs.size());
      row.mean_z = static_cast<double>(mean);
      if (zs.size() > 1) {
        long double ss = 0.0L;
        for (double z : zs) ss += (z - mean) * (z - mean);
        row.var_z = static_cast<double>(ss / static_cast<long double>(zs.size() - 1));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

SimResult run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  SimResult result;
  std::size_t index = 0;
  for (const auto& [n, m] : spec.size_points()) {
    for (int d : spec.dim) {
      auto rows = run_point(spec, index++, n, m, d);
      for (auto& r : rows) result.rows.push_back(std::move(r));
    }
  }
  return result;
}

SimResult run_level_study(const ScenarioSpec& spec) {
  if (spec.alt_dist && !same_template(*spec.alt_dist, spec.null_dist)) {
    throw std::invalid_argument("level study: alt_dist must be omitted or equal null_dist");
  }
  ScenarioSpec s = spec;
  s.study = StudyKind::Level;
  s.alt_dist.reset();
  return run_scenario(s);
}

SimResult run_power_study(const ScenarioSpec& spec) {
  if (!spec.alt_dist) throw std::invalid_argument("power study needs alt_dist");
  ScenarioSpec s = spec;
  s.study = StudyKind::Power;
  return run_scenario(s);
}

SimResult run_dimension_sweep(const ScenarioSpec& spec) {
  if (spec.dim.empty()) throw std::invalid_argument("dimension sweep needs a dim list");
  ScenarioSpec s = spec;
  s.study = StudyKind::DimensionSweep;
  return run_scenario(s);
}

double ks_distance_to_normal(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("KS distance of an empty sample");
  std::sort(values.begin(), values.end());
  const auto count = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = numerics::std_normal_cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / count - f, f - static_cast<double>(i) / count});
  }
  return d;
}

NormalityCheck run_normality_check(std::int64_t n, std::int64_t m,
                                   const numerics::Distribution& null_dist,
                                   const geometry::MetricSpec& metric, double p1,
                                   std::int64_t reps, std::uint64_t seed, int workers) {
  if (reps < 500) throw std::invalid_argument("normality check needs reps >= 500");
  const double var = nullmodel::var_h_approx(n, m, p1);
  const double center = static_cast<double>(combinatorics::card_I(n, m)) / 2.0;
  NormalityCheck out;
  std::vector<std::uint64_t> t(static_cast<std::size_t>(reps));
  parallel_for(t.size(), workers, [&](std::size_t k) {
    numerics::CounterRng rng(seed, k);
    const geometry::PointCloud xs(numerics::sample(null_dist, n, rng));
    const geometry::PointCloud ys(numerics::sample(null_dist, m, rng));
    t[k] = statistic::t_statistic_fast(geometry::build_distance_tables(xs, ys, metric)).t_value;
  });
  if (std::all_of(t.begin(), t.end(), [&](std::uint64_t v) { return v == t.front(); })) {
    throw std::domain_error("normality check: the statistic is constant across replications");
  }
  out.z.reserve(t.size());
  const double sd = std::sqrt(var);
  for (std::uint64_t v : t) out.z.push_back((static_cast<double>(v) - center) / sd);
  out.ks = ks_distance_to_normal(out.z);
  return out;
}

std::string to_csv(const SimResult& result) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << csv_field(r.scenario) << ',' << csv_field(r.test) << ',' << r.n << ',' << r.m << ','
        << r.dim << ',' << csv_field(r.metric) << ',' << r.reps << ',' << r.rejections << ','
        << fmt(r.rate) << ',' << fmt(r.se) << ',' << fmt(r.mean_z) << ',' << fmt(r.var_z) << ','
        << fmt(r.runtime_s) << '\n';
  }
  return out.str();
}

std::string to_json(const SimResult& result) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  for (const auto& r : result.rows) {
    nlohmann::ordered_json j;
    j["scenario"] = r.scenario;
    j["test"] = r.test;
    j["n"] = r.n;
    j["m"] = r.m;
    j["dim"] = r.dim;
    j["metric"] = r.metric;
    j["reps"] = r.reps;
    j["rejections"] = r.rejections;
    j["errors"] = r.errors;
    j["rate"] = r.rate;
    j["se"] = r.se;
    j["mean_z"] = num(r.mean_z);
    j["var_z"] = num(r.var_z);
    j["runtime_s"] = r.runtime_s;
    if (r.first_error) j["first_error"] = *r.first_error;
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void write_outputs(const SimResult& result, const std::string& scenario,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
  };
  write(dir / (scenario + ".csv"), to_csv(result));
  write(dir / (scenario + ".json"), to_json(result));
}

}  // namespace avw::sim
