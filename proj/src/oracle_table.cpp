#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "avw/nullmodel.hpp"
#include "avw/oracle_table_data.hpp"

namespace avw::nullmodel {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

OracleTable OracleTable::parse(std::string_view text) {
  OracleTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ls(t);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(trim(f));
    auto fail = [&](const std::string& why) {
      return std::invalid_argument("oracle table line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 4) throw fail("expected 4 fields");
    const auto metric = geometry::MetricSpec::parse(fields[1]);
    int dim = 0;
    double value = 0.0;
    const auto r1 = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), dim);
    const auto r2 = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), value);
    if (r1.ec != std::errc() || dim < 1) throw fail("bad dimension '" + fields[2] + "'");
    if (r2.ec != std::errc() || !(value > 0.0 && value <= 1.0)) {
      throw fail("bad probability '" + fields[3] + "'");
    }
    table.cells_[{lower(fields[0]), metric.name(), dim}] = value;
  }
  return table;
}

OracleTable OracleTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open oracle table " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const OracleTable& OracleTable::builtin() {
  static const OracleTable table = parse(detail::kOracleTableCsv);
  return table;
}

double OracleTable::lookup(std::string_view distribution, const geometry::MetricSpec& metric,
                           int dim) const {
  const auto it = cells_.find({lower(std::string(distribution)), metric.name(), dim});
  if (it == cells_.end()) {
    throw OracleNotFound("no tabulated P1 for distribution '" + std::string(distribution) +
                         "', metric " + metric.name() + ", dim " + std::to_string(dim));
  }
  return it->second;
}

double lookup_oracle_p1(std::string_view distribution, const geometry::MetricSpec& metric,
                        int dim) {
  return OracleTable::builtin().lookup(distribution, metric, dim);
}

numerics::Distribution distribution_from_name(std::string_view name, int dim) {
  const std::string key = lower(std::string(name));
  if (key == "normal") return numerics::Distribution::normal_iid(dim);
  if (key == "uniform") return numerics::Distribution::uniform_iid(dim);
  if (key == "gamma") return numerics::Distribution::gamma(dim, 1.0, 2.0);
  if (key == "exponential") return numerics::Distribution::gamma(dim, 1.0, 1.0);
  if (key == "cauchy") return numerics::Distribution::cauchy(dim);
  if (key == "pareto") return numerics::Distribution::pareto(dim, 1.0, 1.0);
  throw std::invalid_argument("unknown distribution '" + std::string(name) +
                              "' (expected normal, uniform, gamma, exponential, cauchy, pareto)");
}

}  // namespace avw::nullmodel
