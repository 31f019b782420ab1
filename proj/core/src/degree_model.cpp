#include "cobranet/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cobranet {

std::uint64_t DegreeProfile::total_vertices() const {
  std::uint64_t total = 0;
  for (const auto& b : blocks) total += b.count;
  return total;
}

void DegreeProfile::check() const {
  if (blocks.empty()) throw std::invalid_argument("degree profile has no blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].count == 0)
      throw std::invalid_argument("block " + std::to_string(i) + ": count must be >= 1");
    if (blocks[i].d_out == 0)
      throw std::invalid_argument("block " + std::to_string(i) + ": d_out must be >= 1");
  }
  if (total_vertices() > std::numeric_limits<Vertex>::max())
    throw std::invalid_argument("degree profile has too many vertices");
}

std::string DegreeProfile::to_json() const {
  nlohmann::json j;
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : blocks)
    j["blocks"].push_back({{"count", b.count}, {"d_in", b.d_in}, {"d_out", b.d_out}});
  return j.dump(2);
}

DegreeProfile DegreeProfile::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("profile: ") + e.what());
  }
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array())
    throw std::invalid_argument("profile: expected an object with a \"blocks\" array");

  DegreeProfile profile;
  for (const auto& b : j["blocks"]) {
    auto field = [&](const char* key) -> std::int64_t {
      if (!b.is_object() || !b.contains(key) || !b[key].is_number_integer())
        throw std::invalid_argument(std::string("profile: block field \"") + key +
                                    "\" missing or not an integer");
      return b[key].get<std::int64_t>();
    };
    const auto count = field("count");
    const auto d_in = field("d_in");
    const auto d_out = field("d_out");
    if (count < 0 || d_in < 0 || d_out < 0)
      throw std::invalid_argument("profile: negative block field");
    if (d_in > std::numeric_limits<std::uint32_t>::max() ||
        d_out > std::numeric_limits<std::uint32_t>::max())
      throw std::invalid_argument("profile: degree out of range");
    profile.blocks.push_back({static_cast<std::uint64_t>(count), static_cast<std::uint32_t>(d_in),
                              static_cast<std::uint32_t>(d_out)});
  }
  profile.check();
  return profile;
}

DegreeProfile DegreeProfile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open profile " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

DegreeSequence::DegreeSequence(std::vector<std::uint32_t> d_minus,
                               std::vector<std::uint32_t> d_plus)
    : d_minus_(std::move(d_minus)), d_plus_(std::move(d_plus)) {
  if (d_minus_.size() != d_plus_.size())
    throw std::invalid_argument("in- and out-degree sequences differ in length");
  if (std::find(d_plus_.begin(), d_plus_.end(), 0u) != d_plus_.end())
    throw std::invalid_argument("out-degrees must be positive");
  sum_minus_ = std::accumulate(d_minus_.begin(), d_minus_.end(), std::uint64_t{0});
  sum_plus_ = std::accumulate(d_plus_.begin(), d_plus_.end(), std::uint64_t{0});
}

DegreeSequence build_sequence(const DegreeProfile& profile) {
  profile.check();
  const auto n = profile.total_vertices();
  std::vector<std::uint32_t> d_minus;
  std::vector<std::uint32_t> d_plus;
  d_minus.reserve(n);
  d_plus.reserve(n);
  for (const auto& b : profile.blocks) {
    d_minus.insert(d_minus.end(), b.count, b.d_in);
    d_plus.insert(d_plus.end(), b.count, b.d_out);
  }
  return DegreeSequence(std::move(d_minus), std::move(d_plus));
}

namespace {

double moment(const DegreeSequence& seq, double delta) {
  long double sum = 0.0L;
  for (auto d : seq.d_minus()) sum += std::pow(static_cast<long double>(d), 2.0L + delta);
  return static_cast<double>(sum / static_cast<long double>(seq.n()));
}

}  // namespace

ValidationReport validate(const DegreeSequence& seq, ValidationMode mode,
                          const WarningLimits& limits) {
  ValidationReport report;
  auto violate = [&](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  if (seq.n() == 0) violate("empty sequence");
  if (seq.in_degree_sum() != seq.out_degree_sum())
    violate("degree sums differ: sum d_in = " + std::to_string(seq.in_degree_sum()) +
            ", sum d_out = " + std::to_string(seq.out_degree_sum()));

  if (mode == ValidationMode::TheoryValid && seq.n() > 0) {
    const auto& d_plus = seq.d_plus();
    const auto [lo, hi] = std::minmax_element(d_plus.begin(), d_plus.end());
    if (*lo < 2)
      violate("min out-degree < 2 (vertex " + std::to_string(lo - d_plus.begin()) +
              " has out-degree " + std::to_string(*lo) + ")");
    if (*hi > limits.max_out_degree)
      report.warnings.push_back("large max out-degree: " + std::to_string(*hi));
    const double mom = moment(seq, limits.delta);
    if (mom > limits.max_moment) {
      std::ostringstream msg;
      msg << "large (2+" << limits.delta << ")-moment of in-degrees: " << mom;
      report.warnings.push_back(msg.str());
    }
  }
  return report;
}

SequenceStats compute_stats(const DegreeSequence& seq, double delta) {
  if (seq.n() == 0) throw std::invalid_argument("compute_stats: empty sequence");
  if (seq.in_degree_sum() != seq.out_degree_sum())
    throw std::invalid_argument("compute_stats: degree sums differ");
  if (seq.m() == 0) throw std::invalid_argument("compute_stats: no edges");

  // out-degree -> (vertex count, in-degree total); integer sums are exact.
  std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> classes;
  for (std::size_t x = 0; x < seq.n(); ++x) {
    auto& c = classes[seq.d_plus()[x]];
    c.first += 1;
    c.second += seq.d_minus()[x];
  }

  long double rho = 0.0L;
  long double lambda = 0.0L;
  for (const auto& [k, c] : classes) {
    rho += static_cast<long double>(c.second) / k;
    lambda += static_cast<long double>(c.first) / k;
  }

  SequenceStats stats;
  stats.rho = static_cast<double>(rho / static_cast<long double>(seq.m()));
  stats.lambda = static_cast<double>(lambda / static_cast<long double>(seq.n()));
  stats.delta_max = classes.rbegin()->first;
  stats.moment_2_plus_delta = moment(seq, delta);
  return stats;
}

}  // namespace cobranet
