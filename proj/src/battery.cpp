#include "rngaudit/battery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <boost/math/special_functions/gamma.hpp>

#include "rngaudit/error.hpp"

namespace rngaudit {

using nlohmann::json;

namespace {

// Cell index floor(x * cells), kept below `cells` against rounding at x -> 1.
std::uint64_t cell_of(double x, std::uint64_t cells) {
  const auto c = static_cast<std::uint64_t>(x * static_cast<double>(cells));
  return std::min(c, cells - 1);
}

std::size_t tuple_count(std::size_t n, std::size_t width, TupleMode mode) {
  if (n < width) return 0;
  return mode == TupleMode::kDisjoint ? n / width : n - width + 1;
}

std::size_t tuple_start(std::size_t index, std::size_t width, TupleMode mode) {
  return mode == TupleMode::kDisjoint ? index * width : index;
}

// Catches a failing test and turns it into an error entry.
TestResult guarded(const std::string& name, double alpha,
                   const std::function<TestResult()>& run) {
  try {
    TestResult r = run();
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    return error_result(name, alpha, e.what());
  }
}

}  // namespace

std::string_view tuple_mode_name(TupleMode mode) {
  return mode == TupleMode::kDisjoint ? "disjoint" : "overlapping";
}

std::vector<std::string> expand_test_names(std::span<const std::string> names) {
  std::vector<std::string> out;
  for (const auto& name : names) {
    if (name == "uniformity") {
      out.insert(out.end(), std::begin(kUniformityTests), std::end(kUniformityTests));
      continue;
    }
    if (std::find(std::begin(kAllBatteryTests), std::end(kAllBatteryTests), name) ==
        std::end(kAllBatteryTests)) {
      throw UsageError("unknown test '" + name + "'");
    }
    out.push_back(name);
  }
  return out;
}

TestResult chi_square_uniform(std::span<const double> sample, int bins, double alpha) {
  if (bins < 2) throw UsageError("uniformity chi-square needs at least 2 bins");
  if (sample.empty()) throw UsageError("uniformity chi-square: empty sample");
  const auto cells = static_cast<std::uint64_t>(bins);
  BinnedCounts binned;
  binned.counts.assign(cells, 0);
  for (double x : sample) ++binned.counts[cell_of(x, cells)];
  binned.expected.assign(cells, static_cast<double>(sample.size()) / bins);
  binned.degrees_of_freedom = bins - 1;
  return chi_square_gof(binned, "chi_square_uniform", alpha);
}

std::vector<TestResult> global_uniformity(std::span<const double> sample, double alpha,
                                          int levene_groups, int bins) {
  if (sample.size() < kMinUniformitySample) {
    throw UsageError("global uniformity needs at least " + std::to_string(kMinUniformitySample) +
                     " values, got " + std::to_string(sample.size()));
  }
  return {
      guarded("t_test_mean", alpha, [&] { return t_test_mean(sample, 0.5, alpha); }),
      guarded("variance", alpha, [&] { return variance_test(sample, 1.0 / 12.0, alpha); }),
      guarded("levene", alpha, [&] { return levene_test(sample, levene_groups, alpha); }),
      guarded("ks_uniform", alpha, [&] { return ks_test_uniform(sample, alpha); }),
      guarded("chi_square_uniform", alpha, [&] { return chi_square_uniform(sample, bins, alpha); }),
      guarded("anderson_darling_uniform", alpha,
              [&] { return anderson_darling_uniform(sample, alpha); }),
  };
}

std::vector<int> rank_vector(std::span<const double> tuple, bool* has_tie) {
  const std::size_t k = tuple.size();
  std::vector<int> ranks(k);
  bool tie = false;
  for (std::size_t i = 0; i < k; ++i) {
    int below = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (tuple[j] < tuple[i] || (tuple[j] == tuple[i] && j < i)) ++below;
      if (j != i && tuple[j] == tuple[i]) tie = true;
    }
    ranks[i] = below + 1;
  }
  if (has_tie != nullptr) *has_tie = tie;
  return ranks;
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t ordering_index(std::span<const int> ranks) {
  const int k = static_cast<int>(ranks.size());
  std::vector<bool> seen(ranks.size() + 1, false);
  for (int r : ranks) {
    if (r < 1 || r > k || seen[static_cast<std::size_t>(r)]) {
      throw UsageError("not a rank vector: expected a permutation of 1..k");
    }
    seen[static_cast<std::size_t>(r)] = true;
  }
  std::uint64_t index = 0;
  for (int i = 0; i < k; ++i) {
    std::uint64_t smaller_after = 0;
    for (int j = i + 1; j < k; ++j) {
      if (ranks[static_cast<std::size_t>(j)] < ranks[static_cast<std::size_t>(i)]) ++smaller_after;
    }
    index += smaller_after * factorial(k - 1 - i);
  }
  return index;
}

std::vector<int> ordering_from_index(std::uint64_t index, int k) {
  if (k < 1 || k > 20) throw UsageError("ordering length out of range");
  if (index >= factorial(k)) throw UsageError("ordering index out of range");
  std::vector<int> pool(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  std::vector<int> ranks;
  ranks.reserve(pool.size());
  for (int i = 0; i < k; ++i) {
    const std::uint64_t f = factorial(k - 1 - i);
    const auto digit = static_cast<std::size_t>(index / f);
    index %= f;
    ranks.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return ranks;
}

TestResult permutation_test(std::span<const double> sample, int k, TupleMode mode,
                            double alpha) {
  if (k < 2 || k > 8) throw UsageError("permutation test: k must satisfy 2 <= k <= 8");
  const std::uint64_t orderings = factorial(k);
  const auto width = static_cast<std::size_t>(k);
  const std::size_t tuples = tuple_count(sample.size(), width, mode);
  if (tuples < 5 * orderings) {
    throw UsageError("permutation test: " + std::to_string(tuples) + " tuples give fewer than 5 per ordering for k=" +
                     std::to_string(k) + " (need " + std::to_string(5 * orderings) + ")");
  }

  BinnedCounts binned;
  binned.counts.assign(orderings, 0);
  std::uint64_t ties = 0;
  for (std::size_t t = 0; t < tuples; ++t) {
    bool tie = false;
    const auto ranks = rank_vector(sample.subspan(tuple_start(t, width, mode), width), &tie);
    if (tie) ++ties;
    ++binned.counts[ordering_index(ranks)];
  }
  binned.expected.assign(orderings, static_cast<double>(tuples) / static_cast<double>(orderings));
  binned.degrees_of_freedom = static_cast<int>(orderings - 1);

  TestResult r = chi_square_gof(binned, "permutation", alpha);
  r.detail["k"] = k;
  r.detail["tuples"] = tuples;
  r.detail["tuple_mode"] = tuple_mode_name(mode);
  r.detail["ties"] = ties;
  json warnings = r.detail.value("warnings", json::array());
  if (static_cast<double>(ties) > 1e-4 * static_cast<double>(tuples)) {
    warnings.push_back("ties in more than 0.01% of tuples; ranks resolved by position");
  }
  if (mode == TupleMode::kOverlapping) {
    warnings.push_back("overlapping tuples are dependent; chi-square p-value is approximate");
  }
  if (!warnings.empty()) r.detail["warnings"] = warnings;
  return r;
}

std::uint64_t serial_cell(std::span<const double> tuple, int d) {
  const auto cells = static_cast<std::uint64_t>(d);
  std::uint64_t index = 0;
  std::uint64_t scale = 1;
  for (double x : tuple) {
    index += cell_of(x, cells) * scale;
    scale *= cells;
  }
  return index;
}

TestResult serial_test(std::span<const double> sample, int d, int l, TupleMode mode,
                       double alpha) {
  if (d < 2) throw UsageError("serial test: d must be at least 2");
  if (l < 1) throw UsageError("serial test: l must be at least 1");
  constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 28;
  std::uint64_t cells = 1;
  for (int i = 0; i < l; ++i) {
    cells *= static_cast<std::uint64_t>(d);
    if (cells > kMaxCells) throw UsageError("serial test: d^l exceeds 2^28 cells");
  }
  const auto width = static_cast<std::size_t>(l);
  const std::size_t tuples = tuple_count(sample.size(), width, mode);
  if (tuples < 5 * cells) {
    // Largest d with d^l <= tuples / 5.
    std::uint64_t max_d = 1;
    const std::uint64_t limit = tuples / 5;
    while (true) {
      std::uint64_t p = 1;
      bool over = false;
      for (int i = 0; i < l && !over; ++i) {
        p *= (max_d + 1);
        over = p > limit;
      }
      if (over) break;
      ++max_d;
    }
    throw UsageError("serial test: " + std::to_string(tuples) + " tuples over " +
                     std::to_string(cells) + " cells leave fewer than 5 per cell; largest admissible d for l=" +
                     std::to_string(l) + " is " + std::to_string(max_d));
  }

  BinnedCounts binned;
  binned.counts.assign(cells, 0);
  for (std::size_t t = 0; t < tuples; ++t) {
    ++binned.counts[serial_cell(sample.subspan(tuple_start(t, width, mode), width), d)];
  }
  const double lambda = static_cast<double>(tuples) / static_cast<double>(cells);
  binned.expected.assign(cells, lambda);
  binned.degrees_of_freedom = static_cast<int>(cells - 1);

  TestResult r = chi_square_gof(binned, "serial", alpha);
  r.detail["d"] = d;
  r.detail["l"] = l;
  r.detail["tuples"] = tuples;
  r.detail["lambda"] = lambda;
  r.detail["tuple_mode"] = tuple_mode_name(mode);
  if (mode == TupleMode::kOverlapping) {
    json warnings = r.detail.value("warnings", json::array());
    warnings.push_back("overlapping tuples are dependent; chi-square p-value is approximate");
    r.detail["warnings"] = warnings;
  }
  return r;
}

BirthdayCollisions birthday_collisions(std::span<const double> block, std::uint64_t k) {
  if (k < 1) throw UsageError("birthday test: k must be positive");
  BirthdayCollisions out;
  if (block.empty()) return out;
  std::vector<std::uint64_t> cells(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) cells[i] = cell_of(block[i], k);
  std::sort(cells.begin(), cells.end());
  std::uint64_t distinct_cells = 1;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i] != cells[i - 1]) ++distinct_cells;
  }
  out.cell_collisions = cells.size() - distinct_cells;

  if (cells.size() < 2) return out;
  std::vector<std::uint64_t> spacings(cells.size() - 1);
  for (std::size_t j = 0; j + 1 < cells.size(); ++j) spacings[j] = cells[j + 1] - cells[j];
  std::sort(spacings.begin(), spacings.end());
  const auto distinct = static_cast<std::uint64_t>(
      std::unique(spacings.begin(), spacings.end()) - spacings.begin());
  out.spacing_collisions = (cells.size() - 1) - distinct;
  return out;
}

double birthday_lambda(std::size_t n, std::uint64_t k) {
  const auto nd = static_cast<double>(n);
  return nd * nd * nd / (4.0 * static_cast<double>(k));
}

TestResult birthday_spacings_test(std::span<const double> sample, std::size_t n,
                                  std::uint64_t k, double alpha) {
  if (n < 2) throw UsageError("birthday test: n must be at least 2");
  if (k < 2) throw UsageError("birthday test: k must be at least 2");
  if (sample.size() < 2 * n) throw UsageError("birthday test: need N >= 2n values");
  const std::size_t blocks = sample.size() / n;
  if (blocks < 20) {
    throw UsageError("birthday test: " + std::to_string(blocks) +
                     " blocks are too few for a histogram (need 20)");
  }
  const double lambda = birthday_lambda(n, k);

  std::map<std::uint64_t, std::uint64_t> histogram;
  std::uint64_t y_total = 0;
  std::uint64_t cell_total = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto c = birthday_collisions(sample.subspan(b * n, n), k);
    ++histogram[c.spacing_collisions];
    y_total += c.spacing_collisions;
    cell_total += c.cell_collisions;
  }

  // Singleton bins 0..top-1 plus an open tail [top, inf); then greedy
  // left-to-right grouping until each group expects at least 5 blocks.
  const std::uint64_t observed_max = histogram.rbegin()->first;
  const auto top = std::max<std::uint64_t>(
      observed_max + 1, static_cast<std::uint64_t>(std::ceil(lambda + 10.0 * std::sqrt(lambda) + 10.0)));
  struct Group {
    std::uint64_t lo;
    double expected;
    std::uint64_t observed;
  };
  const auto total_blocks = static_cast<double>(blocks);
  std::vector<Group> groups;
  Group open{0, 0.0, 0};
  for (std::uint64_t y = 0; y <= top; ++y) {
    const double p = y < top ? poisson_pmf(y, lambda)
                             : boost::math::gamma_p(static_cast<double>(top), lambda);
    std::uint64_t obs = 0;
    if (y < top) {
      const auto it = histogram.find(y);
      if (it != histogram.end()) obs = it->second;
    } else {
      for (auto it = histogram.lower_bound(top); it != histogram.end(); ++it) obs += it->second;
    }
    open.expected += p * total_blocks;
    open.observed += obs;
    if (open.expected >= 5.0) {
      groups.push_back(open);
      open = Group{y + 1, 0.0, 0};
    }
  }
  if (open.expected > 0.0 || open.observed > 0) {
    if (groups.empty()) {
      groups.push_back(open);
    } else {
      groups.back().expected += open.expected;
      groups.back().observed += open.observed;
    }
  }
  if (groups.size() < 2) {
    throw UsageError("birthday test: too few blocks to form at least two bins with expected count >= 5");
  }

  BinnedCounts binned;
  json bin_edges = json::array();
  for (const auto& g : groups) {
    binned.counts.push_back(g.observed);
    binned.expected.push_back(g.expected);
    bin_edges.push_back(g.lo);
  }
  binned.degrees_of_freedom = static_cast<int>(groups.size() - 1);

  TestResult r = chi_square_gof(binned, "birthday_spacings", alpha);
  json hist = json::object();
  for (const auto& [y, count] : histogram) hist[std::to_string(y)] = count;
  r.detail["n"] = n;
  r.detail["k"] = k;
  r.detail["blocks"] = blocks;
  r.detail["lambda"] = lambda;
  r.detail["mean_spacing_collisions"] = static_cast<double>(y_total) / total_blocks;
  r.detail["mean_cell_collisions"] = static_cast<double>(cell_total) / total_blocks;
  r.detail["histogram"] = hist;
  r.detail["bin_lower_edges"] = bin_edges;
  json warnings = r.detail.value("warnings", json::array());
  if (lambda < 0.5 || lambda > 20.0) warnings.push_back("Poisson mean outside [0.5, 20]");
  if ((k & (k - 1)) != 0) warnings.push_back("k is not a power of two");
  if (!warnings.empty()) r.detail["warnings"] = warnings;
  return r;
}

BatteryReport run_battery(const Sample& sample, const BatteryConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw UsageError("alpha must lie strictly between 0 and 1");
  }
  const auto names = expand_test_names(config.tests);
  const double alpha =
      config.bonferroni && !names.empty() ? config.alpha / static_cast<double>(names.size())
                                          : config.alpha;
  const auto x = sample.values();

  BatteryReport report;
  report.provenance = sample.provenance();
  report.config = config;
  for (const auto& name : names) {
    TestResult r = guarded(name, alpha, [&]() -> TestResult {
      const bool uniformity = std::find(std::begin(kUniformityTests), std::end(kUniformityTests),
                                        name) != std::end(kUniformityTests);
      if (uniformity && x.size() < kMinUniformitySample) {
        throw UsageError("global uniformity needs at least " +
                         std::to_string(kMinUniformitySample) + " values");
      }
      if (name == "t_test_mean") return t_test_mean(x, 0.5, alpha);
      if (name == "variance") return variance_test(x, 1.0 / 12.0, alpha);
      if (name == "levene") return levene_test(x, config.levene_groups, alpha);
      if (name == "ks_uniform") return ks_test_uniform(x, alpha);
      if (name == "chi_square_uniform") return chi_square_uniform(x, config.uniformity_bins, alpha);
      if (name == "anderson_darling_uniform") return anderson_darling_uniform(x, alpha);
      if (name == "permutation") return permutation_test(x, config.permutation_k, config.tuple_mode, alpha);
      if (name == "serial") return serial_test(x, config.serial_d, config.serial_l, config.tuple_mode, alpha);
      return birthday_spacings_test(x, config.birthday_n, config.birthday_k, alpha);
    });
    if (r.verdict == Verdict::kReject) ++report.rejections;
    if (r.verdict == Verdict::kError) ++report.errors;
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace rngaudit
