#include "rngaudit/generators.hpp"

#include <cmath>
#include <string>

#include "rngaudit/error.hpp"

namespace rngaudit {

void LcgParams::validate() const {
  if (modulus < 2 || modulus > kMaxLcgModulus) {
    throw UsageError("LCG modulus must satisfy 2 <= m <= 2^64, got m=" + to_string(modulus));
  }
  if (multiplier == 0 || multiplier >= modulus) {
    throw UsageError("LCG multiplier must satisfy 0 < a < m, got a=" + to_string(multiplier) +
                     ", m=" + to_string(modulus));
  }
  if (increment >= modulus) {
    throw UsageError("LCG increment must satisfy 0 <= c < m, got c=" + to_string(increment));
  }
  if (seed >= modulus) {
    throw UsageError("LCG seed must satisfy 0 <= Y0 < m, got Y0=" + to_string(seed));
  }
}

double lcg_uniform(uint128 state, uint128 modulus) {
  const double u = static_cast<double>(state) / static_cast<double>(modulus);
  return u < 1.0 ? u : std::nextafter(1.0, 0.0);
}

LcgStep lcg_next(uint128 state, const LcgParams& params) {
  const uint128 next = (params.multiplier * state + params.increment) % params.modulus;
  return {next, lcg_uniform(next, params.modulus)};
}

Lcg::Lcg(const LcgParams& params) : params_(params), state_(params.seed) {
  params_.validate();
}

double Lcg::next() {
  const LcgStep step = lcg_next(state_, params_);
  state_ = step.state;
  return step.uniform;
}

namespace {

double advance_combined(std::span<std::uint64_t> states,
                        std::span<const CombinedComponent> table) {
  double sum = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& comp = table[i];
    states[i] = static_cast<std::uint64_t>(
        (static_cast<uint128>(comp.multiplier) * states[i] + comp.increment) % comp.modulus);
    sum += static_cast<double>(states[i]) / static_cast<double>(comp.modulus);
  }
  // sum - floor(sum) is exact here, so the result is already below 1.
  return sum - std::floor(sum);
}

}  // namespace

CombinedStep combined_lcg_next(std::span<const std::uint64_t> states,
                               std::span<const CombinedComponent> table) {
  if (states.size() != table.size()) {
    throw UsageError("combined generator: state count does not match component table");
  }
  CombinedStep step{std::vector<std::uint64_t>(states.begin(), states.end()), 0.0};
  step.uniform = advance_combined(step.states, table);
  return step;
}

CombinedLcg::CombinedLcg(std::vector<std::uint64_t> seeds,
                         std::span<const CombinedComponent> table)
    : table_(table.begin(), table.end()), states_(std::move(seeds)) {
  if (table_.empty()) throw UsageError("combined generator needs at least one component");
  if (states_.size() != table_.size()) {
    throw UsageError("combined generator expects " + std::to_string(table_.size()) + " seeds");
  }
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (table_[i].modulus < 2) throw UsageError("combined generator component modulus < 2");
    if (states_[i] >= table_[i].modulus) {
      throw UsageError("combined generator seed" + std::to_string(i + 1) + "=" +
                       std::to_string(states_[i]) + " must be below modulus " +
                       std::to_string(table_[i].modulus));
    }
    if (table_[i].increment == 0 && states_[i] == 0) {
      throw UsageError("combined generator seed" + std::to_string(i + 1) +
                       " must be nonzero for a multiplicative component");
    }
  }
}

double CombinedLcg::next() {
  return advance_combined(states_, table_);
}

GeneratorFamily Generator::family() const {
  switch (impl_.index()) {
    case 0:
      return GeneratorFamily::kLcg;
    case 1:
      return GeneratorFamily::kCombinedLcg;
    default:
      return GeneratorFamily::kReference;
  }
}

double Generator::next() {
  return std::visit([](auto& g) { return g.next(); }, impl_);
}

void Generator::fill(std::span<double> out) {
  std::visit(
      [out](auto& g) {
        for (double& v : out) v = g.next();
      },
      impl_);
}

}  // namespace rngaudit
