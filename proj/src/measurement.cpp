#include "circlesim/measurement.hpp"

#include <cmath>
#include <random>

namespace circlesim {

std::vector<OutcomeRecord> outcome_table(const CompositeState& state,
                                         SubsystemLabel label) {
  size_t idx = state.index_of(label);
  std::map<int, double> probs;
  for (const auto& [tuple, a] : state.amps())
    probs[tuple[idx]] += std::norm(a);

  std::vector<OutcomeRecord> records;
  for (const auto& [value, p] : probs) {
    if (p <= kProbFloor) continue;
    double scale = 1.0 / std::sqrt(p);
    std::map<BasisTuple, Complex> collapsed;
    for (const auto& [tuple, a] : state.amps())
      if (tuple[idx] == value) collapsed.emplace(tuple, a * scale);
    records.push_back(
        OutcomeRecord{label, value, p, state.with_amps(std::move(collapsed))});
  }
  return records;
}

OutcomeRecord postselect(const CompositeState& state, SubsystemLabel label,
                         int value) {
  for (auto& record : outcome_table(state, label))
    if (record.value == value) return record;
  throw std::invalid_argument("postselect: outcome " + std::to_string(value) +
                              " of " + to_string(label) +
                              " has zero probability");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(seed + (trial + 1) * 0x9E3779B97F4A7C15ull);
}

double uniform_unit(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return (rng() >> 11) * 0x1.0p-53;
}

OutcomeRecord sample_outcome(const CompositeState& state, SubsystemLabel label,
                             std::uint64_t rng_seed) {
  auto records = outcome_table(state, label);
  if (records.empty())
    throw std::invalid_argument("sample_outcome: no outcome has support");
  double u = uniform_unit(rng_seed);
  double cumulative = 0.0;
  for (const auto& record : records) {
    cumulative += record.probability;
    if (u < cumulative) return record;
  }
  return records.back();
}

}  // namespace circlesim
