#ifndef CIRCLESIM_MEASUREMENT_HPP
#define CIRCLESIM_MEASUREMENT_HPP

#include <cstdint>

#include "circlesim/composite.hpp"

namespace circlesim {

// One projective outcome: the measured coordinate value, its Born
// probability, and the renormalized collapsed state.
struct OutcomeRecord {
  SubsystemLabel label;
  int value;
  double probability;
  CompositeState post_state;
};

// All outcomes with probability above kProbFloor, sorted by value. The
// post states are the renormalized projections onto the measured value.
std::vector<OutcomeRecord> outcome_table(const CompositeState& state,
                                         SubsystemLabel label);

// Finds the record for a specific value; throws when its probability is zero.
OutcomeRecord postselect(const CompositeState& state, SubsystemLabel label,
                         int value);

// SplitMix64 finalizer; also the documented per-trial seed derivation:
// trial_seed(seed, t) = splitmix64(seed + (t+1) * 0x9E3779B97F4A7C15).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

// Uniform double in [0, 1) from the top 53 bits of an mt19937_64 draw,
// identical on every conforming platform.
double uniform_unit(std::uint64_t seed);

// Born-rule draw from outcome_table, deterministic for a given seed.
OutcomeRecord sample_outcome(const CompositeState& state, SubsystemLabel label,
                             std::uint64_t rng_seed);

}  // namespace circlesim

#endif
