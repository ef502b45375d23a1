#ifndef CIRCLESIM_CONSERVATION_HPP
#define CIRCLESIM_CONSERVATION_HPP

#include "circlesim/interactions.hpp"
#include "circlesim/measurement.hpp"

namespace circlesim {

// Per-outcome conservation record: the total-L distribution over the scope
// before the chain, and the conditional distribution for each measurement
// outcome with its deviation from the baseline.
struct ConservationLedger {
  std::set<SubsystemLabel> scope;
  std::map<int, double> baseline;

  struct Outcome {
    int value;
    double probability;
    std::map<int, double> post_total_L;
    double max_deviation;
  };
  std::vector<Outcome> per_outcome;

  double max_deviation() const;
  // Probability-weighted mixture of the per-outcome distributions compared
  // against the baseline (the merely-statistical conservation statement).
  double statistical_deviation() const;
};

ConservationLedger build_ledger(const CompositeState& initial,
                                const std::vector<InteractionKind>& chain,
                                SubsystemLabel measure,
                                const std::set<SubsystemLabel>& scope,
                                WrapGuard* wrap = nullptr);

// Angular-momentum bookkeeping of the grand-preparer -> preparer -> system
// chain: marginals right after the preparer is prepared, and after the
// system is measured and found to be l0.
struct ChainReport {
  LatticeDistribution preparer_at_prep;
  LatticeDistribution preparer_post_measure;
  LatticeDistribution grandpreparer_at_prep;
  LatticeDistribution grandpreparer_post_measure;
  int measured_value;
};

ChainReport chain_report(const ModeWavefunction& grand_profile,
                         const ModeWavefunction& preparer_profile,
                         const ModeWavefunction& system_profile, int l0,
                         WrapGuard* wrap = nullptr);

// The same four distributions from their closed forms |phi_p(l)|^2,
// |phi_p(l+l0)|^2 and sum_l |phi_g(k+l)|^2 |phi_p(l)|^2, independent of the
// simulator path.
ChainReport table1_oracle(const ModeWavefunction& grand_profile,
                          const ModeWavefunction& preparer_profile, int l0);

// Conditional mean angular momentum of `frame` for each value of `sys` with
// nonzero probability.
std::map<int, double> branch_mean_offsets(const CompositeState& state,
                                          SubsystemLabel sys,
                                          SubsystemLabel frame);

inline double offset_difference(const std::map<int, double>& offsets, int m1,
                                int m2) {
  return offsets.at(m2) - offsets.at(m1);
}

struct MeterCheck {
  bool ok;
  double max_deviation;
};

// Verifies that between `before` and `after` (same label sets) the meter's
// declared angular momentum — identically zero — is unchanged, and that the
// total-L distribution over the circle-carrying labels is unchanged, i.e.
// the meter neither supplied nor received angular momentum.
MeterCheck meter_untouched_check(const CompositeState& before,
                                 const CompositeState& after,
                                 SubsystemLabel meter);

}  // namespace circlesim

#endif
