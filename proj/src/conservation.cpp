#include "circlesim/conservation.hpp"

#include <cmath>

namespace circlesim {

double ConservationLedger::max_deviation() const {
  double d = 0.0;
  for (const auto& o : per_outcome) d = std::max(d, o.max_deviation);
  return d;
}

double ConservationLedger::statistical_deviation() const {
  std::map<int, double> mixture;
  for (const auto& o : per_outcome)
    for (const auto& [total, p] : o.post_total_L)
      mixture[total] += o.probability * p;
  return max_abs_difference(mixture, baseline);
}

ConservationLedger build_ledger(const CompositeState& initial,
                                const std::vector<InteractionKind>& chain,
                                SubsystemLabel measure,
                                const std::set<SubsystemLabel>& scope,
                                WrapGuard* wrap) {
  ConservationLedger ledger;
  ledger.scope = scope;
  ledger.baseline = total_L_distribution(initial, scope);
  CompositeState state = initial;
  for (const auto& kind : chain) state = apply_interaction(state, kind, wrap);
  for (const auto& record : outcome_table(state, measure)) {
    auto post = total_L_distribution(record.post_state, scope);
    double dev = max_abs_difference(post, ledger.baseline);
    ledger.per_outcome.push_back({record.value, record.probability,
                                  std::move(post), dev});
  }
  return ledger;
}

ChainReport chain_report(const ModeWavefunction& grand_profile,
                         const ModeWavefunction& preparer_profile,
                         const ModeWavefunction& system_profile, int l0,
                         WrapGuard* wrap) {
  int dim = grand_profile.dim();
  if (preparer_profile.dim() != dim || system_profile.dim() != dim)
    throw std::invalid_argument("chain_report: lattice sizes must match");

  CompositeState state =
      tensor({{SubsystemLabel::GrandPreparer, grand_profile.normalized()},
              {SubsystemLabel::Preparer, basis_state(dim, 0)},
              {SubsystemLabel::System, basis_state(dim, 0)}});
  state = shift_prepare(state, SubsystemLabel::GrandPreparer,
                        SubsystemLabel::Preparer, preparer_profile, wrap);

  ChainReport report;
  report.measured_value = l0;
  report.preparer_at_prep =
      marginal_distribution(state, SubsystemLabel::Preparer);
  report.grandpreparer_at_prep =
      marginal_distribution(state, SubsystemLabel::GrandPreparer);

  state = shift_prepare(state, SubsystemLabel::Preparer,
                        SubsystemLabel::System, system_profile, wrap);
  OutcomeRecord record = postselect(state, SubsystemLabel::System, l0);

  report.preparer_post_measure =
      marginal_distribution(record.post_state, SubsystemLabel::Preparer);
  report.grandpreparer_post_measure =
      marginal_distribution(record.post_state, SubsystemLabel::GrandPreparer);
  return report;
}

ChainReport table1_oracle(const ModeWavefunction& grand_profile,
                          const ModeWavefunction& preparer_profile, int l0) {
  int dim = grand_profile.dim();
  if (preparer_profile.dim() != dim)
    throw std::invalid_argument("table1_oracle: lattice sizes must match");
  ModeWavefunction phi_g = grand_profile.normalized();
  ModeWavefunction phi_p = preparer_profile.normalized();

  ChainReport report;
  report.measured_value = l0;
  auto fresh = [dim] {
    return LatticeDistribution{dim, std::vector<double>(dim, 0.0)};
  };
  report.preparer_at_prep = fresh();
  report.preparer_post_measure = fresh();
  report.grandpreparer_at_prep = fresh();
  report.grandpreparer_post_measure = fresh();

  for (int l = window_lo(dim); l <= window_hi(dim); ++l) {
    report.preparer_at_prep.probs[window_index(l, dim)] =
        std::norm(phi_p.amp(l));
    report.preparer_post_measure.probs[window_index(l, dim)] =
        std::norm(phi_p.amp(l + l0));
  }
  for (int k = window_lo(dim); k <= window_hi(dim); ++k) {
    double p = 0.0;
    for (int l = window_lo(dim); l <= window_hi(dim); ++l)
      p += std::norm(phi_g.amp(k + l)) * std::norm(phi_p.amp(l));
    report.grandpreparer_at_prep.probs[window_index(k, dim)] = p;
    report.grandpreparer_post_measure.probs[window_index(k, dim)] = p;
  }
  return report;
}

std::map<int, double> branch_mean_offsets(const CompositeState& state,
                                          SubsystemLabel sys,
                                          SubsystemLabel frame) {
  size_t is = state.index_of(sys);
  size_t iframe = state.index_of(frame);
  std::map<int, double> mass;
  std::map<int, double> moment;
  for (const auto& [tuple, a] : state.amps()) {
    double p = std::norm(a);
    mass[tuple[is]] += p;
    moment[tuple[is]] += p * tuple[iframe];
  }
  std::map<int, double> means;
  for (const auto& [m, p] : mass)
    if (p > kProbFloor) means[m] = moment[m] / p;
  return means;
}

MeterCheck meter_untouched_check(const CompositeState& before,
                                 const CompositeState& after,
                                 SubsystemLabel meter) {
  before.index_of(meter);
  after.index_of(meter);

  // The meter's angular momentum is the zero distribution by declaration;
  // its mass must stay at L = 0 in both states.
  auto meter_L = total_L_distribution(before, {meter});
  auto meter_L_after = total_L_distribution(after, {meter});
  double dev = max_abs_difference(meter_L, meter_L_after);

  // The meter must not have sourced or absorbed angular momentum: the total
  // over the circle-carrying labels is unchanged.
  std::set<SubsystemLabel> circle;
  for (SubsystemLabel label : before.labels())
    if (carries_angular_momentum(label)) circle.insert(label);
  if (!circle.empty()) {
    auto total_before = total_L_distribution(before, circle);
    auto total_after = total_L_distribution(after, circle);
    dev = std::max(dev, max_abs_difference(total_before, total_after));
  }
  return {dev <= kAmpTol, dev};
}

}  // namespace circlesim
