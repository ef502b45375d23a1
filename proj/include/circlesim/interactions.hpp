#ifndef CIRCLESIM_INTERACTIONS_HPP
#define CIRCLESIM_INTERACTIONS_HPP

#include <map>
#include <optional>
#include <variant>

#include "circlesim/composite.hpp"

namespace circlesim {

enum class WrapPolicy { kWarn, kError };

// Collects modular wrap-around events during interaction application. The
// declared supports are supposed to keep every shift inside the canonical
// window; a wrap is a lattice artifact worth surfacing.
struct WrapGuard {
  WrapGuard() = default;
  explicit WrapGuard(WrapPolicy policy) : policy(policy) {}

  WrapPolicy policy = WrapPolicy::kWarn;
  int events = 0;

  void record(const std::string& what);

 private:
  bool announced_ = false;
};

// Momentum-conserving preparation: each |l>_source |0>_target component goes
// to sum_m psi(m) |l-m>_source |m>_target.
struct ShiftPrepare {
  SubsystemLabel source;
  SubsystemLabel target;
  ModeWavefunction profile;
};

// Pointer readout: |m>_source |q=0>_meter -> |m>_source |q=m>_meter. The
// pointer coordinate carries no angular momentum.
struct PointerCouple {
  SubsystemLabel source;
  SubsystemLabel meter;
};

// Exchange of two equal-size lattice states.
struct SwapStates {
  SubsystemLabel a;
  SubsystemLabel b;
};

using InteractionKind = std::variant<ShiftPrepare, PointerCouple, SwapStates>;

CompositeState shift_prepare(const CompositeState& state,
                             SubsystemLabel source, SubsystemLabel target,
                             const ModeWavefunction& profile,
                             WrapGuard* wrap = nullptr);

CompositeState pointer_couple(const CompositeState& state,
                              SubsystemLabel source, SubsystemLabel meter);

CompositeState swap_states(const CompositeState& state, SubsystemLabel a,
                           SubsystemLabel b);

CompositeState apply_interaction(const CompositeState& state,
                                 const InteractionKind& kind,
                                 WrapGuard* wrap = nullptr);

// One tensor factor of an interaction's full matrix, slowest index first.
struct Factor {
  SubsystemLabel label;
  int dim;
  bool carries_L;
};

struct InteractionMatrix {
  std::vector<Factor> factors;
  Eigen::MatrixXcd matrix;

  long side() const { return matrix.rows(); }
  BasisTuple tuple_of(long index) const;
  long index_of(const BasisTuple& tuple) const;
};

// Full matrix of the interaction on its two-factor space. ShiftPrepare is
// extended off the |0>-target fiber block-diagonally in total L, completing
// the profile column to a unitary within each block; PointerCouple and
// SwapStates are permutations. Throws when the space side exceeds
// `enumeration_cap`.
InteractionMatrix build_unitary(const InteractionKind& kind,
                                const std::map<SubsystemLabel, int>& dims,
                                long enumeration_cap = 10000);

struct UnitarityCheck {
  bool ok;
  double max_deviation;
};

// Columns orthonormal within 1e-10 (max |U^dag U - I| entry).
UnitarityCheck verify_unitary(const Eigen::MatrixXcd& matrix);
UnitarityCheck verify_unitary(const InteractionKind& kind,
                              const std::map<SubsystemLabel, int>& dims,
                              long enumeration_cap = 10000);

struct ConservationCheck {
  bool ok;
  std::optional<BasisTuple> witness;  // first violating basis input
  double max_leak = 0.0;              // largest off-total matrix entry
};

// Every basis input with total L = T must map onto the total-L = T subspace
// (meter factors contribute zero).
ConservationCheck verify_conserves_total_L(const InteractionMatrix& im);
ConservationCheck verify_conserves_total_L(
    const InteractionKind& kind, const std::map<SubsystemLabel, int>& dims,
    long enumeration_cap = 10000);

}  // namespace circlesim

#endif
