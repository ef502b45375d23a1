#ifndef CIRCLESIM_COMPOSITE_HPP
#define CIRCLESIM_COMPOSITE_HPP

#include <Eigen/Dense>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "circlesim/wavefunction.hpp"

namespace circlesim {

// One basis configuration of a composite state: one canonical-window
// quantum number per subsystem, in label order.
using BasisTuple = std::vector<int>;

// Probabilities over the canonical window of one lattice. Entry i belongs to
// quantum number window_lo(dim) + i.
struct LatticeDistribution {
  int dim = 0;
  std::vector<double> probs;

  double at(int l) const { return probs[window_index(l, dim)]; }
  double sum() const;
  std::map<int, double> as_map(double floor = 0.0) const;
};

double max_abs_difference(const LatticeDistribution& a,
                          const LatticeDistribution& b);
double max_abs_difference(const std::map<int, double>& a,
                          const std::map<int, double>& b);

// Reduced state of one subsystem, indexed by momentum pairs (m, m') through
// the same window offsets as ModeWavefunction.
struct DensityOperator {
  SubsystemLabel label;
  int dim = 0;
  Eigen::MatrixXcd matrix;

  Complex at(int m, int m_prime) const {
    return matrix(window_index(m, dim), window_index(m_prime, dim));
  }
  double trace_real() const { return matrix.trace().real(); }
  double hermiticity_deviation() const;
};

// Normalized joint amplitudes over labeled subsystems, stored sparsely as
// tuple -> amplitude with zero entries omitted.
class CompositeState {
 public:
  CompositeState(std::vector<SubsystemLabel> labels, std::vector<int> dims,
                 std::map<BasisTuple, Complex> amps);

  const std::vector<SubsystemLabel>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::map<BasisTuple, Complex>& amps() const { return amps_; }

  bool has_label(SubsystemLabel label) const;
  size_t index_of(SubsystemLabel label) const;  // throws if absent
  int dim_of(SubsystemLabel label) const;

  double norm() const;
  CompositeState normalized() const;
  // Same labels/dims with a different amplitude map.
  CompositeState with_amps(std::map<BasisTuple, Complex> amps) const;

 private:
  std::vector<SubsystemLabel> labels_;
  std::vector<int> dims_;
  std::map<BasisTuple, Complex> amps_;
};

// Product state of distinct labeled factors.
CompositeState tensor(
    const std::vector<std::pair<SubsystemLabel, ModeWavefunction>>& parts);

// P(l) of one subsystem's coordinate.
LatticeDistribution marginal_distribution(const CompositeState& state,
                                          SubsystemLabel label);

// Distribution of the total angular momentum summed over the scope. Meter
// labels contribute zero. Totals are reduced to the canonical window of the
// scope's common circle-lattice size (keyed map; zero entries omitted).
std::map<int, double> total_L_distribution(
    const CompositeState& state, const std::set<SubsystemLabel>& scope);

// Partial trace down to one label.
DensityOperator reduced_density(const CompositeState& state,
                                SubsystemLabel label);

// Partial trace keeping a subset of labels, in state order. The matrix is
// indexed by the kept tuple's mixed-radix window offsets.
Eigen::MatrixXcd reduced_density_multi(
    const CompositeState& state, const std::set<SubsystemLabel>& keep);

// <target| rho |target>, real within numerical noise.
double fidelity_to(const ModeWavefunction& target, const DensityOperator& rho);

// Von Neumann entropy (base 2) of the reduced state of `label`.
double entanglement_entropy(const CompositeState& state, SubsystemLabel label);
// Same for a block of labels kept together.
double entanglement_entropy(const CompositeState& state,
                            const std::set<SubsystemLabel>& keep);

}  // namespace circlesim

#endif
