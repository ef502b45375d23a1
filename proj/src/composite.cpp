#include "circlesim/composite.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace circlesim {

double LatticeDistribution::sum() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

std::map<int, double> LatticeDistribution::as_map(double floor) const {
  std::map<int, double> m;
  for (int i = 0; i < dim; ++i)
    if (probs[i] > floor) m[window_lo(dim) + i] = probs[i];
  return m;
}

double max_abs_difference(const LatticeDistribution& a,
                          const LatticeDistribution& b) {
  if (a.dim != b.dim)
    throw std::invalid_argument("distributions live on different lattices");
  double d = 0.0;
  for (int i = 0; i < a.dim; ++i)
    d = std::max(d, std::abs(a.probs[i] - b.probs[i]));
  return d;
}

double max_abs_difference(const std::map<int, double>& a,
                          const std::map<int, double>& b) {
  double d = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    d = std::max(d, std::abs(v - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) d = std::max(d, std::abs(v));
  return d;
}

double DensityOperator::hermiticity_deviation() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

CompositeState::CompositeState(std::vector<SubsystemLabel> labels,
                               std::vector<int> dims,
                               std::map<BasisTuple, Complex> amps)
    : labels_(std::move(labels)), dims_(std::move(dims)),
      amps_(std::move(amps)) {
  if (labels_.empty() || labels_.size() != dims_.size())
    throw std::invalid_argument("labels and dims must match and be non-empty");
  for (size_t i = 0; i < labels_.size(); ++i) {
    for (size_t j = i + 1; j < labels_.size(); ++j)
      if (labels_[i] == labels_[j])
        throw std::invalid_argument("duplicate subsystem label");
    if (dims_[i] <= 0)
      throw std::invalid_argument("lattice size must be positive");
  }
  for (const auto& [tuple, a] : amps_) {
    if (tuple.size() != labels_.size())
      throw std::invalid_argument("tuple arity does not match label count");
    for (size_t i = 0; i < tuple.size(); ++i)
      if (!in_window(tuple[i], dims_[i]))
        throw std::invalid_argument("tuple entry outside canonical window");
    (void)a;
  }
}

bool CompositeState::has_label(SubsystemLabel label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

size_t CompositeState::index_of(SubsystemLabel label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw std::invalid_argument("unknown subsystem label: " +
                                to_string(label));
  return static_cast<size_t>(it - labels_.begin());
}

int CompositeState::dim_of(SubsystemLabel label) const {
  return dims_[index_of(label)];
}

double CompositeState::norm() const {
  double s = 0.0;
  for (const auto& [tuple, a] : amps_) s += std::norm(a);
  return std::sqrt(s);
}

CompositeState CompositeState::normalized() const {
  double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero state");
  std::map<BasisTuple, Complex> out(amps_);
  for (auto& [tuple, a] : out) a /= n;
  return CompositeState(labels_, dims_, std::move(out));
}

CompositeState CompositeState::with_amps(
    std::map<BasisTuple, Complex> amps) const {
  return CompositeState(labels_, dims_, std::move(amps));
}

CompositeState tensor(
    const std::vector<std::pair<SubsystemLabel, ModeWavefunction>>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor of nothing");
  std::vector<SubsystemLabel> labels;
  std::vector<int> dims;
  for (const auto& [label, psi] : parts) {
    labels.push_back(label);
    dims.push_back(psi.dim());
  }
  std::map<BasisTuple, Complex> amps;
  amps.emplace(BasisTuple{}, Complex(1.0));
  for (const auto& [label, psi] : parts) {
    std::map<BasisTuple, Complex> next;
    for (const auto& [l, a] : psi.support()) {
      for (const auto& [tuple, acc] : amps) {
        BasisTuple t(tuple);
        t.push_back(l);
        next.emplace(std::move(t), acc * a);
      }
    }
    amps = std::move(next);
  }
  return CompositeState(std::move(labels), std::move(dims), std::move(amps));
}

LatticeDistribution marginal_distribution(const CompositeState& state,
                                          SubsystemLabel label) {
  size_t idx = state.index_of(label);
  LatticeDistribution dist{state.dims()[idx],
                           std::vector<double>(state.dims()[idx], 0.0)};
  for (const auto& [tuple, a] : state.amps())
    dist.probs[window_index(tuple[idx], dist.dim)] += std::norm(a);
  return dist;
}

std::map<int, double> total_L_distribution(
    const CompositeState& state, const std::set<SubsystemLabel>& scope) {
  if (scope.empty()) throw std::invalid_argument("empty scope");
  std::vector<size_t> circle_indices;
  int circle_dim = 0;
  for (SubsystemLabel label : scope) {
    size_t idx = state.index_of(label);
    if (!carries_angular_momentum(label)) continue;
    int d = state.dims()[idx];
    if (circle_dim != 0 && d != circle_dim)
      throw std::invalid_argument(
          "scope mixes circle lattices of different sizes");
    circle_dim = d;
    circle_indices.push_back(idx);
  }
  std::map<int, double> dist;
  if (circle_indices.empty()) {
    // Only meter labels in scope: the total is identically zero.
    double mass = 0.0;
    for (const auto& [tuple, a] : state.amps()) mass += std::norm(a);
    dist[0] = mass;
    return dist;
  }
  for (const auto& [tuple, a] : state.amps()) {
    int total = 0;
    for (size_t idx : circle_indices) total += tuple[idx];
    dist[canonical(total, circle_dim)] += std::norm(a);
  }
  return dist;
}

DensityOperator reduced_density(const CompositeState& state,
                                SubsystemLabel label) {
  size_t idx = state.index_of(label);
  int dim = state.dims()[idx];
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  // Group amplitudes by the traced-out coordinates.
  std::map<BasisTuple, std::vector<std::pair<int, Complex>>> groups;
  for (const auto& [tuple, a] : state.amps()) {
    BasisTuple rest;
    rest.reserve(tuple.size() - 1);
    for (size_t i = 0; i < tuple.size(); ++i)
      if (i != idx) rest.push_back(tuple[i]);
    groups[rest].emplace_back(tuple[idx], a);
  }
  for (const auto& [rest, entries] : groups)
    for (const auto& [m, a] : entries)
      for (const auto& [mp, ap] : entries)
        rho(window_index(m, dim), window_index(mp, dim)) += a * std::conj(ap);
  return DensityOperator{label, dim, std::move(rho)};
}

Eigen::MatrixXcd reduced_density_multi(const CompositeState& state,
                                       const std::set<SubsystemLabel>& keep) {
  if (keep.empty()) throw std::invalid_argument("empty label set");
  std::vector<size_t> kept;
  std::vector<int> kept_dims;
  for (size_t i = 0; i < state.labels().size(); ++i) {
    if (keep.count(state.labels()[i])) {
      kept.push_back(i);
      kept_dims.push_back(state.dims()[i]);
    }
  }
  if (kept.size() != keep.size())
    throw std::invalid_argument("label set not contained in the state");
  long dim = 1;
  for (int d : kept_dims) dim *= d;
  auto flat = [&](const BasisTuple& tuple) {
    long f = 0;
    for (size_t k = 0; k < kept.size(); ++k)
      f = f * kept_dims[k] + window_index(tuple[kept[k]], kept_dims[k]);
    return f;
  };
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  std::map<BasisTuple, std::vector<std::pair<long, Complex>>> groups;
  for (const auto& [tuple, a] : state.amps()) {
    BasisTuple rest;
    for (size_t i = 0; i < tuple.size(); ++i)
      if (!std::count(kept.begin(), kept.end(), i)) rest.push_back(tuple[i]);
    groups[rest].emplace_back(flat(tuple), a);
  }
  for (const auto& [rest, entries] : groups)
    for (const auto& [r, a] : entries)
      for (const auto& [c, ap] : entries) rho(r, c) += a * std::conj(ap);
  return rho;
}

double fidelity_to(const ModeWavefunction& target,
                   const DensityOperator& rho) {
  if (target.dim() != rho.dim)
    throw std::invalid_argument("target and density lattice sizes differ");
  Eigen::VectorXcd v(rho.dim);
  for (int i = 0; i < rho.dim; ++i) v(i) = target.amps()[i];
  Complex f = v.adjoint() * rho.matrix * v;
  return f.real();
}

namespace {

double entropy_of(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho,
                                                         Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double lambda : solver.eigenvalues())
    if (lambda > 1e-15) s -= lambda * std::log2(lambda);
  return s;
}

}  // namespace

double entanglement_entropy(const CompositeState& state,
                            SubsystemLabel label) {
  return entropy_of(reduced_density(state, label).matrix);
}

double entanglement_entropy(const CompositeState& state,
                            const std::set<SubsystemLabel>& keep) {
  return entropy_of(reduced_density_multi(state, keep));
}

}  // namespace circlesim
