#include "circlesim/interactions.hpp"

#include <Eigen/QR>
#include <cmath>
#include <cstdio>

namespace circlesim {

void WrapGuard::record(const std::string& what) {
  ++events;
  if (policy == WrapPolicy::kError)
    throw WrapError("modular wrap-around: " + what);
  if (!announced_) {
    std::fprintf(stderr, "warning: modular wrap-around: %s\n", what.c_str());
    announced_ = true;
  }
}

namespace {

// Mass outside the |0>-coordinate fiber of `idx` must be negligible; the
// preparation and readout maps are defined on that fiber only.
void require_fiducial(const CompositeState& state, size_t idx,
                      const char* who) {
  double off_mass = 0.0;
  for (const auto& [tuple, a] : state.amps())
    if (tuple[idx] != 0) off_mass += std::norm(a);
  if (std::sqrt(off_mass) > kAmpTol)
    throw std::invalid_argument(std::string(who) +
                                ": coordinate is not in the |0> state");
}

}  // namespace

CompositeState shift_prepare(const CompositeState& state,
                             SubsystemLabel source, SubsystemLabel target,
                             const ModeWavefunction& profile,
                             WrapGuard* wrap) {
  size_t is = state.index_of(source);
  size_t it = state.index_of(target);
  int dim = state.dims()[is];
  if (state.dims()[it] != dim || profile.dim() != dim)
    throw std::invalid_argument(
        "shift_prepare: source, target and profile lattice sizes must match");
  if (!profile.is_normalized())
    throw std::invalid_argument("shift_prepare: profile must be normalized");
  require_fiducial(state, it, "shift_prepare: target");

  WrapGuard local;
  WrapGuard& guard = wrap ? *wrap : local;
  auto profile_support = profile.support();

  std::map<BasisTuple, Complex> out;
  for (const auto& [tuple, a] : state.amps()) {
    if (tuple[it] != 0) continue;  // negligible off-fiber mass, checked above
    int l = tuple[is];
    for (const auto& [m, p] : profile_support) {
      int shifted = l - m;
      if (!in_window(shifted, dim))
        guard.record("source momentum " + std::to_string(shifted) +
                     " leaves the canonical window (D=" + std::to_string(dim) +
                     ")");
      BasisTuple t(tuple);
      t[is] = canonical(shifted, dim);
      t[it] = m;
      out[t] += a * p;
    }
  }
  return state.with_amps(std::move(out));
}

CompositeState pointer_couple(const CompositeState& state,
                              SubsystemLabel source, SubsystemLabel meter) {
  size_t is = state.index_of(source);
  size_t im = state.index_of(meter);
  int source_dim = state.dims()[is];
  int meter_dim = state.dims()[im];
  if (meter_dim < source_dim)
    throw std::invalid_argument(
        "pointer_couple: meter lattice must be at least as large as the "
        "source lattice");
  require_fiducial(state, im, "pointer_couple: meter pointer");

  std::map<BasisTuple, Complex> out;
  for (const auto& [tuple, a] : state.amps()) {
    if (tuple[im] != 0) continue;
    int m = tuple[is];
    if (!in_window(m, meter_dim))
      throw std::runtime_error("pointer_couple: pointer overflow");
    BasisTuple t(tuple);
    t[im] = m;
    out.emplace(std::move(t), a);
  }
  return state.with_amps(std::move(out));
}

CompositeState swap_states(const CompositeState& state, SubsystemLabel a,
                           SubsystemLabel b) {
  size_t ia = state.index_of(a);
  size_t ib = state.index_of(b);
  if (state.dims()[ia] != state.dims()[ib])
    throw std::invalid_argument("swap_states: lattice sizes must match");
  std::map<BasisTuple, Complex> out;
  for (const auto& [tuple, amp] : state.amps()) {
    BasisTuple t(tuple);
    std::swap(t[ia], t[ib]);
    out.emplace(std::move(t), amp);
  }
  return state.with_amps(std::move(out));
}

CompositeState apply_interaction(const CompositeState& state,
                                 const InteractionKind& kind,
                                 WrapGuard* wrap) {
  return std::visit(
      [&](const auto& k) -> CompositeState {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftPrepare>)
          return shift_prepare(state, k.source, k.target, k.profile, wrap);
        else if constexpr (std::is_same_v<T, PointerCouple>)
          return pointer_couple(state, k.source, k.meter);
        else
          return swap_states(state, k.a, k.b);
      },
      kind);
}

BasisTuple InteractionMatrix::tuple_of(long index) const {
  BasisTuple t(factors.size());
  for (size_t k = factors.size(); k-- > 0;) {
    int d = factors[k].dim;
    t[k] = window_lo(d) + static_cast<int>(index % d);
    index /= d;
  }
  return t;
}

long InteractionMatrix::index_of(const BasisTuple& tuple) const {
  long f = 0;
  for (size_t k = 0; k < factors.size(); ++k)
    f = f * factors[k].dim + window_index(tuple[k], factors[k].dim);
  return f;
}

namespace {

long space_side(const std::vector<Factor>& factors, long cap) {
  long side = 1;
  for (const auto& f : factors) side *= f.dim;
  if (side > cap)
    throw std::runtime_error("interaction space side " + std::to_string(side) +
                             " exceeds the enumeration cap " +
                             std::to_string(cap));
  return side;
}

int dim_for(const std::map<SubsystemLabel, int>& dims, SubsystemLabel label) {
  auto it = dims.find(label);
  if (it == dims.end())
    throw std::invalid_argument("no lattice size given for " +
                                to_string(label));
  return it->second;
}

// Unitary whose column at the window offset of quantum number 0 equals the
// (normalized) profile; the remaining columns are a deterministic
// Householder-QR completion. With an unnormalized profile the designated
// column keeps the literal amplitudes, so unitarity checks can reject it.
Eigen::MatrixXcd profile_completion(const ModeWavefunction& profile) {
  int dim = profile.dim();
  Eigen::VectorXcd literal(dim);
  for (int i = 0; i < dim; ++i) literal(i) = profile.amps()[i];
  double n = literal.norm();
  if (n < 1e-12)
    throw std::invalid_argument("profile completion of a zero profile");
  Eigen::VectorXcd unit = literal / n;

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(unit);
  Eigen::MatrixXcd q = qr.householderQ();
  Complex r = q.col(0).adjoint() * unit;
  q.col(0) *= r;  // first column now equals `unit` exactly

  int zero_col = window_index(0, dim);
  q.col(0).swap(q.col(zero_col));
  q.col(zero_col) = literal;
  return q;
}

InteractionMatrix build_shift_prepare(const ShiftPrepare& k,
                                      const std::map<SubsystemLabel, int>& dims,
                                      long cap) {
  int dim = dim_for(dims, k.source);
  if (dim_for(dims, k.target) != dim || k.profile.dim() != dim)
    throw std::invalid_argument(
        "shift_prepare: source, target and profile lattice sizes must match");
  if (k.source == k.target)
    throw std::invalid_argument("shift_prepare: source equals target");
  InteractionMatrix im{{Factor{k.source, dim, true}, Factor{k.target, dim, true}},
                       {}};
  long side = space_side(im.factors, cap);
  Eigen::MatrixXcd completion = profile_completion(k.profile);
  im.matrix = Eigen::MatrixXcd::Zero(side, side);
  // Block-diagonal in total L: |l, n> -> sum_m completion(m, n) |l+n-m, m>.
  for (long c = 0; c < side; ++c) {
    BasisTuple in = im.tuple_of(c);
    int l = in[0], n = in[1];
    for (int i = 0; i < dim; ++i) {
      int m = window_lo(dim) + i;
      Complex amp = completion(i, window_index(n, dim));
      if (amp == Complex(0.0)) continue;
      long r = im.index_of({canonical(l + n - m, dim), m});
      im.matrix(r, c) += amp;
    }
  }
  return im;
}

InteractionMatrix build_pointer_couple(
    const PointerCouple& k, const std::map<SubsystemLabel, int>& dims,
    long cap) {
  int source_dim = dim_for(dims, k.source);
  int meter_dim = dim_for(dims, k.meter);
  if (meter_dim < source_dim)
    throw std::invalid_argument(
        "pointer_couple: meter lattice must be at least as large as the "
        "source lattice");
  InteractionMatrix im{{Factor{k.source, source_dim, true},
                        Factor{k.meter, meter_dim, false}},
                       {}};
  long side = space_side(im.factors, cap);
  im.matrix = Eigen::MatrixXcd::Zero(side, side);
  for (long c = 0; c < side; ++c) {
    BasisTuple in = im.tuple_of(c);
    long r = im.index_of({in[0], canonical(in[1] + in[0], meter_dim)});
    im.matrix(r, c) = Complex(1.0);
  }
  return im;
}

InteractionMatrix build_swap(const SwapStates& k,
                             const std::map<SubsystemLabel, int>& dims,
                             long cap) {
  int dim = dim_for(dims, k.a);
  if (dim_for(dims, k.b) != dim)
    throw std::invalid_argument("swap_states: lattice sizes must match");
  InteractionMatrix im{{Factor{k.a, dim, true}, Factor{k.b, dim, true}}, {}};
  long side = space_side(im.factors, cap);
  im.matrix = Eigen::MatrixXcd::Zero(side, side);
  for (long c = 0; c < side; ++c) {
    BasisTuple in = im.tuple_of(c);
    im.matrix(im.index_of({in[1], in[0]}), c) = Complex(1.0);
  }
  return im;
}

}  // namespace

InteractionMatrix build_unitary(const InteractionKind& kind,
                                const std::map<SubsystemLabel, int>& dims,
                                long enumeration_cap) {
  return std::visit(
      [&](const auto& k) -> InteractionMatrix {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftPrepare>)
          return build_shift_prepare(k, dims, enumeration_cap);
        else if constexpr (std::is_same_v<T, PointerCouple>)
          return build_pointer_couple(k, dims, enumeration_cap);
        else
          return build_swap(k, dims, enumeration_cap);
      },
      kind);
}

UnitarityCheck verify_unitary(const Eigen::MatrixXcd& matrix) {
  Eigen::MatrixXcd gram = matrix.adjoint() * matrix;
  gram -= Eigen::MatrixXcd::Identity(matrix.cols(), matrix.cols());
  double dev = gram.cwiseAbs().maxCoeff();
  return {dev <= kAmpTol, dev};
}

UnitarityCheck verify_unitary(const InteractionKind& kind,
                              const std::map<SubsystemLabel, int>& dims,
                              long enumeration_cap) {
  return verify_unitary(build_unitary(kind, dims, enumeration_cap).matrix);
}

ConservationCheck verify_conserves_total_L(const InteractionMatrix& im) {
  int circle_dim = 0;
  for (const auto& f : im.factors)
    if (f.carries_L) circle_dim = f.dim;
  ConservationCheck check{true, std::nullopt, 0.0};
  if (circle_dim == 0) return check;  // nothing carries angular momentum
  auto total_of = [&](const BasisTuple& t) {
    int total = 0;
    for (size_t k = 0; k < im.factors.size(); ++k)
      if (im.factors[k].carries_L) total += t[k];
    return canonical(total, circle_dim);
  };
  for (long c = 0; c < im.side(); ++c) {
    int t_in = total_of(im.tuple_of(c));
    for (long r = 0; r < im.side(); ++r) {
      double mag = std::abs(im.matrix(r, c));
      if (mag <= 1e-12) continue;
      if (total_of(im.tuple_of(r)) != t_in) {
        check.ok = false;
        check.max_leak = std::max(check.max_leak, mag);
        if (!check.witness) check.witness = im.tuple_of(c);
      }
    }
  }
  return check;
}

ConservationCheck verify_conserves_total_L(
    const InteractionKind& kind, const std::map<SubsystemLabel, int>& dims,
    long enumeration_cap) {
  return verify_conserves_total_L(build_unitary(kind, dims, enumeration_cap));
}

}  // namespace circlesim
