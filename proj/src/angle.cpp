#include "circlesim/angle.hpp"

#include <cmath>
#include <numbers>

namespace circlesim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Kernel matrix K(j, i) = e^{+i theta_j l_i} / sqrt(D) with l_i the i-th
// canonical-window quantum number. K maps momentum amplitudes to angle
// amplitudes; its adjoint maps back.
Eigen::MatrixXcd angle_kernel(int dim) {
  Eigen::MatrixXcd k(dim, dim);
  double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j) {
    double theta = kTwoPi * j / dim;
    for (int i = 0; i < dim; ++i) {
      int l = window_lo(dim) + i;
      k(j, i) = std::polar(scale, theta * l);
    }
  }
  return k;
}

}  // namespace

AngleWavefunction::AngleWavefunction(int dim, std::vector<Complex> amps)
    : dim_(dim), amps_(std::move(amps)) {
  if (dim_ <= 0) throw std::invalid_argument("lattice size must be positive");
  if (static_cast<int>(amps_.size()) != dim_)
    throw std::invalid_argument("amplitude count does not match lattice size");
}

double AngleWavefunction::theta(int j) const { return kTwoPi * j / dim_; }

double AngleWavefunction::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

AngleWavefunction to_angle(const ModeWavefunction& psi) {
  if (!psi.is_normalized(1e-8))
    throw std::invalid_argument("to_angle expects a normalized state");
  int dim = psi.dim();
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = psi.amps()[i];
  Eigen::VectorXcd w = angle_kernel(dim) * v;
  return AngleWavefunction(dim, std::vector<Complex>(w.data(), w.data() + dim));
}

ModeWavefunction to_momentum(const AngleWavefunction& phi) {
  int dim = phi.dim();
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = phi.amps()[i];
  Eigen::VectorXcd w = angle_kernel(dim).adjoint() * v;
  return ModeWavefunction(dim, std::vector<Complex>(w.data(), w.data() + dim));
}

Eigen::MatrixXcd joint_angle_amplitudes(const CompositeState& state,
                                        SubsystemLabel a, SubsystemLabel b) {
  if (state.labels().size() != 2)
    throw std::invalid_argument(
        "joint angle table needs a state supported on exactly two labels");
  size_t ia = state.index_of(a);
  size_t ib = state.index_of(b);
  int da = state.dims()[ia];
  int db = state.dims()[ib];
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(da, db);
  for (const auto& [tuple, amp] : state.amps())
    m(window_index(tuple[ia], da), window_index(tuple[ib], db)) = amp;
  return angle_kernel(da) * m * angle_kernel(db).transpose();
}

double frame_factorization_residual(const CompositeState& state,
                                    SubsystemLabel frame, SubsystemLabel sys,
                                    const ModeWavefunction& target) {
  int dim = state.dim_of(frame);
  if (state.dim_of(sys) != dim || target.dim() != dim)
    throw std::invalid_argument(
        "frame residual needs equal lattice sizes for frame, system, target");
  Eigen::MatrixXcd table = joint_angle_amplitudes(state, frame, sys);
  AngleWavefunction target_angle = to_angle(target.normalized());

  // Rewrite the table in relative-angle coordinates:
  // U(j_f, j_d) = T(j_f, j_f + j_d).
  Eigen::MatrixXcd rel(dim, dim);
  for (int jf = 0; jf < dim; ++jf)
    for (int jd = 0; jd < dim; ++jd)
      rel(jf, jd) = table(jf, (jf + jd) % dim);

  // Least-squares frame amplitude per row; exact when the state factorizes.
  Eigen::VectorXcd target_vec(dim);
  for (int j = 0; j < dim; ++j) target_vec(j) = target_angle.amp(j);
  Eigen::VectorXcd frame_amp = rel * target_vec.conjugate();
  Eigen::MatrixXcd model = frame_amp * target_vec.transpose();

  // Quotient out one global phase, aligned at the largest-magnitude entry.
  Eigen::Index r = 0, c = 0;
  rel.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(model(r, c)) > 1e-300) {
    Complex phase = rel(r, c) / model(r, c);
    model *= phase / std::abs(phase);
  }
  return (rel - model).cwiseAbs().maxCoeff();
}

}  // namespace circlesim
