#ifndef CIRCLESIM_ANGLE_HPP
#define CIRCLESIM_ANGLE_HPP

#include <Eigen/Dense>

#include "circlesim/composite.hpp"

namespace circlesim {

// Amplitudes of one circle degree of freedom at the angles theta_j = 2*pi*j/D,
// j = 0..D-1. Unit-normalized like the momentum representation.
class AngleWavefunction {
 public:
  AngleWavefunction(int dim, std::vector<Complex> amps);

  int dim() const { return dim_; }
  double theta(int j) const;
  Complex amp(int j) const { return amps_[j]; }
  const std::vector<Complex>& amps() const { return amps_; }
  double norm() const;

 private:
  int dim_;
  std::vector<Complex> amps_;
};

// Momentum -> angle basis change. The angle ket expands over momentum kets
// with kernel e^{-i theta l}, so amplitudes transform with
// e^{+i theta_j l} / sqrt(D). Unitary.
AngleWavefunction to_angle(const ModeWavefunction& psi);

// Exact inverse of to_angle.
ModeWavefunction to_momentum(const AngleWavefunction& phi);

// Two-subsystem angle-basis amplitude table T(j_a, j_b) for a state supported
// on exactly the labels {a, b}; unitary transform applied per factor.
Eigen::MatrixXcd joint_angle_amplitudes(const CompositeState& state,
                                        SubsystemLabel a, SubsystemLabel b);

// How far the joint angle table is from frame-relative product form
// F(theta_f) * T(theta_s - theta_f) with T the angle profile of `target`.
// The frame amplitude F is recovered per angle row by projecting onto the
// target profile; one global phase is then aligned at the largest-magnitude
// table entry, and the max absolute entry difference is returned.
double frame_factorization_residual(const CompositeState& state,
                                    SubsystemLabel frame, SubsystemLabel sys,
                                    const ModeWavefunction& target);

}  // namespace circlesim

#endif
