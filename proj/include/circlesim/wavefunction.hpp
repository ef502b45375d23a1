#ifndef CIRCLESIM_WAVEFUNCTION_HPP
#define CIRCLESIM_WAVEFUNCTION_HPP

#include <map>
#include <vector>

#include "circlesim/types.hpp"

namespace circlesim {

// Complex amplitudes of one circle degree of freedom over a cyclic momentum
// lattice of size dim. Entry i holds the amplitude of |l> with
// l = window_lo(dim) + i.
class ModeWavefunction {
 public:
  // Amplitudes are stored as given; call normalized() to get a unit vector.
  ModeWavefunction(int dim, std::vector<Complex> amps);

  int dim() const { return dim_; }
  int lo() const { return window_lo(dim_); }
  int hi() const { return window_hi(dim_); }

  // Amplitude of quantum number l (any integer; reduced mod dim).
  Complex amp(int l) const { return amps_[window_index(l, dim_)]; }
  const std::vector<Complex>& amps() const { return amps_; }

  double norm() const;
  ModeWavefunction normalized() const;  // throws on zero norm
  bool is_normalized(double tol = kAmpTol) const;

  // Nonzero entries keyed by canonical quantum number.
  std::map<int, Complex> support() const;
  // Smallest window [lo, hi] containing all nonzero entries; {0, -1} if none.
  std::pair<int, int> support_window() const;

  // |psi(l)|^2 for each window entry.
  std::vector<double> probabilities() const;

 private:
  int dim_;
  std::vector<Complex> amps_;
};

// |l> on a lattice of size dim; l is reduced to its canonical residue.
ModeWavefunction basis_state(int dim, int l);

// Places the given amplitudes at canonical residues (colliding residues
// accumulate), then normalizes. The applied scale factor is written to
// *applied_scale when non-null. Throws on an all-zero input.
ModeWavefunction superposition(int dim, const std::map<int, Complex>& terms,
                               double* applied_scale = nullptr);

// Equal amplitudes on the inclusive window [a, b]; width must not exceed dim.
ModeWavefunction uniform_window(int dim, int a, int b);

// Amplitudes proportional to exp(-(l-center)^2 / (2 width^2)), truncated to
// |l-center| <= ceil(3*width) and to the lattice window, then normalized.
ModeWavefunction gaussian_like(int dim, int center, double width);

Complex inner_product(const ModeWavefunction& a, const ModeWavefunction& b);

}  // namespace circlesim

#endif
