#ifndef CIRCLESIM_TYPES_HPP
#define CIRCLESIM_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace circlesim {

using Complex = std::complex<double>;

// Absolute tolerance for amplitudes and probabilities.
inline constexpr double kAmpTol = 1e-10;
// Tolerance for entropies (eigenvalue noise accumulates a little more).
inline constexpr double kEntropyTol = 1e-9;
// Outcomes below this probability are dropped from measurement tables.
inline constexpr double kProbFloor = 1e-14;

// Roles a lattice degree of freedom can play. The meter's coordinate is a
// pointer variable q and contributes zero angular momentum; every other
// role's coordinate is an angular momentum quantum number.
enum class SubsystemLabel { System, Preparer, GrandPreparer, Meter };

inline bool carries_angular_momentum(SubsystemLabel label) {
  return label != SubsystemLabel::Meter;
}

inline std::string to_string(SubsystemLabel label) {
  switch (label) {
    case SubsystemLabel::System: return "system";
    case SubsystemLabel::Preparer: return "preparer";
    case SubsystemLabel::GrandPreparer: return "grand_preparer";
    case SubsystemLabel::Meter: return "meter";
  }
  return "?";
}

// Canonical momentum window for a lattice of size dim: [-floor(dim/2),
// ceil(dim/2)-1]. Signed quantum numbers, so |−1> and |1> both exist for
// dim >= 3.
inline int window_lo(int dim) { return -(dim / 2); }
inline int window_hi(int dim) { return (dim + 1) / 2 - 1; }

// Reduce an arbitrary integer quantum number to its canonical-window
// residue mod dim.
inline int canonical(int value, int dim) {
  int r = value % dim;
  if (r < 0) r += dim;
  return r > window_hi(dim) ? r - dim : r;
}

// Zero-based storage index of a canonical-window value.
inline int window_index(int value, int dim) {
  return canonical(value, dim) - window_lo(dim);
}

inline bool in_window(int value, int dim) {
  return value >= window_lo(dim) && value <= window_hi(dim);
}

// Scenario configuration problems (unknown labels, bad profiles, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Modular wrap-around detected where the declared supports promised none.
class WrapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace circlesim

#endif
