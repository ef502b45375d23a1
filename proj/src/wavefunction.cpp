#include "circlesim/wavefunction.hpp"

#include <algorithm>
#include <cmath>

namespace circlesim {

ModeWavefunction::ModeWavefunction(int dim, std::vector<Complex> amps)
    : dim_(dim), amps_(std::move(amps)) {
  if (dim_ <= 0) throw std::invalid_argument("lattice size must be positive");
  if (static_cast<int>(amps_.size()) != dim_)
    throw std::invalid_argument("amplitude count does not match lattice size");
}

double ModeWavefunction::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

ModeWavefunction ModeWavefunction::normalized() const {
  double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero state");
  std::vector<Complex> out(amps_);
  for (auto& a : out) a /= n;
  return ModeWavefunction(dim_, std::move(out));
}

bool ModeWavefunction::is_normalized(double tol) const {
  return std::abs(norm() - 1.0) <= tol;
}

std::map<int, Complex> ModeWavefunction::support() const {
  std::map<int, Complex> s;
  for (int l = lo(); l <= hi(); ++l) {
    Complex a = amp(l);
    if (a != Complex(0.0, 0.0)) s.emplace(l, a);
  }
  return s;
}

std::pair<int, int> ModeWavefunction::support_window() const {
  int a = 0, b = -1;
  bool found = false;
  for (int l = lo(); l <= hi(); ++l) {
    if (amp(l) == Complex(0.0, 0.0)) continue;
    if (!found) { a = l; found = true; }
    b = l;
  }
  return found ? std::pair{a, b} : std::pair{0, -1};
}

std::vector<double> ModeWavefunction::probabilities() const {
  std::vector<double> p(amps_.size());
  for (size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

ModeWavefunction basis_state(int dim, int l) {
  if (dim <= 0) throw std::invalid_argument("lattice size must be positive");
  std::vector<Complex> amps(dim, Complex(0.0));
  amps[window_index(l, dim)] = Complex(1.0);
  return ModeWavefunction(dim, std::move(amps));
}

ModeWavefunction superposition(int dim, const std::map<int, Complex>& terms,
                               double* applied_scale) {
  if (dim <= 0) throw std::invalid_argument("lattice size must be positive");
  std::vector<Complex> amps(dim, Complex(0.0));
  for (const auto& [l, a] : terms) amps[window_index(l, dim)] += a;
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  if (s == 0.0)
    throw std::invalid_argument("superposition requires a nonzero amplitude");
  double scale = 1.0 / std::sqrt(s);
  for (auto& a : amps) a *= scale;
  if (applied_scale) *applied_scale = scale;
  return ModeWavefunction(dim, std::move(amps));
}

ModeWavefunction uniform_window(int dim, int a, int b) {
  if (a > b) throw std::invalid_argument("uniform window is empty");
  if (b - a + 1 > dim)
    throw std::invalid_argument("uniform window wider than the lattice");
  std::map<int, Complex> terms;
  for (int l = a; l <= b; ++l) terms[l] = Complex(1.0);
  return superposition(dim, terms);
}

ModeWavefunction gaussian_like(int dim, int center, double width) {
  if (width <= 0.0) throw std::invalid_argument("width must be positive");
  int reach = static_cast<int>(std::ceil(3.0 * width));
  reach = std::min(reach, dim / 2);
  std::map<int, Complex> terms;
  for (int d = -reach; d <= reach; ++d)
    terms[center + d] = std::exp(-0.5 * (d / width) * (d / width));
  return superposition(dim, terms);
}

Complex inner_product(const ModeWavefunction& a, const ModeWavefunction& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("inner product needs matching lattice sizes");
  Complex s(0.0);
  for (int i = 0; i < a.dim(); ++i)
    s += std::conj(a.amps()[i]) * b.amps()[i];
  return s;
}

}  // namespace circlesim
