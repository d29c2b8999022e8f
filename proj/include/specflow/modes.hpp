#pragma once

#include <array>
#include <cstdlib>

namespace specflow {

// Fourier mode on the model manifolds (periods 2*pi, so modes are integer
// vectors). Components beyond the manifold dimension stay zero.
using Mode = std::array<int, 3>;

inline Mode mode_zero() { return {0, 0, 0}; }

inline Mode operator+(const Mode& a, const Mode& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Mode operator-(const Mode& a) { return {-a[0], -a[1], -a[2]}; }

inline Mode operator-(const Mode& a, const Mode& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline int mode_radius(const Mode& m) {
  return std::max(std::abs(m[0]), std::max(std::abs(m[1]), std::abs(m[2])));
}

}  // namespace specflow
