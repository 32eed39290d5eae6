#pragma once

// Jones matrices on the (H, V) polarization basis.  H is p-polarized and V is
// s-polarized for reflections in the horizontal plane of the table.

#include <Eigen/Core>

#include <cmath>
#include <complex>

namespace qmeasure::jones {

template <typename Scalar>
using Vector = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
Vector<Scalar> horizontal() {
  return Vector<Scalar>(Scalar(1), Scalar(0));
}

template <typename Scalar>
Vector<Scalar> vertical() {
  return Vector<Scalar>(Scalar(0), Scalar(1));
}

/// Real rotation of the polarization frame by `theta`.
template <typename Scalar>
Matrix<Scalar> rotation(Scalar theta) {
  using std::cos;
  using std::sin;
  Matrix<Scalar> m;
  m << cos(theta), -sin(theta), sin(theta), cos(theta);
  return m;
}

/// Half-wave plate with fast axis at `theta` from horizontal, global phase
/// dropped: [[cos 2t, sin 2t], [sin 2t, -cos 2t]].  theta = pi/4 swaps H and
/// V, theta = pi/8 is the Hadamard matrix.
template <typename Scalar>
Matrix<Scalar> half_wave_plate(Scalar theta) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(Scalar(2) * theta);
  const Scalar s = sin(Scalar(2) * theta);
  Matrix<Scalar> m;
  m << c, s, s, -c;
  return m;
}

template <typename Scalar>
Matrix<Scalar> phase_shift(Scalar phase) {
  return std::polar(Scalar(1), phase) * Matrix<Scalar>::Identity();
}

/// Reflection with separate power reflectances and phases for the p (H) and
/// s (V) components.
template <typename Scalar>
Matrix<Scalar> mirror(Scalar reflectance_s, Scalar reflectance_p, Scalar phase_s,
                      Scalar phase_p) {
  using std::sqrt;
  Matrix<Scalar> m = Matrix<Scalar>::Zero();
  m(0, 0) = std::polar(sqrt(reflectance_p), phase_p);
  m(1, 1) = std::polar(sqrt(reflectance_s), phase_s);
  return m;
}

/// Transmitted part of a linear polarizer with axis `axis`; the crossed
/// component leaks with power fraction `extinction`.
template <typename Scalar>
Matrix<Scalar> polarizer_pass(Scalar axis, Scalar extinction) {
  using std::sqrt;
  Matrix<Scalar> d = Matrix<Scalar>::Zero();
  d(0, 0) = Scalar(1);
  d(1, 1) = sqrt(extinction);
  return rotation(axis) * d * rotation(-axis);
}

/// Rejected part of the same polarizer, so pass and reject together conserve
/// power.
template <typename Scalar>
Matrix<Scalar> polarizer_reject(Scalar axis, Scalar extinction) {
  using std::sqrt;
  Matrix<Scalar> d = Matrix<Scalar>::Zero();
  d(1, 1) = sqrt(Scalar(1) - extinction);
  return rotation(axis) * d * rotation(-axis);
}

}  // namespace qmeasure::jones
