// Shared helpers for the unit tests.
#pragma once

#include <qstat/builders.hpp>
#include <qstat/hilbert.hpp>

#include <cmath>
#include <complex>
#include <initializer_list>

namespace ts {

using qstat::Complex;
using qstat::Matrix;
using qstat::Vector;

inline constexpr Complex I{0.0, 1.0};
inline const double pi = std::acos(-1.0);

inline double max_abs_diff(const Matrix& x, const Matrix& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

inline qstat::StateVector sv(std::initializer_list<Complex> amps) {
  Vector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index k = 0;
  for (const auto& a : amps) v(k++) = a;
  v.normalize();
  return qstat::StateVector(v);
}

// |0>, |1> and the four conventional qubit superpositions.
inline qstat::StateVector ket0() { return sv({1.0, 0.0}); }
inline qstat::StateVector ket1() { return sv({0.0, 1.0}); }
inline qstat::StateVector ket_plus() { return sv({1.0, 1.0}); }
inline qstat::StateVector ket_minus() { return sv({1.0, -1.0}); }
inline qstat::StateVector ket_yplus() { return sv({1.0, I}); }
inline qstat::StateVector ket_yminus() { return sv({1.0, -I}); }

inline qstat::DensityOperator pure(const qstat::StateVector& s) {
  return qstat::DensityOperator(s.amps * s.amps.adjoint());
}

inline Matrix maximally_mixed(int dim) {
  return Matrix::Identity(dim, dim) / static_cast<double>(dim);
}

}  // namespace ts
