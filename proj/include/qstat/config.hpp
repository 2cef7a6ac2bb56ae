#pragma once

#include <complex>
#include <Eigen/Dense>

namespace qstat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Central tolerance record. Every numeric gate in the library reads from
// this single source so tests can reason about one set of knobs.
struct Tolerances {
    double norm = 1e-10;       // state normalization, trace-one
    double herm = 1e-10;       // Hermiticity deviation, scaled by max(1, max|entry|)
    double psd = 1e-10;        // eigenvalue floor for positive semidefiniteness
    double orth = 1e-9;        // pairwise orthonormality of basis/eigenvector sets
    double recon_rel = 1e-9;   // spectral reconstruction error, relative to max|entry|
    double deg_rel = 1e-9;     // degeneracy grouping, relative to spectral range
    double deg_floor = 1e-12;  // absolute floor for the degeneracy tolerance
    double weight = 1e-12;     // below this |<b|psi_n><psi_n|a>| a level is undefined
    double overlap = 1e-10;    // gate for all weak-value quotients
};

// Process-global, mutable so a test can tighten or relax a knob locally.
Tolerances& tolerances();

// SI values, used by the constants demo and by --si mode.
namespace si {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J / K
inline constexpr double c = 2.99792458e8;        // m / s
}  // namespace si

}  // namespace qstat
