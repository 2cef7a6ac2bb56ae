#pragma once

#include <cstdint>

#include "qstat/hilbert.hpp"

namespace qstat {

// -- fixed small operators ---------------------------------------------------

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator identity(int dim);

// -- angular momentum ---------------------------------------------------------

struct SpinOperators {
    Operator jx, jy, jz;
    double j = 0;
    double hbar = 1;
    int dim() const { return static_cast<int>(jx.rows()); }
};

// standard ladder construction; j must be a nonnegative half-integer
SpinOperators spin_operators(double j, double hbar = 1.0);

// |theta, phi> with <J> = hbar j (sin t cos p, sin t sin p, cos t),
// expanded over Jz eigenstates (index k holds m = j - k)
StateVector spin_coherent(double j, double theta, double phi);

// one-axis twist about z: amplitude at m picks up exp(-i q m^2)
StateVector twisted_spin_coherent(double j, double theta, double phi, double q);

// -- harmonic oscillator (truncated) ------------------------------------------

// H = hbar omega (n + 1/2) on the lowest `dim` number states
struct Hamiltonian;  // defined in dynamics.hpp

Operator number_operator(int dim);
StateVector coherent_packet(int dim, Complex alpha);  // truncated and renormalized

// -- bases ---------------------------------------------------------------------

Basis standard_basis(int dim);
// F(j,k) = exp(2 pi i j k / d) / sqrt(d); unbiased to the standard basis in every dim
Basis fourier_basis(int dim);

// -- seeded randomness ---------------------------------------------------------

Operator random_hermitian(int dim, std::uint64_t seed);
StateVector random_state(int dim, std::uint64_t seed);
DensityOperator random_density(int dim, std::uint64_t seed);
Basis random_basis(int dim, std::uint64_t seed);

}  // namespace qstat
