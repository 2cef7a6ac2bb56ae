#pragma once

#include <utility>
#include <vector>

#include "qstat/hilbert.hpp"

namespace qstat {

// Hermitian energy operator with its eigendecomposition cached at
// construction; instances are immutable and freely shareable.
struct Hamiltonian {
    Operator op;
    double hbar = 1.0;
    Spectrum spectrum;

    Hamiltonian() = default;
    Hamiltonian(Operator energy, double hbar_value = 1.0);
    int dim() const { return static_cast<int>(op.rows()); }
    double energy(int n) const { return spectrum.values[n]; }
};

Hamiltonian oscillator_hamiltonian(int dim, double omega, double hbar = 1.0);

// rho = Z^-1 sum_n exp(-E_n / k_B T) |psi_n><psi_n|, computed with the
// spectrum shifted by E_min for overflow safety. With zero_limit set the
// temperature is ignored and the normalized ground-eigenspace projector is
// returned.
DensityOperator thermal_state(const Hamiltonian& h, double temperature, double k_B = 1.0,
                              bool zero_limit = false);

// U(t) = sum_n exp(-i E_n t / hbar) |psi_n><psi_n|
Operator unitary_evolution(const Hamiltonian& h, double t);

// ergodic average over the dynamics generated by the observable: the state
// is pinched onto the observable's eigenspace blocks, sum_a P_a rho P_a
DensityOperator dephase(const DensityOperator& rho, const Operator& observable);

// T = 2 pi hbar / |E_n - E_m|
double bohr_period(const Hamiltonian& h, int n, int m);

// |sum_n exp(-i E_n t/hbar) <b|psi_n><psi_n|a>|^2
double transition_probability(const StateVector& a, const StateVector& b, const Hamiltonian& h,
                              double t);

// Energy-resolved action phases S_n = hbar Arg(<b|psi_n><psi_n|a>) with the
// statistical weight of each level. Levels whose weight falls below
// tolerances().weight carry no phase information and are marked undefined.
struct ActionProfile {
    struct Level {
        int n = 0;
        double energy = 0;
        double action = 0;
        double weight = 0;
        bool defined = false;
    };
    std::vector<Level> levels;  // ascending energy order
    bool unwrapped = false;
    double hbar = 1.0;

    const Level& at(int n) const;
};

// unwrap: continue successive defined levels to the nearest 2 pi hbar branch
ActionProfile transformation_action(const StateVector& a, const StateVector& b,
                                    const Hamiltonian& h, bool unwrap);

// discrete dS/dE at interior level n: (S_{n+1} - S_{n-1}) / (E_{n+1} - E_{n-1})
double propagation_time(const ActionProfile& profile, int n);

// energy where the discrete gradient of S changes sign, by linear
// interpolation between the bracketing midpoints
double classical_intersection_energy(const ActionProfile& profile);

// argmax of transition_probability over the grid; ties go to the smaller t
std::pair<double, double> peak_time_scan(const StateVector& a, const StateVector& b,
                                         const Hamiltonian& h, const std::vector<double>& t_grid);

}  // namespace qstat
