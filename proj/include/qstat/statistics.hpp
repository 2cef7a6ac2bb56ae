#pragma once

#include <utility>
#include <vector>

#include "qstat/dynamics.hpp"
#include "qstat/hilbert.hpp"

namespace qstat {

// Complex joint quasiprobability of a state over two bases:
// table(a, b) = <b_b|a_a> <a_a|rho|b_b>. Rows sum to the basis_a diagonal
// of rho, columns to the basis_b diagonal, and everything sums to 1.
struct DiracDistribution {
    Basis basis_a;
    Basis basis_b;
    Matrix table;

    int dim() const { return static_cast<int>(table.rows()); }
};

struct WeakValueRecord {
    Complex value;
    StateVector pre;
    StateVector post;
    double overlap_mag = 0;
};

double born_probability(const StateVector& a, const StateVector& b);

DiracDistribution dirac_distribution(const DensityOperator& rho, const Basis& basis_a,
                                     const Basis& basis_b);

// inversion of the Dirac table: <a|rho|b> = table(a,b) / <b|a>, then change
// of basis; requires every mutual overlap to clear tolerances().overlap
DensityOperator reconstruct_state(const DiracDistribution& dist);

// <post|m|pre> / <post|pre>
WeakValueRecord weak_value(const Operator& m, const StateVector& pre, const StateVector& post);

// full table of weak values, indexed [post][pre] = (row b, column a)
Matrix weak_table(const Operator& m, const Basis& basis_a, const Basis& basis_b);

// M = sum_{a,b} table(b,a) |b><b|a><a|; inverse of weak_table
Operator operator_from_weak_values(const Matrix& table, const Basis& basis_a,
                                   const Basis& basis_b);

// <b|mid><mid|a> / <b|a>; sums to 1 over any complete orthonormal mid set
Complex complex_conditional_probability(const StateVector& mid, const StateVector& a,
                                        const StateVector& b);

struct ProbabilityReconstruction {
    std::vector<double> p;  // one entry per mid-basis vector
    double max_imag = 0;    // largest imaginary residue dropped
};

// P(m) = sum_{a,b} P(m|a,b) rho(a,b); matches Born probabilities of rho
ProbabilityReconstruction reconstruct_probability(const Basis& mid_basis,
                                                  const DiracDistribution& dist);

// action phase conditioned on both boundary states:
// S(b,a,E_n) = hbar Arg(<b|psi_n><psi_n|a> / <b|a>)
double conditional_action(const Hamiltonian& h, const StateVector& a, const StateVector& b,
                          int n);

struct CoarseGrainBin {
    double center = 0;
    Complex mass;
};

// partitions the spectral range into contiguous bins of width `window`
// starting at E_min and sums P(E_n|a,b) = <b|psi_n><psi_n|a> / <b|a> within
// each bin; bin masses total 1
std::vector<CoarseGrainBin> coarse_grain(const Hamiltonian& h, const StateVector& a,
                                         const StateVector& b, double window);

// Im <AB> on rho; equals -(i/2) <[A,B]> as a real number
double imaginary_correlation(const Operator& a_op, const Operator& b_op,
                             const DensityOperator& rho);

struct EhrenfestResult {
    double lhs = 0;        // Im Tr(rho A H)
    double rhs = 0;        // (hbar/2) d<A>/dt by central difference
    double deviation = 0;  // |lhs - rhs|
};

EhrenfestResult ehrenfest_check(const Operator& a_op, const Hamiltonian& h,
                                const DensityOperator& rho, double dt);

}  // namespace qstat
