#pragma once

#include <map>
#include <string>
#include <vector>

#include "qstat/hilbert.hpp"

namespace qstat {

// Positive operator-valued measure: labelled elements summing to identity.
struct Povm {
    struct Outcome {
        std::string label;
        Operator element;
    };
    std::vector<Outcome> outcomes;

    int dim() const { return outcomes.empty() ? 0 : static_cast<int>(outcomes[0].element.rows()); }
    const Outcome& find(const std::string& label) const;
};

// construct and fully validate (positivity of elements, completeness)
Povm make_povm(std::vector<Povm::Outcome> outcomes);

struct PovmReport {
    bool pass = false;
    double completeness_deviation = 0;  // max|sum E_m - I|
    double positivity_deviation = 0;    // most negative element eigenvalue, flipped
};

PovmReport validate_povm(const Povm& p);

// projective POVM from an orthonormal basis, labels "0", "1", ...
Povm projective_povm(const Basis& basis);

// per-outcome estimated values for a target observable
struct EstimateAssignment {
    enum class Mode { complex_valued, real_restricted };
    Mode mode = Mode::complex_valued;
    std::map<std::string, Complex> values;
};

EstimateAssignment make_estimates(EstimateAssignment::Mode mode,
                                  std::map<std::string, Complex> values);

// <psi|E_m|psi>, clamped into [0,1] when within tolerance of the bounds
double povm_probability(const Operator& element, const StateVector& psi);

// eps^2(A) = sum_m <psi|(est_m - A)^dagger E_m (est_m - A)|psi>; the adjoint
// on the left factor keeps the sum real and nonnegative for complex
// estimates and reduces to the textbook form for real ones
double ozawa_error(const Operator& a_op, const Povm& povm, const EstimateAssignment& est,
                   const StateVector& psi);

// single projective outcome's share: <m|(A - est)|psi>; squared magnitudes
// summed over a projective POVM reproduce ozawa_error
Complex error_contribution(const Operator& a_op, const StateVector& m, Complex est_value,
                           const StateVector& psi);

// P(m, a|psi) = Re(<psi|E_m|a><a|psi>); marginals recover POVM and Born
// probabilities, individual entries may be negative
double joint_quasiprobability(const Operator& element, const StateVector& a,
                              const StateVector& psi);

// complex mode: the weak value <m|A|psi>/<m|psi>, which zeroes the error
// contribution; real-restricted mode: its real part, the best real choice
Complex optimal_estimate(const Operator& a_op, const StateVector& m, const StateVector& psi,
                         EstimateAssignment::Mode mode);

// the value assigned jointly by preparation psi and outcome m; equal to the
// complex-mode optimal estimate, and additive over operator sums whose
// terms have psi and m as eigenstates
Complex deterministic_value(const Operator& a_op, const StateVector& psi, const StateVector& m);

// <A> = sum_{m,psi} A(psi,m) rho(m,psi) with rho(m,psi) = <psi|rho|m><m|psi>
Complex expectation_from_deterministic(const Operator& a_op, const DensityOperator& rho,
                                       const Basis& basis_psi, const Basis& basis_m);

// JSON (de)serialization; schema {"dim": n, "outcomes": [{"label": s,
// "matrix": [[re, im], ...]}]} with matrices row-major
Povm povm_from_json_text(const std::string& text);
std::string povm_to_json_text(const Povm& p);
Povm load_povm_file(const std::string& path);
void save_povm_file(const Povm& p, const std::string& path);

}  // namespace qstat
