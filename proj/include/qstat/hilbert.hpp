#pragma once

#include <string>
#include <vector>

#include "qstat/config.hpp"
#include "qstat/errors.hpp"

namespace qstat {

// Observables, unitaries, density matrices and POVM elements are all plain
// dense complex matrices; the wrappers below only exist where a type carries
// an invariant worth enforcing at construction.
using Operator = Matrix;

struct StateVector {
    Vector amps;

    StateVector() = default;
    explicit StateVector(Vector v);  // checks finiteness and unit norm
    int dim() const { return static_cast<int>(amps.size()); }
};

struct DensityOperator {
    Operator mat;

    DensityOperator() = default;
    explicit DensityOperator(Operator m);  // Hermitian, trace one, PSD
    int dim() const { return static_cast<int>(mat.rows()); }
};

// Eigendecomposition of a Hermitian operator with degeneracy grouping.
// Eigenvalues ascend; eigenvectors sit in the columns of `vectors` in the
// same order, each with its first nonvanishing amplitude phased real
// positive so repeated calls are bit-identical.
struct Spectrum {
    std::vector<double> values;
    Matrix vectors;
    std::vector<std::vector<int>> groups;  // indices sharing an eigenvalue within tol

    int dim() const { return static_cast<int>(values.size()); }
    StateVector eigenstate(int n) const { return StateVector(vectors.col(n)); }
    int group_of(int n) const;
};

struct Basis {
    Matrix cols;  // one orthonormal vector per column

    Basis() = default;
    explicit Basis(Matrix m);  // checks orthonormality
    int dim() const { return static_cast<int>(cols.rows()); }
    StateVector vec(int i) const { return StateVector(cols.col(i)); }
};

enum class OperatorKind { hermitian, unitary, density, povm_element };

struct ValidityReport {
    bool pass = false;
    double deviation = 0.0;
    std::string detail;
};

// max-entry modulus of M - M^dagger
double hermiticity_deviation(const Operator& m);
// true within tolerances().herm scaled by max(1, max|entry|)
bool is_hermitian(const Operator& m);

ValidityReport validate_operator(const Operator& op, OperatorKind kind);

Spectrum eigendecompose(const Operator& op);
Operator reconstruct(const Spectrum& s);

Operator commutator(const Operator& a, const Operator& b);
Complex expectation(const Operator& op, const DensityOperator& rho);
Operator projector(const StateVector& s);
// inner product, conjugating the first argument
Complex overlap(const StateVector& a, const StateVector& b);

void require_same_dim(int a, int b, const char* where);

}  // namespace qstat
