#include "qstat/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace qstat {

Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

namespace {

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

std::string dim_msg(const char* where, int a, int b) {
    std::ostringstream os;
    os << where << ": dimensions " << a << " and " << b << " differ";
    return os.str();
}

}  // namespace

void require_same_dim(int a, int b, const char* where) {
    if (a != b) throw DimensionMismatch(dim_msg(where, a, b));
}

StateVector::StateVector(Vector v) : amps(std::move(v)) {
    if (amps.size() == 0) throw InvalidDimension("state vector is empty");
    if (!amps.allFinite()) throw NotNormalized("state vector has non-finite amplitudes");
    double n = amps.norm();
    if (std::abs(n - 1.0) > tolerances().norm)
        throw NotNormalized("state vector norm " + std::to_string(n) + " is not 1");
}

DensityOperator::DensityOperator(Operator m) : mat(std::move(m)) {
    if (mat.rows() == 0 || mat.rows() != mat.cols())
        throw InvalidDimension("density operator must be square and nonempty");
    if (!all_finite(mat)) throw NotHermitian("density operator has non-finite entries");
    const Tolerances& tol = tolerances();
    double hdev = hermiticity_deviation(mat);
    double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
    if (hdev > tol.herm * scale)
        throw NotHermitian("density operator deviates from Hermitian by " + std::to_string(hdev));
    double tr = mat.trace().real();
    if (std::abs(tr - 1.0) > tol.norm)
        throw NotNormalized("density operator trace " + std::to_string(tr) + " is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (mat + mat.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol.psd)
        throw NotPositive("density operator has eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
}

int Spectrum::group_of(int n) const {
    for (int g = 0; g < static_cast<int>(groups.size()); ++g)
        for (int i : groups[g])
            if (i == n) return g;
    throw UndefinedLevel("level index " + std::to_string(n) + " out of range");
}

Basis::Basis(Matrix m) : cols(std::move(m)) {
    if (cols.rows() == 0 || cols.rows() != cols.cols())
        throw InvalidDimension("basis must hold dim vectors of length dim");
    Matrix gram = cols.adjoint() * cols;
    double dev = (gram - Matrix::Identity(cols.cols(), cols.cols())).cwiseAbs().maxCoeff();
    if (dev > tolerances().orth)
        throw NotNormalized("basis vectors deviate from orthonormal by " + std::to_string(dev));
}

double hermiticity_deviation(const Operator& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& m) {
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return hermiticity_deviation(m) <= tolerances().herm * scale;
}

ValidityReport validate_operator(const Operator& op, OperatorKind kind) {
    if (op.rows() == 0 || op.cols() == 0)
        throw InvalidDimension("operator has zero dimension");
    if (op.rows() != op.cols())
        return {false, 0.0, "not square"};
    if (!all_finite(op))
        return {false, std::numeric_limits<double>::infinity(), "non-finite entries"};

    const Tolerances& tol = tolerances();
    double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
    ValidityReport r;
    switch (kind) {
        case OperatorKind::hermitian: {
            r.deviation = hermiticity_deviation(op);
            r.pass = r.deviation <= tol.herm * scale;
            r.detail = "max|M - M^dagger|";
            break;
        }
        case OperatorKind::unitary: {
            Matrix g = op.adjoint() * op;
            r.deviation = (g - Matrix::Identity(op.rows(), op.cols())).cwiseAbs().maxCoeff();
            r.pass = r.deviation <= tol.orth;
            r.detail = "max|U^dagger U - I|";
            break;
        }
        case OperatorKind::density: {
            double hdev = hermiticity_deviation(op);
            double tdev = std::abs(op.trace().real() - 1.0) + std::abs(op.trace().imag());
            double pdev = 0.0;
            if (hdev <= tol.herm * scale) {
                Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (op + op.adjoint()),
                                                         Eigen::EigenvaluesOnly);
                pdev = std::max(0.0, -es.eigenvalues().minCoeff());
            }
            r.deviation = std::max({hdev, tdev, pdev});
            r.pass = hdev <= tol.herm * scale && tdev <= tol.norm && pdev <= tol.psd;
            r.detail = "max of Hermiticity, trace-one, negativity deviations";
            break;
        }
        case OperatorKind::povm_element: {
            double hdev = hermiticity_deviation(op);
            double pdev = 0.0;
            if (hdev <= tol.herm * scale) {
                Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (op + op.adjoint()),
                                                         Eigen::EigenvaluesOnly);
                pdev = std::max(0.0, -es.eigenvalues().minCoeff());
            }
            r.deviation = std::max(hdev, pdev);
            r.pass = hdev <= tol.herm * scale && pdev <= tol.psd;
            r.detail = "max of Hermiticity and negativity deviations";
            break;
        }
    }
    return r;
}

Spectrum eigendecompose(const Operator& op) {
    if (op.rows() == 0) throw InvalidDimension("cannot decompose an empty operator");
    if (op.rows() != op.cols()) throw InvalidDimension("operator is not square");
    double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
    double hdev = hermiticity_deviation(op);
    if (hdev > tolerances().herm * scale)
        throw NotHermitian("deviation " + std::to_string(hdev) + " exceeds tolerance");

    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (op + op.adjoint()));
    if (es.info() != Eigen::Success) throw NotHermitian("eigensolver failed to converge");

    Spectrum s;
    int d = static_cast<int>(op.rows());
    s.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
    s.vectors = es.eigenvectors();

    // deterministic phase: first amplitude with modulus above 1e-12 made real positive
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            Complex v = s.vectors(i, k);
            if (std::abs(v) > 1e-12) {
                s.vectors.col(k) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }

    double range = s.values.back() - s.values.front();
    double tol_deg = std::max(tolerances().deg_rel * range, tolerances().deg_floor);
    s.groups.push_back({0});
    for (int i = 1; i < d; ++i) {
        if (s.values[i] - s.values[i - 1] <= tol_deg)
            s.groups.back().push_back(i);
        else
            s.groups.push_back({i});
    }
    return s;
}

Operator reconstruct(const Spectrum& s) {
    int d = s.dim();
    Operator out = Operator::Zero(d, d);
    for (int n = 0; n < d; ++n)
        out += s.values[n] * (s.vectors.col(n) * s.vectors.col(n).adjoint());
    return out;
}

Operator commutator(const Operator& a, const Operator& b) {
    require_same_dim(static_cast<int>(a.rows()), static_cast<int>(b.rows()), "commutator");
    require_same_dim(static_cast<int>(a.cols()), static_cast<int>(b.cols()), "commutator");
    return a * b - b * a;
}

Complex expectation(const Operator& op, const DensityOperator& rho) {
    require_same_dim(static_cast<int>(op.rows()), rho.dim(), "expectation");
    return (rho.mat * op).trace();
}

Operator projector(const StateVector& s) {
    return s.amps * s.amps.adjoint();
}

Complex overlap(const StateVector& a, const StateVector& b) {
    require_same_dim(a.dim(), b.dim(), "overlap");
    return a.amps.dot(b.amps);  // Eigen's dot conjugates the first argument
}

}  // namespace qstat
