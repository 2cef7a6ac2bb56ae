#include "qstat/statistics.hpp"

#include <cmath>
#include <string>

namespace qstat {

namespace {

std::string pair_msg(const char* what, int a, int b) {
    return std::string(what) + " at basis pair (a=" + std::to_string(a) +
           ", b=" + std::to_string(b) + ")";
}

}  // namespace

double born_probability(const StateVector& a, const StateVector& b) {
    return std::norm(overlap(b, a));
}

DiracDistribution dirac_distribution(const DensityOperator& rho, const Basis& basis_a,
                                     const Basis& basis_b) {
    require_same_dim(rho.dim(), basis_a.dim(), "dirac_distribution");
    require_same_dim(rho.dim(), basis_b.dim(), "dirac_distribution");
    const Matrix& a = basis_a.cols;
    const Matrix& b = basis_b.cols;
    // table(i,j) = <b_j|a_i> <a_i|rho|b_j>
    Matrix g = (b.adjoint() * a).transpose();  // g(i,j) = <b_j|a_i>
    Matrix m = a.adjoint() * rho.mat * b;      // m(i,j) = <a_i|rho|b_j>
    DiracDistribution d;
    d.basis_a = basis_a;
    d.basis_b = basis_b;
    d.table = g.cwiseProduct(m);
    return d;
}

DensityOperator reconstruct_state(const DiracDistribution& dist) {
    int d = dist.dim();
    const Matrix& a = dist.basis_a.cols;
    const Matrix& b = dist.basis_b.cols;
    Matrix g = (b.adjoint() * a).transpose();  // g(i,j) = <b_j|a_i>
    Matrix x(d, d);                            // x(i,j) = <a_i|rho|b_j>
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (std::abs(g(i, j)) <= tolerances().overlap)
                throw VanishingOverlap(pair_msg("zero overlap", i, j));
            x(i, j) = dist.table(i, j) / g(i, j);
        }
    Matrix rho = a * x * b.adjoint();
    // round-trip noise can leave tiny Hermiticity and trace residues
    rho = 0.5 * (rho + rho.adjoint());
    return DensityOperator(rho);
}

WeakValueRecord weak_value(const Operator& m, const StateVector& pre, const StateVector& post) {
    require_same_dim(static_cast<int>(m.rows()), pre.dim(), "weak_value");
    require_same_dim(pre.dim(), post.dim(), "weak_value");
    Complex ov = overlap(post, pre);
    if (std::abs(ov) <= tolerances().overlap)
        throw OrthogonalConditions("post and pre conditions have overlap " +
                                   std::to_string(std::abs(ov)));
    WeakValueRecord r;
    r.value = post.amps.dot(m * pre.amps) / ov;
    r.pre = pre;
    r.post = post;
    r.overlap_mag = std::abs(ov);
    return r;
}

Matrix weak_table(const Operator& m, const Basis& basis_a, const Basis& basis_b) {
    require_same_dim(static_cast<int>(m.rows()), basis_a.dim(), "weak_table");
    require_same_dim(basis_a.dim(), basis_b.dim(), "weak_table");
    int d = basis_a.dim();
    const Matrix& a = basis_a.cols;
    const Matrix& b = basis_b.cols;
    Matrix g = b.adjoint() * a;       // g(j,i) = <b_j|a_i>
    Matrix num = b.adjoint() * m * a; // num(j,i) = <b_j|M|a_i>
    Matrix t(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            if (std::abs(g(j, i)) <= tolerances().overlap)
                throw VanishingOverlap(pair_msg("zero overlap", i, j));
            t(j, i) = num(j, i) / g(j, i);
        }
    return t;
}

Operator operator_from_weak_values(const Matrix& table, const Basis& basis_a,
                                   const Basis& basis_b) {
    require_same_dim(static_cast<int>(table.rows()), basis_a.dim(), "operator_from_weak_values");
    require_same_dim(basis_a.dim(), basis_b.dim(), "operator_from_weak_values");
    const Matrix& a = basis_a.cols;
    const Matrix& b = basis_b.cols;
    Matrix g = b.adjoint() * a;  // g(j,i) = <b_j|a_i>
    for (int j = 0; j < g.rows(); ++j)
        for (int i = 0; i < g.cols(); ++i)
            if (std::abs(g(j, i)) <= tolerances().overlap)
                throw VanishingOverlap(pair_msg("zero overlap", i, j));
    // M = sum_{a,b} t(b,a) |b><b|a><a| = B (t .* g) A^dagger
    return b * table.cwiseProduct(g) * a.adjoint();
}

Complex complex_conditional_probability(const StateVector& mid, const StateVector& a,
                                        const StateVector& b) {
    require_same_dim(mid.dim(), a.dim(), "complex_conditional_probability");
    require_same_dim(a.dim(), b.dim(), "complex_conditional_probability");
    Complex ov = overlap(b, a);
    if (std::abs(ov) <= tolerances().overlap)
        throw OrthogonalConditions("conditions a and b have overlap " +
                                   std::to_string(std::abs(ov)));
    return overlap(b, mid) * overlap(mid, a) / ov;
}

ProbabilityReconstruction reconstruct_probability(const Basis& mid_basis,
                                                  const DiracDistribution& dist) {
    int d = dist.dim();
    require_same_dim(mid_basis.dim(), d, "reconstruct_probability");
    const Matrix& a = dist.basis_a.cols;
    const Matrix& b = dist.basis_b.cols;
    Matrix g = (b.adjoint() * a).transpose();   // g(i,j) = <b_j|a_i>
    Matrix bm = b.adjoint() * mid_basis.cols;   // bm(j,m) = <b_j|mid_m>
    Matrix ma = mid_basis.cols.adjoint() * a;   // ma(m,i) = <mid_m|a_i>
    ProbabilityReconstruction out;
    out.p.resize(d);
    for (int m = 0; m < d; ++m) {
        Complex sum = 0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (std::abs(g(i, j)) <= tolerances().overlap)
                    throw VanishingOverlap(pair_msg("zero overlap", i, j));
                Complex cond = bm(j, m) * ma(m, i) / g(i, j);  // P(m|a_i,b_j)
                sum += cond * dist.table(i, j);
            }
        out.p[m] = sum.real();
        out.max_imag = std::max(out.max_imag, std::abs(sum.imag()));
    }
    return out;
}

double conditional_action(const Hamiltonian& h, const StateVector& a, const StateVector& b,
                          int n) {
    require_same_dim(h.dim(), a.dim(), "conditional_action");
    require_same_dim(a.dim(), b.dim(), "conditional_action");
    if (n < 0 || n >= h.dim()) throw UndefinedLevel("level " + std::to_string(n) + " out of range");
    Complex ov = overlap(b, a);
    if (std::abs(ov) <= tolerances().overlap)
        throw OrthogonalConditions("conditions a and b have overlap " +
                                   std::to_string(std::abs(ov)));
    const Matrix& v = h.spectrum.vectors;
    Complex c = b.amps.dot(v.col(n)) * v.col(n).dot(a.amps);
    if (std::abs(c) <= tolerances().weight)
        throw UndefinedLevel("level " + std::to_string(n) + " carries weight " +
                             std::to_string(std::abs(c)));
    return h.hbar * std::arg(c / ov);
}

std::vector<CoarseGrainBin> coarse_grain(const Hamiltonian& h, const StateVector& a,
                                         const StateVector& b, double window) {
    require_same_dim(h.dim(), a.dim(), "coarse_grain");
    require_same_dim(a.dim(), b.dim(), "coarse_grain");
    if (!(window > 0)) throw InvalidWindow("window must be positive");
    Complex ov = overlap(b, a);
    if (std::abs(ov) <= tolerances().overlap)
        throw OrthogonalConditions("conditions a and b have overlap " +
                                   std::to_string(std::abs(ov)));

    const Spectrum& s = h.spectrum;
    double emin = s.values.front();
    double range = s.values.back() - emin;
    int nbins = std::max(1, static_cast<int>(std::ceil(range / window)));
    std::vector<CoarseGrainBin> bins(nbins);
    for (int k = 0; k < nbins; ++k) bins[k].center = emin + (k + 0.5) * window;

    const Matrix& v = s.vectors;
    for (int n = 0; n < h.dim(); ++n) {
        Complex c = b.amps.dot(v.col(n)) * v.col(n).dot(a.amps) / ov;
        int k = std::min(static_cast<int>((s.values[n] - emin) / window), nbins - 1);
        bins[k].mass += c;
    }
    return bins;
}

double imaginary_correlation(const Operator& a_op, const Operator& b_op,
                             const DensityOperator& rho) {
    require_same_dim(static_cast<int>(a_op.rows()), static_cast<int>(b_op.rows()),
                     "imaginary_correlation");
    require_same_dim(static_cast<int>(a_op.rows()), rho.dim(), "imaginary_correlation");
    if (!is_hermitian(a_op)) throw NotHermitian("first operator is not Hermitian");
    if (!is_hermitian(b_op)) throw NotHermitian("second operator is not Hermitian");
    return (rho.mat * a_op * b_op).trace().imag();
}

EhrenfestResult ehrenfest_check(const Operator& a_op, const Hamiltonian& h,
                                const DensityOperator& rho, double dt) {
    require_same_dim(static_cast<int>(a_op.rows()), h.dim(), "ehrenfest_check");
    require_same_dim(h.dim(), rho.dim(), "ehrenfest_check");
    if (!(dt > 0)) throw InvalidSpec("dt must be positive");
    EhrenfestResult r;
    r.lhs = (rho.mat * a_op * h.op).trace().imag();
    Operator up = unitary_evolution(h, dt);
    Operator um = unitary_evolution(h, -dt);
    double ap = ((up * rho.mat * up.adjoint()) * a_op).trace().real();
    double am = ((um * rho.mat * um.adjoint()) * a_op).trace().real();
    r.rhs = 0.5 * h.hbar * (ap - am) / (2 * dt);
    r.deviation = std::abs(r.lhs - r.rhs);
    return r;
}

}  // namespace qstat
