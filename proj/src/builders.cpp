#include "qstat/builders.hpp"

#include <cmath>
#include <random>

namespace qstat {

namespace {

bool is_half_integer(double j) {
    return j >= 0 && std::abs(2 * j - std::round(2 * j)) < 1e-9;
}

}  // namespace

Operator pauli_x() {
    Operator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Operator pauli_y() {
    Operator m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Operator pauli_z() {
    Operator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Operator identity(int dim) {
    if (dim <= 0) throw InvalidDimension("identity requires positive dimension");
    return Operator::Identity(dim, dim);
}

SpinOperators spin_operators(double j, double hbar) {
    if (!is_half_integer(j)) throw InvalidSpec("spin j must be a nonnegative half-integer");
    int d = static_cast<int>(std::round(2 * j)) + 1;
    Operator jz = Operator::Zero(d, d);
    Operator jp = Operator::Zero(d, d);  // raising: J+|j,m> = hbar sqrt(j(j+1)-m(m+1)) |j,m+1>
    for (int k = 0; k < d; ++k) {
        double m = j - k;
        jz(k, k) = hbar * m;
        if (k >= 1) jp(k - 1, k) = hbar * std::sqrt(j * (j + 1) - m * (m + 1));
    }
    Operator jm = jp.adjoint();
    SpinOperators s;
    s.jx = 0.5 * (jp + jm);
    s.jy = Complex(0, -0.5) * (jp - jm);
    s.jz = jz;
    s.j = j;
    s.hbar = hbar;
    return s;
}

StateVector spin_coherent(double j, double theta, double phi) {
    return twisted_spin_coherent(j, theta, phi, 0.0);
}

StateVector twisted_spin_coherent(double j, double theta, double phi, double q) {
    if (!is_half_integer(j)) throw InvalidSpec("spin j must be a nonnegative half-integer");
    int d = static_cast<int>(std::round(2 * j)) + 1;
    Vector v(d);
    double ct = std::cos(theta / 2);
    double st = std::sin(theta / 2);
    for (int k = 0; k < d; ++k) {
        double m = j - k;
        // sqrt(C(2j,k)) via lgamma to stay finite for large j
        double lbin = 0.5 * (std::lgamma(2 * j + 1) - std::lgamma(k + 1) - std::lgamma(2 * j - k + 1));
        double mag = std::exp(lbin) * std::pow(ct, 2 * j - k) * std::pow(st, k);
        double phase = k * phi - q * m * m;
        v(k) = mag * Complex(std::cos(phase), std::sin(phase));
    }
    v /= v.norm();
    return StateVector(v);
}

Operator number_operator(int dim) {
    if (dim <= 0) throw InvalidDimension("number operator requires positive dimension");
    Operator n = Operator::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = k;
    return n;
}

StateVector coherent_packet(int dim, Complex alpha) {
    if (dim <= 0) throw InvalidDimension("coherent packet requires positive dimension");
    Vector v(dim);
    v(0) = 1.0;
    for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
    v /= v.norm();
    return StateVector(v);
}

Basis standard_basis(int dim) {
    if (dim <= 0) throw InvalidDimension("basis requires positive dimension");
    return Basis(Matrix::Identity(dim, dim));
}

Basis fourier_basis(int dim) {
    if (dim <= 0) throw InvalidDimension("basis requires positive dimension");
    Matrix f(dim, dim);
    double s = 1.0 / std::sqrt(double(dim));
    for (int r = 0; r < dim; ++r)
        for (int k = 0; k < dim; ++k) {
            double ang = 2 * M_PI * r * k / dim;
            f(r, k) = s * Complex(std::cos(ang), std::sin(ang));
        }
    return Basis(f);
}

namespace {

Matrix random_complex(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            double re = dist(gen);
            double im = dist(gen);
            m(r, c) = Complex(re, im);
        }
    return m;
}

}  // namespace

Operator random_hermitian(int dim, std::uint64_t seed) {
    if (dim <= 0) throw InvalidDimension("random operator requires positive dimension");
    std::mt19937_64 gen(seed);
    Matrix g = random_complex(dim, gen);
    return 0.5 * (g + g.adjoint());
}

StateVector random_state(int dim, std::uint64_t seed) {
    if (dim <= 0) throw InvalidDimension("random state requires positive dimension");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
        double re = dist(gen);
        double im = dist(gen);
        v(i) = Complex(re, im);
    }
    v /= v.norm();
    return StateVector(v);
}

DensityOperator random_density(int dim, std::uint64_t seed) {
    if (dim <= 0) throw InvalidDimension("random density requires positive dimension");
    std::mt19937_64 gen(seed);
    Matrix g = random_complex(dim, gen);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityOperator(rho);
}

Basis random_basis(int dim, std::uint64_t seed) {
    if (dim <= 0) throw InvalidDimension("random basis requires positive dimension");
    std::mt19937_64 gen(seed);
    Matrix g = random_complex(dim, gen);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    // fix phases so the construction is deterministic and well conditioned
    for (int k = 0; k < dim; ++k) {
        Complex v = q(0, k);
        if (std::abs(v) > 1e-12) q.col(k) *= std::conj(v) / std::abs(v);
    }
    return Basis(q);
}

}  // namespace qstat
