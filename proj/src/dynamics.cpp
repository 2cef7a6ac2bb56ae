#include "qstat/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace qstat {

Hamiltonian::Hamiltonian(Operator energy, double hbar_value)
    : op(std::move(energy)), hbar(hbar_value) {
    if (hbar <= 0) throw InvalidSpec("hbar must be positive");
    spectrum = eigendecompose(op);  // throws NotHermitian for invalid input
}

Hamiltonian oscillator_hamiltonian(int dim, double omega, double hbar) {
    if (dim <= 0) throw InvalidDimension("oscillator requires positive dimension");
    Operator h = Operator::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) h(n, n) = hbar * omega * (n + 0.5);
    return Hamiltonian(h, hbar);
}

DensityOperator thermal_state(const Hamiltonian& h, double temperature, double k_B,
                              bool zero_limit) {
    int d = h.dim();
    const Spectrum& s = h.spectrum;
    if (zero_limit) {
        const std::vector<int>& ground = s.groups.front();
        Operator rho = Operator::Zero(d, d);
        for (int n : ground) rho += s.vectors.col(n) * s.vectors.col(n).adjoint();
        rho /= double(ground.size());
        return DensityOperator(rho);
    }
    if (!(temperature > 0)) throw InvalidTemperature("temperature must be positive");
    if (!(k_B > 0)) throw InvalidTemperature("k_B must be positive");

    double emin = s.values.front();
    double z = 0;
    std::vector<double> w(d);
    for (int n = 0; n < d; ++n) {
        w[n] = std::exp(-(s.values[n] - emin) / (k_B * temperature));
        z += w[n];
    }
    Operator rho = Operator::Zero(d, d);
    for (int n = 0; n < d; ++n)
        rho += (w[n] / z) * (s.vectors.col(n) * s.vectors.col(n).adjoint());
    return DensityOperator(rho);
}

Operator unitary_evolution(const Hamiltonian& h, double t) {
    if (!std::isfinite(t)) throw InvalidSpec("evolution time must be finite");
    int d = h.dim();
    const Spectrum& s = h.spectrum;
    Vector phases(d);
    for (int n = 0; n < d; ++n) {
        double arg = -s.values[n] * t / h.hbar;
        phases(n) = Complex(std::cos(arg), std::sin(arg));
    }
    return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
}

DensityOperator dephase(const DensityOperator& rho, const Operator& observable) {
    require_same_dim(rho.dim(), static_cast<int>(observable.rows()), "dephase");
    Spectrum s = eigendecompose(observable);  // NotHermitian if invalid
    int d = rho.dim();
    Operator out = Operator::Zero(d, d);
    for (const std::vector<int>& group : s.groups) {
        Matrix p = Matrix::Zero(d, d);
        for (int n : group) p += s.vectors.col(n) * s.vectors.col(n).adjoint();
        out += p * rho.mat * p;
    }
    return DensityOperator(out);
}

double bohr_period(const Hamiltonian& h, int n, int m) {
    const Spectrum& s = h.spectrum;
    if (n < 0 || n >= h.dim() || m < 0 || m >= h.dim())
        throw UndefinedLevel("level index out of range");
    if (s.group_of(n) == s.group_of(m))
        throw DegeneratePair("levels " + std::to_string(n) + " and " + std::to_string(m) +
                             " are degenerate");
    return 2 * M_PI * h.hbar / std::abs(s.values[n] - s.values[m]);
}

namespace {

// per-level complex weights <b|psi_n><psi_n|a>
Vector level_amplitudes(const StateVector& a, const StateVector& b, const Hamiltonian& h) {
    require_same_dim(a.dim(), h.dim(), "level amplitudes");
    require_same_dim(b.dim(), h.dim(), "level amplitudes");
    const Matrix& v = h.spectrum.vectors;
    Vector out(h.dim());
    // dot conjugates its first argument: b.dot(psi) = <b|psi>
    for (int n = 0; n < h.dim(); ++n)
        out(n) = b.amps.dot(v.col(n)) * v.col(n).dot(a.amps);
    return out;
}

}  // namespace

double transition_probability(const StateVector& a, const StateVector& b, const Hamiltonian& h,
                              double t) {
    Vector c = level_amplitudes(a, b, h);
    Complex sum = 0;
    for (int n = 0; n < h.dim(); ++n) {
        double arg = -h.spectrum.values[n] * t / h.hbar;
        sum += Complex(std::cos(arg), std::sin(arg)) * c(n);
    }
    return std::norm(sum);
}

const ActionProfile::Level& ActionProfile::at(int n) const {
    if (n < 0 || n >= static_cast<int>(levels.size()))
        throw UndefinedLevel("level index " + std::to_string(n) + " out of range");
    return levels[n];
}

ActionProfile transformation_action(const StateVector& a, const StateVector& b,
                                    const Hamiltonian& h, bool unwrap) {
    Vector c = level_amplitudes(a, b, h);
    ActionProfile p;
    p.hbar = h.hbar;
    p.unwrapped = unwrap;
    p.levels.resize(h.dim());
    for (int n = 0; n < h.dim(); ++n) {
        ActionProfile::Level& lv = p.levels[n];
        lv.n = n;
        lv.energy = h.spectrum.values[n];
        lv.weight = std::abs(c(n));
        lv.defined = lv.weight > tolerances().weight;
        lv.action = lv.defined ? h.hbar * std::arg(c(n)) : 0.0;
    }
    if (unwrap) {
        double period = 2 * M_PI * h.hbar;
        bool have_prev = false;
        double prev = 0;
        for (ActionProfile::Level& lv : p.levels) {
            if (!lv.defined) continue;
            if (have_prev) lv.action += period * std::round((prev - lv.action) / period);
            prev = lv.action;
            have_prev = true;
        }
    }
    return p;
}

double propagation_time(const ActionProfile& profile, int n) {
    if (!profile.unwrapped)
        throw std::invalid_argument("propagation_time requires an unwrapped profile");
    if (n <= 0 || n >= static_cast<int>(profile.levels.size()) - 1)
        throw UndefinedLevel("level " + std::to_string(n) + " is not interior");
    const ActionProfile::Level& lo = profile.at(n - 1);
    const ActionProfile::Level& mid = profile.at(n);
    const ActionProfile::Level& hi = profile.at(n + 1);
    if (!lo.defined || !mid.defined || !hi.defined)
        throw UndefinedLevel("levels " + std::to_string(n - 1) + ".." + std::to_string(n + 1) +
                             " must all carry weight");
    double de = hi.energy - lo.energy;
    if (std::abs(de) < tolerances().deg_floor)
        throw DegenerateEnergies("energies around level " + std::to_string(n) + " coincide");
    return (hi.action - lo.action) / de;
}

double classical_intersection_energy(const ActionProfile& profile) {
    if (!profile.unwrapped)
        throw std::invalid_argument("classical_intersection_energy requires an unwrapped profile");
    // gradients between consecutive defined levels, evaluated at midpoints
    std::vector<double> grad, mid;
    const ActionProfile::Level* prev = nullptr;
    for (const ActionProfile::Level& lv : profile.levels) {
        if (!lv.defined) continue;
        if (prev) {
            double de = lv.energy - prev->energy;
            if (std::abs(de) > tolerances().deg_floor) {
                grad.push_back((lv.action - prev->action) / de);
                mid.push_back(0.5 * (lv.energy + prev->energy));
            }
        }
        prev = &lv;
    }
    if (grad.size() < 2)
        throw NoStationaryPoint("fewer than 3 defined levels");
    for (std::size_t k = 0; k + 1 < grad.size(); ++k) {
        if (grad[k] == 0.0) return mid[k];
        if (grad[k] * grad[k + 1] < 0) {
            double f = grad[k] / (grad[k] - grad[k + 1]);
            return mid[k] + f * (mid[k + 1] - mid[k]);
        }
    }
    if (grad.back() == 0.0) return mid.back();
    throw NoStationaryPoint("action gradient never changes sign");
}

std::pair<double, double> peak_time_scan(const StateVector& a, const StateVector& b,
                                         const Hamiltonian& h,
                                         const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw EmptyGrid("time grid is empty");
    double best_t = t_grid.front();
    double best_p = -1;
    for (double t : t_grid) {
        double p = transition_probability(a, b, h, t);
        if (p > best_p || (p == best_p && t < best_t)) {
            best_p = p;
            best_t = t;
        }
    }
    return {best_t, best_p};
}

}  // namespace qstat
