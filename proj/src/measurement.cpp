#include "qstat/measurement.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qstat {

using nlohmann::json;

const Povm::Outcome& Povm::find(const std::string& label) const {
    for (const Outcome& o : outcomes)
        if (o.label == label) return o;
    throw MissingEstimate("no outcome labelled '" + label + "'");
}

Povm make_povm(std::vector<Povm::Outcome> outcomes) {
    Povm p;
    p.outcomes = std::move(outcomes);
    PovmReport r = validate_povm(p);
    if (!r.pass)
        throw NotPositive("POVM invalid: completeness deviation " +
                          std::to_string(r.completeness_deviation) + ", positivity deviation " +
                          std::to_string(r.positivity_deviation));
    return p;
}

PovmReport validate_povm(const Povm& p) {
    if (p.outcomes.empty()) throw EmptyPovm("POVM has no outcomes");
    int d = p.dim();
    if (d == 0) throw InvalidDimension("POVM elements are empty");
    const Tolerances& tol = tolerances();
    PovmReport r;
    Operator sum = Operator::Zero(d, d);
    bool shapes_ok = true;
    for (const Povm::Outcome& o : p.outcomes) {
        if (o.element.rows() != d || o.element.cols() != d) {
            shapes_ok = false;
            continue;
        }
        sum += o.element;
        double hdev = hermiticity_deviation(o.element);
        r.positivity_deviation = std::max(r.positivity_deviation, hdev);
        if (hdev <= tol.herm * std::max(1.0, o.element.cwiseAbs().maxCoeff())) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (o.element + o.element.adjoint()),
                                                     Eigen::EigenvaluesOnly);
            r.positivity_deviation =
                std::max(r.positivity_deviation, -es.eigenvalues().minCoeff());
        }
    }
    if (!shapes_ok) throw DimensionMismatch("POVM elements have mixed dimensions");
    r.completeness_deviation = (sum - Operator::Identity(d, d)).cwiseAbs().maxCoeff();
    r.pass = r.completeness_deviation <= 1e-10 && r.positivity_deviation <= tol.psd;
    return r;
}

Povm projective_povm(const Basis& basis) {
    std::vector<Povm::Outcome> outs;
    for (int i = 0; i < basis.dim(); ++i)
        outs.push_back({std::to_string(i), projector(basis.vec(i))});
    return make_povm(std::move(outs));
}

EstimateAssignment make_estimates(EstimateAssignment::Mode mode,
                                  std::map<std::string, Complex> values) {
    if (mode == EstimateAssignment::Mode::real_restricted)
        for (auto& [label, v] : values)
            if (v.imag() != 0.0)
                throw InvalidSpec("real-restricted estimate '" + label +
                                  "' has nonzero imaginary part");
    return {mode, std::move(values)};
}

double povm_probability(const Operator& element, const StateVector& psi) {
    require_same_dim(static_cast<int>(element.rows()), psi.dim(), "povm_probability");
    ValidityReport v = validate_operator(element, OperatorKind::povm_element);
    if (!v.pass)
        throw NotPositive("POVM element invalid, deviation " + std::to_string(v.deviation));
    double p = psi.amps.dot(element * psi.amps).real();
    const Tolerances& tol = tolerances();
    if (p < -tol.psd || p > 1 + tol.psd)
        throw NotPositive("probability " + std::to_string(p) + " outside [0,1]");
    return std::min(1.0, std::max(0.0, p));
}

double ozawa_error(const Operator& a_op, const Povm& povm, const EstimateAssignment& est,
                   const StateVector& psi) {
    int d = psi.dim();
    require_same_dim(static_cast<int>(a_op.rows()), d, "ozawa_error");
    require_same_dim(povm.dim(), d, "ozawa_error");
    double total = 0;
    for (const Povm::Outcome& o : povm.outcomes) {  // label order = declaration order
        auto it = est.values.find(o.label);
        if (it == est.values.end())
            throw MissingEstimate("no estimate for outcome '" + o.label + "'");
        Complex tilde = it->second;
        if (est.mode == EstimateAssignment::Mode::real_restricted && tilde.imag() != 0.0)
            throw InvalidSpec("real-restricted estimate '" + o.label + "' is complex");
        Vector dv = tilde * psi.amps - a_op * psi.amps;  // (est - A)|psi>
        total += dv.dot(o.element * dv).real();
    }
    return total;
}

Complex error_contribution(const Operator& a_op, const StateVector& m, Complex est_value,
                           const StateVector& psi) {
    require_same_dim(static_cast<int>(a_op.rows()), psi.dim(), "error_contribution");
    require_same_dim(m.dim(), psi.dim(), "error_contribution");
    return m.amps.dot(a_op * psi.amps) - est_value * overlap(m, psi);
}

double joint_quasiprobability(const Operator& element, const StateVector& a,
                              const StateVector& psi) {
    require_same_dim(static_cast<int>(element.rows()), a.dim(), "joint_quasiprobability");
    require_same_dim(a.dim(), psi.dim(), "joint_quasiprobability");
    // <psi|E_m|a><a|psi>
    Complex v = psi.amps.dot(element * a.amps) * overlap(a, psi);
    return v.real();
}

Complex optimal_estimate(const Operator& a_op, const StateVector& m, const StateVector& psi,
                         EstimateAssignment::Mode mode) {
    require_same_dim(static_cast<int>(a_op.rows()), psi.dim(), "optimal_estimate");
    require_same_dim(m.dim(), psi.dim(), "optimal_estimate");
    Complex ov = overlap(m, psi);
    if (std::abs(ov) <= tolerances().overlap)
        throw OrthogonalConditions("outcome and state have overlap " +
                                   std::to_string(std::abs(ov)));
    Complex wv = m.amps.dot(a_op * psi.amps) / ov;
    return mode == EstimateAssignment::Mode::complex_valued ? wv : Complex(wv.real(), 0.0);
}

Complex deterministic_value(const Operator& a_op, const StateVector& psi, const StateVector& m) {
    return optimal_estimate(a_op, m, psi, EstimateAssignment::Mode::complex_valued);
}

Complex expectation_from_deterministic(const Operator& a_op, const DensityOperator& rho,
                                       const Basis& basis_psi, const Basis& basis_m) {
    int d = rho.dim();
    require_same_dim(static_cast<int>(a_op.rows()), d, "expectation_from_deterministic");
    require_same_dim(basis_psi.dim(), d, "expectation_from_deterministic");
    require_same_dim(basis_m.dim(), d, "expectation_from_deterministic");
    const Matrix& p = basis_psi.cols;
    const Matrix& m = basis_m.cols;
    Matrix g = m.adjoint() * p;            // g(j,i) = <m_j|psi_i>
    Matrix num = m.adjoint() * a_op * p;   // num(j,i) = <m_j|A|psi_i>
    Matrix rm = p.adjoint() * rho.mat * m; // rm(i,j) = <psi_i|rho|m_j>
    Complex total = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (std::abs(g(j, i)) <= tolerances().overlap)
                throw VanishingOverlap("zero overlap at (psi=" + std::to_string(i) +
                                       ", m=" + std::to_string(j) + ")");
            Complex av = num(j, i) / g(j, i);      // A(psi_i, m_j)
            Complex weight = rm(i, j) * g(j, i);   // <psi_i|rho|m_j><m_j|psi_i>
            total += av * weight;
        }
    return total;
}

namespace {

Operator matrix_from_json(const json& rows, int dim, const std::string& where) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim * dim)
        throw SchemaError(where + ": matrix must hold dim*dim [re, im] pairs, row-major");
    Operator m(dim, dim);
    for (int k = 0; k < dim * dim; ++k) {
        const json& cell = rows[k];
        if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
            throw SchemaError(where + ": entry " + std::to_string(k) + " is not an [re, im] pair");
        m(k / dim, k % dim) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
    return m;
}

json matrix_to_json(const Operator& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            rows.push_back({m(r, c).real(), m(r, c).imag()});
    return rows;
}

}  // namespace

Povm povm_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what());
    }
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("outcomes"))
        throw SchemaError("POVM document needs 'dim' and 'outcomes'");
    if (!doc["dim"].is_number_integer() || doc["dim"].get<int>() <= 0)
        throw SchemaError("/dim: must be a positive integer");
    int dim = doc["dim"].get<int>();
    if (!doc["outcomes"].is_array() || doc["outcomes"].empty())
        throw SchemaError("/outcomes: must be a non-empty array");
    std::vector<Povm::Outcome> outs;
    int k = 0;
    for (const json& o : doc["outcomes"]) {
        std::string where = "/outcomes/" + std::to_string(k++);
        if (!o.is_object() || !o.contains("label") || !o.contains("matrix"))
            throw SchemaError(where + ": needs 'label' and 'matrix'");
        if (!o["label"].is_string()) throw SchemaError(where + "/label: must be a string");
        outs.push_back({o["label"].get<std::string>(),
                        matrix_from_json(o["matrix"], dim, where + "/matrix")});
    }
    return make_povm(std::move(outs));
}

std::string povm_to_json_text(const Povm& p) {
    json doc;
    doc["dim"] = p.dim();
    doc["outcomes"] = json::array();
    for (const Povm::Outcome& o : p.outcomes)
        doc["outcomes"].push_back({{"label", o.label}, {"matrix", matrix_to_json(o.element)}});
    return doc.dump(2);
}

Povm load_povm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SyntaxError("cannot open POVM file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return povm_from_json_text(ss.str());
}

void save_povm_file(const Povm& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SyntaxError("cannot write POVM file '" + path + "'");
    out << povm_to_json_text(p) << "\n";
}

}  // namespace qstat
