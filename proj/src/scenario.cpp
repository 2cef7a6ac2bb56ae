#include "qstat/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>

#include "qstat/builders.hpp"
#include "qstat/csv.hpp"

namespace qstat {

using nlohmann::json;

// ---------------------------------------------------------------- rendering

std::string value_type_name(const Value& v) {
    static const char* names[] = {
        "real", "complex", "state", "density", "operator", "basis", "spectrum", "hamiltonian",
        "action_profile", "dirac_distribution", "weak_table", "weak_value", "povm", "estimates",
        "coarse_grain", "peak_scan", "ehrenfest", "validity", "povm_validity",
        "probability_reconstruction", "real_list"};
    return names[v.index()];
}

namespace {

std::string fmt_complex(Complex z) {
    return format_full(z.real()) + (z.imag() < 0 ? " - " : " + ") + "i " +
           format_full(std::abs(z.imag()));
}

std::string matrix_csv(const Matrix& m, const char* header) {
    std::string out = header;
    out += '\n';
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            out += csv_line({std::to_string(r), std::to_string(c), format_full(m(r, c).real()),
                             format_full(m(r, c).imag())});
    return out;
}

std::string matrix_table(const Matrix& m) {
    std::ostringstream os;
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) os << (c ? "  " : "") << fmt_complex(m(r, c));
        os << '\n';
    }
    return os.str();
}

struct CsvRenderer {
    std::string operator()(double v) const { return "value\n" + format_full(v) + "\n"; }
    std::string operator()(const Complex& v) const {
        return "re,im\n" + csv_line({format_full(v.real()), format_full(v.imag())});
    }
    std::string operator()(const StateVector& s) const {
        std::string out = "index,re,im\n";
        for (int i = 0; i < s.dim(); ++i)
            out += csv_line({std::to_string(i), format_full(s.amps(i).real()),
                             format_full(s.amps(i).imag())});
        return out;
    }
    std::string operator()(const DensityOperator& r) const {
        return matrix_csv(r.mat, "row,col,re,im");
    }
    std::string operator()(const Operator& m) const { return matrix_csv(m, "row,col,re,im"); }
    std::string operator()(const Basis& b) const { return matrix_csv(b.cols, "component,vector,re,im"); }
    std::string operator()(const Spectrum& s) const {
        std::string out = "level,eigenvalue,group\n";
        for (int n = 0; n < s.dim(); ++n)
            out += csv_line({std::to_string(n), format_full(s.values[n]),
                             std::to_string(s.group_of(n))});
        return out;
    }
    std::string operator()(const Hamiltonian& h) const {
        std::string out = "level,energy\n";
        for (int n = 0; n < h.dim(); ++n)
            out += csv_line({std::to_string(n), format_full(h.energy(n))});
        return out;
    }
    std::string operator()(const ActionProfile& p) const {
        std::string out = "level,energy,action,weight,defined\n";
        for (const ActionProfile::Level& lv : p.levels)
            out += csv_line({std::to_string(lv.n), format_full(lv.energy),
                             format_full(lv.action), format_full(lv.weight),
                             lv.defined ? "1" : "0"});
        return out;
    }
    std::string operator()(const DiracDistribution& d) const {
        return complex_table_csv(d.table, false);
    }
    std::string operator()(const WeakTable& w) const { return complex_table_csv(w.table, true); }
    std::string operator()(const WeakValueRecord& w) const {
        return "re,im,overlap_mag\n" + csv_line({format_full(w.value.real()),
                                                 format_full(w.value.imag()),
                                                 format_full(w.overlap_mag)});
    }
    std::string operator()(const Povm& p) const {
        std::string out = "outcome,row,col,re,im\n";
        for (const Povm::Outcome& o : p.outcomes)
            for (int r = 0; r < o.element.rows(); ++r)
                for (int c = 0; c < o.element.cols(); ++c)
                    out += csv_line({o.label, std::to_string(r), std::to_string(c),
                                     format_full(o.element(r, c).real()),
                                     format_full(o.element(r, c).imag())});
        return out;
    }
    std::string operator()(const EstimateAssignment& e) const {
        std::string out = "label,re,im\n";
        for (const auto& [label, v] : e.values)
            out += csv_line({label, format_full(v.real()), format_full(v.imag())});
        return out;
    }
    std::string operator()(const CoarseGrainResult& bins) const {
        std::string out = "bin_center,re,im,abs\n";
        for (const CoarseGrainBin& b : bins)
            out += csv_line({format_full(b.center), format_full(b.mass.real()),
                             format_full(b.mass.imag()), format_full(std::abs(b.mass))});
        return out;
    }
    std::string operator()(const PeakScanResult& p) const {
        return "t_peak,p_peak\n" + csv_line({format_full(p.t_peak), format_full(p.p_peak)});
    }
    std::string operator()(const EhrenfestResult& e) const {
        return "lhs,rhs,deviation\n" +
               csv_line({format_full(e.lhs), format_full(e.rhs), format_full(e.deviation)});
    }
    std::string operator()(const ValidityReport& v) const {
        return "pass,deviation,detail\n" +
               csv_line({v.pass ? "1" : "0", format_full(v.deviation), v.detail});
    }
    std::string operator()(const PovmReport& v) const {
        return "pass,completeness_deviation,positivity_deviation\n" +
               csv_line({v.pass ? "1" : "0", format_full(v.completeness_deviation),
                         format_full(v.positivity_deviation)});
    }
    std::string operator()(const ProbabilityReconstruction& r) const {
        std::string out = "index,p\n";
        for (std::size_t i = 0; i < r.p.size(); ++i)
            out += csv_line({std::to_string(i), format_full(r.p[i])});
        return out;
    }
    std::string operator()(const std::vector<double>& v) const {
        std::string out = "index,value\n";
        for (std::size_t i = 0; i < v.size(); ++i)
            out += csv_line({std::to_string(i), format_full(v[i])});
        return out;
    }
};

struct TableRenderer {
    std::string operator()(double v) const { return format_full(v) + "\n"; }
    std::string operator()(const Complex& v) const { return fmt_complex(v) + "\n"; }
    std::string operator()(const StateVector& s) const {
        std::ostringstream os;
        for (int i = 0; i < s.dim(); ++i) os << i << ": " << fmt_complex(s.amps(i)) << '\n';
        return os.str();
    }
    std::string operator()(const DensityOperator& r) const { return matrix_table(r.mat); }
    std::string operator()(const Operator& m) const { return matrix_table(m); }
    std::string operator()(const Basis& b) const { return matrix_table(b.cols); }
    std::string operator()(const Spectrum& s) const {
        std::ostringstream os;
        for (int n = 0; n < s.dim(); ++n)
            os << n << ": " << format_full(s.values[n]) << "  (group " << s.group_of(n) << ")\n";
        return os.str();
    }
    std::string operator()(const Hamiltonian& h) const {
        std::ostringstream os;
        os << "dim " << h.dim() << ", hbar " << format_full(h.hbar) << '\n';
        for (int n = 0; n < h.dim(); ++n) os << n << ": " << format_full(h.energy(n)) << '\n';
        return os.str();
    }
    std::string operator()(const ActionProfile& p) const {
        std::ostringstream os;
        os << "level  energy  action  weight" << (p.unwrapped ? "  (unwrapped)" : "") << '\n';
        for (const ActionProfile::Level& lv : p.levels) {
            os << lv.n << "  " << format_full(lv.energy) << "  ";
            if (lv.defined)
                os << format_full(lv.action) << "  " << format_full(lv.weight) << '\n';
            else
                os << "undefined  " << format_full(lv.weight) << '\n';
        }
        return os.str();
    }
    std::string operator()(const DiracDistribution& d) const { return matrix_table(d.table); }
    std::string operator()(const WeakTable& w) const { return matrix_table(w.table); }
    std::string operator()(const WeakValueRecord& w) const {
        return fmt_complex(w.value) + "  (overlap " + format_full(w.overlap_mag) + ")\n";
    }
    std::string operator()(const Povm& p) const {
        std::ostringstream os;
        for (const Povm::Outcome& o : p.outcomes)
            os << o.label << ":\n" << matrix_table(o.element);
        return os.str();
    }
    std::string operator()(const EstimateAssignment& e) const {
        std::ostringstream os;
        os << (e.mode == EstimateAssignment::Mode::complex_valued ? "complex" : "real-restricted")
           << '\n';
        for (const auto& [label, v] : e.values) os << label << ": " << fmt_complex(v) << '\n';
        return os.str();
    }
    std::string operator()(const CoarseGrainResult& bins) const {
        std::ostringstream os;
        os << "bin_center  mass  |mass|\n";
        for (const CoarseGrainBin& b : bins)
            os << format_full(b.center) << "  " << fmt_complex(b.mass) << "  "
               << format_full(std::abs(b.mass)) << '\n';
        return os.str();
    }
    std::string operator()(const PeakScanResult& p) const {
        return "t_peak " + format_full(p.t_peak) + ", p_peak " + format_full(p.p_peak) + "\n";
    }
    std::string operator()(const EhrenfestResult& e) const {
        return "lhs " + format_full(e.lhs) + ", rhs " + format_full(e.rhs) + ", deviation " +
               format_full(e.deviation) + "\n";
    }
    std::string operator()(const ValidityReport& v) const {
        return std::string(v.pass ? "pass" : "fail") + " (deviation " + format_full(v.deviation) +
               ", " + v.detail + ")\n";
    }
    std::string operator()(const PovmReport& v) const {
        return std::string(v.pass ? "pass" : "fail") + " (completeness " +
               format_full(v.completeness_deviation) + ", positivity " +
               format_full(v.positivity_deviation) + ")\n";
    }
    std::string operator()(const ProbabilityReconstruction& r) const {
        std::ostringstream os;
        for (std::size_t i = 0; i < r.p.size(); ++i) os << i << ": " << format_full(r.p[i]) << '\n';
        os << "max imaginary residue " << format_full(r.max_imag) << '\n';
        return os.str();
    }
    std::string operator()(const std::vector<double>& v) const {
        std::ostringstream os;
        for (std::size_t i = 0; i < v.size(); ++i) os << i << ": " << format_full(v[i]) << '\n';
        return os.str();
    }
};

}  // namespace

std::string render_csv(const Value& v) { return std::visit(CsvRenderer{}, v); }
std::string render_table(const Value& v) { return std::visit(TableRenderer{}, v); }

// ---------------------------------------------------------------- parsing

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& why) {
    throw SchemaError(path + ": " + why);
}

double need_number(const json& j, const std::string& path) {
    if (!j.is_number()) schema_fail(path, "expected a number");
    return j.get<double>();
}

int need_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) schema_fail(path, "expected an integer");
    return j.get<int>();
}

std::string need_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema_fail(path, "expected a string");
    return j.get<std::string>();
}

Complex need_complex(const json& j, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    schema_fail(path, "expected a number or [re, im] pair");
}

// [[re, im], ...] flat row-major of length rows*cols
Matrix need_matrix(const json& j, int rows, int cols, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
        schema_fail(path, "expected " + std::to_string(rows * cols) + " [re, im] pairs, row-major");
    Matrix m(rows, cols);
    for (int k = 0; k < rows * cols; ++k)
        m(k / cols, k % cols) = need_complex(j[k], path + "/" + std::to_string(k));
    return m;
}

Vector need_vector(const json& j, int dim, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        schema_fail(path, "expected " + std::to_string(dim) + " [re, im] pairs");
    Vector v(dim);
    for (int k = 0; k < dim; ++k) v(k) = need_complex(j[k], path + "/" + std::to_string(k));
    return v;
}

int system_dimension(const json& system) {
    std::string kind = system.at("kind").get<std::string>();
    if (kind == "pauli") return 2;
    if (kind == "spin") {
        double j = system.at("j").get<double>();
        return static_cast<int>(std::round(2 * j)) + 1;
    }
    return system.at("dim").get<int>();
}

std::vector<std::string> system_names(const json& system) {
    std::string kind = system.at("kind").get<std::string>();
    if (kind == "pauli") return {"sx", "sy", "sz", "id"};
    if (kind == "spin") return {"jx", "jy", "jz", "id"};
    if (kind == "oscillator") return {"num", "H", "id"};
    if (kind == "random") return {"rand", "id"};
    std::vector<std::string> names = {"id"};
    for (auto it = system.at("operators").begin(); it != system.at("operators").end(); ++it)
        names.push_back(it.key());
    return names;
}

const std::set<std::string>& known_operations();

void validate_system(const json& system, const std::string& path) {
    if (!system.is_object()) schema_fail(path, "expected an object");
    if (!system.contains("kind")) schema_fail(path + "/kind", "missing");
    std::string kind = need_string(system["kind"], path + "/kind");
    if (kind == "pauli") return;
    if (kind == "spin") {
        if (!system.contains("j")) schema_fail(path + "/j", "missing");
        double j = need_number(system["j"], path + "/j");
        if (j < 0 || std::abs(2 * j - std::round(2 * j)) > 1e-9)
            schema_fail(path + "/j", "j must be a nonnegative half-integer");
        return;
    }
    if (kind == "oscillator") {
        if (need_int(system.value("dim", json()), path + "/dim") <= 0)
            schema_fail(path + "/dim", "must be positive");
        need_number(system.value("omega", json()), path + "/omega");
        return;
    }
    if (kind == "random") {
        if (need_int(system.value("dim", json()), path + "/dim") <= 0)
            schema_fail(path + "/dim", "must be positive");
        if (system.contains("seed")) need_int(system["seed"], path + "/seed");
        return;
    }
    if (kind == "explicit") {
        int dim = need_int(system.value("dim", json()), path + "/dim");
        if (dim <= 0) schema_fail(path + "/dim", "must be positive");
        if (!system.contains("operators") || !system["operators"].is_object() ||
            system["operators"].empty())
            schema_fail(path + "/operators", "expected a non-empty object of named matrices");
        for (auto it = system["operators"].begin(); it != system["operators"].end(); ++it)
            need_matrix(it.value(), dim, dim, path + "/operators/" + it.key());
        return;
    }
    schema_fail(path + "/kind", "unknown system kind '" + kind + "'");
}

void validate_object(const json& o, int dim, std::set<std::string>& names,
                     const std::string& path) {
    if (!o.is_object()) schema_fail(path, "expected an object");
    std::string name = need_string(o.value("name", json()), path + "/name");
    if (names.count(name)) schema_fail(path + "/name", "duplicate name '" + name + "'");
    std::string type = need_string(o.value("type", json()), path + "/type");

    auto check_ref = [&](const json& j, const std::string& p) {
        std::string r = need_string(j, p);
        if (!names.count(r)) throw UnknownReference("'" + r + "' at " + p);
    };

    if (type == "state") {
        if (o.contains("amplitudes")) {
            need_vector(o["amplitudes"], dim, path + "/amplitudes");
        } else if (o.contains("builder")) {
            std::string b = need_string(o["builder"], path + "/builder");
            if (b == "basis_vector") {
                int k = need_int(o.value("index", json()), path + "/index");
                if (k < 0 || k >= dim) schema_fail(path + "/index", "outside 0.." + std::to_string(dim - 1));
            } else if (b == "spin_coherent") {
                need_number(o.value("theta", json()), path + "/theta");
                need_number(o.value("phi", json()), path + "/phi");
                if (o.contains("twist")) need_number(o["twist"], path + "/twist");
            } else if (b == "coherent") {
                need_complex(o.value("alpha", json()), path + "/alpha");
            } else if (b == "random") {
                if (o.contains("seed")) need_int(o["seed"], path + "/seed");
            } else if (b == "superposition") {
                const json& terms = o.value("terms", json());
                if (!terms.is_array() || terms.empty())
                    schema_fail(path + "/terms", "expected a non-empty array");
                for (std::size_t i = 0; i < terms.size(); ++i) {
                    std::string p = path + "/terms/" + std::to_string(i);
                    need_complex(terms[i].value("coef", json()), p + "/coef");
                    check_ref(terms[i].value("state", json()), p + "/state");
                }
            } else {
                schema_fail(path + "/builder", "unknown state builder '" + b + "'");
            }
        } else {
            schema_fail(path, "state needs 'amplitudes' or 'builder'");
        }
    } else if (type == "operator") {
        if (o.contains("matrix")) {
            need_matrix(o["matrix"], dim, dim, path + "/matrix");
        } else if (o.contains("ref")) {
            check_ref(o["ref"], path + "/ref");
        } else if (o.contains("combo")) {
            const json& combo = o["combo"];
            if (!combo.is_array() || combo.empty())
                schema_fail(path + "/combo", "expected a non-empty array");
            for (std::size_t i = 0; i < combo.size(); ++i) {
                std::string p = path + "/combo/" + std::to_string(i);
                need_complex(combo[i].value("coef", json()), p + "/coef");
                check_ref(combo[i].value("of", json()), p + "/of");
            }
        } else {
            schema_fail(path, "operator needs 'matrix', 'ref' or 'combo'");
        }
    } else if (type == "density") {
        if (o.contains("matrix")) {
            need_matrix(o["matrix"], dim, dim, path + "/matrix");
        } else if (o.contains("pure")) {
            check_ref(o["pure"], path + "/pure");
        } else if (o.contains("mixture")) {
            const json& mix = o["mixture"];
            if (!mix.is_array() || mix.empty())
                schema_fail(path + "/mixture", "expected a non-empty array");
            for (std::size_t i = 0; i < mix.size(); ++i) {
                std::string p = path + "/mixture/" + std::to_string(i);
                if (need_number(mix[i].value("weight", json()), p + "/weight") < 0)
                    schema_fail(p + "/weight", "must be nonnegative");
                check_ref(mix[i].value("state", json()), p + "/state");
            }
        } else {
            schema_fail(path, "density needs 'matrix', 'pure' or 'mixture'");
        }
    } else if (type == "hamiltonian") {
        check_ref(o.value("of", json()), path + "/of");
    } else if (type == "basis") {
        std::string b = need_string(o.value("builder", json()), path + "/builder");
        if (b == "eigen") {
            check_ref(o.value("of", json()), path + "/of");
        } else if (b == "random") {
            if (o.contains("seed")) need_int(o["seed"], path + "/seed");
        } else if (b == "columns") {
            need_matrix(o.value("vectors", json()), dim, dim, path + "/vectors");
        } else if (b != "standard" && b != "fourier") {
            schema_fail(path + "/builder", "unknown basis builder '" + b + "'");
        }
    } else if (type == "povm") {
        if (o.contains("file")) {
            need_string(o["file"], path + "/file");
        } else if (o.contains("outcomes")) {
            const json& outs = o["outcomes"];
            if (!outs.is_array() || outs.empty())
                schema_fail(path + "/outcomes", "expected a non-empty array");
            for (std::size_t i = 0; i < outs.size(); ++i) {
                std::string p = path + "/outcomes/" + std::to_string(i);
                need_string(outs[i].value("label", json()), p + "/label");
                need_matrix(outs[i].value("matrix", json()), dim, dim, p + "/matrix");
            }
        } else {
            schema_fail(path, "povm needs 'file' or 'outcomes'");
        }
    } else if (type == "estimates") {
        std::string mode = need_string(o.value("mode", json()), path + "/mode");
        if (mode != "complex" && mode != "real")
            schema_fail(path + "/mode", "expected 'complex' or 'real'");
        const json& vals = o.value("values", json());
        if (!vals.is_object() || vals.empty())
            schema_fail(path + "/values", "expected a non-empty object of label -> value");
        for (auto it = vals.begin(); it != vals.end(); ++it)
            need_complex(it.value(), path + "/values/" + it.key());
    } else {
        schema_fail(path + "/type", "unknown object type '" + type + "'");
    }
    names.insert(name);
}

void validate_task(const json& t, std::set<std::string>& names, const std::string& path) {
    if (!t.is_object()) schema_fail(path, "expected an object");
    std::string op = need_string(t.value("op", json()), path + "/op");
    if (!known_operations().count(op))
        throw UnknownOperation("'" + op + "' at " + path + "/op");
    const json& args = t.value("args", json::object());
    if (!args.is_object()) schema_fail(path + "/args", "expected an object");
    // these keys carry literal strings, not object references
    static const std::set<std::string> literal_keys = {"label", "kind", "mode"};
    for (auto it = args.begin(); it != args.end(); ++it)
        if (it.value().is_string() && !literal_keys.count(it.key()) &&
            !names.count(it.value().get<std::string>()))
            throw UnknownReference("'" + it.value().get<std::string>() + "' at " + path +
                                   "/args/" + it.key());
    if (t.contains("store")) {
        std::string s = need_string(t["store"], path + "/store");
        if (names.count(s)) schema_fail(path + "/store", "duplicate name '" + s + "'");
        names.insert(s);
    }
    if (t.contains("expect")) {
        const json& e = t["expect"];
        if (!e.is_object()) schema_fail(path + "/expect", "expected an object");
        if (!e.contains("value")) schema_fail(path + "/expect/value", "missing");
        const json& v = e["value"];
        if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i)
                need_number(v[i], path + "/expect/value/" + std::to_string(i));
        } else {
            need_number(v, path + "/expect/value");
        }
        if (need_number(e.value("tol", json(0.0)), path + "/expect/tol") < 0)
            schema_fail(path + "/expect/tol", "must be nonnegative");
    }
}

Expectation parse_expectation(const json& e) {
    Expectation x;
    const json& v = e["value"];
    if (v.is_array()) {
        for (const json& n : v) x.want.push_back(n.get<double>());
        x.is_complex = e.value("complex", v.size() == 2);
    } else {
        x.want.push_back(v.get<double>());
    }
    x.tol = e.value("tol", 0.0);
    return x;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const RunOptions& opts) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what());
    }
    if (!doc.is_object()) throw SchemaError("/: expected an object");
    Scenario s;
    s.name = need_string(doc.value("name", json()), "/name");
    if (doc.contains("hbar")) {
        s.hbar = need_number(doc["hbar"], "/hbar");
        if (s.hbar <= 0) schema_fail("/hbar", "must be positive");
    } else {
        s.hbar = opts.hbar.value_or(1.0);
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
            schema_fail("/seed", "expected a nonnegative integer");
        long long raw = doc["seed"].get<long long>();
        if (raw < 0) schema_fail("/seed", "expected a nonnegative integer");
        s.seed = static_cast<std::uint64_t>(raw);
    } else {
        s.seed = opts.seed.value_or(0);
    }
    if (!doc.contains("system")) schema_fail("/system", "missing");
    validate_system(doc["system"], "/system");
    s.system = doc["system"];

    int dim = system_dimension(s.system);
    std::set<std::string> names;
    for (const std::string& n : system_names(s.system)) names.insert(n);

    if (doc.contains("objects")) {
        if (!doc["objects"].is_array()) schema_fail("/objects", "expected an array");
        int k = 0;
        for (const json& o : doc["objects"]) {
            validate_object(o, dim, names, "/objects/" + std::to_string(k++));
            s.objects.push_back(o);
        }
    }

    if (!doc.contains("tasks") || !doc["tasks"].is_array() || doc["tasks"].empty())
        schema_fail("/tasks", "expected a non-empty array");
    int k = 0;
    for (const json& t : doc["tasks"]) {
        std::string path = "/tasks/" + std::to_string(k++);
        validate_task(t, names, path);
        TaskSpec spec;
        spec.op = t["op"].get<std::string>();
        spec.args = t.value("args", json::object());
        if (t.contains("store")) spec.store = t["store"].get<std::string>();
        if (t.contains("expect")) spec.expect = parse_expectation(t["expect"]);
        s.tasks.push_back(std::move(spec));
    }

    if (doc.contains("outputs")) {
        if (!doc["outputs"].is_array()) schema_fail("/outputs", "expected an array");
        int i = 0;
        for (const json& o : doc["outputs"]) {
            std::string path = "/outputs/" + std::to_string(i++);
            OutputSpec out;
            out.task = need_int(o.value("task", json()), path + "/task");
            if (out.task < 0 || out.task >= static_cast<int>(s.tasks.size()))
                schema_fail(path + "/task", "task index out of range");
            out.path = need_string(o.value("path", json()), path + "/path");
            if (out.path.empty() || out.path.front() == '/')
                schema_fail(path + "/path", "must be a relative, non-empty path");
            out.format = o.value("format", std::string("csv"));
            if (out.format != "csv" && out.format != "table")
                schema_fail(path + "/format", "expected 'csv' or 'table'");
            s.outputs.push_back(std::move(out));
        }
    }

    // normalized document: defaults made explicit so round-trips are stable
    json norm;
    norm["name"] = s.name;
    norm["hbar"] = s.hbar;
    norm["seed"] = s.seed;
    norm["system"] = s.system;
    norm["objects"] = doc.value("objects", json::array());
    norm["tasks"] = doc["tasks"];
    norm["outputs"] = doc.value("outputs", json::array());
    s.doc = std::move(norm);
    return s;
}

std::string serialize_scenario(const Scenario& s) { return s.doc.dump(2) + "\n"; }

// ---------------------------------------------------------------- building

const Value& Environment::lookup(const std::string& name) const {
    auto it = named.find(name);
    if (it == named.end()) throw UnknownReference("'" + name + "'");
    return it->second;
}

namespace {

std::uint64_t object_seed(const json& o, const Environment& env) {
    if (o.contains("seed")) return o["seed"].get<std::uint64_t>();
    // mix in the object's name so unseeded siblings draw independently
    return env.seed ^ fnv1a64(o["name"].get<std::string>());
}

template <class T>
const T& env_ref(const Environment& env, const std::string& name, const char* want) {
    const Value& v = env.lookup(name);
    const T* p = std::get_if<T>(&v);
    if (!p)
        throw SchemaError("'" + name + "' is a " + value_type_name(v) + ", expected " + want);
    return *p;
}

void build_object(const json& o, Environment& env) {
    std::string name = o["name"].get<std::string>();
    std::string type = o["type"].get<std::string>();
    int dim = env.dim;

    if (type == "state") {
        if (o.contains("amplitudes")) {
            Vector v = need_vector(o["amplitudes"], dim, "/amplitudes");
            if (o.value("normalize", false)) v /= v.norm();
            env.named.emplace(name, StateVector(v));
            return;
        }
        std::string b = o["builder"].get<std::string>();
        if (b == "basis_vector") {
            Vector v = Vector::Zero(dim);
            v(o["index"].get<int>()) = 1.0;
            env.named.emplace(name, StateVector(v));
        } else if (b == "spin_coherent") {
            double j = (dim - 1) / 2.0;
            env.named.emplace(name, twisted_spin_coherent(j, o["theta"].get<double>(),
                                                          o["phi"].get<double>(),
                                                          o.value("twist", 0.0)));
        } else if (b == "coherent") {
            env.named.emplace(name, coherent_packet(dim, need_complex(o["alpha"], "/alpha")));
        } else if (b == "random") {
            env.named.emplace(name, random_state(dim, object_seed(o, env)));
        } else {  // superposition
            Vector v = Vector::Zero(dim);
            for (const json& term : o["terms"]) {
                const StateVector& s =
                    env_ref<StateVector>(env, term["state"].get<std::string>(), "state");
                v += need_complex(term["coef"], "/coef") * s.amps;
            }
            if (o.value("normalize", true)) {
                double n = v.norm();
                if (n < 1e-300) throw NotNormalized("superposition cancels to zero");
                v /= n;
            }
            env.named.emplace(name, StateVector(v));
        }
    } else if (type == "operator") {
        if (o.contains("matrix")) {
            env.named.emplace(name, need_matrix(o["matrix"], dim, dim, "/matrix"));
        } else if (o.contains("ref")) {
            env.named.emplace(name,
                              env_ref<Operator>(env, o["ref"].get<std::string>(), "operator"));
        } else {
            Operator sum = Operator::Zero(dim, dim);
            for (const json& term : o["combo"])
                sum += need_complex(term["coef"], "/coef") *
                       env_ref<Operator>(env, term["of"].get<std::string>(), "operator");
            env.named.emplace(name, sum);
        }
    } else if (type == "density") {
        if (o.contains("matrix")) {
            env.named.emplace(name, DensityOperator(need_matrix(o["matrix"], dim, dim, "/matrix")));
        } else if (o.contains("pure")) {
            const StateVector& s = env_ref<StateVector>(env, o["pure"].get<std::string>(), "state");
            env.named.emplace(name, DensityOperator(projector(s)));
        } else {
            Operator sum = Operator::Zero(dim, dim);
            double total = 0;
            for (const json& term : o["mixture"]) total += term["weight"].get<double>();
            if (total <= 0) throw NotNormalized("mixture weights sum to zero");
            for (const json& term : o["mixture"]) {
                const StateVector& s =
                    env_ref<StateVector>(env, term["state"].get<std::string>(), "state");
                sum += (term["weight"].get<double>() / total) * projector(s);
            }
            env.named.emplace(name, DensityOperator(sum));
        }
    } else if (type == "hamiltonian") {
        const Operator& op = env_ref<Operator>(env, o["of"].get<std::string>(), "operator");
        env.named.emplace(name, Hamiltonian(op, env.hbar));
    } else if (type == "basis") {
        std::string b = o["builder"].get<std::string>();
        if (b == "standard") {
            env.named.emplace(name, standard_basis(dim));
        } else if (b == "fourier") {
            env.named.emplace(name, fourier_basis(dim));
        } else if (b == "eigen") {
            const Operator& op = env_ref<Operator>(env, o["of"].get<std::string>(), "operator");
            env.named.emplace(name, Basis(eigendecompose(op).vectors));
        } else if (b == "random") {
            env.named.emplace(name, random_basis(dim, object_seed(o, env)));
        } else {  // columns
            env.named.emplace(name, Basis(need_matrix(o["vectors"], dim, dim, "/vectors")));
        }
    } else if (type == "povm") {
        if (o.contains("file")) {
            Povm p = load_povm_file(o["file"].get<std::string>());
            require_same_dim(p.dim(), dim, "povm object");
            env.named.emplace(name, std::move(p));
        } else {
            std::vector<Povm::Outcome> outs;
            for (const json& out : o["outcomes"])
                outs.push_back({out["label"].get<std::string>(),
                                need_matrix(out["matrix"], dim, dim, "/matrix")});
            env.named.emplace(name, make_povm(std::move(outs)));
        }
    } else {  // estimates
        EstimateAssignment::Mode mode = o["mode"].get<std::string>() == "complex"
                                            ? EstimateAssignment::Mode::complex_valued
                                            : EstimateAssignment::Mode::real_restricted;
        std::map<std::string, Complex> values;
        for (auto it = o["values"].begin(); it != o["values"].end(); ++it)
            values[it.key()] = need_complex(it.value(), "/values");
        env.named.emplace(name, make_estimates(mode, std::move(values)));
    }
}

}  // namespace

Environment build_environment(const Scenario& s) {
    Environment env;
    env.hbar = s.hbar;
    env.seed = s.seed;
    std::string kind = s.system["kind"].get<std::string>();
    if (kind == "pauli") {
        env.dim = 2;
        env.named.emplace("sx", pauli_x());
        env.named.emplace("sy", pauli_y());
        env.named.emplace("sz", pauli_z());
    } else if (kind == "spin") {
        SpinOperators so = spin_operators(s.system["j"].get<double>(), s.hbar);
        env.dim = so.dim();
        env.named.emplace("jx", so.jx);
        env.named.emplace("jy", so.jy);
        env.named.emplace("jz", so.jz);
    } else if (kind == "oscillator") {
        env.dim = s.system["dim"].get<int>();
        double omega = s.system["omega"].get<double>();
        env.named.emplace("num", number_operator(env.dim));
        env.named.emplace("H", oscillator_hamiltonian(env.dim, omega, s.hbar));
    } else if (kind == "random") {
        env.dim = s.system["dim"].get<int>();
        std::uint64_t seed = s.system.contains("seed")
                                 ? s.system["seed"].get<std::uint64_t>()
                                 : s.seed;
        env.named.emplace("rand", random_hermitian(env.dim, seed));
    } else {  // explicit
        env.dim = s.system["dim"].get<int>();
        for (auto it = s.system["operators"].begin(); it != s.system["operators"].end(); ++it)
            env.named.emplace(it.key(), need_matrix(it.value(), env.dim, env.dim,
                                                    "/system/operators/" + it.key()));
    }
    env.named.emplace("id", identity(env.dim));
    for (const json& o : s.objects) build_object(o, env);
    return env;
}

// ---------------------------------------------------------------- execution

namespace {

struct Args {
    const json& j;
    Environment& env;

    bool has(const char* name) const { return j.contains(name); }

    const json& raw(const char* name) const {
        if (!j.contains(name)) throw SchemaError(std::string("missing argument '") + name + "'");
        return j[name];
    }

    std::string ref_name(const char* name) const {
        const json& v = raw(name);
        if (!v.is_string())
            throw SchemaError(std::string("argument '") + name + "' must name an object");
        return v.get<std::string>();
    }

    template <class T>
    const T& ref(const char* name, const char* want) const {
        return env_ref<T>(env, ref_name(name), want);
    }

    double number(const char* name) const {
        const json& v = raw(name);
        if (!v.is_number()) throw SchemaError(std::string("argument '") + name + "' must be a number");
        return v.get<double>();
    }

    double number_or(const char* name, double def) const {
        return j.contains(name) ? number(name) : def;
    }

    int integer(const char* name) const {
        const json& v = raw(name);
        if (!v.is_number_integer())
            throw SchemaError(std::string("argument '") + name + "' must be an integer");
        return v.get<int>();
    }

    bool flag_or(const char* name, bool def) const {
        if (!j.contains(name)) return def;
        if (!j[name].is_boolean())
            throw SchemaError(std::string("argument '") + name + "' must be true or false");
        return j[name].get<bool>();
    }

    Complex cnum(const char* name) const { return need_complex(raw(name), name); }

    std::string str(const char* name) const {
        const json& v = raw(name);
        if (!v.is_string()) throw SchemaError(std::string("argument '") + name + "' must be a string");
        return v.get<std::string>();
    }

    std::vector<double> grid(const char* name) const {
        const json& v = raw(name);
        std::vector<double> out;
        if (v.is_array()) {
            for (const json& x : v) {
                if (!x.is_number()) throw SchemaError(std::string("argument '") + name +
                                                      "' must hold numbers");
                out.push_back(x.get<double>());
            }
        } else if (v.is_object() && v.contains("from") && v.contains("to") && v.contains("step")) {
            double from = v["from"].get<double>();
            double to = v["to"].get<double>();
            double step = v["step"].get<double>();
            if (!(step > 0)) throw SchemaError(std::string("argument '") + name + "': step must be positive");
            long n = static_cast<long>(std::floor((to - from) / step + 1e-9));
            for (long k = 0; k <= n; ++k) out.push_back(from + k * step);
        } else {
            throw SchemaError(std::string("argument '") + name +
                              "' must be a list or {from, to, step}");
        }
        return out;
    }

    // an element is either an operator name, or a povm name plus label
    Operator element() const {
        if (has("element")) return ref<Operator>("element", "operator");
        const Povm& p = ref<Povm>("povm", "povm");
        return p.find(str("label")).element;
    }
};

using Handler = std::function<Value(const Args&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table = {
        {"validate_operator",
         [](const Args& a) -> Value {
             std::string kind = a.str("kind");
             OperatorKind k;
             if (kind == "hermitian") k = OperatorKind::hermitian;
             else if (kind == "unitary") k = OperatorKind::unitary;
             else if (kind == "density") k = OperatorKind::density;
             else if (kind == "povm_element") k = OperatorKind::povm_element;
             else throw SchemaError("unknown operator kind '" + kind + "'");
             return validate_operator(a.ref<Operator>("op", "operator"), k);
         }},
        {"eigendecompose",
         [](const Args& a) -> Value { return eigendecompose(a.ref<Operator>("op", "operator")); }},
        {"commutator",
         [](const Args& a) -> Value {
             return commutator(a.ref<Operator>("a", "operator"), a.ref<Operator>("b", "operator"));
         }},
        {"expectation",
         [](const Args& a) -> Value {
             return expectation(a.ref<Operator>("op", "operator"),
                                a.ref<DensityOperator>("rho", "density"));
         }},
        {"projector",
         [](const Args& a) -> Value { return projector(a.ref<StateVector>("state", "state")); }},
        {"overlap",
         [](const Args& a) -> Value {
             return overlap(a.ref<StateVector>("a", "state"), a.ref<StateVector>("b", "state"));
         }},
        {"thermal_state",
         [](const Args& a) -> Value {
             const Hamiltonian& h = a.ref<Hamiltonian>("hamiltonian", "hamiltonian");
             if (a.flag_or("zero_limit", false)) return thermal_state(h, 0, 1, true);
             return thermal_state(h, a.number("temperature"), a.number_or("k_B", 1.0));
         }},
        {"unitary_evolution",
         [](const Args& a) -> Value {
             return unitary_evolution(a.ref<Hamiltonian>("hamiltonian", "hamiltonian"),
                                      a.number("t"));
         }},
        {"dephase",
         [](const Args& a) -> Value {
             return dephase(a.ref<DensityOperator>("rho", "density"),
                            a.ref<Operator>("observable", "operator"));
         }},
        {"bohr_period",
         [](const Args& a) -> Value {
             return bohr_period(a.ref<Hamiltonian>("hamiltonian", "hamiltonian"), a.integer("n"),
                                a.integer("m"));
         }},
        {"transition_probability",
         [](const Args& a) -> Value {
             return transition_probability(a.ref<StateVector>("a", "state"),
                                           a.ref<StateVector>("b", "state"),
                                           a.ref<Hamiltonian>("hamiltonian", "hamiltonian"),
                                           a.number("t"));
         }},
        {"transformation_action",
         [](const Args& a) -> Value {
             return transformation_action(a.ref<StateVector>("a", "state"),
                                          a.ref<StateVector>("b", "state"),
                                          a.ref<Hamiltonian>("hamiltonian", "hamiltonian"),
                                          a.flag_or("unwrap", true));
         }},
        {"propagation_time",
         [](const Args& a) -> Value {
             return propagation_time(a.ref<ActionProfile>("profile", "action_profile"),
                                     a.integer("n"));
         }},
        {"classical_intersection_energy",
         [](const Args& a) -> Value {
             return classical_intersection_energy(a.ref<ActionProfile>("profile", "action_profile"));
         }},
        {"peak_time_scan",
         [](const Args& a) -> Value {
             auto [t, p] = peak_time_scan(a.ref<StateVector>("a", "state"),
                                          a.ref<StateVector>("b", "state"),
                                          a.ref<Hamiltonian>("hamiltonian", "hamiltonian"),
                                          a.grid("t_grid"));
             return PeakScanResult{t, p};
         }},
        {"born_probability",
         [](const Args& a) -> Value {
             return born_probability(a.ref<StateVector>("a", "state"),
                                     a.ref<StateVector>("b", "state"));
         }},
        {"dirac_distribution",
         [](const Args& a) -> Value {
             return dirac_distribution(a.ref<DensityOperator>("rho", "density"),
                                       a.ref<Basis>("basis_a", "basis"),
                                       a.ref<Basis>("basis_b", "basis"));
         }},
        {"reconstruct_state",
         [](const Args& a) -> Value {
             return reconstruct_state(a.ref<DiracDistribution>("dist", "dirac_distribution"));
         }},
        {"weak_value",
         [](const Args& a) -> Value {
             return weak_value(a.ref<Operator>("m", "operator"),
                               a.ref<StateVector>("pre", "state"),
                               a.ref<StateVector>("post", "state"));
         }},
        {"weak_table",
         [](const Args& a) -> Value {
             const Basis& ba = a.ref<Basis>("basis_a", "basis");
             const Basis& bb = a.ref<Basis>("basis_b", "basis");
             return WeakTable{weak_table(a.ref<Operator>("m", "operator"), ba, bb), ba, bb};
         }},
        {"operator_from_weak_values",
         [](const Args& a) -> Value {
             const WeakTable& w = a.ref<WeakTable>("table", "weak_table");
             return operator_from_weak_values(w.table, w.basis_a, w.basis_b);
         }},
        {"complex_conditional_probability",
         [](const Args& a) -> Value {
             return complex_conditional_probability(a.ref<StateVector>("mid", "state"),
                                                    a.ref<StateVector>("a", "state"),
                                                    a.ref<StateVector>("b", "state"));
         }},
        {"reconstruct_probability",
         [](const Args& a) -> Value {
             return reconstruct_probability(a.ref<Basis>("mid_basis", "basis"),
                                            a.ref<DiracDistribution>("dist", "dirac_distribution"));
         }},
        {"conditional_action",
         [](const Args& a) -> Value {
             return conditional_action(a.ref<Hamiltonian>("hamiltonian", "hamiltonian"),
                                       a.ref<StateVector>("a", "state"),
                                       a.ref<StateVector>("b", "state"), a.integer("n"));
         }},
        {"coarse_grain",
         [](const Args& a) -> Value {
             return coarse_grain(a.ref<Hamiltonian>("hamiltonian", "hamiltonian"),
                                 a.ref<StateVector>("a", "state"),
                                 a.ref<StateVector>("b", "state"), a.number("window"));
         }},
        {"imaginary_correlation",
         [](const Args& a) -> Value {
             return imaginary_correlation(a.ref<Operator>("a_op", "operator"),
                                          a.ref<Operator>("b_op", "operator"),
                                          a.ref<DensityOperator>("rho", "density"));
         }},
        {"ehrenfest_check",
         [](const Args& a) -> Value {
             return ehrenfest_check(a.ref<Operator>("a_op", "operator"),
                                    a.ref<Hamiltonian>("hamiltonian", "hamiltonian"),
                                    a.ref<DensityOperator>("rho", "density"), a.number("dt"));
         }},
        {"validate_povm",
         [](const Args& a) -> Value { return validate_povm(a.ref<Povm>("povm", "povm")); }},
        {"povm_probability",
         [](const Args& a) -> Value {
             return povm_probability(a.element(), a.ref<StateVector>("psi", "state"));
         }},
        {"ozawa_error",
         [](const Args& a) -> Value {
             return ozawa_error(a.ref<Operator>("a_op", "operator"), a.ref<Povm>("povm", "povm"),
                                a.ref<EstimateAssignment>("estimates", "estimates"),
                                a.ref<StateVector>("psi", "state"));
         }},
        {"error_contribution",
         [](const Args& a) -> Value {
             return error_contribution(a.ref<Operator>("a_op", "operator"),
                                       a.ref<StateVector>("m", "state"), a.cnum("estimate"),
                                       a.ref<StateVector>("psi", "state"));
         }},
        {"joint_quasiprobability",
         [](const Args& a) -> Value {
             return joint_quasiprobability(a.element(), a.ref<StateVector>("a", "state"),
                                           a.ref<StateVector>("psi", "state"));
         }},
        {"optimal_estimate",
         [](const Args& a) -> Value {
             std::string mode = a.str("mode");
             if (mode != "complex" && mode != "real")
                 throw SchemaError("mode must be 'complex' or 'real'");
             return optimal_estimate(a.ref<Operator>("a_op", "operator"),
                                     a.ref<StateVector>("m", "state"),
                                     a.ref<StateVector>("psi", "state"),
                                     mode == "complex"
                                         ? EstimateAssignment::Mode::complex_valued
                                         : EstimateAssignment::Mode::real_restricted);
         }},
        {"deterministic_value",
         [](const Args& a) -> Value {
             return deterministic_value(a.ref<Operator>("a_op", "operator"),
                                        a.ref<StateVector>("psi", "state"),
                                        a.ref<StateVector>("m", "state"));
         }},
        {"expectation_from_deterministic",
         [](const Args& a) -> Value {
             return expectation_from_deterministic(a.ref<Operator>("a_op", "operator"),
                                                   a.ref<DensityOperator>("rho", "density"),
                                                   a.ref<Basis>("basis_psi", "basis"),
                                                   a.ref<Basis>("basis_m", "basis"));
         }},
    };
    return table;
}

const std::set<std::string>& known_operations_impl() {
    static const std::set<std::string> ops = [] {
        std::set<std::string> s;
        for (const auto& [name, fn] : handlers()) s.insert(name);
        return s;
    }();
    return ops;
}

const std::set<std::string>& known_operations() { return known_operations_impl(); }

}  // namespace

Value execute_operation(const std::string& op, const json& args, Environment& env) {
    auto it = handlers().find(op);
    if (it == handlers().end()) throw UnknownOperation("'" + op + "'");
    Args a{args, env};
    return it->second(a);
}

// ------------------------------------------------------------ expectations

namespace {

bool numeric_view(const Value& v, std::vector<double>& out) {
    if (const double* d = std::get_if<double>(&v)) {
        out = {*d};
    } else if (const Complex* c = std::get_if<Complex>(&v)) {
        out = {c->real(), c->imag()};
    } else if (const WeakValueRecord* w = std::get_if<WeakValueRecord>(&v)) {
        out = {w->value.real(), w->value.imag()};
    } else if (const PeakScanResult* p = std::get_if<PeakScanResult>(&v)) {
        out = {p->t_peak, p->p_peak};
    } else if (const EhrenfestResult* e = std::get_if<EhrenfestResult>(&v)) {
        out = {e->lhs, e->rhs, e->deviation};
    } else if (const ProbabilityReconstruction* r = std::get_if<ProbabilityReconstruction>(&v)) {
        out = r->p;
    } else if (const std::vector<double>* l = std::get_if<std::vector<double>>(&v)) {
        out = *l;
    } else {
        return false;
    }
    return true;
}

}  // namespace

bool check_expectation(const Expectation& e, const Value& v, std::string& detail) {
    std::vector<double> got;
    if (!numeric_view(v, got)) {
        detail = "expectation unsupported for result type '" + value_type_name(v) + "'";
        return false;
    }
    if (got.size() != e.want.size()) {
        detail = "expected " + std::to_string(e.want.size()) + " values, got " +
                 std::to_string(got.size());
        return false;
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (!(std::abs(got[i] - e.want[i]) <= e.tol)) {
            detail = "component " + std::to_string(i) + ": expected " + format_full(e.want[i]) +
                     " +- " + format_full(e.tol) + ", got " + format_full(got[i]) +
                     " (off by " + format_full(std::abs(got[i] - e.want[i])) + ")";
            return false;
        }
    }
    detail.clear();
    return true;
}

// ---------------------------------------------------------------- running

bool RunReport::all_ok() const {
    for (const TaskReport& t : entries)
        if (t.status != TaskReport::Status::ok) return false;
    return true;
}

int RunReport::exit_code() const {
    bool expect_fail = false;
    bool numeric = false;
    bool parse = false;
    for (const TaskReport& t : entries) {
        if (t.status == TaskReport::Status::expect_fail) expect_fail = true;
        if (t.status == TaskReport::Status::error) (t.parse_error ? parse : numeric) = true;
    }
    if (parse) return 2;
    if (numeric) return 3;
    if (expect_fail) return 1;
    return 0;
}

std::string RunReport::render() const {
    std::ostringstream os;
    os << "run: " << name << '\n';
    for (const TaskReport& t : entries) {
        const char* tag = t.status == TaskReport::Status::ok         ? "[ ok ]"
                          : t.status == TaskReport::Status::expect_fail ? "[FAIL]"
                                                                        : "[ERR ]";
        os << tag << " task " << t.index << " " << t.op;
        os << "  (" << t.wall_ms << " ms)";
        if (!t.message.empty()) os << "  " << t.message;
        for (const auto& [path, digest] : t.outputs)
            os << "\n        wrote " << path << "  fnv1a " << digest;
        os << '\n';
    }
    int code = exit_code();
    os << "status: "
       << (code == 0 ? "ok"
           : code == 1 ? "expectation failure"
           : code == 2 ? "parse error"
                       : "numerical error")
       << '\n';
    return os.str();
}

RunReport run_scenario(const Scenario& s, const RunOptions& opts) {
    RunReport report;
    report.name = s.name;
    Environment env = build_environment(s);

    namespace fs = std::filesystem;
    for (int i = 0; i < static_cast<int>(s.tasks.size()); ++i) {
        const TaskSpec& task = s.tasks[i];
        TaskReport tr;
        tr.index = i;
        tr.op = task.op;
        auto start = std::chrono::steady_clock::now();
        try {
            Value result = execute_operation(task.op, task.args, env);
            if (task.expect) {
                std::string detail;
                if (!check_expectation(*task.expect, result, detail)) {
                    tr.status = TaskReport::Status::expect_fail;
                    tr.message = detail;
                }
            }
            if (task.store) env.named.emplace(*task.store, result);
            for (const OutputSpec& out : s.outputs) {
                if (out.task != i) continue;
                std::string text =
                    out.format == "csv" ? render_csv(result) : render_table(result);
                fs::path dest = fs::path(opts.out_dir) / out.path;
                if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
                write_text_file(dest.string(), text);
                tr.outputs.emplace_back(dest.string(), hex64(fnv1a64(text)));
            }
        } catch (const Error& e) {
            tr.status = TaskReport::Status::error;
            tr.parse_error = e.category() == ErrorCategory::parse;
            tr.message = e.what();
        } catch (const std::exception& e) {
            tr.status = TaskReport::Status::error;
            tr.message = std::string("error: ") + e.what();
        }
        tr.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
        report.entries.push_back(std::move(tr));
    }
    return report;
}

}  // namespace qstat
