#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qstat/dynamics.hpp"
#include "qstat/hilbert.hpp"
#include "qstat/measurement.hpp"
#include "qstat/statistics.hpp"

namespace qstat {

// Weak-value table with its bases; carried separately from Operator so the
// CSV layer knows rows are post conditions (storage [b][a]).
struct WeakTable {
    Matrix table;
    Basis basis_a;
    Basis basis_b;
};

using CoarseGrainResult = std::vector<CoarseGrainBin>;

struct PeakScanResult {
    double t_peak = 0;
    double p_peak = 0;
};

// every result a scenario task can produce or store under a name
using Value = std::variant<double, Complex, StateVector, DensityOperator, Operator, Basis,
                           Spectrum, Hamiltonian, ActionProfile, DiracDistribution, WeakTable,
                           WeakValueRecord, Povm, EstimateAssignment, CoarseGrainResult,
                           PeakScanResult, EhrenfestResult, ValidityReport, PovmReport,
                           ProbabilityReconstruction, std::vector<double>>;

std::string value_type_name(const Value& v);
std::string render_csv(const Value& v);
std::string render_table(const Value& v);

// declared numeric expectation on a task result
struct Expectation {
    std::vector<double> want;  // scalar, [re, im] pair, or a flat list
    double tol = 0;
    bool is_complex = false;   // want.size() == 2 interpreted as one complex value
};

struct TaskSpec {
    std::string op;
    nlohmann::json args;                  // object: name -> reference string or literal
    std::optional<std::string> store;     // bind the result under this name
    std::optional<Expectation> expect;
};

struct OutputSpec {
    int task = 0;
    std::string path;    // relative to the run's output directory
    std::string format;  // "csv" or "table"
};

struct Scenario {
    std::string name;
    double hbar = 1.0;
    std::uint64_t seed = 0;
    nlohmann::json system;              // validated builder spec
    std::vector<nlohmann::json> objects;
    std::vector<TaskSpec> tasks;
    std::vector<OutputSpec> outputs;
    nlohmann::json doc;                 // normalized document (round-trip support)
};

// defaults injected from the CLI; the scenario file wins where it speaks
struct RunOptions {
    std::optional<double> hbar;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

struct TaskReport {
    int index = 0;
    std::string op;
    enum class Status { ok, expect_fail, error } status = Status::ok;
    bool parse_error = false;        // error came from the parse/usage family
    std::string message;             // failure detail or error text
    double wall_ms = 0;
    std::vector<std::pair<std::string, std::string>> outputs;  // path, fnv1a digest
};

struct RunReport {
    std::string name;
    std::vector<TaskReport> entries;

    bool all_ok() const;
    // 0 ok, 1 expectation failure, 2 parse error, 3 numerical error
    int exit_code() const;
    std::string render() const;
};

Scenario parse_scenario(const std::string& text, const RunOptions& opts = {});
std::string serialize_scenario(const Scenario& s);
RunReport run_scenario(const Scenario& s, const RunOptions& opts = {});

// name -> value environment used while executing tasks; exposed for demos
struct Environment {
    int dim = 0;
    double hbar = 1.0;
    std::uint64_t seed = 0;
    std::map<std::string, Value> named;

    const Value& lookup(const std::string& name) const;
};

Environment build_environment(const Scenario& s);
Value execute_operation(const std::string& op, const nlohmann::json& args, Environment& env);
bool check_expectation(const Expectation& e, const Value& v, std::string& detail);

}  // namespace qstat
