#pragma once

// Property suites run by `prepot verify` and the acceptance binary.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <prepot/grid.hpp>
#include <prepot/io.hpp>
#include <prepot/models.hpp>

namespace prepot {

struct VerifyOptions {
    /// Suites to run, in the order of suite_names(); empty runs all.
    std::vector<std::string> suites;
    std::optional<ModelKind> model;
    std::uint64_t seed = 20240521;
    /// When positive, every solved root set is shifted by this relative amount
    /// before use (negative control for the whole pipeline).
    double perturb_roots = 0;
};

struct SuiteResult {
    std::string name;
    bool passed = true;
    int cases = 0;
    int failures = 0;
    /// Worst value of the suite's main metric and the limit it is held to.
    double worst = 0;
    double limit = 0;
    std::string message;
    double runtime_ms = 0;
    io::json details = io::json::array();
};

struct VerifyReport {
    std::vector<SuiteResult> suites;

    bool passed() const noexcept;
    const SuiteResult* first_failure() const noexcept;
    io::json to_json(const VerifyOptions& options) const;
};

/// poles, equivalence, nodes, oracle, residual, sumrule, symmetry
const std::vector<std::string>& suite_names();

/// Parameter matrix shared by the oracle, node and residual suites, with the
/// oracle grid used for each entry.
struct ReferenceCase {
    ModelKind kind;
    ModelParams<double> params;
    Grid<double> oracle_grid;
};
const std::vector<ReferenceCase>& reference_cases();

/// Highest level checked for a reference case: min(3, bound count - 1).
int reference_nmax(const ReferenceCase& c);

/// Random valid couplings supporting levels 0..nmax.
ModelParams<double> random_params(ModelKind kind, int nmax, std::mt19937_64& rng);

SuiteResult run_suite(const std::string& name, const VerifyOptions& options);
VerifyReport run_verify(const VerifyOptions& options);

} // namespace prepot
