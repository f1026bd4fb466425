#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpg/errors.hpp"

namespace qpg {

struct SuiteConfig {
    std::string suite;
    int n = 2;
    double q = 2.0;
    double c = 1.0;
    int dim = 12;    // per-factor fock cutoff D
    int levels = 3;  // groupoid level cutoff K
    int xbound = 2;  // translation bound B
    int margin = -1; // -1: per-expression default
    double tol = 1e-9;
    std::string report_path;
    std::string format = "json";
    std::string bundle_dir;
    std::int64_t enum_cap = 1'000'000;

    void validate() const;
};

struct CheckResult {
    std::string id;
    std::string anchor; // the identity or structure the check certifies
    bool passed = false;
    std::vector<double> measured;
    double tolerance = 0.0;
    double elapsed_ms = 0.0;
};

struct SuiteReport {
    std::string suite;
    SuiteConfig config;
    std::vector<CheckResult> checks;
    double elapsed_ms = 0.0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
};

const std::vector<std::string>& suite_names();

// Runs one named suite; throws ConstraintError for an unknown suite or
// invalid configuration, CapError/OverflowError when truncation resources run
// out.
SuiteReport run_suite(const SuiteConfig& config);

std::string report_to_json(const SuiteReport& report, bool include_elapsed = true);
std::string report_to_text(const SuiteReport& report);
void write_report(const SuiteReport& report, const std::string& path, const std::string& format);

} // namespace qpg
