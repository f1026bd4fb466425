#pragma once

#include <chrono>
#include <utility>

#include "qpg/conv.hpp"
#include "qpg/qgroup.hpp"
#include "qpg/suite.hpp"

namespace qpg::detail {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

class CheckRecorder {
public:
    void add(std::string id, std::string anchor, bool passed, std::vector<double> measured,
             double tolerance, double elapsed_ms) {
        checks_.push_back(CheckResult{std::move(id), std::move(anchor), passed,
                                      std::move(measured), tolerance, elapsed_ms});
    }
    std::vector<CheckResult> take() { return std::move(checks_); }

private:
    std::vector<CheckResult> checks_;
};

void run_relations(const SuiteConfig& cfg, CheckRecorder& rec);
void run_crosscheck(const SuiteConfig& cfg, CheckRecorder& rec);
void run_independence(const SuiteConfig& cfg, CheckRecorder& rec);
void run_idempotent(const SuiteConfig& cfg, CheckRecorder& rec);
void run_grading(const SuiteConfig& cfg, CheckRecorder& rec);
void run_quotient(const SuiteConfig& cfg, CheckRecorder& rec);
void run_groupoid(const SuiteConfig& cfg, CheckRecorder& rec);
void run_exactseq(const SuiteConfig& cfg, CheckRecorder& rec);
void run_series(const SuiteConfig& cfg, CheckRecorder& rec);
void run_podles(const SuiteConfig& cfg, CheckRecorder& rec);

// Shared groupoid-side helpers.
bool matrix_unit_system(const GroupoidSpec& spec, const std::vector<GroupoidMorphism>& arrows,
                        std::int64_t* points_out);
void podles_structure_checks(const SuiteConfig& cfg, CheckRecorder& rec);

// max over entries of |(u* u)_{ij} - delta_ij| and |(u u*)_{ij} - delta_ij|
// on the interior.
std::pair<double, double> unitarity_defect(const OpMatrix& u, int margin);

} // namespace qpg::detail
