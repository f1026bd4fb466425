#include "qpg/suite.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "suite_detail.hpp"

namespace qpg {

using ordered_json = nlohmann::ordered_json;

void SuiteConfig::validate() const {
    if (n < 1) throw ConstraintError("n must be positive");
    if (!(q > 1.0)) throw ConstraintError("q must exceed 1");
    if (c < 0.0) throw ConstraintError("c must be nonnegative");
    if (dim < 2) throw ConstraintError("fock dimension must be >= 2");
    if (levels < 1) throw ConstraintError("level cutoff must be positive");
    if (xbound < 0) throw ConstraintError("translation bound must be nonnegative");
    if (tol < 0.0) throw ConstraintError("tolerance must be nonnegative");
    if (enum_cap < 1) throw ConstraintError("enumeration cap must be positive");
    if (format != "json" && format != "text") throw ConstraintError("format must be json or text");
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "relations", "crosscheck", "independence", "idempotent", "grading",
        "groupoid",  "exactseq",   "series",       "podles",     "quotient"};
    return names;
}

SuiteReport run_suite(const SuiteConfig& config) {
    config.validate();
    detail::Timer timer;
    detail::CheckRecorder rec;
    if (config.suite == "relations")
        detail::run_relations(config, rec);
    else if (config.suite == "crosscheck")
        detail::run_crosscheck(config, rec);
    else if (config.suite == "independence")
        detail::run_independence(config, rec);
    else if (config.suite == "idempotent")
        detail::run_idempotent(config, rec);
    else if (config.suite == "grading")
        detail::run_grading(config, rec);
    else if (config.suite == "groupoid")
        detail::run_groupoid(config, rec);
    else if (config.suite == "exactseq")
        detail::run_exactseq(config, rec);
    else if (config.suite == "series")
        detail::run_series(config, rec);
    else if (config.suite == "podles")
        detail::run_podles(config, rec);
    else if (config.suite == "quotient")
        detail::run_quotient(config, rec);
    else
        throw ConstraintError("unknown suite '" + config.suite + "'");

    SuiteReport report;
    report.suite = config.suite;
    report.config = config;
    report.checks = rec.take();
    report.elapsed_ms = timer.ms();
    return report;
}

std::string report_to_json(const SuiteReport& report, bool include_elapsed) {
    ordered_json j;
    j["format_version"] = 1;
    j["suite"] = report.suite;
    ordered_json cfg;
    cfg["n"] = report.config.n;
    cfg["q"] = report.config.q;
    cfg["c"] = report.config.c;
    cfg["dim"] = report.config.dim;
    cfg["levels"] = report.config.levels;
    cfg["xbound"] = report.config.xbound;
    cfg["margin"] = report.config.margin;
    cfg["tol"] = report.config.tol;
    j["config"] = std::move(cfg);
    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json e;
        e["id"] = c.id;
        e["anchor"] = c.anchor;
        e["status"] = c.passed ? "pass" : "fail";
        e["measured"] = c.measured;
        e["tolerance"] = c.tolerance;
        if (include_elapsed) e["elapsed_ms"] = c.elapsed_ms;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    j["status"] = report.passed() ? "pass" : "fail";
    if (include_elapsed) j["elapsed_ms"] = report.elapsed_ms;
    return j.dump(1) + "\n";
}

std::string report_to_text(const SuiteReport& report) {
    std::ostringstream os;
    os << "suite " << report.suite << "  (n=" << report.config.n << " q=" << report.config.q
       << " c=" << report.config.c << " dim=" << report.config.dim
       << " levels=" << report.config.levels << " xbound=" << report.config.xbound
       << " margin=" << report.config.margin << " tol=" << report.config.tol << ")\n";
    size_t idw = 8;
    for (const auto& c : report.checks) idw = std::max(idw, c.id.size());
    for (const auto& c : report.checks) {
        os << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(idw + 2))
           << c.id;
        os << " measured=[";
        for (size_t i = 0; i < c.measured.size(); ++i) {
            if (i) os << ", ";
            os << std::setprecision(6) << c.measured[i];
        }
        os << "] tol=" << std::setprecision(6) << c.tolerance;
        os << "  :: " << c.anchor << "\n";
    }
    os << "overall: " << (report.passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

void write_report(const SuiteReport& report, const std::string& path, const std::string& format) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open report path '" + path + "'");
    out << (format == "text" ? report_to_text(report) : report_to_json(report));
}

} // namespace qpg
