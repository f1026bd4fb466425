#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "qpg/suite.hpp"

int main(int argc, char** argv) {
    CLI::App app{"verification suites for truncated quantum group and groupoid models"};
    app.require_subcommand(1);

    qpg::SuiteConfig cfg;
    if (const char* cap = std::getenv("QPG_MAX_ENUM")) {
        char* end = nullptr;
        long long v = std::strtoll(cap, &end, 10);
        if (end && *end == '\0' && v > 0) cfg.enum_cap = v;
    }

    for (const auto& name : qpg::suite_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " suite");
        sub->add_option("--n", cfg.n, "matrix size parameter (generators are (n+1)x(n+1))");
        sub->add_option("--q", cfg.q, "deformation parameter, q > 1");
        sub->add_option("--c", cfg.c, "nonstandard family parameter, c >= 0");
        sub->add_option("--dim", cfg.dim, "per-factor shift-space cutoff D");
        sub->add_option("--levels", cfg.levels, "groupoid level cutoff K");
        sub->add_option("--xbound", cfg.xbound, "groupoid translation bound B");
        sub->add_option("--margin", cfg.margin, "interior margin (-1: per-expression default)");
        sub->add_option("--tol", cfg.tol, "tolerance for derived comparisons");
        sub->add_option("--report", cfg.report_path, "write the report to this path");
        sub->add_option("--format", cfg.format, "report format: json or text");
        sub->add_option("--bundle", cfg.bundle_dir, "save generator families into this directory");
        sub->callback([&cfg, name]() { cfg.suite = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        qpg::SuiteReport report = qpg::run_suite(cfg);
        std::cout << qpg::report_to_text(report);
        if (!cfg.report_path.empty()) qpg::write_report(report, cfg.report_path, cfg.format);
        return report.passed() ? 0 : 1;
    } catch (const qpg::CapError& e) {
        std::cerr << "resource cap exceeded: " << e.what() << "\n"
                  << "hint: raise QPG_MAX_ENUM or lower --levels/--xbound\n";
        return 3;
    } catch (const qpg::OverflowError& e) {
        std::cerr << "truncation overflow: " << e.what() << "\n"
                  << "hint: raise --xbound or --levels\n";
        return 3;
    } catch (const qpg::Error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
}
