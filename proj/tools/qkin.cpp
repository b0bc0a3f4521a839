#include "qkin/suites.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

int cmd_run(const std::string& suite, const std::string& config_path, double hbar_flag,
            bool hbar_set, std::uint64_t seed_flag, bool seed_set,
            const std::string& report_path) {
    qkin::SuiteConfig cfg;
    if (!config_path.empty()) cfg = qkin::load_config_file(config_path);
    if (hbar_set) cfg.hbar = hbar_flag;
    if (seed_set) cfg.seed = seed_flag;

    std::vector<qkin::CheckReport> checks = qkin::run_suite(suite, cfg);
    nlohmann::json doc = qkin::report_document(suite, checks);

    bool all_passed = true;
    for (const auto& c : checks) {
        std::printf("%-55s %s  error=%.3e  tol=%.3e\n", c.name.c_str(),
                    c.passed ? "pass" : "FAIL", c.measured_error, c.tolerance);
        all_passed = all_passed && c.passed;
    }
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << doc.dump(2) << "\n";
    } else {
        std::cout << doc.dump(2) << "\n";
    }
    return all_passed ? 0 : 1;
}

int cmd_normal_order(const std::string& expr) {
    try {
        qkin::opexpr::NormalForm nf = qkin::opexpr::normal_order(qkin::opexpr::parse(expr));
        std::cout << qkin::opexpr::to_string(nf) << "\n";
        return 0;
    } catch (const qkin::opexpr::SyntaxError& e) {
        std::cerr << "syntax error at offset " << e.offset << ": " << e.what() << "\n";
        return 2;
    }
}

int cmd_unruh(double accel, const std::string& units) {
    qkin::UnitSystem sys = qkin::parse_unit_system(units);
    qkin::PhysicalConstants k = qkin::PhysicalConstants::for_system(sys);
    qkin::ThermalParameters p = qkin::unruh_chain(accel, k);
    const bool si = sys == qkin::UnitSystem::SI;
    std::printf("rapidity per unit proper time : %.12g %s\n", p.rapidity,
                si ? "1/s" : "(natural)");
    std::printf("inverse temperature beta_tau  : %.12g %s\n", p.beta_tau,
                si ? "s" : "(natural)");
    std::printf("Unruh temperature T_U         : %.12g %s\n", p.temperature,
                si ? "K" : "(natural)");
    std::printf("consistency T * beta_tau      : residual %.3e\n",
                p.consistency_residual(k));
    return 0;
}

int cmd_hegerfeldt(int grid, const std::vector<double>& times) {
    qkin::SpreadingConfig cfg;
    if (grid > 0) cfg.grid_points = grid;
    if (!times.empty()) cfg.times = times;
    qkin::SpreadingReport rep = qkin::spreading_report(cfg);
    std::printf("%14s %16s %16s\n", "t", "free_leakage", "hopping_leakage");
    for (const auto& row : rep.rows)
        std::printf("%14.6e %16.6e %16.6e\n", row.t, row.free_leakage, row.hopping_leakage);
    std::printf("%s: %s (error=%.3e, tol=%.3e)\n", rep.check.name.c_str(),
                rep.check.passed ? "pass" : "FAIL", rep.check.measured_error,
                rep.check.tolerance);
    return rep.check.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qkin: finite-dimensional quantum kinematics checks"};
    app.require_subcommand(1);

    std::string suite, config_path, report_path;
    double hbar_flag = 1.0;
    std::uint64_t seed_flag = 7;
    auto* run = app.add_subcommand("run", "execute a check suite");
    run->add_option("suite", suite, "fock|photon|scaffold|opexpr|modular|hegerfeldt|all")
        ->required();
    run->add_option("--config", config_path, "strict key=value config file");
    auto* hbar_opt = run->add_option("--hbar", hbar_flag, "Planck constant (natural units)");
    auto* seed_opt = run->add_option("--seed", seed_flag, "random seed");
    run->add_option("--report", report_path, "write the JSON report here");

    std::string expr;
    auto* no = app.add_subcommand("normal-order", "normal-order a ladder expression");
    no->add_option("expr", expr, "expression, e.g. \"a1*ad1\"")->required();

    double accel = 0.0;
    std::string units = "natural";
    auto* unruh = app.add_subcommand("unruh", "thermal parameters of uniform acceleration");
    unruh->add_option("--accel", accel, "proper acceleration")->required();
    unruh->add_option("--units", units, "SI or natural");

    int grid = 0;
    std::vector<double> times;
    auto* heg = app.add_subcommand("hegerfeldt", "free spreading leakage table");
    heg->add_option("--grid", grid, "grid points");
    heg->add_option("--t", times, "evolution times")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(suite, config_path, hbar_flag, hbar_opt->count() > 0, seed_flag,
                           seed_opt->count() > 0, report_path);
        if (no->parsed()) return cmd_normal_order(expr);
        if (unruh->parsed()) return cmd_unruh(accel, units);
        if (heg->parsed()) return cmd_hegerfeldt(grid, times);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
