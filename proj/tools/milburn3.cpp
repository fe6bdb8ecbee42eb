// milburn3: run, cross-check and export intrinsic-decoherence scenarios.

#include "milburn/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

struct Overrides {
    std::optional<std::string> preset;
    std::optional<std::string> config;
    std::vector<std::pair<std::string, std::optional<std::string>>> flags{
        {"omega", {}}, {"lambda", {}}, {"g", {}},     {"gamma", {}},   {"alpha", {}},
        {"t-max", {}}, {"steps", {}},  {"engines", {}}, {"dims", {}},  {"tol", {}},
        {"leakage", {}}, {"lindblad-step", {}}, {"convention", {}}, {"out", {}}, {"gnuplot", {}}};

    void attach(CLI::App* app) {
        app->add_option("--preset", preset, "fig1a..fig1c, fig2a..fig2c");
        app->add_option("--config", config, "key = value config file");
        for (auto& [name, slot] : flags) app->add_option("--" + name, slot);
    }

    milburn::ScenarioConfig build() const {
        milburn::ScenarioConfig cfg;
        if (preset) cfg = milburn::preset(*preset);
        if (config) cfg = milburn::parse_config_file(*config, cfg);
        for (const auto& [name, slot] : flags) {
            if (slot) milburn::apply_setting(cfg, name, *slot);
        }
        cfg.validate();
        return cfg;
    }
};

int cmd_run(const Overrides& ov) {
    const milburn::ScenarioConfig cfg = ov.build();
    const milburn::ScenarioResult res = milburn::run_scenario(cfg);
    if (cfg.output.empty()) {
        milburn::write_csv(std::cout, res.series);
    } else {
        std::ofstream out(cfg.output, std::ios::binary);
        if (!out) throw milburn::ConfigError("cannot write '" + cfg.output + "'");
        milburn::write_csv(out, res.series);
    }
    if (!cfg.gnuplot.empty()) {
        std::ofstream gp(cfg.gnuplot, std::ios::binary);
        if (!gp) throw milburn::ConfigError("cannot write '" + cfg.gnuplot + "'");
        milburn::write_gnuplot(gp, cfg.output.empty() ? "data.csv" : cfg.output, cfg.engines, cfg.name);
    }
    milburn::print_report(std::cerr, cfg, res);
    return res.ok() ? milburn::kExitOk : milburn::kExitValidation;
}

int cmd_validate(const Overrides& ov, double omega_shift) {
    const milburn::ScenarioConfig cfg = ov.build();
    const milburn::ValidationReport rep = milburn::validate(cfg, {omega_shift});
    std::cout << "validating " << cfg.name << '\n';
    rep.print(std::cout);
    return rep.passed() ? milburn::kExitOk : milburn::kExitValidation;
}

int cmd_presets() {
    for (const milburn::ScenarioConfig& c : milburn::presets()) {
        std::cout << c.name << ": omega=" << c.params.omega << " lambda=" << c.params.lambda
                  << " g=" << c.params.g << " gamma=" << c.params.gamma << " alpha=" << c.params.alpha.real()
                  << " t_max=" << c.t_max << " steps=" << c.steps << '\n';
    }
    return milburn::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intrinsic-decoherence dynamics of three coupled oscillators"};
    app.require_subcommand(1);

    Overrides run_ov;
    CLI::App* run = app.add_subcommand("run", "evaluate engines on a time grid and write CSV");
    run_ov.attach(run);

    Overrides val_ov;
    double omega_shift = 0.0;
    CLI::App* val = app.add_subcommand("validate", "engine equivalence and invariant checks");
    val_ov.attach(val);
    val->add_option("--fault-omega-shift", omega_shift, "corrupt Omega by this amount (negative control)");

    app.add_subcommand("presets", "list built-in parameter sets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : milburn::kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_ov);
        if (val->parsed()) return cmd_validate(val_ov, omega_shift);
        return cmd_presets();
    } catch (const milburn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return milburn::kExitConfig;
    } catch (const milburn::TruncationError& e) {
        std::cerr << "truncation error: " << e.what() << '\n';
        return milburn::kExitTruncation;
    } catch (const milburn::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return milburn::kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return milburn::kExitConfig;
    }
}
