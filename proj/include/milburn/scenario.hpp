// scenario.hpp: named parameter sets, config parsing, multi-engine runs,
// cross-validation and CSV output for the command-line runner.

#pragma once

#include "milburn/evolve.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace milburn {

// Process exit codes of the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitTruncation = 4;

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct Tolerances {
    double series{kDefaultSeriesTol};
    double leakage{kDefaultLeakageBudget};
    double agreement{1e-8};          // analytic vs coherent oracle
    double fock_agreement{1e-6};     // plus the reported leakage
    double lindblad_agreement{5e-3};
    double conservation{1e-12};
    double lindblad_step{0.01};
};

struct ScenarioConfig {
    std::string name{"custom"};
    SystemParams params{4.0, 0.5, 0.1, 10.0, {4.0, 0.0}};
    double t_max{30.0};
    int steps{1500};
    std::vector<Engine> engines{Engine::analytic};
    FockDims dims{12, 12, 12};
    Tolerances tol;
    LindbladConvention convention{LindbladConvention::half};
    std::string output;   // CSV path, empty = stdout
    std::string gnuplot;  // optional gnuplot script path

    /// Throws ConfigError on invalid combinations.
    void validate() const;
    std::vector<double> grid() const { return uniform_grid(t_max, steps); }
};

/// fig1{a,b,c}: w=4, l=0.5, gamma=10, alpha=4, g in {0.1, 0.5, 1};
/// fig2{a,b,c}: the same with gamma=100.
std::vector<ScenarioConfig> presets();
ScenarioConfig preset(const std::string& name);  // throws ConfigError

/// Applies one `key = value` setting. Keys: preset, omega, lambda, g, gamma,
/// alpha, t_max, steps, engines, dims, tol, leakage, lindblad_step,
/// convention, out, gnuplot. Dashes and underscores are interchangeable.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                   int line = 0);

/// Flat `key = value` text, `#` starts a comment. A `preset` line resets the
/// config to that preset, so it should come first.
ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {});
ScenarioConfig parse_config_file(const std::string& path, ScenarioConfig base = {});

std::complex<double> parse_complex(const std::string& text);
FockDims parse_dims(const std::string& text);
std::vector<Engine> parse_engines(const std::string& text);

struct PairDeviation {
    Engine a{Engine::analytic};
    Engine b{Engine::analytic};
    double max_dev{0.0};
    double t_at_max{0.0};
    double threshold{0.0};
    bool ok() const noexcept { return max_dev <= threshold; }
};

struct ScenarioResult {
    std::vector<TimeSeries> series;  // ordered by engine
    std::vector<PairDeviation> deviations;
    double leakage{0.0};
    double lindblad_halving{0.0};
    bool ok() const noexcept;
};

/// Runs every configured engine on the config grid and compares all pairs.
/// Throws TruncationError if a Fock engine cannot hold the initial state.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

double pair_threshold(const ScenarioConfig& cfg, Engine a, Engine b, double leakage);
PairDeviation compare(const TimeSeries& a, const TimeSeries& b, double threshold);

struct Check {
    std::string name;
    double measured{0.0};
    double threshold{0.0};
    bool passed{false};
};

struct ValidationReport {
    std::vector<Check> checks;
    bool passed() const noexcept;
    void print(std::ostream& os) const;
};

/// Test hook: shifts Omega before the closed forms are evaluated.
struct FaultInjection {
    double omega_shift{0.0};
};

/// Eigenvalue, decoupling, initial-condition, conservation and bounds checks
/// on the closed forms, plus agreement with every other configured engine.
ValidationReport validate(const ScenarioConfig& cfg, FaultInjection fault = {});

/// `t,n1,n2,n3,engine` rows, %.17g, LF endings, sorted by engine then t.
void write_csv(std::ostream& os, const std::vector<TimeSeries>& series);
std::vector<TimeSeries> read_csv(std::istream& is);

void write_gnuplot(std::ostream& os, const std::string& csv_path, const std::vector<Engine>& engines,
                   const std::string& title);

void print_report(std::ostream& os, const ScenarioConfig& cfg, const ScenarioResult& res);

}  // namespace milburn
