#include "milburn/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace milburn {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
    key = trim(key);
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    for (char& c : key) {
        c = c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return key;
}

double parse_double(const std::string& text, const std::string& key, int line) {
    const std::string v = trim(text);
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'", line);
    }
    if (used != v.size() || !std::isfinite(out)) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'", line);
    }
    return out;
}

int parse_int(const std::string& text, const std::string& key, int line) {
    const double d = parse_double(text, key, line);
    if (d != std::floor(d) || std::abs(d) > 1e9) {
        throw ConfigError("'" + key + "' expects an integer, got '" + trim(text) + "'", line);
    }
    return static_cast<int>(d);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string::npos) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

ScenarioConfig make_preset(const std::string& name, double gamma, double g) {
    ScenarioConfig c;
    c.name = name;
    c.params = SystemParams{4.0, 0.5, g, gamma, {4.0, 0.0}};
    c.t_max = 30.0;
    c.steps = 1500;
    c.engines = {Engine::analytic};
    return c;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

// ------------------------------------------------------------------ config

void ScenarioConfig::validate() const {
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (steps < 2) throw ConfigError("steps must be >= 2");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be > 0");
    if (engines.empty()) throw ConfigError("engine set must be nonempty");
    if (!(tol.series > 0.0 && tol.series < 1.0)) throw ConfigError("tol must lie in (0, 1)");
    if (!(tol.leakage > 0.0 && tol.leakage < 1.0)) throw ConfigError("leakage must lie in (0, 1)");
    if (!(tol.lindblad_step > 0.0)) throw ConfigError("lindblad_step must be > 0");
}

std::vector<ScenarioConfig> presets() {
    return {make_preset("fig1a", 10.0, 0.1),  make_preset("fig1b", 10.0, 0.5),
            make_preset("fig1c", 10.0, 1.0),  make_preset("fig2a", 100.0, 0.1),
            make_preset("fig2b", 100.0, 0.5), make_preset("fig2c", 100.0, 1.0)};
}

ScenarioConfig preset(const std::string& name) {
    for (const ScenarioConfig& c : presets()) {
        if (c.name == name) return c;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

std::complex<double> parse_complex(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) throw ConfigError("empty complex number");
    if (s.front() == '(' && s.back() == ')') {
        const auto parts = split(s.substr(1, s.size() - 2), ",");
        if (parts.size() != 2) throw ConfigError("complex '(re,im)' needs two parts: " + text);
        return {parse_double(parts[0], "alpha", 0), parse_double(parts[1], "alpha", 0)};
    }
    if (s.back() != 'i' && s.back() != 'j') return {parse_double(s, "alpha", 0), 0.0};
    s.pop_back();
    // split at the last sign that is not an exponent sign or the leading sign
    std::size_t cut = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            cut = i;
            break;
        }
    }
    auto imag_of = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t, "alpha", 0);
    };
    if (cut == std::string::npos) return {0.0, imag_of(s)};
    return {parse_double(s.substr(0, cut), "alpha", 0), imag_of(s.substr(cut))};
}

FockDims parse_dims(const std::string& text) {
    const auto parts = split(text, ",x");
    if (parts.size() != 3) throw ConfigError("dims expects three values like 12,12,12");
    try {
        return FockDims(parse_int(parts[0], "dims", 0), parse_int(parts[1], "dims", 0),
                        parse_int(parts[2], "dims", 0));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<Engine> parse_engines(const std::string& text) {
    std::vector<Engine> out;
    for (const std::string& name : split(text, ",")) {
        if (name.empty()) continue;
        if (name == "all") {
            out = {Engine::analytic, Engine::coherent, Engine::fock, Engine::lindblad};
            continue;
        }
        const auto e = parse_engine(name);
        if (!e) throw ConfigError("unknown engine '" + name + "'");
        out.push_back(*e);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw ConfigError("engine set must be nonempty");
    return out;
}

void apply_setting(ScenarioConfig& cfg, const std::string& raw_key, const std::string& value, int line) {
    const std::string key = normalize_key(raw_key);
    const std::string v = trim(value);
    try {
        if (key == "preset") {
            cfg = preset(v);
        } else if (key == "name") {
            cfg.name = v;
        } else if (key == "omega") {
            cfg.params.omega = parse_double(v, key, line);
        } else if (key == "lambda") {
            cfg.params.lambda = parse_double(v, key, line);
        } else if (key == "g") {
            cfg.params.g = parse_double(v, key, line);
        } else if (key == "gamma") {
            cfg.params.gamma = parse_double(v, key, line);
        } else if (key == "alpha") {
            cfg.params.alpha = parse_complex(v);
        } else if (key == "t_max") {
            cfg.t_max = parse_double(v, key, line);
        } else if (key == "steps") {
            cfg.steps = parse_int(v, key, line);
        } else if (key == "engines") {
            cfg.engines = parse_engines(v);
        } else if (key == "dims") {
            cfg.dims = parse_dims(v);
        } else if (key == "tol") {
            cfg.tol.series = parse_double(v, key, line);
        } else if (key == "leakage") {
            cfg.tol.leakage = parse_double(v, key, line);
        } else if (key == "lindblad_step") {
            cfg.tol.lindblad_step = parse_double(v, key, line);
        } else if (key == "convention") {
            if (v == "half") {
                cfg.convention = LindbladConvention::half;
            } else if (v == "printed") {
                cfg.convention = LindbladConvention::printed;
            } else {
                throw ConfigError("convention must be 'half' or 'printed'", line);
            }
        } else if (key == "out") {
            cfg.output = v;
        } else if (key == "gnuplot") {
            cfg.gnuplot = v;
        } else {
            throw ConfigError("unknown key '" + raw_key + "'", line);
        }
    } catch (const ConfigError& e) {
        if (e.line() == 0 && line > 0) throw ConfigError(e.what(), line);
        throw;
    }
}

ScenarioConfig parse_config(std::istream& in, ScenarioConfig base) {
    ScenarioConfig cfg = std::move(base);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        apply_setting(cfg, text.substr(0, eq), text.substr(eq + 1), line);
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path, ScenarioConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

// ------------------------------------------------------------------- runs

bool ScenarioResult::ok() const noexcept {
    return std::all_of(deviations.begin(), deviations.end(), [](const PairDeviation& d) { return d.ok(); });
}

double pair_threshold(const ScenarioConfig& cfg, Engine a, Engine b, double leakage) {
    if (a == Engine::lindblad || b == Engine::lindblad) return cfg.tol.lindblad_agreement;
    if (a == Engine::fock || b == Engine::fock) return cfg.tol.fock_agreement + leakage;
    return cfg.tol.agreement;
}

PairDeviation compare(const TimeSeries& a, const TimeSeries& b, double threshold) {
    if (a.times != b.times) throw std::invalid_argument("compare: time grids differ");
    PairDeviation d{a.engine, b.engine, 0.0, 0.0, threshold};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double dev = std::max({std::abs(a.n1[i] - b.n1[i]), std::abs(a.n2[i] - b.n2[i]),
                                     std::abs(a.n3[i] - b.n3[i])});
        if (dev > d.max_dev) {
            d.max_dev = dev;
            d.t_at_max = a.times[i];
        }
    }
    return d;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const std::vector<double> times = cfg.grid();
    ScenarioResult res;
    std::vector<Engine> engines = cfg.engines;
    std::sort(engines.begin(), engines.end());
    for (Engine e : engines) {
        switch (e) {
            case Engine::analytic:
                res.series.push_back(analytic_series(cfg.params, times));
                break;
            case Engine::coherent: {
                CoherentOracle oracle(cfg.params, cfg.tol.series);
                res.series.push_back(oracle.series(times));
                break;
            }
            case Engine::fock: {
                FockSeriesEngine engine(cfg.params, cfg.dims, {cfg.tol.series, cfg.tol.leakage});
                res.leakage = engine.leakage();
                res.series.push_back(engine.series(times));
                break;
            }
            case Engine::lindblad: {
                LindbladOptions opts;
                opts.step = cfg.tol.lindblad_step;
                opts.convention = cfg.convention;
                opts.leakage_budget = cfg.tol.leakage;
                LindbladResult lr = integrate_lindblad(cfg.params, cfg.dims, times, opts);
                res.lindblad_halving = lr.halving_deviation;
                res.series.push_back(std::move(lr.series));
                break;
            }
        }
    }
    for (std::size_t i = 0; i < res.series.size(); ++i) {
        for (std::size_t j = i + 1; j < res.series.size(); ++j) {
            const double thr = pair_threshold(cfg, res.series[i].engine, res.series[j].engine, res.leakage);
            res.deviations.push_back(compare(res.series[i], res.series[j], thr));
        }
    }
    return res;
}

// ------------------------------------------------------------- validation

bool ValidationReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void ValidationReport::print(std::ostream& os) const {
    for (const Check& c : checks) {
        os << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(34) << c.name
           << " measured=" << std::scientific << std::setprecision(3) << c.measured
           << " threshold=" << c.threshold << '\n';
    }
    os << std::defaultfloat << (passed() ? "validation passed\n" : "validation FAILED\n");
}

ValidationReport validate(const ScenarioConfig& cfg, FaultInjection fault) {
    cfg.validate();
    ValidationReport rep;
    auto add = [&](std::string name, double measured, double threshold) {
        rep.checks.push_back({std::move(name), measured, threshold, measured <= threshold});
    };
    const SystemParams& p = cfg.params;
    SpectralData s = effective_frequencies(p);
    s.Omega += fault.omega_shift;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(single_particle_matrix(p));
    std::array<double, 3> mine{s.omega_minus, s.Omega, s.Omega2};
    std::sort(mine.begin(), mine.end());
    double eig_dev = 0.0;
    for (int i = 0; i < 3; ++i) eig_dev = std::max(eig_dev, std::abs(mine[static_cast<std::size_t>(i)] - es.eigenvalues()(i)));
    add("spectral eigenvalues", eig_dev, 1e-10);
    add("spectral decoupling", std::abs(residual_coupling(p, s.phi)), 1e-12 * std::max(1.0, p.omega));

    const double a2 = p.alpha_sq();
    const PhotonNumbers at0 = mean_photon_numbers(p, s, 0.0);
    add("initial condition", std::max({std::abs(at0.n1 - a2), std::abs(at0.n2), std::abs(at0.n3)}),
        cfg.tol.conservation);

    const std::vector<double> times = cfg.grid();
    TimeSeries analytic;
    analytic.engine = Engine::analytic;
    analytic.params = p;
    double cons = 0.0;
    double bound = 0.0;
    for (double t : times) {
        const PhotonNumbers n = mean_photon_numbers(p, s, t);
        analytic.push_back(t, n);
        cons = std::max(cons, std::abs(n.total() - a2));
        for (double v : {n.n1, n.n2, n.n3}) bound = std::max({bound, -v, v - a2});
    }
    add("analytic conservation", cons, cfg.tol.conservation);
    add("analytic bounds [0,|alpha|^2]", std::max(bound, 0.0), cfg.tol.conservation);

    for (Engine e : cfg.engines) {
        if (e == Engine::analytic) continue;
        TimeSeries other;
        double leakage = 0.0;
        if (e == Engine::coherent) {
            CoherentOracle oracle(p, cfg.tol.series);
            other = oracle.series(times);
            double c = 0.0;
            for (std::size_t i = 0; i < other.size(); ++i) c = std::max(c, std::abs(other.at(i).total() - a2));
            add("coherent conservation", c, 1e-8);
        } else if (e == Engine::fock) {
            FockSeriesEngine engine(p, cfg.dims, {cfg.tol.series, cfg.tol.leakage});
            leakage = engine.leakage();
            other = engine.series(times);
            double over = 0.0;
            for (double tr : other.trace) over = std::max(over, tr - 1.0);
            add("fock trace <= 1", std::max(over, 0.0), 1e-12);
        } else {
            LindbladOptions opts;
            opts.step = cfg.tol.lindblad_step;
            opts.convention = cfg.convention;
            opts.leakage_budget = cfg.tol.leakage;
            LindbladResult lr = integrate_lindblad(p, cfg.dims, times, opts);
            add("lindblad step halving", lr.halving_deviation, opts.halving_tol);
            other = std::move(lr.series);
        }
        const PairDeviation d = compare(analytic, other, pair_threshold(cfg, Engine::analytic, e, leakage));
        add("agreement analytic-" + std::string(engine_name(e)), d.max_dev, d.threshold);
    }
    return rep;
}

// -------------------------------------------------------------------- I/O

void write_csv(std::ostream& os, const std::vector<TimeSeries>& series) {
    std::vector<const TimeSeries*> order;
    for (const TimeSeries& s : series) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(),
                     [](const TimeSeries* a, const TimeSeries* b) { return a->engine < b->engine; });
    os << "t,n1,n2,n3,engine\n";
    for (const TimeSeries* s : order) {
        std::vector<std::size_t> idx(s->size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return s->times[a] < s->times[b]; });
        const std::string name(engine_name(s->engine));
        for (std::size_t i : idx) {
            os << fmt17(s->times[i]) << ',' << fmt17(s->n1[i]) << ',' << fmt17(s->n2[i]) << ','
               << fmt17(s->n3[i]) << ',' << name << '\n';
        }
    }
}

std::vector<TimeSeries> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != "t,n1,n2,n3,engine") {
        throw ConfigError("CSV header must be 't,n1,n2,n3,engine'", 1);
    }
    std::vector<TimeSeries> out;
    std::map<Engine, std::size_t> where;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split(line, ",");
        if (f.size() != 5) throw ConfigError("CSV row needs 5 fields", lineno);
        const auto e = parse_engine(f[4]);
        if (!e) throw ConfigError("unknown engine '" + f[4] + "'", lineno);
        auto it = where.find(*e);
        if (it == where.end()) {
            it = where.emplace(*e, out.size()).first;
            out.emplace_back();
            out.back().engine = *e;
        }
        out[it->second].push_back(parse_double(f[0], "t", lineno),
                                  {parse_double(f[1], "n1", lineno), parse_double(f[2], "n2", lineno),
                                   parse_double(f[3], "n3", lineno)});
    }
    return out;
}

void write_gnuplot(std::ostream& os, const std::string& csv_path, const std::vector<Engine>& engines,
                   const std::string& title) {
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 't'\nset ylabel '<n_j>'\n"
       << "set title '" << title << "'\n"
       << "plot \\\n";
    const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728"};
    for (std::size_t e = 0; e < engines.size(); ++e) {
        const std::string name(engine_name(engines[e]));
        for (int j = 1; j <= 3; ++j) {
            os << "  '" << csv_path << "' using 1:(strcol(5) eq '" << name << "' ? $" << j + 1
               << " : 1/0) with lines lc rgb '" << colors[j - 1] << "' dt " << e + 1 << " title 'n" << j
               << " " << name << "'";
            const bool last = e + 1 == engines.size() && j == 3;
            os << (last ? "\n" : ", \\\n");
        }
    }
}

void print_report(std::ostream& os, const ScenarioConfig& cfg, const ScenarioResult& res) {
    os << "scenario " << cfg.name << ": omega=" << cfg.params.omega << " lambda=" << cfg.params.lambda
       << " g=" << cfg.params.g << " gamma=" << cfg.params.gamma << " alpha=" << cfg.params.alpha.real()
       << (cfg.params.alpha.imag() < 0 ? "" : "+") << cfg.params.alpha.imag() << "i"
       << " grid=[0," << cfg.t_max << "]x" << cfg.steps << '\n';
    if (res.leakage > 0.0) os << "fock leakage " << std::scientific << res.leakage << std::defaultfloat << '\n';
    for (const PairDeviation& d : res.deviations) {
        os << (d.ok() ? "ok     " : "BREACH ") << engine_name(d.a) << " vs " << engine_name(d.b)
           << ": max dev " << std::scientific << std::setprecision(3) << d.max_dev << " at t="
           << std::defaultfloat << std::setprecision(6) << d.t_at_max << " (threshold " << std::scientific
           << std::setprecision(1) << d.threshold << ")\n"
           << std::defaultfloat << std::setprecision(6);
    }
}

}  // namespace milburn
