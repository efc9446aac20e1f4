// SPDX-License-Identifier: Apache-2.0
//
// kwwint: closed-form interference densities for Poisson networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// The kwwint command line: flat key = value run configurations, flag
// parsing, and the CSV writers behind each subcommand.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <locale>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"

#include "kwwint/coverage.hpp"
#include "kwwint/interference.hpp"
#include "kwwint/ppp_mc.hpp"
#include "kwwint/stable_pdf.hpp"
#include "kwwint/validation.hpp"

namespace kwwint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitBadInput = 2;

/// Invalid command-line or configuration input.
class BadInput : public std::invalid_argument {
public:
    explicit BadInput(const std::string& what) : std::invalid_argument(what) {}
};

enum class Command { Pdf, Cdf, Lt, Coverage, Simulate, Validate };

inline const std::vector<std::pair<Command, std::string>>& command_names() {
    static const std::vector<std::pair<Command, std::string>> names = {
        {Command::Pdf, "pdf"},           {Command::Cdf, "cdf"},           {Command::Lt, "lt"},
        {Command::Coverage, "coverage"}, {Command::Simulate, "simulate"}, {Command::Validate, "validate"},
    };
    return names;
}

inline std::string to_string(Command c) {
    for (const auto& [cmd, name] : command_names()) {
        if (cmd == c) {
            return name;
        }
    }
    return "?";
}

enum class Kind { Real, Integer, Text, Flag, Grid, DbGrid, Ratio };

struct KeySpec {
    std::string name;
    Kind kind;
    std::string fallback;
    std::string help;
};

namespace detail {

inline std::vector<KeySpec> network_keys(const char* eta = "4") {
    return {
        {"eta", Kind::Integer, eta, "path-loss exponent (integer >= 3)"},
        {"lambda", Kind::Real, "2", "transmitter density per km^2"},
        {"fading", Kind::Text, "rayleigh", "fading model: rayleigh, nakagami or rician"},
        {"mu", Kind::Real, "1", "Rayleigh rate (mean power 1/mu)"},
        {"m", Kind::Real, "10", "Nakagami shape"},
        {"pr", Kind::Real, "1", "mean received power (Nakagami, Rician)"},
        {"k", Kind::Real, "3", "Rician K-factor"},
    };
}

inline std::vector<KeySpec> link_keys() {
    return {
        {"signal-fading", Kind::Text, "", "fading of the serving link (defaults to --fading)"},
        {"interference-fading", Kind::Text, "", "fading of the interferers (defaults to --fading)"},
        {"r", Kind::Real, "0.25", "serving distance (km)"},
        {"noise", Kind::Real, "0", "noise power sigma^2"},
    };
}

inline std::vector<KeySpec> mc_keys() {
    return {
        {"trials", Kind::Integer, "2000", "Monte Carlo trials"},
        {"seed", Kind::Integer, "1", "base seed"},
        {"window", Kind::Real, "40", "side of the square window (km)"},
        {"guard", Kind::Real, "0.001", "minimum interferer distance (km)"},
        {"threads", Kind::Integer, "1", "worker threads (0: hardware concurrency)"},
    };
}

inline void append(std::vector<KeySpec>& to, const std::vector<KeySpec>& more) {
    to.insert(to.end(), more.begin(), more.end());
}

} // namespace detail

/// Keys accepted by `command`, in flag and config-file form alike.
inline const std::vector<KeySpec>& keys_for(Command command) {
    static const std::map<Command, std::vector<KeySpec>> table = [] {
        std::map<Command, std::vector<KeySpec>> t;
        const KeySpec output{"output", Kind::Text, "", "output file (relative paths resolve against KWWINT_OUTPUT_DIR)"};

        auto pdf = detail::network_keys();
        pdf.push_back({"i-grid", Kind::Grid, "log:0.05:50:200", "interference grid log|lin:min:max:points"});
        pdf.push_back({"tol", Kind::Real, "1e-6", "maximum closed-form vs Talbot difference"});
        pdf.push_back(output);
        t[Command::Pdf] = pdf;
        t[Command::Cdf] = pdf;

        auto lt = detail::network_keys();
        lt.push_back({"s-grid", Kind::Grid, "log:0.01:100:50", "transform grid log|lin:min:max:points"});
        lt.push_back({"tol", Kind::Real, "1e-6", "maximum round-trip difference"});
        lt.push_back(output);
        t[Command::Lt] = lt;

        auto cov = detail::network_keys("3");
        detail::append(cov, detail::link_keys());
        cov.push_back({"t-grid-db", Kind::DbGrid, "-10:20:31", "SINR thresholds in dB, min:max:points"});
        cov.push_back({"with-mc", Kind::Flag, "false", "add Monte Carlo columns"});
        cov.push_back({"check", Kind::Flag, "false", "fail when a Monte Carlo difference exceeds 0.03"});
        cov.push_back({"check-lt-shortcut", Kind::Flag, "false", "compare with the Laplace-transform shortcut"});
        cov.push_back({"xi", Kind::Flag, "false", "add the eta = 3 Nakagami 2F2 column"});
        detail::append(cov, detail::mc_keys());
        cov.push_back(output);
        t[Command::Coverage] = cov;

        auto sim = detail::network_keys("3");
        detail::append(sim, detail::link_keys());
        detail::append(sim, detail::mc_keys());
        sim.push_back({"check", Kind::Flag, "false", "fail when the interference KS statistic exceeds 0.05"});
        sim.push_back(output);
        t[Command::Simulate] = sim;

        t[Command::Validate] = {
            {"quick", Kind::Flag, "false", "reduced grids"},
            {"beta", Kind::Ratio, "", "restrict the per-beta checks to p/q"},
            {"composition", Kind::Flag, "false", "only the composition check"},
            output,
        };
        return t;
    }();
    return table.at(command);
}

inline const KeySpec& key_spec(Command command, const std::string& key) {
    for (const KeySpec& k : keys_for(command)) {
        if (k.name == key) {
            return k;
        }
    }
    throw BadInput("unknown key '" + key + "' for command " + to_string(command));
}

/// Evenly spaced grid on a linear or logarithmic axis.
struct GridSpec {
    bool logarithmic = true;
    double min = 1.0;
    double max = 1.0;
    int points = 1;

    std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(points));
        if (points == 1) {
            out.push_back(min);
            return out;
        }
        for (int i = 0; i < points; ++i) {
            const double f = static_cast<double>(i) / (points - 1);
            out.push_back(logarithmic ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                                      : min + f * (max - min));
        }
        out.front() = min;
        out.back() = max;
        return out;
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double to_real(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw BadInput("key '" + key + "': expected a number, got '" + text + "'");
}

inline long long to_integer(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw BadInput("key '" + key + "': expected an integer, got '" + text + "'");
}

inline bool to_flag(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "on" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "off" || text == "no") {
        return false;
    }
    throw BadInput("key '" + key + "': expected true or false, got '" + text + "'");
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep)) {
        parts.push_back(cur);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

inline GridSpec to_grid(const std::string& key, const std::string& text, bool db) {
    std::vector<std::string> parts = split(text, ':');
    GridSpec g;
    g.logarithmic = false;
    if (!parts.empty() && (parts[0] == "log" || parts[0] == "lin")) {
        g.logarithmic = parts[0] == "log";
        parts.erase(parts.begin());
    } else if (!db) {
        throw BadInput("key '" + key + "': grid must read log:min:max:points or lin:min:max:points");
    }
    if (parts.size() != 3) {
        throw BadInput("key '" + key + "': grid must have min:max:points, got '" + text + "'");
    }
    if (db && g.logarithmic) {
        throw BadInput("key '" + key + "': dB grids are linear in dB");
    }
    g.min = to_real(key, parts[0]);
    g.max = to_real(key, parts[1]);
    const long long n = to_integer(key, parts[2]);
    if (n < 1 || n > 10'000'000) {
        throw BadInput("key '" + key + "': points must lie in [1, 1e7]");
    }
    g.points = static_cast<int>(n);
    if (!std::isfinite(g.min) || !std::isfinite(g.max) || g.max < g.min) {
        throw BadInput("key '" + key + "': need finite min <= max");
    }
    if (g.points == 1 && g.max != g.min) {
        throw BadInput("key '" + key + "': a single-point grid needs min == max");
    }
    if (g.points > 1 && g.max == g.min) {
        throw BadInput("key '" + key + "': min == max needs points == 1");
    }
    if (g.logarithmic && !(g.min > 0.0)) {
        throw BadInput("key '" + key + "': logarithmic grids need min > 0");
    }
    return g;
}

inline void check_value(const KeySpec& spec, const std::string& text) {
    switch (spec.kind) {
    case Kind::Real: to_real(spec.name, text); break;
    case Kind::Integer: to_integer(spec.name, text); break;
    case Kind::Flag: to_flag(spec.name, text); break;
    case Kind::Grid: to_grid(spec.name, text, false); break;
    case Kind::DbGrid: to_grid(spec.name, text, true); break;
    case Kind::Ratio:
        try {
            Rational::parse(text);
        } catch (const DomainError&) {
            throw BadInput("key '" + spec.name + "': expected p/q, got '" + text + "'");
        }
        break;
    case Kind::Text: break;
    }
}

} // namespace detail

/// A command with its explicitly set parameters. Keys left out take the
/// defaults listed by keys_for().
struct RunConfig {
    Command command = Command::Validate;
    std::map<std::string, std::string> parameters;

    /// Set `key`, rejecting unknown keys and malformed values.
    void set(const std::string& key, const std::string& value) {
        const KeySpec& spec = key_spec(command, key);
        detail::check_value(spec, value);
        if (spec.kind == Kind::Flag) {
            parameters[key] = detail::to_flag(key, value) ? "true" : "false";
        } else {
            parameters[key] = value;
        }
    }

    bool has(const std::string& key) const { return parameters.count(key) != 0; }

    std::string text(const std::string& key) const {
        const auto it = parameters.find(key);
        return it != parameters.end() ? it->second : key_spec(command, key).fallback;
    }
    double real(const std::string& key) const { return detail::to_real(key, text(key)); }
    long long integer(const std::string& key) const { return detail::to_integer(key, text(key)); }
    bool flag(const std::string& key) const { return detail::to_flag(key, text(key)); }
    GridSpec grid(const std::string& key) const {
        return detail::to_grid(key, text(key), key_spec(command, key).kind == Kind::DbGrid);
    }

    std::optional<std::string> output_path() const {
        const std::string p = text("output");
        return p.empty() ? std::nullopt : std::optional<std::string>(p);
    }
};

/// Parse flat `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values are rejected with the line number.
inline std::map<std::string, std::string> parse_config_text(Command command, std::string_view text) {
    RunConfig probe{command, {}};
    std::istringstream is{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = detail::trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw BadInput("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        try {
            probe.set(key, value);
        } catch (const BadInput& e) {
            throw BadInput("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return probe.parameters;
}

/// The explicit parameters as a config file, keys sorted.
inline std::string to_config_text(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# kwwint " << to_string(cfg.command) << '\n';
    for (const auto& [k, v] : cfg.parameters) {
        os << k << " = " << v << '\n';
    }
    return os.str();
}

/// The explicit parameters as `--key=value` arguments (without the command).
inline std::vector<std::string> to_flags(const RunConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& [k, v] : cfg.parameters) {
        out.push_back("--" + k + "=" + v);
    }
    return out;
}

/// Decimal with 17 significant digits, independent of the global locale.
inline std::string format_real(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

namespace detail {

inline FadingModel fading_named(const RunConfig& cfg, const std::string& key, const std::string& name) {
    if (name == "rayleigh") {
        return FadingModel::rayleigh(cfg.real("mu"));
    }
    if (name == "nakagami") {
        return FadingModel::nakagami(cfg.real("m"), cfg.real("pr"));
    }
    if (name == "rician") {
        return FadingModel::rician(cfg.real("k"), cfg.real("pr"));
    }
    throw BadInput("key '" + key + "': unknown fading '" + name + "' (rayleigh, nakagami, rician)");
}

inline FadingModel fading(const RunConfig& cfg, const std::string& key) {
    std::string name = key == "fading" ? cfg.text("fading") : cfg.text(key);
    if (name.empty()) {
        return fading_named(cfg, "fading", cfg.text("fading"));
    }
    return fading_named(cfg, key, name);
}

inline NetworkParams network(const RunConfig& cfg) {
    const long long eta = cfg.integer("eta");
    if (eta < 0 || eta > 1000) {
        throw BadInput("key 'eta': out of range");
    }
    return NetworkParams(cfg.real("lambda"), static_cast<int>(eta));
}

inline CoverageScenario scenario(const RunConfig& cfg) {
    CoverageScenario sc;
    sc.net = network(cfg);
    sc.signal_fading = fading(cfg, "signal-fading");
    sc.interference_fading = fading(cfg, "interference-fading");
    sc.r_km = cfg.real("r");
    sc.noise = cfg.real("noise");
    for (double db : cfg.grid("t-grid-db").values()) {
        sc.thresholds.push_back(db_to_linear(db));
    }
    sc.validate();
    return sc;
}

inline mc::SimConfig sim_config(const RunConfig& cfg) {
    mc::SimConfig sim;
    sim.net = network(cfg);
    sim.signal_fading = fading(cfg, "signal-fading");
    sim.interference_fading = fading(cfg, "interference-fading");
    sim.serving_distance_km = cfg.real("r");
    sim.noise = cfg.real("noise");
    const long long trials = cfg.integer("trials");
    const long long seed = cfg.integer("seed");
    const long long threads = cfg.integer("threads");
    if (trials < 1 || trials > 100'000'000) {
        throw BadInput("key 'trials': must lie in [1, 1e8]");
    }
    if (seed < 0) {
        throw BadInput("key 'seed': must be >= 0");
    }
    if (threads < 0 || threads > 1024) {
        throw BadInput("key 'threads': must lie in [0, 1024]");
    }
    sim.trials = static_cast<int>(trials);
    sim.seed = static_cast<std::uint64_t>(seed);
    sim.window_km = cfg.real("window");
    sim.guard_km = cfg.real("guard");
    sim.threads = static_cast<unsigned>(threads);
    sim.validate();
    return sim;
}

struct Csv {
    std::ostream& os;

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((os << (first ? "" : ",") << cell(cells), first = false), ...);
        os << '\n';
    }

    static std::string cell(double v) { return format_real(v); }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }
    static std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
};

// Closed form (when one exists) against Talbot for the pdf or cdf.
inline int run_density(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool cumulative) {
    const NetworkParams net = network(cfg);
    const KwwScale scale = kww_scale(net, fading(cfg, "fading"));
    const double tol = cfg.real("tol");
    const std::vector<double> grid = cfg.grid("i-grid").values();
    std::optional<stable::StablePdf> closed;
    if (stable::has_closed_form(scale.beta)) {
        closed.emplace(scale);
    } else {
        err << "warning: no closed form for beta = " << scale.beta << " (eta = " << net.eta
            << "); closed-form column left empty, Talbot only\n";
    }
    const stable::StablePdf talbot(scale, stable::Backend::Talbot);
    const std::string what = cumulative ? "cdf" : "pdf";
    Csv csv{out};
    csv.row("I", what + "_closed_form", what + "_talbot", "abs_diff");
    double worst = 0.0;
    for (double i : grid) {
        auto eval = [&](const stable::StablePdf& d) { return cumulative ? d.cdf(i) : d.pdf(i); };
        const double tv = eval(talbot);
        std::optional<double> cv;
        std::optional<double> diff;
        if (closed) {
            cv = eval(*closed);
            diff = std::abs(*cv - tv);
            worst = std::max(worst, *diff);
        }
        csv.row(i, cv, tv, diff);
    }
    if (closed && worst > tol) {
        err << "max abs_diff " << format_real(worst) << " exceeds tol " << format_real(tol) << '\n';
        return kExitValidationFailure;
    }
    return kExitOk;
}

inline int run_lt(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const KwwScale scale = kww_scale(network(cfg), fading(cfg, "fading"));
    const stable::StablePdf d = stable::StablePdf::best_available(scale);
    const double tol = cfg.real("tol");
    Csv csv{out};
    csv.row("s", "lt_exact", "lt_numerical", "abs_diff");
    double worst = 0.0;
    for (double s : cfg.grid("s-grid").values()) {
        const double exact = laplace_transform(scale, s);
        const double num = stable::numerical_laplace_transform(d, s);
        const double diff = std::abs(exact - num);
        worst = std::max(worst, diff);
        csv.row(s, exact, num, diff);
    }
    if (worst > tol) {
        err << "max abs_diff " << format_real(worst) << " exceeds tol " << format_real(tol) << '\n';
        return kExitValidationFailure;
    }
    return kExitOk;
}

inline int run_coverage(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const CoverageScenario sc = scenario(cfg);
    const bool with_mc = cfg.flag("with-mc");
    const bool check = cfg.flag("check");
    const bool lt = cfg.flag("check-lt-shortcut");
    const bool xi = cfg.flag("xi");
    if (check && !with_mc) {
        throw BadInput("key 'check': needs with-mc");
    }
    if (lt && (!std::holds_alternative<Rayleigh>(sc.signal_fading.variant()))) {
        throw BadInput("key 'check-lt-shortcut': needs Rayleigh signal fading");
    }
    if (xi && (sc.net.eta != 3 || !std::holds_alternative<Nakagami>(sc.interference_fading.variant()))) {
        throw BadInput("key 'xi': needs eta = 3 and Nakagami interference fading");
    }
    const std::vector<double> analytic = coverage_analytic(sc);
    std::vector<double> empirical;
    if (with_mc) {
        empirical = mc::empirical_coverage(mc::simulate(sim_config(cfg)), sc.thresholds);
    }
    std::vector<double> shortcut;
    if (lt) {
        shortcut = coverage_rayleigh_lt(sc);
    }
    std::optional<XiCoverage> xi_cov;
    if (xi) {
        xi_cov = coverage_xi_eta3(sc);
    }

    std::vector<std::string> header = {"T_dB", "p_c_analytic"};
    if (with_mc) {
        header.insert(header.end(), {"p_c_mc", "abs_diff"});
    }
    if (lt) {
        header.insert(header.end(), {"p_c_lt_shortcut", "lt_abs_diff"});
    }
    if (xi) {
        header.emplace_back("p_c_xi");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';

    const std::vector<double> db = cfg.grid("t-grid-db").values();
    double worst_mc = 0.0;
    double worst_lt = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        out << format_real(db[k]) << ',' << format_real(analytic[k]);
        if (with_mc) {
            const double d = std::abs(analytic[k] - empirical[k]);
            worst_mc = std::max(worst_mc, d);
            out << ',' << format_real(empirical[k]) << ',' << format_real(d);
        }
        if (lt) {
            const double d = std::abs(analytic[k] - shortcut[k]);
            worst_lt = std::max(worst_lt, d);
            out << ',' << format_real(shortcut[k]) << ',' << format_real(d);
        }
        if (xi) {
            out << ',' << format_real(xi_cov->coverage[k]);
        }
        out << '\n';
    }
    int status = kExitOk;
    if (xi && xi_cov->fallbacks > 0) {
        err << "note: " << xi_cov->fallbacks << " of " << xi_cov->evaluations
            << " 2F2 evaluations fell back to the tabulated cdf\n";
    }
    if (with_mc) {
        err << "max |analytic - mc| = " << format_real(worst_mc) << '\n';
        if (check && worst_mc > 0.03) {
            err << "coverage check failed: budget 0.03\n";
            status = kExitValidationFailure;
        }
    }
    if (lt) {
        err << "max |analytic - lt shortcut| = " << format_real(worst_lt) << '\n';
        if (worst_lt > 1e-4) {
            err << "lt shortcut check failed: tolerance 1e-4\n";
            status = kExitValidationFailure;
        }
    }
    return status;
}

inline int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const mc::SimConfig sim = sim_config(cfg);
    const auto records = mc::simulate(sim);
    Csv csv{out};
    csv.row("trial", "interference", "signal", "sinr");
    double interferers = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        csv.row(i, records[i].interference, records[i].signal, records[i].sinr);
        interferers += static_cast<double>(records[i].interferers);
    }
    const KwwScale scale = kww_scale(sim.net, sim.interference_fading);
    const stable::TabulatedCdf cdf(stable::StablePdf::best_available(scale));
    const double ks = mc::empirical_cdf(records, mc::Field::Interference).ks_statistic(cdf);
    out << "# trials = " << records.size() << '\n';
    out << "# mean_interferers = " << format_real(interferers / static_cast<double>(records.size())) << '\n';
    out << "# expected_interferers = " << format_real(sim.net.lambda * sim.area()) << '\n';
    out << "# ks_interference = " << format_real(ks) << '\n';
    out << "# ks_budget = 0.05\n";
    out << "# truncation_tail_mean = " << format_real(mc::truncation_tail_mean(sim)) << '\n';
    if (cfg.flag("check") && ks > 0.05) {
        err << "simulate check failed: KS " << format_real(ks) << " > 0.05\n";
        return kExitValidationFailure;
    }
    return kExitOk;
}

inline int run_validate(const RunConfig& cfg, std::ostream& out) {
    validation::ValidationOptions opt;
    opt.quick = cfg.flag("quick");
    opt.composition_only = cfg.flag("composition");
    if (cfg.has("beta")) {
        opt.beta = Rational::parse(cfg.text("beta"));
    }
    const validation::ValidationReport report = validation::run_validation(opt);
    out << report;
    return report.passed() ? kExitOk : kExitValidationFailure;
}

inline std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("KWWINT_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
            return std::filesystem::path(dir) / p;
        }
    }
    return p;
}

} // namespace detail

/// Execute a parsed configuration, writing the result to `out` (or to the
/// configured output file) and diagnostics to `err`.
inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    std::ostream* sink = &out;
    if (const auto path = cfg.output_path()) {
        const auto resolved = detail::resolve_output(*path);
        file.open(resolved);
        if (!file) {
            throw BadInput("key 'output': cannot open " + resolved.string());
        }
        sink = &file;
    }
    switch (cfg.command) {
    case Command::Pdf: return detail::run_density(cfg, *sink, err, false);
    case Command::Cdf: return detail::run_density(cfg, *sink, err, true);
    case Command::Lt: return detail::run_lt(cfg, *sink, err);
    case Command::Coverage: return detail::run_coverage(cfg, *sink, err);
    case Command::Simulate: return detail::run_simulate(cfg, *sink, err);
    case Command::Validate: return detail::run_validate(cfg, *sink);
    }
    return kExitBadInput;
}

struct ParseOutcome {
    std::optional<RunConfig> config;
    bool dump_config = false;
    /// Set when parsing ended the run (help, or an error).
    std::optional<int> exit_code;
};

/// Parse `args` (without the program name). Config-file values are applied
/// first and flags override them.
inline ParseOutcome parse_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Interference distributions, coverage and simulation for Poisson networks", "kwwint"};
    app.require_subcommand(1);
    struct Bound {
        CLI::App* sub;
        Command command;
        std::map<std::string, std::string> values;
        std::map<std::string, bool> flags;
        std::map<std::string, CLI::Option*> options;
        std::string config_path;
        bool dump = false;
    };
    std::vector<std::unique_ptr<Bound>> bound;
    for (const auto& [command, name] : command_names()) {
        auto b = std::make_unique<Bound>();
        b->command = command;
        b->sub = app.add_subcommand(name);
        for (const KeySpec& k : keys_for(command)) {
            std::string help = k.help;
            if (!k.fallback.empty()) {
                help += " [" + k.fallback + "]";
            }
            if (k.kind == Kind::Flag) {
                b->options[k.name] = b->sub->add_flag("--" + k.name, b->flags[k.name], help);
            } else {
                b->options[k.name] = b->sub->add_option("--" + k.name, b->values[k.name], help);
            }
        }
        b->sub->add_option("--config", b->config_path, "flat key = value file; flags override it");
        b->sub->add_flag("--dump-config", b->dump, "print the effective explicit configuration and exit");
        bound.push_back(std::move(b));
    }

    ParseOutcome outcome;
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        outcome.exit_code = app.exit(e, out, err);
        return outcome;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        outcome.exit_code = kExitBadInput;
        return outcome;
    }
    for (const auto& b : bound) {
        if (!b->sub->parsed()) {
            continue;
        }
        RunConfig cfg{b->command, {}};
        if (!b->config_path.empty()) {
            std::ifstream in(b->config_path);
            if (!in) {
                throw BadInput("cannot read config file " + b->config_path);
            }
            std::stringstream ss;
            ss << in.rdbuf();
            cfg.parameters = parse_config_text(b->command, ss.str());
        }
        for (const auto& [key, opt] : b->options) {
            if (opt->count() == 0) {
                continue;
            }
            if (key_spec(b->command, key).kind == Kind::Flag) {
                cfg.set(key, b->flags[key] ? "true" : "false");
            } else {
                cfg.set(key, b->values[key]);
            }
        }
        outcome.config = std::move(cfg);
        outcome.dump_config = b->dump;
    }
    return outcome;
}

/// Full command-line entry point; returns the process exit status.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        ParseOutcome p = parse_args(args, out, err);
        if (p.exit_code) {
            return *p.exit_code;
        }
        if (p.dump_config) {
            out << to_config_text(*p.config);
            return kExitOk;
        }
        return execute(*p.config, out, err);
    } catch (const std::invalid_argument& e) {
        // BadInput, BackendError, ParameterMismatch
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidationFailure;
    }
}

} // namespace kwwint::cli
