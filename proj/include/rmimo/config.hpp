// Experiment configuration in human units (dB powers, degree angles),
// stored as a sectioned key=value text file. Parsing reports line
// numbers; serialize() emits a canonical form so parse -> serialize ->
// parse is the identity.
#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmimo/montecarlo.hpp"

namespace rmimo {

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& msg)
        : std::runtime_error("config line " + std::to_string(line_) + ": " + msg),
          line(line_) {}
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double deg_to_rad(double deg) { return deg * M_PI / 180.0; }

struct ExperimentConfig {
    // [scenario]
    std::string kind = "single-user";   // single-user | uplink-cell | downlink-cell
    std::string scheme = "los";         // los | ff
    std::string detector = "mrc";       // mrc | zf | mmse (uplink only)
    int M = 100;
    int N = 1;
    int K = 1;
    double beta = 0.20479;
    double kappa_db = 5.0;
    std::string angles = "fixed";       // fixed | random
    double theta_deg = 45.0;            // single-user arrival angle
    double phi_deg = 45.0;              // departure angle (all users)
    double d = 0.3;
    double d_user = 0.3;
    std::string scaling = "power";      // power | uplink-energy | downlink-energy
    double power_db = 20.0;
    int T = 196;
    int tau = 0;                        // 0 under the LOS-based scheme
    double g_b = 0.0;
    double g_u = 0.0;

    // [sweep]
    std::string axis = "M";  // M | N | K | energy | power | kappa | spacing | corr-bs | corr-user | alpha
    std::vector<double> grid;
    double alpha = 0.0;      // > 0 enables K = round(iota * M^alpha)
    double iota = 0.0;
    long trials = 10000;
    int drops = 0;           // 0: fixed users; > 0: random drops
    std::uint64_t seed = 1;

    // [output]
    std::string csv = "out.csv";
    std::string svg;         // empty: no chart
    std::string label;       // series name in charts (defaults to csv stem)

    bool operator==(const ExperimentConfig&) const = default;

    std::string series_label() const {
        if (!label.empty()) return label;
        std::string stem = csv;
        if (auto pos = stem.find_last_of('/'); pos != std::string::npos)
            stem = stem.substr(pos + 1);
        if (auto pos = stem.rfind(".csv"); pos != std::string::npos)
            stem = stem.substr(0, pos);
        return stem;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_grid(const std::string& text, int line) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError(line, "bad number in grid: '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError(line, "grid is empty");
    return out;
}

inline std::string format_grid(const std::vector<double>& grid) {
    std::ostringstream out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) out << ", ";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", grid[i]);
        out << buf;
    }
    return out.str();
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.grid.clear();
    std::istringstream in(text);
    std::string raw, section;
    int line_no = 0;
    bool saw_grid = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = detail::trim(raw);
        if (auto pos = line.find('#'); pos != std::string::npos)
            line = detail::trim(line.substr(0, pos));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(line_no, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            if (section != "scenario" && section != "sweep" && section != "output")
                throw ConfigError(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, "expected key = value, got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(line_no, "key '" + key + "' outside any section");
        auto num = [&](const char* what) {
            try {
                std::size_t used = 0;
                const double x = std::stod(val, &used);
                if (used != val.size()) throw std::invalid_argument(val);
                return x;
            } catch (const std::exception&) {
                throw ConfigError(line_no,
                                  std::string("bad ") + what + " value '" + val + "'");
            }
        };
        auto integer = [&](const char* what) {
            const double x = num(what);
            if (x != std::floor(x))
                throw ConfigError(line_no, std::string(what) + " must be an integer");
            return static_cast<long>(x);
        };
        if (section == "scenario") {
            if (key == "kind") cfg.kind = val;
            else if (key == "scheme") cfg.scheme = val;
            else if (key == "detector") cfg.detector = val;
            else if (key == "M") cfg.M = static_cast<int>(integer("M"));
            else if (key == "N") cfg.N = static_cast<int>(integer("N"));
            else if (key == "K") cfg.K = static_cast<int>(integer("K"));
            else if (key == "beta") cfg.beta = num("beta");
            else if (key == "kappa_db") cfg.kappa_db = num("kappa_db");
            else if (key == "angles") cfg.angles = val;
            else if (key == "theta_deg") cfg.theta_deg = num("theta_deg");
            else if (key == "phi_deg") cfg.phi_deg = num("phi_deg");
            else if (key == "d") cfg.d = num("d");
            else if (key == "d_user") cfg.d_user = num("d_user");
            else if (key == "scaling") cfg.scaling = val;
            else if (key == "power_db") cfg.power_db = num("power_db");
            else if (key == "T") cfg.T = static_cast<int>(integer("T"));
            else if (key == "tau") cfg.tau = static_cast<int>(integer("tau"));
            else if (key == "g_b") cfg.g_b = num("g_b");
            else if (key == "g_u") cfg.g_u = num("g_u");
            else throw ConfigError(line_no, "unknown scenario key '" + key + "'");
        } else if (section == "sweep") {
            if (key == "axis") cfg.axis = val;
            else if (key == "grid") { cfg.grid = detail::parse_grid(val, line_no); saw_grid = true; }
            else if (key == "alpha") cfg.alpha = num("alpha");
            else if (key == "iota") cfg.iota = num("iota");
            else if (key == "trials") cfg.trials = integer("trials");
            else if (key == "drops") cfg.drops = static_cast<int>(integer("drops"));
            else if (key == "seed") {
                try {
                    std::size_t used = 0;
                    cfg.seed = std::stoull(val, &used);
                    if (used != val.size()) throw std::invalid_argument(val);
                } catch (const std::exception&) {
                    throw ConfigError(line_no, "bad seed value '" + val + "'");
                }
            }
            else throw ConfigError(line_no, "unknown sweep key '" + key + "'");
        } else {  // output
            if (key == "csv") cfg.csv = val;
            else if (key == "svg") cfg.svg = val;
            else if (key == "label") cfg.label = val;
            else throw ConfigError(line_no, "unknown output key '" + key + "'");
        }
    }
    if (!saw_grid) throw ConfigError(line_no, "missing [sweep] grid");
    return cfg;
}

inline std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    auto put = [&](const char* key, const auto& v) { out << key << " = " << v << "\n"; };
    auto putd = [&](const char* key, double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        out << key << " = " << buf << "\n";
    };
    out << "[scenario]\n";
    put("kind", c.kind);
    put("scheme", c.scheme);
    put("detector", c.detector);
    put("M", c.M);
    put("N", c.N);
    put("K", c.K);
    putd("beta", c.beta);
    putd("kappa_db", c.kappa_db);
    put("angles", c.angles);
    putd("theta_deg", c.theta_deg);
    putd("phi_deg", c.phi_deg);
    putd("d", c.d);
    putd("d_user", c.d_user);
    put("scaling", c.scaling);
    putd("power_db", c.power_db);
    put("T", c.T);
    put("tau", c.tau);
    putd("g_b", c.g_b);
    putd("g_u", c.g_u);
    out << "[sweep]\n";
    put("axis", c.axis);
    put("grid", detail::format_grid(c.grid));
    putd("alpha", c.alpha);
    putd("iota", c.iota);
    put("trials", c.trials);
    put("drops", c.drops);
    put("seed", c.seed);
    out << "[output]\n";
    put("csv", c.csv);
    if (!c.svg.empty()) put("svg", c.svg);
    if (!c.label.empty()) put("label", c.label);
    return out.str();
}

// dB -> linear and degrees -> radians happen here, once.
inline SweepSpec to_sweep_spec(const ExperimentConfig& c) {
    SweepSpec spec;
    Scenario& sc = spec.base;
    if (c.kind == "single-user") sc.kind = ScenarioKind::SingleUser;
    else if (c.kind == "uplink-cell") sc.kind = ScenarioKind::UplinkCell;
    else if (c.kind == "downlink-cell") sc.kind = ScenarioKind::DownlinkCell;
    else throw ValidationError("unknown scenario kind '" + c.kind + "'");
    if (c.scheme == "los") sc.scheme = Scheme::LosBased;
    else if (c.scheme == "ff") sc.scheme = Scheme::FastFading;
    else throw ValidationError("unknown scheme '" + c.scheme + "'");
    if (c.detector == "mrc") sc.detector = DetectorKind::MRC;
    else if (c.detector == "zf") sc.detector = DetectorKind::ZF;
    else if (c.detector == "mmse") sc.detector = DetectorKind::MMSE;
    else throw ValidationError("unknown detector '" + c.detector + "'");
    sc.M = c.M;
    sc.N = c.N;
    sc.d = c.d;
    sc.d_user = c.d_user;
    if (c.scaling == "power")
        sc.scaling = {ScalingPolicy::Mode::FixedPower, db_to_linear(c.power_db)};
    else if (c.scaling == "uplink-energy")
        sc.scaling = {ScalingPolicy::Mode::FixedUplinkEnergy, db_to_linear(c.power_db)};
    else if (c.scaling == "downlink-energy")
        sc.scaling = {ScalingPolicy::Mode::FixedDownlinkEnergy, db_to_linear(c.power_db)};
    else throw ValidationError("unknown scaling '" + c.scaling + "'");
    if (sc.scheme == Scheme::FastFading) {
        PilotConfig pilot;
        pilot.T = c.T;
        pilot.tau = c.tau > 0 ? c.tau : std::max(1, c.K);
        sc.pilot = pilot;
    }
    if (c.g_b != 0.0 || c.g_u != 0.0) sc.correlation = CorrelationConfig{c.g_b, c.g_u};

    if (c.K < 1) throw ValidationError("K must be >= 1");
    UserParams proto;
    proto.beta = c.beta;
    proto.kappa = db_to_linear(c.kappa_db);
    proto.theta = deg_to_rad(c.theta_deg);
    proto.phi = deg_to_rad(c.phi_deg);
    sc.users.assign(c.K, proto);
    if (c.angles == "fixed") {
        spec.fixed_angles = true;
        if (c.K > 1) {
            const auto th = fixed_arrival_angles(c.K);
            for (int k = 0; k < c.K; ++k) sc.users[k].theta = th[k];
        }
    } else if (c.angles == "random") {
        spec.fixed_angles = false;
        if (c.drops < 1)
            throw ValidationError("angles = random requires drops >= 1");
    } else {
        throw ValidationError("unknown angles mode '" + c.angles + "'");
    }

    if (c.axis == "M") spec.axis = SweepAxis::M;
    else if (c.axis == "N") spec.axis = SweepAxis::N;
    else if (c.axis == "K") spec.axis = SweepAxis::K;
    else if (c.axis == "energy") spec.axis = SweepAxis::Energy;
    else if (c.axis == "power") spec.axis = SweepAxis::Power;
    else if (c.axis == "kappa") spec.axis = SweepAxis::Kappa;
    else if (c.axis == "spacing") spec.axis = SweepAxis::Spacing;
    else if (c.axis == "corr-bs") spec.axis = SweepAxis::CorrBs;
    else if (c.axis == "corr-user") spec.axis = SweepAxis::CorrUser;
    else if (c.axis == "alpha") spec.axis = SweepAxis::Alpha;
    else throw ValidationError("unknown sweep axis '" + c.axis + "'");
    spec.grid = c.grid;
    // dB-valued axes are stated in dB in the config; the engine works in
    // linear units, so convert the grid here (axis_value stays in dB in
    // the CSV via the original grid, handled by the caller).
    if (spec.axis == SweepAxis::Energy || spec.axis == SweepAxis::Power ||
        spec.axis == SweepAxis::Kappa)
        for (double& v : spec.grid) v = db_to_linear(v);
    if (c.alpha > 0.0) {
        if (spec.axis != SweepAxis::M && spec.axis != SweepAxis::Alpha)
            throw ValidationError("alpha coupling requires the M (or alpha) axis");
        if (c.iota <= 0.0) throw ValidationError("alpha coupling requires iota > 0");
        spec.coupling = AlphaCoupling{c.alpha, c.iota};
    }
    if (c.trials < 1) throw ValidationError("trials must be >= 1");
    spec.trials = c.trials;
    if (spec.grid.empty()) throw ValidationError("sweep grid is empty");
    for (std::size_t i = 1; i < spec.grid.size(); ++i)
        if (spec.grid[i] <= spec.grid[i - 1])
            throw ValidationError("sweep grid must be strictly increasing");
    // Random-angle sweeps redraw users per drop; keep a pool large enough
    // for the biggest K any grid point requests.
    if (!spec.fixed_angles) {
        const int pool = detail::max_user_count(spec);
        if (spec.base.K() < pool) spec.base.users.resize(pool, proto);
    }
    try {
        detail::apply_axis(spec, spec.grid.front()).validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return spec;
}

}  // namespace rmimo
