// Canned experiment layouts fig1..fig11. Each preset is a set of config
// series sharing a sweep axis plus one chart; the CLI runs every series,
// writes one CSV per series, and renders the combined SVG.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmimo/config.hpp"

namespace rmimo {

struct Preset {
    std::string name;
    std::string title;
    std::string x_label;
    std::string svg;
    std::vector<ExperimentConfig> series;
};

namespace detail {

inline ExperimentConfig preset_base() {
    ExperimentConfig c;
    c.beta = 0.20479;
    c.kappa_db = 5.0;
    c.theta_deg = 45.0;
    c.phi_deg = 45.0;
    c.d = 0.3;
    c.d_user = 0.3;
    c.T = 196;
    c.trials = 10000;
    c.seed = 1;
    return c;
}

inline void add_series(Preset& p, ExperimentConfig c, const std::string& label) {
    c.label = label;
    c.csv = p.name + "_" + label + ".csv";
    for (char& ch : c.csv)
        if (ch == ' ' || ch == '=' || ch == ',') ch = '-';
    p.series.push_back(std::move(c));
}

}  // namespace detail

inline std::vector<Preset> all_presets() {
    std::vector<Preset> out;
    const std::vector<double> m_grid = {10, 20, 50, 100, 200, 500};
    const std::vector<double> m_cell = {30, 60, 100, 150, 200, 300};

    {  // fig1: single user, fixed beta/theta, LOS vs FF vs limit over M
        Preset p{"fig1", "Single user, fixed large-scale fading", "M (BS antennas)",
                 "fig1.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "single-user";
        c.N = 10;
        c.scaling = "uplink-energy";
        c.power_db = 20.0;
        c.axis = "M";
        c.grid = m_grid;
        detail::add_series(p, c, "los");
        c.scheme = "ff";
        c.tau = 1;
        detail::add_series(p, c, "ff");
        out.push_back(p);
    }
    {  // fig2: as fig1 with random user drops
        Preset p{"fig2", "Single user, random drops", "M (BS antennas)",
                 "fig2.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "single-user";
        c.N = 10;
        c.scaling = "uplink-energy";
        c.power_db = 20.0;
        c.axis = "M";
        c.grid = m_grid;
        c.angles = "random";
        c.drops = 20;
        c.trials = 2000;
        detail::add_series(p, c, "los");
        c.scheme = "ff";
        c.tau = 1;
        detail::add_series(p, c, "ff");
        out.push_back(p);
    }
    {  // fig3: average rate vs transmit power
        Preset p{"fig3", "Single user, rate vs transmit power", "p_u [dB]",
                 "fig3.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "single-user";
        c.N = 10;
        c.M = 100;
        c.scaling = "power";
        c.axis = "power";
        c.grid = {-10, -5, 0, 5, 10, 15, 20, 25, 30};
        c.angles = "random";
        c.drops = 20;
        c.trials = 2000;
        detail::add_series(p, c, "los");
        out.push_back(p);
    }
    {  // fig4: average rate vs Rician factor
        Preset p{"fig4", "Single user, rate vs Rician factor", "Rician factor [dB]",
                 "fig4.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "single-user";
        c.N = 10;
        c.M = 100;
        c.scaling = "uplink-energy";
        c.power_db = 20.0;
        c.axis = "kappa";
        c.grid = {-10, -5, 0, 5, 10, 15, 20};
        c.angles = "random";
        c.drops = 20;
        c.trials = 2000;
        detail::add_series(p, c, "los");
        out.push_back(p);
    }
    {  // fig5: N = 10 vs N = 1 over M
        Preset p{"fig5", "Single user, N = 10 vs N = 1", "M (BS antennas)",
                 "fig5.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "single-user";
        c.scaling = "uplink-energy";
        c.power_db = 20.0;
        c.axis = "M";
        c.grid = {10, 20, 30, 50, 70, 100};
        c.angles = "random";
        c.drops = 20;
        c.trials = 2000;
        c.N = 10;
        detail::add_series(p, c, "N10");
        c.N = 1;
        detail::add_series(p, c, "N1");
        out.push_back(p);
    }
    {  // fig6: uplink detector comparison at three energy budgets
        Preset p{"fig6", "Uplink detectors, K = 10", "M (BS antennas)",
                 "fig6.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "uplink-cell";
        c.N = 3;
        c.K = 10;
        c.scaling = "uplink-energy";
        c.axis = "M";
        c.grid = m_cell;
        for (double eu : {10.0, 20.0, 30.0}) {
            c.power_db = eu;
            for (const char* det : {"mrc", "zf", "mmse"}) {
                c.detector = det;
                detail::add_series(
                    p, c, std::string(det) + "_eu" + std::to_string(int(eu)));
            }
        }
        out.push_back(p);
    }
    {  // fig7: LOS vs FF sum-rate behavior for K = 2, 10, 50
        Preset p{"fig7", "Uplink LOS vs FF, K = 2, 10, 50", "M (BS antennas)",
                 "fig7.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "uplink-cell";
        c.N = 3;
        c.scaling = "uplink-energy";
        c.power_db = 20.0;
        c.axis = "M";
        c.grid = {60, 100, 150, 200, 300};
        for (int k : {2, 10, 50}) {
            c.K = k;
            c.scheme = "los";
            c.tau = 0;
            detail::add_series(p, c, "los_K" + std::to_string(k));
            c.scheme = "ff";
            c.tau = k;
            detail::add_series(p, c, "ff_K" + std::to_string(k));
        }
        out.push_back(p);
    }
    {  // fig8: uplink rate vs user antenna count
        Preset p{"fig8", "Uplink, rate vs user antennas", "N (user antennas)",
                 "fig8.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "uplink-cell";
        c.M = 20;
        c.K = 10;
        c.scaling = "uplink-energy";
        c.power_db = 20.0;
        c.axis = "N";
        c.grid = {1, 2, 3, 4, 6, 8, 10, 15, 20};
        c.angles = "random";
        c.drops = 10;
        c.trials = 2000;
        detail::add_series(p, c, "los");
        out.push_back(p);
    }
    {  // fig9: downlink cell loading K = round(iota * M^alpha)
        Preset p{"fig9", "Downlink, scaling user load", "M (BS antennas)",
                 "fig9.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "downlink-cell";
        c.N = 2;
        c.K = 1;
        c.scaling = "downlink-energy";
        c.power_db = 10.0;
        c.axis = "M";
        c.grid = {60, 100, 200, 300, 400, 600};
        c.iota = 0.5;
        c.angles = "random";
        c.drops = 10;
        c.trials = 500;
        for (double a : {0.5, 0.75, 1.0}) {
            c.alpha = a;
            char label[32];
            std::snprintf(label, sizeof label, "alpha%g", a);
            detail::add_series(p, c, label);
        }
        out.push_back(p);
    }
    {  // fig10: spatial correlation sweep
        Preset p{"fig10", "Downlink, spatial correlation", "M (BS antennas)",
                 "fig10.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "downlink-cell";
        c.N = 10;
        c.K = 10;
        c.scaling = "downlink-energy";
        c.power_db = 20.0;
        c.axis = "M";
        c.grid = {30, 60, 100, 150, 200};
        c.angles = "random";
        c.drops = 10;
        c.trials = 2000;
        c.kappa_db = 5.0;
        for (double gb : {0.0, 0.3, 0.6, 0.9}) {
            c.g_b = gb;
            c.g_u = 0.0;
            char label[32];
            std::snprintf(label, sizeof label, "k5_gb%g", gb);
            detail::add_series(p, c, label);
        }
        c.kappa_db = -10.0;
        const double combos[4][2] = {{0, 0}, {0, 0.5}, {0.5, 0}, {0.5, 0.5}};
        for (const auto& gg : combos) {
            c.g_b = gg[0];
            c.g_u = gg[1];
            char label[40];
            std::snprintf(label, sizeof label, "km10_gb%g_gu%g", gg[0], gg[1]);
            detail::add_series(p, c, label);
        }
        out.push_back(p);
    }
    {  // fig11: BS antenna spacing comparison
        Preset p{"fig11", "Downlink, BS antenna spacing", "M (BS antennas)",
                 "fig11.svg", {}};
        ExperimentConfig c = detail::preset_base();
        c.kind = "downlink-cell";
        c.N = 3;
        c.K = 10;
        c.scaling = "downlink-energy";
        c.power_db = 20.0;
        c.axis = "M";
        c.grid = m_cell;
        c.angles = "random";
        c.drops = 10;
        c.trials = 2000;
        for (double d : {0.05, 0.3, 2.4, 24.0}) {
            c.d = d;
            char label[32];
            std::snprintf(label, sizeof label, "d%g", d);
            detail::add_series(p, c, label);
        }
        out.push_back(p);
    }
    return out;
}

inline const Preset& find_preset(const std::string& name) {
    static const std::vector<Preset> presets = all_presets();
    for (const auto& p : presets)
        if (p.name == name) return p;
    throw ValidationError("unknown preset '" + name + "'");
}

}  // namespace rmimo
