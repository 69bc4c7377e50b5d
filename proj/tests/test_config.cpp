#include <gtest/gtest.h>

#include <cmath>

#include "rmimo/config.hpp"
#include "rmimo/csv.hpp"
#include "rmimo/presets.hpp"
#include "rmimo/svg.hpp"

using namespace rmimo;

namespace {
const char* kSample = R"(# demo experiment
[scenario]
kind = uplink-cell
scheme = los
detector = mmse
M = 40
N = 3
K = 4
beta = 0.20479
kappa_db = 5
angles = fixed
d = 0.3
scaling = uplink-energy
power_db = 20

[sweep]
axis = M
grid = 30, 60, 120
trials = 500
seed = 17

[output]
csv = demo.csv
)";
}  // namespace

TEST(Config, ParseSerializeRoundTripIsIdentity) {
    const ExperimentConfig a = parse_config(kSample);
    const ExperimentConfig b = parse_config(serialize_config(a));
    EXPECT_EQ(a, b);
    EXPECT_EQ(serialize_config(a), serialize_config(b));
}

TEST(Config, ParsedValues) {
    const ExperimentConfig c = parse_config(kSample);
    EXPECT_EQ(c.kind, "uplink-cell");
    EXPECT_EQ(c.detector, "mmse");
    EXPECT_EQ(c.M, 40);
    EXPECT_EQ(c.K, 4);
    EXPECT_EQ(c.grid, (std::vector<double>{30, 60, 120}));
    EXPECT_EQ(c.seed, 17u);
    EXPECT_EQ(c.trials, 500);
}

TEST(Config, ErrorsCarryLineNumbers) {
    try {
        parse_config("[scenario]\nM = 10\nbogus_key = 3\n[sweep]\ngrid = 1\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line, 3);
    }
    try {
        parse_config("[scenario]\nM = ten\n[sweep]\ngrid = 1\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line, 2);
    }
    EXPECT_THROW(parse_config("M = 10\n"), ConfigError);               // no section
    EXPECT_THROW(parse_config("[nope]\nx = 1\n"), ConfigError);        // bad section
    EXPECT_THROW(parse_config("[sweep]\ngrid =\n"), ConfigError);      // empty grid
    EXPECT_THROW(parse_config("[scenario]\nM = 1\n"), ConfigError);    // missing grid
}

TEST(Config, DbConversionHappensOnceInSpecBuild) {
    ExperimentConfig c = parse_config(kSample);
    const SweepSpec spec = to_sweep_spec(c);
    EXPECT_NEAR(spec.base.scaling.value, 100.0, 1e-12);  // 20 dB
    EXPECT_NEAR(spec.base.users[0].kappa, std::pow(10.0, 0.5), 1e-12);
    // dB-valued axes convert their grids too
    c.axis = "power";
    c.scaling = "power";
    c.grid = {0, 10, 20};
    const SweepSpec p = to_sweep_spec(c);
    EXPECT_EQ(p.grid, (std::vector<double>{1, 10, 100}));
}

TEST(Config, ValidationErrorsAreNamed) {
    ExperimentConfig c = parse_config(kSample);
    c.kind = "downlink-cell";
    c.scheme = "ff";
    c.tau = 4;
    EXPECT_THROW(to_sweep_spec(c), ValidationError);
    c = parse_config(kSample);
    c.detector = "zff";
    EXPECT_THROW(to_sweep_spec(c), ValidationError);
    c = parse_config(kSample);
    c.angles = "random";  // without drops
    EXPECT_THROW(to_sweep_spec(c), ValidationError);
    c = parse_config(kSample);
    c.grid = {30, 30};
    EXPECT_THROW(to_sweep_spec(c), ValidationError);
}

TEST(Csv, TwelveSignificantDigitsRoundTrip) {
    SweepRow row;
    row.axis_value = 10;
    row.analytic = {15.4826803145, 4.04287895889, 4.04953121405, 4.04953121405};
    row.mc = {4.043102042571234, 0.00017968508, 5000, 7};
    const std::string text = render_csv({row}, "kind = demo", 7);
    const CsvTable table = parse_csv(text);
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_EQ(table.header.size(), 9u);
    EXPECT_EQ(table.header[0], "axis_value");
    EXPECT_EQ(table.header[5], "mc_mean");
    // 12 significant digits survive the round trip
    EXPECT_NEAR(table.rows[0][5] / row.mc.mean, 1.0, 1e-11);
    EXPECT_EQ(table.rows[0][7], 5000.0);
    // metadata has the seed and the config body
    bool seed_line = false, cfg_line = false;
    for (const auto& c : table.comments) {
        if (c == "seed = 7") seed_line = true;
        if (c == "kind = demo") cfg_line = true;
    }
    EXPECT_TRUE(seed_line);
    EXPECT_TRUE(cfg_line);
}

TEST(Csv, ParserRejectsRaggedRows) {
    EXPECT_THROW(parse_csv("a,b\n1,2,3\n"), std::runtime_error);
    EXPECT_THROW(parse_csv("a,b\n1,x\n"), std::runtime_error);
    EXPECT_THROW(parse_csv(""), std::runtime_error);
}

TEST(Svg, TwoPointSeriesYieldsExactlyOnePolyline) {
    PlotSeries s{"demo", {0.0, 1.0}, {1.0, 2.0}};
    const std::string svg = render_chart({s}, {}, PlotStyle{});
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++count;
        ++pos;
    }
    EXPECT_EQ(count, 1u);
    // exactly two coordinate pairs in the polyline
    const auto start = svg.find("points=\"");
    const auto end = svg.find('"', start + 8);
    const std::string pts = svg.substr(start + 8, end - start - 8);
    EXPECT_EQ(std::count(pts.begin(), pts.end(), ','), 2);
}

TEST(Svg, ByteIdenticalForIdenticalInputs) {
    PlotSeries s{"x", {1, 2, 3}, {0.5, 0.7, 0.65}};
    ReferenceLine lim{"x limit", 0.8};
    const std::string a = render_chart({s}, {lim}, PlotStyle{});
    const std::string b = render_chart({s}, {lim}, PlotStyle{});
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
}

TEST(Presets, AllElevenExistWithExpectedShapes) {
    const auto presets = all_presets();
    ASSERT_EQ(presets.size(), 11u);
    for (int i = 1; i <= 11; ++i) {
        const auto& p = find_preset("fig" + std::to_string(i));
        EXPECT_FALSE(p.series.empty());
        for (const auto& cfg : p.series) EXPECT_NO_THROW(to_sweep_spec(cfg));
    }
    EXPECT_THROW(find_preset("fig12"), ValidationError);
    // spot checks of the documented parameterizations
    const auto& f1 = find_preset("fig1");
    EXPECT_EQ(f1.series[0].N, 10);
    EXPECT_NEAR(f1.series[0].power_db, 20.0, 1e-12);
    EXPECT_NEAR(f1.series[0].beta, 0.20479, 1e-12);
    EXPECT_NEAR(f1.series[0].theta_deg, 45.0, 1e-12);
    const auto& f6 = find_preset("fig6");
    EXPECT_EQ(f6.series.size(), 9u);
    EXPECT_EQ(f6.series[0].K, 10);
    EXPECT_EQ(f6.series[0].N, 3);
    const auto& f7 = find_preset("fig7");
    EXPECT_EQ(f7.series.size(), 6u);
    const auto& f9 = find_preset("fig9");
    EXPECT_EQ(f9.series.size(), 3u);
    EXPECT_NEAR(f9.series[0].iota, 0.5, 1e-12);
    const auto& f11 = find_preset("fig11");
    EXPECT_EQ(f11.series.size(), 4u);
    EXPECT_NEAR(f11.series[0].d, 0.05, 1e-12);
}
