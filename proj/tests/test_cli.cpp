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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "oracle.hpp"

using namespace kwwint;
using namespace kwwint::cli;

namespace {

struct CliRun {
    int status;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = run(args, out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    std::string l;
    while (std::getline(is, l)) {
        v.push_back(l);
    }
    return v;
}

std::vector<std::string> cells(const std::string& line) {
    std::vector<std::string> v;
    std::string c;
    std::istringstream is(line);
    while (std::getline(is, c, ',')) {
        v.push_back(c);
    }
    if (!line.empty() && line.back() == ',') {
        v.emplace_back();
    }
    return v;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / ("kwwint_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

std::string random_value(const KeySpec& k, oracle::Gen& g) {
    switch (k.kind) {
    case Kind::Real: return format_real(g.log_uniform(0.01, 100.0));
    case Kind::Integer: return std::to_string(g.integer(0, 5000));
    case Kind::Flag: return g.integer(0, 1) ? "true" : "false";
    case Kind::Grid: return g.pick<std::string>({"log:0.05:50:200", "lin:1:2:3", "log:1e-3:1e3:61"});
    case Kind::DbGrid: return g.pick<std::string>({"-10:20:31", "0:0:1", "-3.5:7.25:4"});
    case Kind::Ratio: return g.pick<std::string>({"1/4", "2/3", "1/6"});
    case Kind::Text:
        if (k.name == "output") {
            return g.pick<std::string>({"out.csv", "runs/a b.csv"});
        }
        return g.pick<std::string>({"rayleigh", "nakagami", "rician"});
    }
    return {};
}

} // namespace

TEST(CliPdf, DefaultGridMatchesTalbot) {
    const CliRun r = run_cli({"pdf", "--eta", "4", "--lambda", "2", "--fading", "rayleigh", "--mu", "1", "--i-grid",
                           "log:0.05:50:200"});
    ASSERT_EQ(r.status, kExitOk) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 201u);
    EXPECT_EQ(ls[0], "I,pdf_closed_form,pdf_talbot,abs_diff");
    EXPECT_EQ(cells(ls[1])[0], "0.050000000000000003");
    EXPECT_EQ(cells(ls[200])[0], "50");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto c = cells(ls[i]);
        ASSERT_EQ(c.size(), 4u);
        EXPECT_LE(std::stod(c[3]), 1e-6);
    }
}

TEST(CliPdf, PoleAndMissingClosedForm) {
    const CliRun pole = run_cli({"pdf", "--eta", "2"});
    EXPECT_EQ(pole.status, kExitBadInput);
    EXPECT_NE(pole.err.find("pole"), std::string::npos) << pole.err;

    const CliRun seven = run_cli({"pdf", "--eta", "7", "--i-grid", "log:0.1:10:5"});
    ASSERT_EQ(seven.status, kExitOk) << seven.err;
    EXPECT_NE(seven.err.find("warning"), std::string::npos);
    const auto ls = lines(seven.out);
    ASSERT_EQ(ls.size(), 6u);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto c = cells(ls[i]);
        ASSERT_EQ(c.size(), 4u) << ls[i];
        EXPECT_TRUE(c[1].empty());
        EXPECT_GT(std::stod(c[2]), 0.0);
        EXPECT_TRUE(c[3].empty());
    }
}

TEST(CliPdf, ToleranceBreachIsValidationFailure) {
    const CliRun r = run_cli({"pdf", "--eta", "3", "--i-grid", "log:0.5:5:5", "--tol", "1e-300"});
    EXPECT_EQ(r.status, kExitValidationFailure);
    EXPECT_NE(r.err.find("exceeds tol"), std::string::npos);
}

TEST(CliInput, BadInputNamesTheKey) {
    const CliRun a = run_cli({"pdf", "--lambda", "abc"});
    EXPECT_EQ(a.status, kExitBadInput);
    EXPECT_NE(a.err.find("lambda"), std::string::npos);
    EXPECT_EQ(run_cli({"pdf", "--bogus", "1"}).status, kExitBadInput);
    EXPECT_EQ(run_cli({}).status, kExitBadInput);
    EXPECT_EQ(run_cli({"frobnicate"}).status, kExitBadInput);
    const CliRun g = run_cli({"pdf", "--i-grid", "log:0:1:3"});
    EXPECT_EQ(g.status, kExitBadInput);
    EXPECT_NE(g.err.find("i-grid"), std::string::npos);
    const CliRun f = run_cli({"pdf", "--fading", "lognormal"});
    EXPECT_EQ(f.status, kExitBadInput);
    EXPECT_NE(f.err.find("fading"), std::string::npos);
    EXPECT_EQ(run_cli({"pdf", "--m", "0.2", "--fading", "nakagami"}).status, kExitBadInput);
    EXPECT_EQ(run_cli({"coverage", "--check"}).status, kExitBadInput);
    EXPECT_EQ(run_cli({"coverage", "--fading", "nakagami", "--check-lt-shortcut"}).status, kExitBadInput);
    EXPECT_EQ(run_cli({"coverage", "--eta", "4", "--fading", "nakagami", "--xi"}).status, kExitBadInput);
    EXPECT_EQ(run_cli({"validate", "--beta", "2/5", "--composition"}).status, kExitBadInput);
    EXPECT_EQ(run_cli({"pdf", "--help"}).status, kExitOk);
}

TEST(CliConfig, FileParsingAndOverride) {
    const auto params = parse_config_text(Command::Pdf, "# comment\n\n  eta = 5   # trailing\nlambda=3\n"
                                                        "i-grid = \"lin:1:2:3\"\n");
    EXPECT_EQ(params.at("eta"), "5");
    EXPECT_EQ(params.at("lambda"), "3");
    EXPECT_EQ(params.at("i-grid"), "lin:1:2:3");
    EXPECT_THROW(parse_config_text(Command::Pdf, "bogus = 1\n"), BadInput);
    EXPECT_THROW(parse_config_text(Command::Pdf, "eta 5\n"), BadInput);
    EXPECT_THROW(parse_config_text(Command::Pdf, "eta = five\n"), BadInput);
    EXPECT_THROW(parse_config_text(Command::Validate, "eta = 3\n"), BadInput);

    const auto path = temp_dir() / "override.cfg";
    std::ofstream(path) << "eta = 5\nlambda = 3\n";
    const CliRun r = run_cli({"pdf", "--config", path.string(), "--lambda", "7", "--dump-config"});
    ASSERT_EQ(r.status, kExitOk) << r.err;
    EXPECT_EQ(r.out, "# kwwint pdf\neta = 5\nlambda = 7\n");

    std::ofstream(path) << "bogus = 1\n";
    const CliRun bad = run_cli({"pdf", "--config", path.string()});
    EXPECT_EQ(bad.status, kExitBadInput);
    EXPECT_NE(bad.err.find("bogus"), std::string::npos);
    EXPECT_EQ(run_cli({"pdf", "--config", (temp_dir() / "missing.cfg").string()}).status, kExitBadInput);
}

// config text -> flags -> config text is the identity, for random configs.
TEST(CliConfig, RoundTripIsIdempotent) {
    oracle::Gen g(77);
    for (int trial = 0; trial < 200; ++trial) {
        const auto& [command, name] = g.pick(command_names());
        RunConfig cfg{command, {}};
        for (const KeySpec& k : keys_for(command)) {
            if (g.integer(0, 2) == 0) {
                cfg.set(k.name, random_value(k, g));
            }
        }
        const std::string text = to_config_text(cfg);
        EXPECT_EQ(parse_config_text(command, text), cfg.parameters);

        std::vector<std::string> args = {name};
        for (const std::string& f : to_flags(cfg)) {
            args.push_back(f);
        }
        args.emplace_back("--dump-config");
        const CliRun r = run_cli(args);
        ASSERT_EQ(r.status, kExitOk) << r.err;
        EXPECT_EQ(r.out, text);
    }
}

TEST(CliFormat, SeventeenDigitsClassicLocale) {
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
    EXPECT_EQ(format_real(1.0), "1");
    EXPECT_EQ(format_real(1e-30), "1.0000000000000001e-30");
    GridSpec g{true, 0.05, 50.0, 4};
    const auto v = g.values();
    EXPECT_EQ(v.front(), 0.05);
    EXPECT_EQ(v.back(), 50.0);
    EXPECT_NEAR(v[1], 0.5, 1e-15);
    EXPECT_EQ((GridSpec{false, 0.0, 0.0, 1}.values()), std::vector<double>{0.0});
}

TEST(CliCoverage, SingleThresholdAndShortcut) {
    const CliRun one = run_cli({"coverage", "--t-grid-db", "0:0:1"});
    ASSERT_EQ(one.status, kExitOk) << one.err;
    auto ls = lines(one.out);
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0], "T_dB,p_c_analytic");
    EXPECT_EQ(cells(ls[1])[0], "0");

    const CliRun lt = run_cli({"coverage", "--fading", "rayleigh", "--interference-fading", "nakagami",
                            "--check-lt-shortcut", "--t-grid-db", "-10:20:31"});
    ASSERT_EQ(lt.status, kExitOk) << lt.err;
    ls = lines(lt.out);
    ASSERT_EQ(ls.size(), 32u);
    EXPECT_EQ(ls[0], "T_dB,p_c_analytic,p_c_lt_shortcut,lt_abs_diff");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        EXPECT_LE(std::stod(cells(ls[i]).at(3)), 1e-4);
    }
}

TEST(CliCoverage, MonteCarloColumnsAndCheck) {
    const CliRun r = run_cli({"coverage", "--signal-fading", "nakagami", "--interference-fading", "rayleigh",
                           "--with-mc", "--check", "--t-grid-db", "-10:20:7", "--threads", "0"});
    ASSERT_EQ(r.status, kExitOk) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 8u);
    EXPECT_EQ(ls[0], "T_dB,p_c_analytic,p_c_mc,abs_diff");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        EXPECT_LE(std::stod(cells(ls[i])[3]), 0.03);
    }
    // a 20-trial run cannot meet the budget
    const CliRun tiny = run_cli({"coverage", "--with-mc", "--check", "--trials", "20", "--t-grid-db", "-10:20:31"});
    EXPECT_EQ(tiny.status, kExitValidationFailure);
}

TEST(CliSimulate, DeterministicWithFooter) {
    const std::vector<std::string> args = {"simulate", "--trials", "300", "--seed", "5", "--threads", "3"};
    const CliRun a = run_cli(args);
    const CliRun b = run_cli(args);
    ASSERT_EQ(a.status, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto ls = lines(a.out);
    EXPECT_EQ(ls[0], "trial,interference,signal,sinr");
    EXPECT_EQ(ls.size(), 1u + 300u + 6u);
    EXPECT_NE(a.out.find("# ks_interference = "), std::string::npos);

    const CliRun c = run_cli({"simulate", "--trials", "300", "--seed", "6"});
    EXPECT_NE(lines(c.out)[1], ls[1]);

    const CliRun one = run_cli({"simulate", "--trials", "1"});
    ASSERT_EQ(one.status, kExitOk);
    const auto ol = lines(one.out);
    EXPECT_EQ(ol.size(), 2u + 6u);
    EXPECT_EQ(cells(ol[1])[0], "0");
}

TEST(CliSimulate, DefaultScenarioKolmogorovSmirnov) {
    const CliRun r = run_cli({"simulate", "--check", "--threads", "0"});
    EXPECT_EQ(r.status, kExitOk) << r.err;
    const auto pos = r.out.find("# ks_interference = ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LE(std::stod(r.out.substr(pos + 20)), 0.05);
}

TEST(CliValidate, QuickAndComposition) {
    const CliRun q = run_cli({"validate", "--quick"});
    EXPECT_EQ(q.status, kExitOk) << q.out;
    EXPECT_NE(q.out.find("all checks passed"), std::string::npos);
    EXPECT_EQ(q.out.find("FAIL"), std::string::npos);

    const CliRun c = run_cli({"validate", "--beta", "1/4", "--composition"});
    EXPECT_EQ(c.status, kExitOk);
    const auto ls = lines(c.out);
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0].rfind("PASS composition 1/2 x 1/2 [beta=1/4]", 0), 0u) << ls[0];
}

TEST(CliOutput, RelativePathsUseOutputDirectory) {
    const auto dir = temp_dir();
    ::setenv("KWWINT_OUTPUT_DIR", dir.string().c_str(), 1);
    const CliRun r = run_cli({"lt", "--eta", "4", "--output", "lt.csv"});
    ::unsetenv("KWWINT_OUTPUT_DIR");
    ASSERT_EQ(r.status, kExitOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(dir / "lt.csv");
    ASSERT_TRUE(in.good());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "s,lt_exact,lt_numerical,abs_diff");
    EXPECT_EQ(run_cli({"lt", "--output", (dir / "no/such/dir/x.csv").string()}).status, kExitBadInput);
}
