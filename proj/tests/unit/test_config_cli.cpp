// SPDX-License-Identifier: Apache-2.0
//
// fddcsi: wideband FDD CSI acquisition with partial channel reciprocity
// Copyright (C) 2026 The fddcsi authors
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

#include "fddcsi/cdl_tables.hpp"
#include "fddcsi/config.hpp"
#include "fddcsi/experiments.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fddcsi;
using Catch::Approx;
namespace fs = std::filesystem;

namespace
{
    std::string read_file(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_file(const fs::path &p, const std::string &text)
    {
        std::ofstream(p, std::ios::binary) << text;
    }

    std::string first_line(const std::string &text)
    {
        return text.substr(0, text.find('\n') + 1);
    }

    fs::path scratch(const std::string &name)
    {
        const fs::path p = fs::temp_directory_path() / ("fddcsi_test_" + name);
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }

    std::string error_of(const std::string &text)
    {
        try
        {
            parse_experiment_config(text);
        }
        catch (const std::exception &e)
        {
            return e.what();
        }
        return "";
    }

    struct EnvGuard
    {
        std::string name;
        std::string old;
        bool had;
        EnvGuard(const std::string &n, const std::string &value) : name(n)
        {
            const char *v = std::getenv(n.c_str());
            had = v != nullptr;
            if (had)
                old = v;
            setenv(n.c_str(), value.c_str(), 1);
        }
        ~EnvGuard()
        {
            if (had)
                setenv(name.c_str(), old.c_str(), 1);
            else
                unsetenv(name.c_str());
        }
    };

    const char *tiny_sweep = R"({
        "drops": 2,
        "ue": {"count": 2},
        "channel": {"ul_samples": 2},
        "csi": {"schemes": ["perfect", "PCR", "baseline"], "ports": [4]},
        "sweep": {"snr_db": [0, 10]}
    })";
}

TEST_CASE("empty config yields the default scenario", "[experiment_cli]")
{
    for (const char *text : {"", "{}", "  \n"})
    {
        const ExperimentConfig c = parse_experiment_config(text);
        const ScenarioConfig &sc = c.evaluation.scenario;
        CHECK(sc.carrier.dl_center_frequency == 3.5e9);
        CHECK(sc.carrier.ul_center_frequency == 3.4e9);
        CHECK(sc.carrier.subcarrier_spacing == 30e3);
        CHECK(sc.carrier.subband_count == 13);
        CHECK(sc.ue_count == 8);
        CHECK(sc.bs.rows == 2);
        CHECK(sc.bs.cols == 8);
        CHECK(sc.bs.polarizations == 2);
        const double lambda = sc.carrier.wavelength(LinkEnd::Downlink);
        CHECK(sc.bs.spacing_h / lambda == Approx(0.5));
        CHECK(sc.bs.spacing_v / lambda == Approx(0.8));
        CHECK(sc.models == std::vector<std::string>{"CDL-A"});
        CHECK(sc.delay_spread == Approx(300e-9));
        CHECK(c.evaluation.drops == 200);
    }
}

TEST_CASE("config values are converted to internal units", "[experiment_cli]")
{
    const ExperimentConfig c = parse_experiment_config(R"({
        "array": {"rows": 4, "spacing_v_wavelengths": 0.5, "slant_deg": [45, -45]},
        "channel": {"delay_spread_ns": 100, "sector_half_width_deg": 30, "models": ["CDL-A", "CDL-D"]},
        "rank_check": {"delay_us": [[0, 1.5]], "support": {"regions": [
            {"theta_deg": [60, 120], "phi_min_deg": -60, "phi_max_deg": 60},
            {"theta_deg": [10, 50], "phi_min_deg": {"theta_knots_deg": [10, 50], "values_deg": [70, 80]}, "phi_max_deg": 100}]}}
    })");
    const ScenarioConfig &sc = c.evaluation.scenario;
    CHECK(sc.bs.rows == 4);
    CHECK(sc.bs.spacing_v == Approx(0.5 * sc.carrier.wavelength(LinkEnd::Downlink)));
    CHECK(sc.bs.slant_angles[0] == Approx(pi / 4));
    CHECK(sc.delay_spread == Approx(100e-9));
    CHECK(sc.sector_half_width == Approx(pi / 6));
    CHECK(c.rank_check.delay_intervals[0].second == Approx(1.5e-6));
    REQUIRE(c.rank_check.support.regions.size() == 2);
    CHECK(c.rank_check.support.regions[0].theta_min == Approx(pi / 3));
    CHECK(c.rank_check.support.regions[1].phi_min(deg2rad(30)) == Approx(deg2rad(75)));
}

TEST_CASE("config errors name the offending field", "[experiment_cli]")
{
    CHECK_THAT(error_of(R"({"csi": {"ports": [-4]}})"), Catch::Matchers::ContainsSubstring("config.csi.ports"));
    CHECK_THAT(error_of(R"({"csi": {"quantizer": {"bitz": 3}}})"),
               Catch::Matchers::ContainsSubstring("config.csi.quantizer") && Catch::Matchers::ContainsSubstring("bitz"));
    CHECK_THAT(error_of(R"({"colour": 1})"), Catch::Matchers::ContainsSubstring("colour"));
    CHECK_THAT(error_of(R"({"ue": {"count": "eight"}})"), Catch::Matchers::ContainsSubstring("config.ue.count"));
    CHECK_THAT(error_of(R"({"drops": 1.5})"), Catch::Matchers::ContainsSubstring("config.drops"));
    CHECK_THAT(error_of(R"({"csi": {"schemes": ["PCR-X"]}})"), Catch::Matchers::ContainsSubstring("PCR-X"));
    CHECK_THAT(error_of(R"({"rank_check": {"energy_fraction": 1.0}})"),
               Catch::Matchers::ContainsSubstring("energy_fraction"));
    CHECK_FALSE(error_of("{\"drops\": ").empty());
    CHECK_FALSE(error_of(R"({"ue": {"count": 0}})").empty());
    CHECK_FALSE(error_of(R"({"array": {"element_pattern": "dipole"}})").empty());
    CHECK(error_of(R"({"channel": {"ul_snr_db": null}, "csi": {"pilot_snr_db": 20}})").empty());
}

TEST_CASE("normalized config echo parses back to itself", "[experiment_cli]")
{
    const ExperimentConfig c = parse_experiment_config(R"({"seed": 9, "csi": {"quantizer": {"mode": "amplitude-phase"}}})");
    const std::string echo = config_to_json(c);
    CHECK(config_to_json(parse_experiment_config(echo)) == echo);
}

TEST_CASE("CSV headers are stable", "[experiment_cli]")
{
    const fs::path golden(FDDCSI_TEST_GOLDEN_DIR);
    std::ostringstream a, b, r;
    write_sweep_csv(a, {});
    write_codebook_csv(b, {});
    write_rank_csv(r, {}, {});
    CHECK(a.str() == read_file(golden / "sweep.header"));
    CHECK(b.str() == read_file(golden / "codebook-eval.header"));
    CHECK(r.str() == read_file(golden / "rank-check.header"));
    CHECK(std::string(sweep_csv_header) == "snr_db,scheme,N_a,feedback_bits,mean_nmse,mean_se_bps_hz,drops");
}

TEST_CASE("sweep run writes CSV and manifest and reruns identically", "[experiment_cli]")
{
    const fs::path dir = scratch("sweep");
    write_file(dir / "cfg.json", tiny_sweep);
    RunOptions opt;
    opt.config_path = (dir / "cfg.json").string();
    opt.out_dir = (dir / "a").string();
    opt.progress = false;
    std::ostringstream log;
    REQUIRE(run_command("sweep", opt, log) == 0);
    const std::string csv = read_file(dir / "a" / "sweep.csv");
    CHECK(first_line(csv) == std::string(sweep_csv_header) + "\n");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);

    const auto manifest = read_file(dir / "a" / "manifest.json");
    CHECK(manifest.find("\"seed\": 1") != std::string::npos);
    CHECK(manifest.find("\"version\"") != std::string::npos);

    // Same seed, more workers: identical bytes
    opt.out_dir = (dir / "b").string();
    opt.workers = 2;
    REQUIRE(run_command("sweep", opt, log) == 0);
    CHECK(read_file(dir / "b" / "sweep.csv") == csv);

    // Perfect-CSI SE grows with SNR
    std::istringstream in(csv);
    std::string line;
    std::vector<double> perfect;
    std::getline(in, line);
    while (std::getline(in, line))
        if (line.find(",perfect,") != std::string::npos)
            perfect.push_back(std::stod(line.substr(line.rfind(',', line.rfind(',') - 1) + 1)));
    REQUIRE(perfect.size() == 2);
    CHECK(perfect[1] > perfect[0]);
    fs::remove_all(dir);
}

TEST_CASE("manifest config alone reproduces the output", "[experiment_cli]")
{
    const fs::path dir = scratch("manifest");
    write_file(dir / "cfg.json", tiny_sweep);
    RunOptions opt;
    opt.config_path = (dir / "cfg.json").string();
    opt.out_dir = (dir / "a").string();
    opt.seed = 77;
    opt.progress = false;
    std::ostringstream log;
    REQUIRE(run_command("codebook-eval", opt, log) == 0);

    const std::string manifest = read_file(dir / "a" / "manifest.json");
    const auto start = manifest.find("\"config\": ") + 10;
    int depth = 0;
    size_t end = start;
    do
    {
        depth += manifest[end] == '{';
        depth -= manifest[end] == '}';
        ++end;
    } while (depth > 0);
    write_file(dir / "echo.json", manifest.substr(start, end - start));
    RunOptions again;
    again.config_path = (dir / "echo.json").string();
    again.out_dir = (dir / "b").string();
    again.progress = false;
    REQUIRE(run_command("codebook-eval", again, log) == 0);
    CHECK(read_file(dir / "b" / "codebook-eval.csv") == read_file(dir / "a" / "codebook-eval.csv"));
    fs::remove_all(dir);
}

TEST_CASE("rank-check emits a convergence table", "[experiment_cli]")
{
    const fs::path dir = scratch("rank");
    write_file(dir / "cfg.json", R"({"rank_check": {"sizes": [4, 8], "frequency_subbands": [16, 32]}})");
    RunOptions opt;
    opt.config_path = (dir / "cfg.json").string();
    opt.out_dir = (dir / "out").string();
    std::ostringstream log;
    REQUIRE(run_command("rank-check", opt, log) == 0);
    const std::string csv = read_file(dir / "out" / "rank-check.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.find("spatial,8,") != std::string::npos);
    CHECK(csv.find("frequency,32,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("failed runs leave no partial outputs", "[experiment_cli]")
{
    const fs::path dir = scratch("fail");
    const fs::path empty = scratch("empty_data");
    write_file(dir / "cfg.json", tiny_sweep);
    RunOptions opt;
    opt.config_path = (dir / "cfg.json").string();
    opt.out_dir = (dir / "out").string();
    opt.progress = false;
    std::ostringstream log;
    {
        EnvGuard env("FDDCSI_DATA_DIR", empty.string());
        CHECK(data_directory() == empty.string());
        CHECK(run_command("sweep", opt, log) == 1);
    }
    CHECK(log.str().find("error") != std::string::npos);
    CHECK((!fs::exists(dir / "out") || fs::is_empty(dir / "out")));

    std::ostringstream log2;
    CHECK(run_command("scatter", opt, log2) == 2);
    opt.config_path = (dir / "missing.json").string();
    CHECK(run_command("sweep", opt, log2) == 2);
    write_file(dir / "bad.json", R"({"csi": {"ports": [-1]}})");
    opt.config_path = (dir / "bad.json").string();
    CHECK(run_command("sweep", opt, log2) == 2);
    CHECK(log2.str().find("bad.json.csi.ports") != std::string::npos);
    fs::remove_all(dir);
    fs::remove_all(empty);
}

TEST_CASE("data directory override serves CDL tables", "[experiment_cli]")
{
    const fs::path dir = scratch("data");
    fs::create_directories(dir / "cdl");
    fs::copy_file(fs::path(FDDCSI_TEST_DATA_DIR) / "cdl" / "cdl_a.json", dir / "cdl" / "cdl_a.json");
    EnvGuard env("FDDCSI_DATA_DIR", dir.string());
    CHECK(cdl_table("CDL-A").clusters.size() == 23);
    CHECK_THROWS(cdl_table("CDL-D"));
    fs::remove_all(dir);
}

TEST_CASE("CDL table parser is strict", "[experiment_cli]")
{
    const std::string good = read_file(fs::path(FDDCSI_TEST_DATA_DIR) / "cdl" / "cdl_a.json");
    CHECK_NOTHROW(parse_cdl_table(good));
    std::string wrong_version = good;
    wrong_version.replace(wrong_version.find("\"version\": 1"), 12, "\"version\": 9");
    CHECK_THROWS(parse_cdl_table(wrong_version));
    CHECK_THROWS(parse_cdl_table("{}"));
    CHECK_THROWS(parse_cdl_table("not json"));
}

TEST_CASE("command-line front end", "[experiment_cli]")
{
    const std::string cli = FDDCSI_CLI_PATH;
    const fs::path dir = scratch("cli");
    write_file(dir / "cfg.json", tiny_sweep);
    auto run = [&](const std::string &args)
    {
        const int status = std::system((cli + " " + args + " > " + (dir / "log.txt").string() + " 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    CHECK(run("--help") == 0);
    CHECK(run("") != 0);
    CHECK(run("scatter") != 0);
    CHECK(run("sweep --config " + (dir / "nope.json").string()) != 0);
    CHECK(run("sweep --config " + (dir / "cfg.json").string() + " --workers 0 --out-dir " + (dir / "x").string()) == 2);
    REQUIRE(run("sweep --config " + (dir / "cfg.json").string() + " --out-dir " + (dir / "out").string() +
                " --seed 5 --workers 2 --drops 1 --quiet") == 0);
    const std::string csv = read_file(dir / "out" / "sweep.csv");
    CHECK(csv.find(",perfect,4,0,0,") != std::string::npos);
    CHECK(csv.find(",1\n") != std::string::npos);
    CHECK(read_file(dir / "out" / "manifest.json").find("\"seed\": 5") != std::string::npos);
    fs::remove_all(dir);
}
