// SPDX-License-Identifier: Apache-2.0
//
// beamkit: hybrid beamforming for THz ultra-massive MIMO radar-communications
// Copyright (C) 2026 The beamkit Authors
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
// Drives the beamkit executable named by $BEAMKIT_CLI, plus in-process config parsing checks.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

#include "beamkit/config.hpp"

namespace fs = std::filesystem;
using namespace beamkit;

namespace
{
    struct Outcome
    {
        int status = -1;
        std::string out;
    };

    std::string cli()
    {
        const char *p = std::getenv("BEAMKIT_CLI");
        REQUIRE_MESSAGE(p, "BEAMKIT_CLI is not set");
        return p;
    }

    std::string desk_config() { return std::string(BEAMKIT_CONFIG_DIR) + "/desk.conf"; }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    Outcome run(const std::string &args, const std::string &env = "")
    {
        const fs::path log = fs::temp_directory_path() / "beamkit_cli_test.log";
        const std::string cmd = env + " \"" + cli() + "\" " + args + " > \"" + log.string() + "\" 2>&1";
        const int raw = std::system(cmd.c_str());
        Outcome o;
        o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        o.out = slurp(log);
        return o;
    }

    fs::path scratch(const std::string &name)
    {
        const fs::path p = fs::temp_directory_path() / ("beamkit_cli_" + name);
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }

    fs::path write_config(const fs::path &dir, const std::string &extra)
    {
        const fs::path p = dir / "case.conf";
        std::ofstream(p) << slurp(desk_config()) << "\n" << extra << "\n";
        return p;
    }
}

TEST_CASE("validate accepts the desk profile")
{
    const Outcome o = run("validate --config \"" + desk_config() + "\"");
    CHECK(o.status == 0);
    CHECK(o.out == "ok\n");
}

TEST_CASE("validate reports a partial mask that does not tile the array")
{
    const fs::path dir = scratch("partial");
    const fs::path conf = write_config(dir, "array.tx_nx = 10\narray.tx_ny = 1\nsystem.n_rf = 3\n"
                                            "solver.masks = partial\n");
    const Outcome o = run("validate --config \"" + conf.string() + "\"");
    CHECK(o.status != 0);
    CHECK(o.out.find("partial mask needs N_T divisible by N_RF") != std::string::npos);
}

TEST_CASE("validate reports K above N_S")
{
    const fs::path dir = scratch("k");
    const fs::path conf = write_config(dir, "system.n_s = 4\nsystem.k = 5\n"
                                            "radar.targets = 10:70, 30:70, 50:70, 70:70, 90:70\n");
    const Outcome o = run("validate --config \"" + conf.string() + "\"");
    CHECK(o.status != 0);
    CHECK(o.out.find("K exceeds N_S") != std::string::npos);
}

TEST_CASE("run rejects bad input with a nonzero exit")
{
    const fs::path dir = scratch("bad");
    CHECK(run("run --config \"" + desk_config() + "\" --scenario no-such-scenario --out-dir \"" + dir.string() + "\"")
              .status != 0);
    CHECK(run("run --config \"" + desk_config() + "\" --set no.such.key=1 --out-dir \"" + dir.string() + "\"")
              .status != 0);
    CHECK(run("run --config \"" + (dir / "missing.conf").string() + "\"").status != 0);
    CHECK(run("frobnicate").status != 0);
}

TEST_CASE("phase-shifter table")
{
    const fs::path dir = scratch("ps");
    const Outcome o = run("run --config \"" + desk_config() +
                          "\" --scenario phase-shifters --set phase_shifters.n_t=500 --set phase_shifters.q=20"
                          " --set phase_shifters.n_rf=10 --out-dir \"" +
                          dir.string() + "\"");
    REQUIRE(o.status == 0);
    const std::string table = slurp(dir / "phase-shifters" / "table.csv");
    // N_T Q N_RF, N_T Q, N_T N_RF, N_T, N_RF M with M = 2 N_T / N_RF
    CHECK(table == "n_t,q,n_rf,overlap,aosa-full,aosa-partial,gosa-full,gosa-partial,gosa-pco\n"
                   "500,20,10,100,100000,10000,5000,500,1000\n");
    CHECK(fs::exists(dir / "phase-shifters" / "manifest.txt"));
}

TEST_CASE("BEAMKIT_OUT is the fallback output directory")
{
    const fs::path dir = scratch("env");
    const Outcome o = run("run --config \"" + desk_config() + "\" --scenario phase-shifters",
                          "BEAMKIT_OUT=\"" + dir.string() + "\"");
    CHECK(o.status == 0);
    CHECK(fs::exists(dir / "phase-shifters" / "table.csv"));
}

TEST_CASE("reruns and worker counts give byte-identical curves")
{
    const std::string common = "run --config \"" + desk_config() +
                               "\" --scenario se-vs-snr --trials 3 --seed 9 --set carrier.n_subcarriers=4"
                               " --set sweep.snr_db=0,10 --out-dir ";
    const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
    REQUIRE(run(common + "\"" + a.string() + "\" --jobs 1").status == 0);
    REQUIRE(run(common + "\"" + b.string() + "\" --jobs 1").status == 0);
    REQUIRE(run(common + "\"" + c.string() + "\" --jobs 3").status == 0);
    int files = 0;
    for (const auto &entry : fs::directory_iterator(a / "se-vs-snr"))
    {
        const fs::path name = entry.path().filename();
        CHECK_MESSAGE(slurp(entry.path()) == slurp(b / "se-vs-snr" / name), name.string());
        CHECK_MESSAGE(slurp(entry.path()) == slurp(c / "se-vs-snr" / name), name.string());
        ++files;
    }
    CHECK(files >= 5);
}

TEST_CASE("config text")
{
    SUBCASE("comments, blank lines and spacing")
    {
        const ConfigMap m = ConfigMap::parse("# header\n\n  seed =  7  # trailing\ntrials=3\n");
        CHECK(m.values().at("seed") == "7");
        CHECK(m.values().at("trials") == "3");
        CHECK(m.values().size() == 2);
    }
    SUBCASE("malformed values and unknown keys are collected")
    {
        std::vector<std::string> errors;
        build_config(ConfigMap::parse("trials = many\nbogus = 1\nsystem.n_rf = 4\n"), errors);
        CHECK(errors.size() == 2);
    }
    SUBCASE("serialized text parses back to the same configuration")
    {
        std::vector<std::string> errors;
        ExperimentConfig cfg = build_config(ConfigMap::load(desk_config()), errors);
        REQUIRE(errors.empty());
        cfg.eta = 0.1 + 0.2;
        const std::string text = serialize(cfg);
        const ExperimentConfig back = build_config(ConfigMap::parse(text), errors);
        CHECK(errors.empty());
        CHECK(serialize(back) == text);
        CHECK(back.eta == cfg.eta);
        CHECK(std::isinf(back.dbar_list.back()));
    }
    SUBCASE("directions and ranges")
    {
        std::vector<std::string> errors;
        const ExperimentConfig cfg =
            build_config(ConfigMap::parse("radar.targets = 10:80, 20.5:85\nchannel.azimuth_deg = -30:30\n"), errors);
        REQUIRE(errors.empty());
        REQUIRE(cfg.targets.size() == 2);
        CHECK(cfg.targets[1].azimuth_deg == 20.5);
        CHECK(cfg.targets[1].elevation_deg == 85.0);
        CHECK(cfg.scene.azimuth_deg.lo == -30.0);
        CHECK(cfg.scene.azimuth_deg.hi == 30.0);
    }
}
