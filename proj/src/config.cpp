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

#include "beamkit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace beamkit
{
    const std::vector<std::string> scenario_names{"se-vs-snr",  "se-vs-eta",       "beampattern",   "se-vs-dbar",
                                                  "array-gain", "se-vs-bandwidth", "phase-shifters"};

    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return "";
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        std::vector<std::string> split(const std::string &s, char sep)
        {
            std::vector<std::string> out;
            std::string item;
            std::istringstream in(s);
            while (std::getline(in, item, sep))
                if (auto t = trim(item); !t.empty())
                    out.push_back(t);
            return out;
        }

        double to_double(const std::string &s)
        {
            const std::string t = trim(s);
            if (t == "inf" || t == "+inf")
                return std::numeric_limits<double>::infinity();
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                throw std::invalid_argument("'" + t + "' is not a number");
            return v;
        }

        long long to_integer(const std::string &s)
        {
            const std::string t = trim(s);
            long long v = 0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                throw std::invalid_argument("'" + t + "' is not an integer");
            return v;
        }

        int to_int(const std::string &s)
        {
            const long long v = to_integer(s);
            if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
                throw std::invalid_argument("'" + s + "' is out of range");
            return int(v);
        }

        bool to_bool(const std::string &s)
        {
            const std::string t = trim(s);
            if (t == "true" || t == "1" || t == "yes")
                return true;
            if (t == "false" || t == "0" || t == "no")
                return false;
            throw std::invalid_argument("'" + t + "' is not a boolean");
        }

        std::vector<double> to_list(const std::string &s)
        {
            std::vector<double> out;
            for (const auto &item : split(s, ','))
                out.push_back(to_double(item));
            return out;
        }

        // "az:el"
        Direction to_direction(const std::string &s)
        {
            const auto parts = split(s, ':');
            if (parts.size() != 2)
                throw std::invalid_argument("'" + s + "' is not an azimuth:elevation pair");
            return {to_double(parts[0]), to_double(parts[1])};
        }

        std::vector<Direction> to_directions(const std::string &s)
        {
            std::vector<Direction> out;
            for (const auto &item : split(s, ','))
                out.push_back(to_direction(item));
            return out;
        }

        AngleRange to_range(const std::string &s)
        {
            const Direction d = to_direction(s);
            return {d.azimuth_deg, d.elevation_deg};
        }

        std::string str(double v) { return format_double(v); }
        std::string str(const std::vector<double> &v)
        {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out += (i ? ", " : "") + format_double(v[i]);
            return out;
        }
        std::string str(const Direction &d) { return format_double(d.azimuth_deg) + ":" + format_double(d.elevation_deg); }
        std::string str(const std::vector<Direction> &v)
        {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out += (i ? ", " : "") + str(v[i]);
            return out;
        }
        std::string str(const std::vector<std::string> &v)
        {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out += (i ? ", " : "") + v[i];
            return out;
        }

        struct Key
        {
            std::string name;
            std::function<std::string(const ExperimentConfig &)> get;
            std::function<void(ExperimentConfig &, const std::string &)> set;
        };

#define BK_INT(key, field)                                                                                             \
    Key { key, [](const ExperimentConfig &c) { return std::to_string(c.field); },                                      \
          [](ExperimentConfig &c, const std::string &v) { c.field = to_int(v); } }
#define BK_DOUBLE(key, field)                                                                                          \
    Key { key, [](const ExperimentConfig &c) { return str(c.field); },                                                 \
          [](ExperimentConfig &c, const std::string &v) { c.field = to_double(v); } }
#define BK_LIST(key, field)                                                                                            \
    Key { key, [](const ExperimentConfig &c) { return str(c.field); },                                                 \
          [](ExperimentConfig &c, const std::string &v) { c.field = to_list(v); } }
#define BK_DIR(key, field)                                                                                             \
    Key { key, [](const ExperimentConfig &c) { return str(c.field); },                                                 \
          [](ExperimentConfig &c, const std::string &v) { c.field = to_direction(v); } }
#define BK_DIRS(key, field)                                                                                            \
    Key { key, [](const ExperimentConfig &c) { return str(c.field); },                                                 \
          [](ExperimentConfig &c, const std::string &v) { c.field = to_directions(v); } }
#define BK_STRING(key, field)                                                                                          \
    Key { key, [](const ExperimentConfig &c) { return c.field; },                                                      \
          [](ExperimentConfig &c, const std::string &v) { c.field = trim(v); } }

        const std::vector<Key> &keys()
        {
            static const std::vector<Key> table{
                BK_STRING("scenario", scenario),
                Key{"seed", [](const ExperimentConfig &c) { return std::to_string(c.seed); },
                    [](ExperimentConfig &c, const std::string &v) {
                        const std::string t = trim(v);
                        std::uint64_t s = 0;
                        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
                        if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                            throw std::invalid_argument("'" + t + "' is not an unsigned 64-bit seed");
                        c.seed = s;
                    }},
                BK_INT("trials", trials),
                BK_INT("array.tx_nx", tx_nx),
                BK_INT("array.tx_ny", tx_ny),
                BK_INT("array.rx_nx", rx_nx),
                BK_INT("array.rx_ny", rx_ny),
                BK_INT("array.q_x", q_x),
                BK_INT("array.q_y", q_y),
                BK_DOUBLE("array.element_spacing_lambda", element_spacing_lambda),
                BK_DOUBLE("array.subarray_spacing_lambda", subarray_spacing_lambda),
                BK_DOUBLE("carrier.f_c_hz", carrier.f_c),
                BK_DOUBLE("carrier.bandwidth_hz", carrier.bandwidth),
                BK_INT("carrier.n_subcarriers", carrier.n_subcarriers),
                BK_INT("system.n_rf", n_rf),
                BK_INT("system.n_s", n_s),
                BK_INT("system.k", k),
                BK_DIRS("radar.targets", targets),
                BK_INT("channel.n_clusters", scene.n_clusters),
                BK_INT("channel.n_rays", scene.n_rays),
                BK_DOUBLE("channel.nlos_ratio_db", scene.nlos_ratio_db),
                BK_DOUBLE("channel.path_loss_exponent", scene.path_loss_exponent),
                BK_DOUBLE("channel.distance_m", scene.distance_m),
                BK_STRING("channel.absorption_table", absorption_table),
                Key{"channel.azimuth_deg",
                    [](const ExperimentConfig &c) { return str(c.scene.azimuth_deg.lo) + ":" + str(c.scene.azimuth_deg.hi); },
                    [](ExperimentConfig &c, const std::string &v) { c.scene.azimuth_deg = to_range(v); }},
                Key{"channel.elevation_deg",
                    [](const ExperimentConfig &c) {
                        return str(c.scene.elevation_deg.lo) + ":" + str(c.scene.elevation_deg.hi);
                    },
                    [](ExperimentConfig &c, const std::string &v) { c.scene.elevation_deg = to_range(v); }},
                Key{"channel.normalize_gains",
                    [](const ExperimentConfig &c) { return std::string(c.scene.normalize_gains ? "true" : "false"); },
                    [](ExperimentConfig &c, const std::string &v) { c.scene.normalize_gains = to_bool(v); }},
                BK_DOUBLE("solver.eta", eta),
                Key{"solver.masks", [](const ExperimentConfig &c) { return str(c.masks); },
                    [](ExperimentConfig &c, const std::string &v) { c.masks = split(v, ','); }},
                BK_INT("solver.overlap", overlap),
                BK_INT("solver.max_outer", solver.max_outer),
                BK_DOUBLE("solver.rel_tol", solver.rel_tol),
                BK_INT("mmo.max_iters", solver.mmo.max_iters),
                BK_DOUBLE("mmo.grad_tol", solver.mmo.grad_tol),
                BK_DOUBLE("mmo.armijo_step", solver.mmo.armijo.initial_step),
                BK_DOUBLE("mmo.armijo_contraction", solver.mmo.armijo.contraction),
                BK_DOUBLE("mmo.armijo_decrease", solver.mmo.armijo.sufficient_decrease),
                BK_INT("mmo.armijo_backtracks", solver.mmo.armijo.max_backtracks),
                BK_DOUBLE("metrics.snr_db", snr_db),
                BK_LIST("sweep.snr_db", snr_list),
                BK_LIST("sweep.eta", eta_list),
                BK_LIST("sweep.bandwidth_hz", bandwidth_list),
                BK_LIST("sweep.dbar", dbar_list),
                BK_DIR("beampattern.los", bp_los),
                BK_DIRS("beampattern.targets", bp_targets),
                BK_LIST("beampattern.eta", bp_eta),
                BK_DOUBLE("beampattern.step_deg", bp_step_deg),
                BK_DIR("array_gain.los", ag_los),
                BK_DOUBLE("array_gain.bandwidth_hz", ag_bandwidth),
                BK_DOUBLE("array_gain.eta", ag_eta),
                BK_STRING("array_gain.mask", ag_mask),
                BK_DOUBLE("array_gain.step_deg", ag_step_deg),
                BK_STRING("bandwidth.mask", bw_mask),
                BK_LIST("phase_shifters.n_t", ps_n_t),
                BK_LIST("phase_shifters.q", ps_q),
                BK_LIST("phase_shifters.n_rf", ps_n_rf),
                BK_DOUBLE("phase_shifters.overlap_factor", ps_overlap_factor),
            };
            return table;
        }

#undef BK_INT
#undef BK_DOUBLE
#undef BK_LIST
#undef BK_DIR
#undef BK_DIRS
#undef BK_STRING
    }

    std::string format_double(double v)
    {
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        if (std::isnan(v))
            return "nan";
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        (void)ec;
        return std::string(buf, ptr);
    }

    ConfigMap ConfigMap::parse(const std::string &text)
    {
        ConfigMap map;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            if (trim(line).empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty())
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
            map.values_[key] = trim(line.substr(eq + 1));
        }
        return map;
    }

    ConfigMap ConfigMap::load(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot read config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    ExperimentConfig build_config(const ConfigMap &map, std::vector<std::string> &errors)
    {
        ExperimentConfig cfg;
        for (const auto &[key, value] : map.values())
        {
            const auto it = std::find_if(keys().begin(), keys().end(), [&](const Key &k) { return k.name == key; });
            if (it == keys().end())
            {
                errors.push_back("unknown key '" + key + "'");
                continue;
            }
            try
            {
                it->set(cfg, value);
            }
            catch (const std::exception &e)
            {
                errors.push_back(key + ": " + e.what());
            }
        }
        if (!cfg.absorption_table.empty())
        {
            try
            {
                cfg.scene.absorption = AbsorptionTable::load(cfg.absorption_table);
            }
            catch (const std::exception &e)
            {
                errors.push_back(std::string("channel.absorption_table: ") + e.what());
            }
        }
        return cfg;
    }

    std::string serialize(const ExperimentConfig &cfg)
    {
        std::vector<std::pair<std::string, std::string>> lines;
        for (const Key &k : keys())
            lines.emplace_back(k.name, k.get(cfg));
        std::sort(lines.begin(), lines.end());
        std::string out;
        for (const auto &[k, v] : lines)
            out += k + " = " + v + "\n";
        return out;
    }

    ArrayGeometry ExperimentConfig::tx_geometry(double esl) const
    {
        const double lam = wavelength();
        const double e = (esl >= 0.0 ? esl : element_spacing_lambda) * lam;
        const double s = subarray_spacing_lambda * lam;
        return {tx_nx, tx_ny, q_x, q_y, e, e, s, s};
    }

    ArrayGeometry ExperimentConfig::rx_geometry(double esl) const
    {
        const double lam = wavelength();
        const double e = (esl >= 0.0 ? esl : element_spacing_lambda) * lam;
        const double s = subarray_spacing_lambda * lam;
        return {rx_nx, rx_ny, q_x, q_y, e, e, s, s};
    }

    int ExperimentConfig::resolved_overlap() const
    {
        if (overlap > 0)
            return overlap;
        const int nt = n_t();
        if (n_rf < 1 || n_rf > nt)
            return 0;
        const auto [lo, hi] = overlap_range(nt, n_rf);
        return std::clamp(2 * ((nt + n_rf - 1) / n_rf), lo, hi);
    }

    ConnectivityMask ExperimentConfig::mask(const std::string &name) const
    {
        if (name == "fully")
            return ConnectivityMask::fully(n_t(), n_rf);
        if (name == "partial")
            return ConnectivityMask::partial(n_t(), n_rf);
        if (name == "pco" || name == "overlapped")
            return ConnectivityMask::overlapped(n_t(), n_rf, resolved_overlap());
        throw std::invalid_argument("unknown mask '" + name + "' (expected fully, pco or partial)");
    }

    std::vector<Direction> ExperimentConfig::radar_targets() const
    {
        return {targets.begin(), targets.begin() + std::min<std::size_t>(std::max(k, 0), targets.size())};
    }

    std::vector<std::string> validate(const ExperimentConfig &c)
    {
        std::vector<std::string> v;
        auto check = [&](bool ok, const std::string &msg) {
            if (!ok)
                v.push_back(msg);
        };

        check(std::find(scenario_names.begin(), scenario_names.end(), c.scenario) != scenario_names.end(),
              "unknown scenario '" + c.scenario + "'");
        check(c.trials >= 1, "trials must be >= 1");
        const bool counts_ok = c.tx_nx >= 1 && c.tx_ny >= 1 && c.rx_nx >= 1 && c.rx_ny >= 1 && c.q_x >= 1 && c.q_y >= 1;
        check(counts_ok, "array counts must be >= 1");
        check(c.element_spacing_lambda >= 0.0 && c.subarray_spacing_lambda >= 0.0, "array spacings must be >= 0");

        try
        {
            c.carrier.validate();
        }
        catch (const std::exception &e)
        {
            v.push_back(std::string("carrier: ") + e.what());
        }
        for (double b : c.bandwidth_list)
            check(c.carrier.f_c - 0.5 * b * (c.carrier.n_subcarriers - 1) / std::max(c.carrier.n_subcarriers, 1) > 0.0 &&
                      b >= 0.0,
                  "sweep.bandwidth_hz: bandwidth " + format_double(b) + " gives a non-positive lowest subcarrier");
        check(c.ag_bandwidth >= 0.0 && c.carrier.f_c - 0.5 * c.ag_bandwidth > 0.0,
              "array_gain.bandwidth_hz gives a non-positive lowest subcarrier");

        const int nt = counts_ok ? c.n_t() : 0;
        check(c.n_s >= 1, "N_S must be >= 1");
        check(c.k >= 1, "K must be >= 1");
        check(c.n_rf >= 1, "N_RF must be >= 1");
        check(c.n_rf >= c.n_s, "N_RF = " + std::to_string(c.n_rf) + " is smaller than N_S = " + std::to_string(c.n_s));
        check(c.n_rf <= nt, "N_RF = " + std::to_string(c.n_rf) + " exceeds N_T = " + std::to_string(nt));
        check(c.k <= c.n_s, "K exceeds N_S (K = " + std::to_string(c.k) + ", N_S = " + std::to_string(c.n_s) + ")");
        check(c.k <= int(c.targets.size()), "radar.targets lists fewer than K directions");
        check(c.k <= int(c.bp_targets.size()), "beampattern.targets lists fewer than K directions");
        if (nt > 0 && c.k >= 1)
            check(nt % c.k == 0, "radar beamformer needs N_T divisible by K (N_T = " + std::to_string(nt) +
                                     ", K = " + std::to_string(c.k) + ")");
        if (nt > 0 && c.n_s >= 1)
            check(c.n_s <= nt, "N_S exceeds N_T");

        std::vector<std::string> used = c.masks;
        used.push_back(c.ag_mask);
        used.push_back(c.bw_mask);
        for (const std::string &m : used)
        {
            if (m != "fully" && m != "partial" && m != "pco" && m != "overlapped")
            {
                v.push_back("unknown mask '" + m + "' (expected fully, pco or partial)");
                continue;
            }
            if (nt < 1 || c.n_rf < 1 || c.n_rf > nt)
                continue;
            if (m == "partial")
                check(nt % c.n_rf == 0, "partial mask needs N_T divisible by N_RF (N_T = " + std::to_string(nt) +
                                            ", N_RF = " + std::to_string(c.n_rf) + ")");
            if (m == "pco" || m == "overlapped")
            {
                const auto [lo, hi] = overlap_range(nt, c.n_rf);
                const int ov = c.resolved_overlap();
                check(ov >= lo && ov <= hi, "overlap " + std::to_string(ov) + " outside [" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + "]");
            }
        }
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());

        auto in_unit = [](double e) { return e >= 0.0 && e <= 1.0; };
        check(in_unit(c.eta) && in_unit(c.ag_eta), "eta must lie in [0, 1]");
        for (double e : c.eta_list)
            check(in_unit(e), "sweep.eta: " + format_double(e) + " outside [0, 1]");
        for (double e : c.bp_eta)
            check(in_unit(e), "beampattern.eta: " + format_double(e) + " outside [0, 1]");
        for (double d : c.dbar_list)
            check(d > 0.0, "sweep.dbar: entries must be positive (inf for co-located antennas)");
        check(c.bp_step_deg > 0.0 && c.ag_step_deg > 0.0, "grid steps must be positive");
        check(c.ps_overlap_factor >= 1.0, "phase_shifters.overlap_factor must be >= 1");
        for (const auto *list : {&c.ps_n_t, &c.ps_q, &c.ps_n_rf})
            for (double x : *list)
                check(x >= 1.0 && x == std::floor(x), "phase_shifters lists need positive integers");

        for (const Direction &d : c.targets)
            check(d.azimuth_deg >= -180 && d.azimuth_deg <= 180 && d.elevation_deg >= 0 && d.elevation_deg <= 180,
                  "radar.targets: direction out of range");
        try
        {
            c.scene.validate();
            c.bp_los.validate();
            c.ag_los.validate();
        }
        catch (const std::exception &e)
        {
            v.push_back(e.what());
        }
        try
        {
            c.solver.mmo.validate();
            check(c.solver.max_outer >= 1 && c.solver.rel_tol >= 0.0, "solver: need max_outer >= 1 and rel_tol >= 0");
        }
        catch (const std::exception &e)
        {
            v.push_back(e.what());
        }
        return v;
    }
}
