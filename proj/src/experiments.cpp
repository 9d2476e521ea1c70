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

#include "beamkit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "beamkit/radar.hpp"

namespace beamkit
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }

        using TrialFn = std::function<std::vector<std::vector<double>>(int trial)>;

        // Runs fn for every trial on a pool of `jobs` threads. Output is indexed by trial,
        // so the reduction order never depends on scheduling.
        std::vector<std::vector<std::vector<double>>> run_trials(int trials, int jobs, const TrialFn &fn)
        {
            std::vector<std::vector<std::vector<double>>> out(static_cast<std::size_t>(trials));
            std::atomic<int> next{0};
            std::exception_ptr error;
            std::mutex error_mutex;
            auto worker = [&] {
                for (;;)
                {
                    const int t = next.fetch_add(1);
                    if (t >= trials)
                        return;
                    try
                    {
                        out[std::size_t(t)] = fn(t);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                        next = trials;
                    }
                }
            };
            const int n = std::clamp(jobs, 1, std::max(trials, 1));
            std::vector<std::thread> pool;
            for (int i = 1; i < n; ++i)
                pool.emplace_back(worker);
            worker();
            for (auto &th : pool)
                th.join();
            if (error)
                std::rethrow_exception(error);
            return out;
        }

        void summarize(ScenarioResult &r, const std::vector<std::string> &names)
        {
            for (std::size_t c = 0; c < names.size(); ++c)
            {
                Curve curve{names[c], {}};
                for (std::size_t a = 0; a < r.axis_values.size(); ++a)
                {
                    std::vector<TrialValue> values;
                    for (std::size_t t = 0; t < r.raw.size(); ++t)
                        values.push_back({t, r.raw[t][c][a]});
                    curve.points.push_back(aggregate(std::move(values)));
                }
                r.curves.push_back(std::move(curve));
            }
        }

        std::vector<std::vector<double>> blank(std::size_t curves, std::size_t points)
        {
            return std::vector<std::vector<double>>(curves, std::vector<double>(points, 0.0));
        }

        std::vector<CMatrix> comm_precoders(const std::vector<CMatrix> &h, int n_s)
        {
            std::vector<CMatrix> f;
            for (const CMatrix &hm : h)
                f.push_back(unconstrained_precoder(hm, n_s));
            return f;
        }

        JrcProblem make_problem(const ExperimentConfig &cfg, std::vector<CMatrix> f_c, const CMatrix &f_r,
                                double eta, const ConnectivityMask &mask)
        {
            JrcProblem p;
            p.f_c = std::move(f_c);
            p.f_r = f_r;
            p.eta = eta;
            p.mask = mask;
            p.n_s = cfg.n_s;
            p.opts = cfg.solver;
            return p;
        }

        CMatrix radar_target(const ExperimentConfig &cfg, const ArrayGeometry &tx,
                             const std::vector<Direction> &targets)
        {
            return radar_beamformer(RadarScene{targets}, tx, cfg.carrier.f_c).f_r;
        }

        // ---------------------------------------------------------------- scenarios

        ScenarioResult se_vs_snr(const ExperimentConfig &cfg, int jobs)
        {
            ScenarioResult r{"se-vs-snr", "snr_db", cfg.snr_list, {}, {}, {}};
            std::vector<std::string> names{"unconstrained"};
            for (const auto &m : cfg.masks)
                names.push_back(m);
            for (const auto &m : cfg.masks)
                names.push_back("covariance-" + m);

            const ArrayGeometry tx = cfg.tx_geometry(), rx = cfg.rx_geometry();
            const CMatrix f_r = radar_target(cfg, tx, cfg.radar_targets());
            const std::size_t n_masks = cfg.masks.size();

            r.raw = run_trials(cfg.trials, jobs, [&](int t) {
                const TrialSeeds s = trial_seeds(cfg.seed, t);
                const ChannelRealization ch = generate_channel(tx, rx, cfg.carrier, cfg.scene, s.channel);
                const std::vector<CMatrix> f_c = comm_precoders(ch.h, cfg.n_s);

                std::vector<CMatrix> f_stat;
                for (const CMatrix &c : channel_covariance(ch, tx, CovarianceMode::los_approx))
                    f_stat.push_back(statistical_precoder(c, cfg.n_s));

                std::vector<HybridBeamformer> csi, cov;
                for (const auto &name : cfg.masks)
                {
                    const ConnectivityMask mask = cfg.mask(name);
                    csi.push_back(solve(make_problem(cfg, f_c, f_r, cfg.eta, mask), s.solver).bf);
                    cov.push_back(solve(make_problem(cfg, f_stat, f_r, cfg.eta, mask), s.solver).bf);
                }

                auto v = blank(names.size(), cfg.snr_list.size());
                for (std::size_t a = 0; a < cfg.snr_list.size(); ++a)
                {
                    const SnrConfig snr{cfg.snr_list[a], cfg.n_s};
                    v[0][a] = spectral_efficiency(ch.h, f_c, snr);
                    for (std::size_t i = 0; i < n_masks; ++i)
                    {
                        v[1 + i][a] = spectral_efficiency(ch, csi[i], snr);
                        v[1 + n_masks + i][a] = spectral_efficiency(ch, cov[i], snr);
                    }
                }
                return v;
            });
            summarize(r, names);
            return r;
        }

        ScenarioResult se_vs_eta(const ExperimentConfig &cfg, int jobs)
        {
            ScenarioResult r{"se-vs-eta", "eta", cfg.eta_list, {}, {}, {}};
            std::vector<std::string> names{"unconstrained"};
            for (const auto &m : cfg.masks)
                names.push_back(m);

            const ArrayGeometry tx = cfg.tx_geometry(), rx = cfg.rx_geometry();
            const CMatrix f_r = radar_target(cfg, tx, cfg.radar_targets());

            r.raw = run_trials(cfg.trials, jobs, [&](int t) {
                const TrialSeeds s = trial_seeds(cfg.seed, t);
                const ChannelRealization ch = generate_channel(tx, rx, cfg.carrier, cfg.scene, s.channel);
                const std::vector<CMatrix> f_c = comm_precoders(ch.h, cfg.n_s);
                const SnrConfig snr{cfg.snr_db, cfg.n_s};
                const double se_c = spectral_efficiency(ch.h, f_c, snr);

                auto v = blank(names.size(), cfg.eta_list.size());
                for (std::size_t i = 0; i < cfg.masks.size(); ++i)
                {
                    const ConnectivityMask mask = cfg.mask(cfg.masks[i]);
                    // Same solver seed for every eta: common random numbers along the sweep.
                    for (std::size_t a = 0; a < cfg.eta_list.size(); ++a)
                    {
                        const auto sol = solve(make_problem(cfg, f_c, f_r, cfg.eta_list[a], mask), s.solver);
                        v[1 + i][a] = spectral_efficiency(ch, sol.bf, snr);
                    }
                }
                std::fill(v[0].begin(), v[0].end(), se_c);
                return v;
            });
            summarize(r, names);
            return r;
        }

        std::string eta_label(double eta) { return "eta" + format_double(eta); }

        ScenarioResult beampattern_scenario(const ExperimentConfig &cfg, int jobs)
        {
            const std::vector<Direction> grid = azimuth_cut(90.0, -180.0, 180.0, cfg.bp_step_deg);
            ScenarioResult r{"beampattern", "azimuth_deg", {}, {}, {}, {}};
            for (const Direction &d : grid)
                r.axis_values.push_back(d.azimuth_deg);

            std::vector<std::string> names;
            for (const auto &m : cfg.masks)
                for (double eta : cfg.bp_eta)
                    names.push_back(m + "-" + eta_label(eta));
            names.push_back("radar-ideal");

            const ArrayGeometry tx = cfg.tx_geometry(), rx = cfg.rx_geometry();
            const std::vector<Direction> targets(cfg.bp_targets.begin(), cfg.bp_targets.begin() + cfg.k);
            const CMatrix f_r = radar_target(cfg, tx, targets);

            ChannelScene scene = cfg.scene;
            scene.los_aod = cfg.bp_los;
            scene.elevation_deg = {90.0, 90.0};

            auto normalized = [&](const CMatrix &cov) {
                std::vector<double> p = beampattern(cov, tx, grid, cfg.carrier.f_c);
                const double peak = *std::max_element(p.begin(), p.end());
                for (double &x : p)
                    x = peak > 0.0 ? x / peak : 0.0;
                return p;
            };
            const std::vector<double> ideal = normalized(f_r * f_r.adjoint());

            r.raw = run_trials(cfg.trials, jobs, [&](int t) {
                const TrialSeeds s = trial_seeds(cfg.seed, t);
                const ChannelRealization ch = generate_channel(tx, rx, cfg.carrier, scene, s.channel);
                const std::vector<CMatrix> f_c = comm_precoders(ch.h, cfg.n_s);

                std::vector<std::vector<double>> v;
                for (const auto &name : cfg.masks)
                {
                    const ConnectivityMask mask = cfg.mask(name);
                    for (double eta : cfg.bp_eta)
                    {
                        const auto sol = solve(make_problem(cfg, f_c, f_r, eta, mask), s.solver);
                        CMatrix cov = CMatrix::Zero(tx.n_sub(), tx.n_sub());
                        for (const CMatrix &f_bb : sol.bf.f_bb)
                            cov += transmit_covariance(sol.bf.f_rf, f_bb);
                        v.push_back(normalized(cov / double(sol.bf.f_bb.size())));
                    }
                }
                v.push_back(ideal);
                return v;
            });
            summarize(r, names);
            return r;
        }

        ScenarioResult se_vs_dbar(const ExperimentConfig &cfg, int jobs)
        {
            ScenarioResult r{"se-vs-dbar", "dbar", cfg.dbar_list, {}, {}, {}};
            std::vector<std::string> names{"unconstrained"};
            for (const auto &m : cfg.masks)
                names.push_back(m);

            r.raw = run_trials(cfg.trials, jobs, [&](int t) {
                const TrialSeeds s = trial_seeds(cfg.seed, t);
                const SnrConfig snr{cfg.snr_db, cfg.n_s};
                auto v = blank(names.size(), cfg.dbar_list.size());
                for (std::size_t a = 0; a < cfg.dbar_list.size(); ++a)
                {
                    // delta = lambda / dbar; dbar = inf co-locates the antennas of a subarray
                    const double esl = 1.0 / cfg.dbar_list[a];
                    const ArrayGeometry tx = cfg.tx_geometry(esl), rx = cfg.rx_geometry(esl);
                    const CMatrix f_r = radar_target(cfg, tx, cfg.radar_targets());
                    const ChannelRealization ch = generate_channel(tx, rx, cfg.carrier, cfg.scene, s.channel);
                    const std::vector<CMatrix> f_c = comm_precoders(ch.h, cfg.n_s);
                    v[0][a] = spectral_efficiency(ch.h, f_c, snr);
                    for (std::size_t i = 0; i < cfg.masks.size(); ++i)
                    {
                        const auto sol = solve(make_problem(cfg, f_c, f_r, cfg.eta, cfg.mask(cfg.masks[i])), s.solver);
                        v[1 + i][a] = spectral_efficiency(ch, sol.bf, snr);
                    }
                }
                return v;
            });
            summarize(r, names);
            return r;
        }

        // Designs F_RF and F_BB at f_c only, then replicates F_BB across the band.
        struct CenterDesign
        {
            HybridBeamformer bf; // f_bb replicated over the wideband subcarriers, f_bb_corrected filled
            ChannelRealization wideband;
        };

        CenterDesign center_design(const ExperimentConfig &cfg, const ArrayGeometry &tx, const ArrayGeometry &rx,
                                   const CarrierConfig &wide, const ChannelScene &scene, const CMatrix &f_r,
                                   double eta, const ConnectivityMask &mask, const TrialSeeds &s)
        {
            const CarrierConfig center{wide.f_c, 0.0, 1};
            // Same seed: path angles are drawn before gains, so both realizations share the geometry.
            const ChannelRealization narrow = generate_channel(tx, rx, center, scene, s.channel);
            CenterDesign out{solve(make_problem(cfg, comm_precoders(narrow.h, cfg.n_s), f_r, eta, mask), s.solver).bf,
                             generate_channel(tx, rx, wide, scene, s.channel)};
            out.bf.f_bb.assign(std::size_t(wide.n_subcarriers), out.bf.f_bb.front());
            out.bf.f_bb_corrected = beam_split_correct(out.bf, tx, wide);
            return out;
        }

        ScenarioResult array_gain_scenario(const ExperimentConfig &cfg, int jobs)
        {
            const std::vector<Direction> grid = elevation_cut(cfg.ag_los.azimuth_deg, 0.0, 90.0, cfg.ag_step_deg);
            ScenarioResult r{"array-gain", "elevation_deg", {}, {}, {}, {}};
            for (const Direction &d : grid)
                r.axis_values.push_back(d.elevation_deg);
            const std::vector<std::string> names{"fc", "f1", "fM", "f1-corrected", "fM-corrected"};

            const ArrayGeometry tx = cfg.tx_geometry(), rx = cfg.rx_geometry();
            const CMatrix f_r = radar_target(cfg, tx, cfg.radar_targets());
            const CarrierConfig wide{cfg.carrier.f_c, cfg.ag_bandwidth, cfg.carrier.n_subcarriers};
            const std::vector<double> freqs = subcarrier_frequencies(wide);
            ChannelScene scene = cfg.scene;
            scene.los_aod = cfg.ag_los;
            const ConnectivityMask mask = cfg.mask(cfg.ag_mask);

            r.raw = run_trials(cfg.trials, jobs, [&](int t) {
                const TrialSeeds s = trial_seeds(cfg.seed, t);
                const CenterDesign d = center_design(cfg, tx, rx, wide, scene, f_r, cfg.ag_eta, mask, s);
                const std::size_t last = freqs.size() - 1;
                const CVector w_c = (d.bf.f_rf * d.bf.f_bb.front()).col(0);
                return std::vector<std::vector<double>>{
                    array_gain(w_c, tx, grid, cfg.carrier.f_c),
                    array_gain(d.bf.effective(0).col(0), tx, grid, freqs.front()),
                    array_gain(d.bf.effective(last).col(0), tx, grid, freqs.back()),
                    array_gain(d.bf.effective(0, true).col(0), tx, grid, freqs.front()),
                    array_gain(d.bf.effective(last, true).col(0), tx, grid, freqs.back()),
                };
            });
            summarize(r, names);
            return r;
        }

        ScenarioResult se_vs_bandwidth(const ExperimentConfig &cfg, int jobs)
        {
            ScenarioResult r{"se-vs-bandwidth", "bandwidth_hz", cfg.bandwidth_list, {}, {}, {}};
            const std::vector<std::string> names{"unconstrained", "wideband", "center", "center-corrected"};

            const ArrayGeometry tx = cfg.tx_geometry(), rx = cfg.rx_geometry();
            const CMatrix f_r = radar_target(cfg, tx, cfg.radar_targets());
            const ConnectivityMask mask = cfg.mask(cfg.bw_mask);

            r.raw = run_trials(cfg.trials, jobs, [&](int t) {
                const TrialSeeds s = trial_seeds(cfg.seed, t);
                const SnrConfig snr{cfg.snr_db, cfg.n_s};
                auto v = blank(names.size(), cfg.bandwidth_list.size());
                for (std::size_t a = 0; a < cfg.bandwidth_list.size(); ++a)
                {
                    const CarrierConfig wide{cfg.carrier.f_c, cfg.bandwidth_list[a], cfg.carrier.n_subcarriers};
                    const CenterDesign d = center_design(cfg, tx, rx, wide, cfg.scene, f_r, cfg.eta, mask, s);
                    const std::vector<CMatrix> f_c = comm_precoders(d.wideband.h, cfg.n_s);
                    const auto full = solve(make_problem(cfg, f_c, f_r, cfg.eta, mask), s.solver);
                    v[0][a] = spectral_efficiency(d.wideband.h, f_c, snr);
                    v[1][a] = spectral_efficiency(d.wideband, full.bf, snr);
                    v[2][a] = spectral_efficiency(d.wideband, d.bf, snr, false);
                    v[3][a] = spectral_efficiency(d.wideband, d.bf, snr, true);
                }
                return v;
            });
            summarize(r, names);
            return r;
        }

        ScenarioResult phase_shifters(const ExperimentConfig &cfg)
        {
            ScenarioResult r{"phase-shifters", "", {}, {}, {}, {}};
            const std::vector<std::pair<Architecture, std::string>> archs{
                {Architecture::aosa_full, "aosa-full"},       {Architecture::aosa_partial, "aosa-partial"},
                {Architecture::gosa_full, "gosa-full"},       {Architecture::gosa_partial, "gosa-partial"},
                {Architecture::gosa_pco, "gosa-pco"}};

            Table all{"table", {"n_t", "q", "n_rf", "overlap"}, {}};
            for (const auto &a : archs)
                all.header.push_back(a.second);
            std::vector<Table> per;
            for (const auto &a : archs)
                per.push_back({a.second, {"n_t", "q", "n_rf", "overlap", a.second}, {}});

            for (double nt_d : cfg.ps_n_t)
                for (double q_d : cfg.ps_q)
                    for (double nrf_d : cfg.ps_n_rf)
                    {
                        const int nt = int(nt_d), q = int(q_d), nrf = int(nrf_d);
                        if (nrf > nt)
                            continue;
                        const auto [lo, hi] = overlap_range(nt, nrf);
                        const int ov = std::clamp(int(std::ceil(cfg.ps_overlap_factor * nt / nrf)), lo, hi);
                        std::vector<std::string> row{std::to_string(nt), std::to_string(q), std::to_string(nrf),
                                                     std::to_string(ov)};
                        for (std::size_t i = 0; i < archs.size(); ++i)
                        {
                            const std::string count = std::to_string(phase_shifter_count(archs[i].first, nt, q, nrf, ov));
                            per[i].rows.push_back({row[0], row[1], row[2], row[3], count});
                            row.push_back(count);
                        }
                        all.rows.push_back(std::move(row));
                    }
            r.tables = std::move(per);
            r.tables.push_back(std::move(all));
            return r;
        }
    }

    TrialSeeds trial_seeds(std::uint64_t base_seed, int trial)
    {
        const std::uint64_t ts = base_seed + std::uint64_t(trial);
        return {ts, splitmix64(ts ^ 0x6368616e6e656cULL), splitmix64(ts ^ 0x736f6c766572ULL)};
    }

    const Curve &ScenarioResult::curve(const std::string &name) const { return curves.at(curve_index(name)); }

    std::size_t ScenarioResult::curve_index(const std::string &name) const
    {
        for (std::size_t i = 0; i < curves.size(); ++i)
            if (curves[i].name == name)
                return i;
        throw std::out_of_range("no curve named '" + name + "' in scenario " + scenario);
    }

    ScenarioResult run_scenario(const ExperimentConfig &cfg, int jobs)
    {
        if (const auto errors = validate(cfg); !errors.empty())
        {
            std::string msg = "invalid configuration: " + errors.front();
            if (errors.size() > 1)
                msg += " (and " + std::to_string(errors.size() - 1) + " more)";
            throw std::invalid_argument(msg);
        }
        if (cfg.scenario == "se-vs-snr")
            return se_vs_snr(cfg, jobs);
        if (cfg.scenario == "se-vs-eta")
            return se_vs_eta(cfg, jobs);
        if (cfg.scenario == "beampattern")
            return beampattern_scenario(cfg, jobs);
        if (cfg.scenario == "se-vs-dbar")
            return se_vs_dbar(cfg, jobs);
        if (cfg.scenario == "array-gain")
            return array_gain_scenario(cfg, jobs);
        if (cfg.scenario == "se-vs-bandwidth")
            return se_vs_bandwidth(cfg, jobs);
        if (cfg.scenario == "phase-shifters")
            return phase_shifters(cfg);
        throw std::invalid_argument("unknown scenario '" + cfg.scenario + "'");
    }

    std::string csv_text(const ScenarioResult &result, const Curve &curve)
    {
        std::string out = result.axis + "," + curve.name + "_mean," + curve.name + "_stderr\n";
        for (std::size_t a = 0; a < curve.points.size(); ++a)
            out += format_double(result.axis_values[a]) + "," + format_double(curve.points[a].mean) + "," +
                   format_double(curve.points[a].std_error) + "\n";
        return out;
    }

    std::string csv_text(const Table &table)
    {
        auto line = [](const std::vector<std::string> &cells) {
            std::string s;
            for (std::size_t i = 0; i < cells.size(); ++i)
                s += (i ? "," : "") + cells[i];
            return s + "\n";
        };
        std::string out = line(table.header);
        for (const auto &row : table.rows)
            out += line(row);
        return out;
    }

    std::filesystem::path write_result(const ScenarioResult &result, const ExperimentConfig &cfg,
                                       const std::filesystem::path &out_dir)
    {
        const std::filesystem::path dir = out_dir / result.scenario;
        std::filesystem::create_directories(dir);
        auto write = [&](const std::string &file, const std::string &text) {
            std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
            out << text;
            if (!out)
                throw std::runtime_error("cannot write " + (dir / file).string());
        };
        for (const Curve &c : result.curves)
            write(c.name + ".csv", csv_text(result, c));
        for (const Table &t : result.tables)
            write(t.name + ".csv", csv_text(t));
        write("manifest.txt", "# beamkit run manifest\n" + serialize(cfg));
        return dir;
    }
}
