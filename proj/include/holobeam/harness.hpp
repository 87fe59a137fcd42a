// SPDX-License-Identifier: Apache-2.0
//
// holobeam - joint digital, holographic and RIS beamforming for RHS-RIS MU-MISO downlinks
// Copyright (C) 2026 The holobeam authors
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

#ifndef HOLOBEAM_HARNESS_HPP
#define HOLOBEAM_HARNESS_HPP

#include "am_driver.hpp"
#include "channel.hpp"
#include "common.hpp"
#include "config.hpp"
#include "rhs.hpp"
#include "rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace holobeam
{
    inline constexpr std::string_view version = "0.1.0";

    inline const std::vector<std::string> &sweep_axes()
    {
        static const std::vector<std::string> axes{"p_t_watts", "k_users",  "n_ris",           "n_t",
                                                   "ris_mode",  "csi_mode", "coupling_enabled"};
        return axes;
    }

    struct SweepRecord
    {
        double p_t_watts = 0.0;
        int k_users = 0;
        int n_t = 0;
        int n_ris = 0;
        RisMode ris_mode = RisMode::optimized;
        bool coupling_enabled = false;
        CsiMode csi_mode = CsiMode::perfect;

        std::string axis_value; // value of the swept parameter, as given
        int realization = 0;
        std::uint64_t seed = 0;
        double sum_rate = 0.0;
        std::vector<double> per_user;
        std::vector<double> trace; // observed-CSI objective after every sub-step
        std::vector<AmStep> trace_steps;
        int iters_outer = 0;
        int iters_dinkelbach = 0;
        int iters_rcg = 0;
        bool skipped = false;
        std::string skip_reason;
    };

    // Factor n into n_x * n_y with n_x <= n_y as close to square as possible.
    inline std::pair<int, int> square_grid(int n)
    {
        if (n < 1)
            throw Error("array size must be >= 1");
        int nx = static_cast<int>(std::sqrt(static_cast<double>(n)));
        while (nx > 1 && n % nx != 0)
            --nx;
        return {nx, n / nx};
    }

    namespace detail
    {
        inline bool parse_bool_value(const std::string &s)
        {
            if (s == "true" || s == "1" || s == "on")
                return true;
            if (s == "false" || s == "0" || s == "off")
                return false;
            throw Error("invalid sweep value '" + s + "' for coupling_enabled");
        }

        inline double parse_double_value(const std::string &s, const std::string &axis)
        {
            std::size_t used = 0;
            double d = 0.0;
            try
            {
                d = std::stod(s, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used != s.size() || s.empty())
                throw Error("invalid sweep value '" + s + "' for " + axis);
            return d;
        }

        inline int parse_int_value(const std::string &s, const std::string &axis)
        {
            const double d = parse_double_value(s, axis);
            if (d != std::floor(d) || d < 1 || d > 1e6)
                throw Error("invalid sweep value '" + s + "' for " + axis);
            return static_cast<int>(d);
        }
    }

    // Config for one sweep cell; scheme and seed are filled in per run.
    inline SystemConfig apply_axis(SystemConfig cfg, const std::string &axis, const std::string &value)
    {
        if (axis == "p_t_watts")
            cfg.p_t_watts = detail::parse_double_value(value, axis);
        else if (axis == "k_users")
        {
            const int k = detail::parse_int_value(value, axis);
            if (cfg.ue_placement == UePlacement::fixed)
            {
                if (static_cast<std::size_t>(k) > cfg.ue_positions.size())
                    throw Error("invalid config: k_users exceeds the fixed ue_positions");
                cfg.ue_positions.resize(static_cast<std::size_t>(k));
            }
            cfg.k_users = k;
        }
        else if (axis == "n_ris")
            std::tie(cfg.n_ris_x, cfg.n_ris_y) = square_grid(detail::parse_int_value(value, axis));
        else if (axis == "n_t")
            std::tie(cfg.n_t_x, cfg.n_t_y) = square_grid(detail::parse_int_value(value, axis));
        else if (axis == "ris_mode")
        {
            const auto m = parse_ris_mode(value);
            if (!m)
                throw Error("invalid sweep value '" + value + "' for ris_mode");
            cfg.ris_mode = *m;
        }
        else if (axis == "csi_mode")
        {
            const auto m = parse_csi_mode(value);
            if (!m)
                throw Error("invalid sweep value '" + value + "' for csi_mode");
            cfg.csi_mode = *m;
        }
        else if (axis == "coupling_enabled")
            cfg.coupling_enabled = detail::parse_bool_value(value);
        else
            throw Error("unknown sweep axis: " + axis);
        return cfg;
    }

    // Child seed of a realization. It depends on the master seed, the axis name and the
    // realization index only, so every value of the axis and every scheme sees the same
    // path draws and adding values never moves existing cells.
    inline std::uint64_t realization_seed(std::uint64_t master, std::string_view axis, int realization)
    {
        return derive_seed(derive_seed(master, axis), static_cast<std::uint64_t>(realization));
    }

    struct SweepOptions
    {
        std::string axis;                // empty: a single cell with the config as given
        std::vector<std::string> values;
        std::vector<RisMode> schemes{RisMode::none, RisMode::random, RisMode::optimized};
        int jobs = 1;
    };

    namespace detail
    {
        struct CellJob
        {
            std::size_t value_index;
            int realization;
        };

        inline SweepRecord make_record(const SystemConfig &cfg, const std::string &value, int realization)
        {
            SweepRecord r;
            r.p_t_watts = cfg.p_t_watts;
            r.k_users = cfg.k_users;
            r.n_t = cfg.n_t();
            r.n_ris = cfg.n_ris();
            r.ris_mode = cfg.ris_mode;
            r.coupling_enabled = cfg.coupling_enabled;
            r.csi_mode = cfg.csi_mode;
            r.axis_value = value;
            r.realization = realization;
            r.seed = cfg.seed;
            return r;
        }

        inline void run_cell(const SystemConfig &cell, const RhsGeometry &geom, const std::vector<RisMode> &schemes,
                             const std::string &value, int realization, std::uint64_t seed, SweepRecord *out)
        {
            SystemConfig cfg = cell;
            cfg.seed = seed;
            resolve_ue_positions(cfg);

            ChannelSet ch_true, ch_obs;
            std::string failure;
            try
            {
                validate(cfg);
                auto rng = make_rng(seed, "channel");
                ch_true = generate_channels(cfg, rng);
                if (cfg.csi_mode == CsiMode::imperfect)
                {
                    auto csi_rng = make_rng(seed, "csi");
                    ch_obs = perturb_csi(ch_true, cfg.csi_error_radius_factor, csi_rng);
                }
                else
                    ch_obs = ch_true;
            }
            catch (const Error &e)
            {
                failure = e.what();
            }

            for (std::size_t s = 0; s < schemes.size(); ++s)
            {
                cfg.ris_mode = schemes[s];
                SweepRecord &rec = out[s];
                rec = make_record(cfg, value, realization);
                if (!failure.empty())
                {
                    rec.skipped = true;
                    rec.skip_reason = failure;
                    rec.sum_rate = std::numeric_limits<double>::quiet_NaN();
                    continue;
                }
                try
                {
                    const auto res = run_scheme(cfg, ch_true, ch_obs, geom);
                    rec.sum_rate = res.state.sum_rate;
                    rec.per_user.assign(res.state.per_user_rates.data(),
                                        res.state.per_user_rates.data() + res.state.per_user_rates.size());
                    rec.trace = res.trace.objective;
                    rec.trace_steps = res.trace.step;
                    rec.iters_outer = res.trace.outer_iterations;
                    rec.iters_dinkelbach = res.trace.dinkelbach_iterations;
                    rec.iters_rcg = res.trace.rcg_iterations;
                }
                catch (const Error &e)
                {
                    rec.skipped = true;
                    rec.skip_reason = e.what();
                    rec.sum_rate = std::numeric_limits<double>::quiet_NaN();
                }
            }
        }
    }

    // One record per (value, realization, scheme), ordered that way whatever the job count.
    inline std::vector<SweepRecord> run_sweep(const SystemConfig &base, const SweepOptions &opt)
    {
        if (!opt.axis.empty() &&
            std::find(sweep_axes().begin(), sweep_axes().end(), opt.axis) == sweep_axes().end())
            throw Error("unknown sweep axis: " + opt.axis);
        if (!opt.axis.empty() && opt.values.empty())
            throw Error("sweep over " + opt.axis + " needs at least one value");
        if (opt.jobs < 1)
            throw Error("jobs must be >= 1");

        const std::vector<std::string> values = opt.axis.empty() ? std::vector<std::string>{""} : opt.values;
        const bool by_mode = opt.axis == "ris_mode"; // the axis itself picks the scheme
        if (!by_mode && opt.schemes.empty())
            throw Error("no schemes to run");
        std::vector<SystemConfig> cells;
        std::vector<RhsGeometry> geoms;
        for (const auto &v : values)
        {
            cells.push_back(opt.axis.empty() ? base : apply_axis(base, opt.axis, v));
            validate(cells.back());
            geoms.push_back(make_rhs_geometry(cells.back()));
        }

        const std::size_t n_schemes = by_mode ? 1 : opt.schemes.size();
        std::vector<detail::CellJob> jobs;
        for (std::size_t v = 0; v < cells.size(); ++v)
            for (int r = 0; r < base.realizations; ++r)
                jobs.push_back({v, r});
        std::vector<SweepRecord> records(jobs.size() * n_schemes);

        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t j = next++; j < jobs.size(); j = next++)
            {
                const auto &job = jobs[j];
                const auto &cell = cells[job.value_index];
                const std::vector<RisMode> cell_schemes = by_mode ? std::vector<RisMode>{cell.ris_mode} : opt.schemes;
                const auto seed = realization_seed(base.seed, opt.axis, job.realization);
                detail::run_cell(cell, geoms[job.value_index], cell_schemes, values[job.value_index],
                                 job.realization, seed, &records[j * n_schemes]);
            }
        };
        const int n_threads = std::min<int>(opt.jobs, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
        if (n_threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (int t = 0; t < n_threads; ++t)
                pool.emplace_back(worker);
            for (auto &t : pool)
                t.join();
        }
        return records;
    }

    inline std::vector<SweepRecord> run_sweep(const SystemConfig &base, const std::string &axis,
                                              const std::vector<std::string> &values)
    {
        SweepOptions opt;
        opt.axis = axis;
        opt.values = values;
        return run_sweep(base, opt);
    }

    struct SummaryRow
    {
        double p_t_watts = 0.0;
        int k_users = 0;
        int n_t = 0;
        int n_ris = 0;
        RisMode ris_mode = RisMode::optimized;
        bool coupling_enabled = false;
        CsiMode csi_mode = CsiMode::perfect;
        double mean = 0.0;
        double std = 0.0; // population
        int count = 0;    // records entering the mean
        int skipped = 0;
    };

    // Cells in order of first appearance. Skipped records are counted, not averaged.
    inline std::vector<SummaryRow> aggregate(const std::vector<SweepRecord> &records)
    {
        using Key = std::tuple<double, int, int, int, int, bool, int>;
        std::map<Key, std::size_t> index;
        std::vector<SummaryRow> rows;
        std::vector<std::vector<double>> samples;
        for (const auto &r : records)
        {
            const Key key{r.p_t_watts, r.k_users, r.n_t, r.n_ris, static_cast<int>(r.ris_mode), r.coupling_enabled,
                          static_cast<int>(r.csi_mode)};
            auto it = index.find(key);
            if (it == index.end())
            {
                it = index.emplace(key, rows.size()).first;
                SummaryRow row;
                row.p_t_watts = r.p_t_watts;
                row.k_users = r.k_users;
                row.n_t = r.n_t;
                row.n_ris = r.n_ris;
                row.ris_mode = r.ris_mode;
                row.coupling_enabled = r.coupling_enabled;
                row.csi_mode = r.csi_mode;
                rows.push_back(row);
                samples.emplace_back();
            }
            if (r.skipped)
                ++rows[it->second].skipped;
            else
                samples[it->second].push_back(r.sum_rate);
        }
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            const auto &s = samples[i];
            auto &row = rows[i];
            row.count = static_cast<int>(s.size());
            if (s.empty())
            {
                row.mean = row.std = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            double sum = 0.0;
            for (double x : s)
                sum += x;
            row.mean = sum / static_cast<double>(s.size());
            double var = 0.0;
            for (double x : s)
                var += (x - row.mean) * (x - row.mean);
            row.std = std::sqrt(var / static_cast<double>(s.size()));
        }
        return rows;
    }

    // CSV output

    inline std::string format_double(double d)
    {
        if (std::isnan(d))
            return "nan";
        if (std::isinf(d))
            return d > 0 ? "inf" : "-inf";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        return buf;
    }

    namespace detail
    {
        inline std::string scenario_columns(double p_t, int k, int n_t, int n_ris, RisMode mode, bool coupling,
                                            CsiMode csi)
        {
            std::string s = format_double(p_t);
            s += "," + std::to_string(k) + "," + std::to_string(n_t) + "," + std::to_string(n_ris) + ",";
            s += std::string(to_string(mode)) + "," + (coupling ? "true" : "false") + "," +
                 std::string(to_string(csi));
            return s;
        }

        inline constexpr std::string_view scenario_header =
            "p_t_watts,k_users,n_t,n_ris,ris_mode,coupling_enabled,csi_mode";
    }

    inline void write_records_csv(std::ostream &os, const std::vector<SweepRecord> &records)
    {
        int k_max = 0;
        for (const auto &r : records)
            k_max = std::max(k_max, r.k_users);
        os << detail::scenario_header << ",realization,seed,sum_rate_bpshz";
        for (int k = 0; k < k_max; ++k)
            os << ",rate_user_" << k;
        os << ",iters_outer,iters_dinkelbach_total,iters_rcg_total,skipped\n";
        for (const auto &r : records)
        {
            os << detail::scenario_columns(r.p_t_watts, r.k_users, r.n_t, r.n_ris, r.ris_mode, r.coupling_enabled,
                                           r.csi_mode)
               << ',' << r.realization << ',' << r.seed << ',' << format_double(r.sum_rate);
            for (int k = 0; k < k_max; ++k)
            {
                os << ',';
                if (static_cast<std::size_t>(k) < r.per_user.size())
                    os << format_double(r.per_user[static_cast<std::size_t>(k)]);
            }
            os << ',' << r.iters_outer << ',' << r.iters_dinkelbach << ',' << r.iters_rcg << ','
               << (r.skipped ? "true" : "false") << '\n';
        }
    }

    inline void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &rows)
    {
        os << detail::scenario_header << ",mean_sum_rate_bpshz,std_sum_rate_bpshz,count,skipped\n";
        for (const auto &r : rows)
            os << detail::scenario_columns(r.p_t_watts, r.k_users, r.n_t, r.n_ris, r.ris_mode, r.coupling_enabled,
                                           r.csi_mode)
               << ',' << format_double(r.mean) << ',' << format_double(r.std) << ',' << r.count << ','
               << r.skipped << '\n';
    }

    // Long format: one row per AM sub-step.
    inline void write_traces_csv(std::ostream &os, const std::vector<SweepRecord> &records)
    {
        os << detail::scenario_header << ",realization,seed,step_index,step,objective_bpshz\n";
        for (const auto &r : records)
            for (std::size_t i = 0; i < r.trace.size(); ++i)
                os << detail::scenario_columns(r.p_t_watts, r.k_users, r.n_t, r.n_ris, r.ris_mode,
                                               r.coupling_enabled, r.csi_mode)
                   << ',' << r.realization << ',' << r.seed << ',' << i << ','
                   << (i < r.trace_steps.size() ? to_string(r.trace_steps[i]) : "") << ','
                   << format_double(r.trace[i]) << '\n';
    }

    inline std::string utc_timestamp()
    {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    inline void write_manifest(std::ostream &os, const SystemConfig &cfg, const SweepOptions &opt,
                               const std::string &timestamp)
    {
        os << "# holobeam run manifest\n";
        os << "version = \"" << version << "\"\n";
        os << "timestamp = \"" << timestamp << "\"\n";
        os << "sweep_axis = \"" << opt.axis << "\"\n";
        os << "sweep_values = [";
        for (std::size_t i = 0; i < opt.values.size(); ++i)
            os << (i ? ", " : "") << '"' << opt.values[i] << '"';
        os << "]\n";
        os << "schemes = [";
        for (std::size_t i = 0; i < opt.schemes.size(); ++i)
            os << (i ? ", " : "") << '"' << to_string(opt.schemes[i]) << '"';
        os << "]\n\n# resolved config\n";
        os << write_config(cfg);
    }

    struct RunOutputs
    {
        std::filesystem::path records, summary, manifest, traces;
    };

    inline RunOutputs write_run(const std::filesystem::path &dir, const SystemConfig &cfg, const SweepOptions &opt,
                                const std::vector<SweepRecord> &records, bool with_traces)
    {
        std::filesystem::create_directories(dir);
        RunOutputs out{dir / "records.csv", dir / "summary.csv", dir / "manifest.txt", {}};
        auto open = [](const std::filesystem::path &p) {
            std::ofstream f(p, std::ios::binary);
            if (!f)
                throw Error("cannot write " + p.string());
            return f;
        };
        {
            auto f = open(out.records);
            write_records_csv(f, records);
        }
        {
            auto f = open(out.summary);
            write_summary_csv(f, aggregate(records));
        }
        {
            auto f = open(out.manifest);
            write_manifest(f, cfg, opt, utc_timestamp());
        }
        if (with_traces)
        {
            out.traces = dir / "traces.csv";
            auto f = open(out.traces);
            write_traces_csv(f, records);
        }
        return out;
    }

    // Hardware cost of an RHS against a phased array of the same aperture.
    struct CostModel
    {
        int n_t = 64;
        double cost_ratio = 10.0;        // C_r, phased-array element cost over RHS element cost
        double unit_cost = 1.0;          // xi_rhs
        double element_multiplier = 2.5; // RHS elements per phased-array element in one aperture
        double radiation_efficiency_phased = 0.04;
        double radiation_efficiency_rhs = 0.25;
    };

    struct HardwareCost
    {
        double rhs = 0.0;
        double phased = 0.0;
    };

    inline HardwareCost hardware_cost(const CostModel &cm)
    {
        if (cm.n_t < 1 || !(cm.cost_ratio > 0.0) || !(cm.unit_cost >= 0.0) || !(cm.element_multiplier > 0.0) ||
            !(cm.radiation_efficiency_phased > 0.0) || !(cm.radiation_efficiency_rhs > 0.0))
            throw Error("invalid cost model");
        return {cm.element_multiplier * cm.n_t * cm.unit_cost, cm.n_t * cm.cost_ratio * cm.unit_cost};
    }
}

#endif
