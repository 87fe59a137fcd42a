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

#include <holobeam/holobeam.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    std::vector<std::string> split_csv(const std::string &s)
    {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b != std::string::npos)
                out.push_back(item.substr(b, e - b + 1));
        }
        return out;
    }

    std::vector<holobeam::RisMode> parse_schemes(const std::string &s)
    {
        std::vector<holobeam::RisMode> out;
        for (const auto &name : split_csv(s))
        {
            const auto m = holobeam::parse_ris_mode(name);
            if (!m)
                throw holobeam::Error("unknown scheme '" + name + "'");
            out.push_back(*m);
        }
        return out;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Joint digital, holographic and RIS beamforming simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(holobeam::version));

    auto *run = app.add_subcommand("run", "Monte-Carlo sweep; writes records.csv, summary.csv and manifest.txt");
    std::string config_path, axis, values, out_dir = "out", schemes = "none,random,optimized";
    int jobs = 1;
    std::uint64_t seed = 0;
    int realizations = 0;
    bool traces = false;
    run->add_option("--config", config_path, "TOML config file")->required()->check(CLI::ExistingFile);
    auto *sweep_opt = run->add_option("--sweep", axis, "parameter to sweep");
    run->add_option("--values", values, "comma-separated values for --sweep")->needs(sweep_opt);
    sweep_opt->needs("--values");
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    auto *seed_opt = run->add_option("--seed", seed, "master seed (overrides the config)");
    run->add_option("--realizations", realizations, "realizations per cell (overrides the config)")
        ->check(CLI::PositiveNumber);
    run->add_option("--schemes", schemes, "comma-separated subset of none,random,optimized")->capture_default_str();
    run->add_flag("--traces", traces, "also write traces.csv with the per-step objective");

    auto *cost = app.add_subcommand("cost", "hardware cost of an RHS against a phased array");
    holobeam::CostModel cm;
    cost->add_option("--n-t", cm.n_t, "number of RHS elements")->required()->check(CLI::PositiveNumber);
    cost->add_option("--cost-ratio", cm.cost_ratio, "phased-array to RHS element cost ratio")->required();
    cost->add_option("--unit-cost", cm.unit_cost, "cost of one RHS element")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*cost)
        {
            const auto c = holobeam::hardware_cost(cm);
            std::cout << "rhs_cost = " << holobeam::format_double(c.rhs) << '\n'
                      << "phased_cost = " << holobeam::format_double(c.phased) << '\n';
            return 0;
        }

        auto cfg = holobeam::load_config(config_path);
        if (*seed_opt)
            cfg.seed = seed;
        if (realizations > 0)
            cfg.realizations = realizations;
        holobeam::validate(cfg);

        holobeam::SweepOptions opt;
        opt.axis = axis;
        opt.values = split_csv(values);
        opt.schemes = parse_schemes(schemes);
        opt.jobs = jobs;

        const auto records = holobeam::run_sweep(cfg, opt);
        const auto files = holobeam::write_run(out_dir, cfg, opt, records, traces);
        std::size_t skipped = 0;
        for (const auto &r : records)
            skipped += r.skipped ? 1 : 0;
        std::cout << records.size() << " records (" << skipped << " skipped) -> " << files.records.string() << '\n';
        return 0;
    }
    catch (const std::exception &e)
    {
        std::cerr << "holobeam: " << e.what() << '\n';
        return 1;
    }
}
