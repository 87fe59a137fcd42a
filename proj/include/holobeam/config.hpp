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

#ifndef HOLOBEAM_CONFIG_HPP
#define HOLOBEAM_CONFIG_HPP

#include "common.hpp"
#include "numerics.hpp"
#include "rng.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace holobeam
{
    enum class RisMode
    {
        none,
        random,
        optimized
    };
    enum class CsiMode
    {
        perfect,
        imperfect
    };
    enum class UePlacement
    {
        fixed,
        disc
    };
    enum class HoloInit
    {
        holographic,
        random
    };

    inline std::string_view to_string(RisMode m)
    {
        switch (m)
        {
        case RisMode::none: return "none";
        case RisMode::random: return "random";
        case RisMode::optimized: return "optimized";
        }
        return "?";
    }
    inline std::string_view to_string(CsiMode m) { return m == CsiMode::perfect ? "perfect" : "imperfect"; }
    inline std::string_view to_string(UePlacement m) { return m == UePlacement::fixed ? "fixed" : "disc"; }
    inline std::string_view to_string(HoloInit m) { return m == HoloInit::holographic ? "holographic" : "random"; }

    inline std::optional<RisMode> parse_ris_mode(std::string_view s)
    {
        if (s == "none") return RisMode::none;
        if (s == "random") return RisMode::random;
        if (s == "optimized") return RisMode::optimized;
        return std::nullopt;
    }
    inline std::optional<CsiMode> parse_csi_mode(std::string_view s)
    {
        if (s == "perfect") return CsiMode::perfect;
        if (s == "imperfect") return CsiMode::imperfect;
        return std::nullopt;
    }

    // Complete scenario description. Defaults reproduce the reference far-field setup
    // (BS at the origin, RIS at 100 m, four fixed users near (100 m, 30 m)).
    struct SystemConfig
    {
        int n_t_x = 8, n_t_y = 8;       // RHS elements
        int n_ris_x = 10, n_ris_y = 10; // RIS elements
        int n_rf = 8;                   // RF chains = feeds
        int k_users = 4;

        double carrier_hz = 28e9;
        double rhs_spacing_wavelengths = 0.25;
        double ris_spacing_wavelengths = 0.5;
        double p_t_watts = 15.0;
        double noise_dbm = -90.0;

        int paths_direct = 10, paths_bs_ris = 10, paths_ris_ue = 10;
        double penetration_loss_db = 40.0;
        double refractive_index = 1.732; // sqrt(3), typical PCB substrate
        bool shadowing_enabled = true;

        Point2 bs_pos{0.0, 0.0};
        Point2 ris_pos{100.0, 0.0};
        std::vector<Point2> ue_positions{{98.3, 27.8}, {99.8, 30.1}, {100.2, 30.7}, {99.0, 32.9}};
        UePlacement ue_placement = UePlacement::fixed;
        Point2 ue_disc_center{100.0, 30.0};
        double ue_disc_radius = 10.0;

        RisMode ris_mode = RisMode::optimized;
        bool coupling_enabled = false;
        CsiMode csi_mode = CsiMode::perfect;
        double csi_error_radius_factor = 0.1;

        int outer_iterations = 5;
        int realizations = 100;
        std::uint64_t seed = 0;

        // solver settings
        HoloInit holo_init = HoloInit::holographic;
        int sca_rounds = 3;
        double dinkelbach_tol = 1e-6;
        int dinkelbach_max_iter = 50;
        int rcg_max_iter = 200;
        double rcg_grad_tol = 1e-6;
        double am_rel_tol = 1e-4;

        int n_t() const { return n_t_x * n_t_y; }
        int n_ris() const { return n_ris_x * n_ris_y; }
        double wavelength() const { return speed_of_light / carrier_hz; }
        double noise_watts() const { return numerics::dbm_to_watts(noise_dbm); }

        friend bool operator==(const SystemConfig &, const SystemConfig &) = default;
    };

    inline SystemConfig paper_default()
    {
        return SystemConfig{};
    }

    // Users drawn uniformly over the disc, deterministic in (seed, centre, radius).
    inline std::vector<Point2> place_users_in_disc(Point2 center, double radius, int k, std::uint64_t seed)
    {
        auto rng = make_rng(seed, "ue_placement");
        std::vector<Point2> out;
        out.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
        {
            const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
            const double a = uniform(rng, 0.0, 2.0 * pi);
            out.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
        }
        return out;
    }

    inline void resolve_ue_positions(SystemConfig &cfg)
    {
        if (cfg.ue_placement == UePlacement::disc && cfg.k_users > 0)
            cfg.ue_positions = place_users_in_disc(cfg.ue_disc_center, cfg.ue_disc_radius, cfg.k_users, cfg.seed);
    }

    inline void validate(const SystemConfig &c)
    {
        auto fail = [](const std::string &what) { throw Error("invalid config: " + what); };
        auto positive = [&](int v, const char *name) {
            if (v < 1)
                fail(std::string(name) + " must be >= 1");
        };
        positive(c.n_t_x, "n_t_x");
        positive(c.n_t_y, "n_t_y");
        positive(c.n_ris_x, "n_ris_x");
        positive(c.n_ris_y, "n_ris_y");
        positive(c.n_rf, "n_rf");
        positive(c.k_users, "k_users");
        positive(c.paths_direct, "paths_direct");
        positive(c.paths_bs_ris, "paths_bs_ris");
        positive(c.paths_ris_ue, "paths_ris_ue");
        positive(c.realizations, "realizations");
        if (c.k_users > c.n_rf)
            fail("k_users exceeds n_rf");
        if (c.n_rf > c.n_t())
            fail("n_rf exceeds the number of RHS elements");
        auto pos = [&](double v, const char *name) {
            if (!(v > 0.0) || !std::isfinite(v))
                fail(std::string(name) + " must be > 0");
        };
        pos(c.carrier_hz, "carrier_hz");
        pos(c.rhs_spacing_wavelengths, "rhs_spacing_wavelengths");
        pos(c.ris_spacing_wavelengths, "ris_spacing_wavelengths");
        pos(c.p_t_watts, "p_t_watts");
        pos(c.refractive_index, "refractive_index");
        if (!std::isfinite(c.noise_dbm))
            fail("noise_dbm must be finite");
        if (!(c.penetration_loss_db >= 0.0))
            fail("penetration_loss_db must be >= 0");
        if (!(c.csi_error_radius_factor >= 0.0 && c.csi_error_radius_factor < 1.0))
            fail("csi_error_radius_factor must lie in [0, 1)");
        if (c.outer_iterations < 0)
            fail("outer_iterations must be >= 0");
        if (c.ue_positions.size() != static_cast<std::size_t>(c.k_users))
            fail("ue_positions must have exactly k_users entries");
        if (c.ue_placement == UePlacement::disc && !(c.ue_disc_radius >= 0.0))
            fail("ue_disc_radius must be >= 0");
        if (c.sca_rounds < 0)
            fail("sca_rounds must be >= 0");
        if (!(c.dinkelbach_tol > 0.0))
            fail("dinkelbach_tol must be > 0");
        positive(c.dinkelbach_max_iter, "dinkelbach_max_iter");
        positive(c.rcg_max_iter, "rcg_max_iter");
        if (!(c.rcg_grad_tol > 0.0))
            fail("rcg_grad_tol must be > 0");
        if (!(c.am_rel_tol >= 0.0))
            fail("am_rel_tol must be >= 0");
    }

    namespace detail
    {
        // Minimal value model for the flat key/value format.
        struct Value
        {
            enum class Kind
            {
                number,
                boolean,
                string,
                array
            } kind = Kind::number;
            std::string text; // number literal or string contents
            bool flag = false;
            std::vector<Value> items;
        };

        class Parser
        {
        public:
            explicit Parser(std::string_view s) : s_(s) {}

            Value parse_value()
            {
                skip_ws();
                if (eof())
                    throw Error("malformed config: missing value");
                const char c = s_[i_];
                if (c == '[')
                    return parse_array();
                if (c == '"')
                    return parse_string();
                return parse_scalar();
            }

            void expect_end()
            {
                skip_ws();
                if (!eof())
                    throw Error("malformed config: trailing characters");
            }

        private:
            bool eof() const { return i_ >= s_.size(); }
            void skip_ws()
            {
                while (!eof() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r'))
                    ++i_;
            }

            Value parse_array()
            {
                Value v;
                v.kind = Value::Kind::array;
                ++i_; // [
                skip_ws();
                if (!eof() && s_[i_] == ']')
                {
                    ++i_;
                    return v;
                }
                for (;;)
                {
                    v.items.push_back(parse_value());
                    skip_ws();
                    if (eof())
                        throw Error("malformed config: unterminated array");
                    if (s_[i_] == ',')
                    {
                        ++i_;
                        skip_ws();
                        if (!eof() && s_[i_] == ']') // trailing comma
                        {
                            ++i_;
                            return v;
                        }
                        continue;
                    }
                    if (s_[i_] == ']')
                    {
                        ++i_;
                        return v;
                    }
                    throw Error("malformed config: expected ',' or ']'");
                }
            }

            Value parse_string()
            {
                Value v;
                v.kind = Value::Kind::string;
                ++i_;
                while (!eof() && s_[i_] != '"')
                    v.text.push_back(s_[i_++]);
                if (eof())
                    throw Error("malformed config: unterminated string");
                ++i_;
                return v;
            }

            Value parse_scalar()
            {
                const std::size_t start = i_;
                while (!eof() && s_[i_] != ',' && s_[i_] != ']' && s_[i_] != ' ' && s_[i_] != '\t')
                    ++i_;
                const std::string_view tok = s_.substr(start, i_ - start);
                Value v;
                if (tok == "true" || tok == "false")
                {
                    v.kind = Value::Kind::boolean;
                    v.flag = tok == "true";
                    return v;
                }
                double d = 0.0;
                auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
                if (ec != std::errc() || p != tok.data() + tok.size() || tok.empty())
                    throw Error("malformed config: bad literal '" + std::string(tok) + "'");
                v.kind = Value::Kind::number;
                v.text = std::string(tok);
                return v;
            }

            std::string_view s_;
            std::size_t i_ = 0;
        };

        inline std::string strip_comment(const std::string &line)
        {
            bool in_string = false;
            for (std::size_t i = 0; i < line.size(); ++i)
            {
                if (line[i] == '"')
                    in_string = !in_string;
                else if (line[i] == '#' && !in_string)
                    return line.substr(0, i);
            }
            return line;
        }

        inline std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        inline int bracket_balance(const std::string &s)
        {
            int depth = 0;
            bool in_string = false;
            for (char c : s)
            {
                if (c == '"')
                    in_string = !in_string;
                else if (!in_string && c == '[')
                    ++depth;
                else if (!in_string && c == ']')
                    --depth;
            }
            return depth;
        }

        inline double as_double(const Value &v, const std::string &key)
        {
            if (v.kind != Value::Kind::number)
                throw Error("malformed config: " + key + " expects a number");
            double d = 0.0;
            std::from_chars(v.text.data(), v.text.data() + v.text.size(), d);
            return d;
        }

        inline long long as_integer(const Value &v, const std::string &key)
        {
            if (v.kind != Value::Kind::number)
                throw Error("malformed config: " + key + " expects an integer");
            long long x = 0;
            auto [p, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), x);
            if (ec != std::errc() || p != v.text.data() + v.text.size())
                throw Error("malformed config: " + key + " expects an integer");
            return x;
        }

        inline bool as_bool(const Value &v, const std::string &key)
        {
            if (v.kind != Value::Kind::boolean)
                throw Error("malformed config: " + key + " expects true or false");
            return v.flag;
        }

        inline std::string as_string(const Value &v, const std::string &key)
        {
            if (v.kind != Value::Kind::string)
                throw Error("malformed config: " + key + " expects a quoted string");
            return v.text;
        }

        inline Point2 as_point(const Value &v, const std::string &key)
        {
            if (v.kind != Value::Kind::array || v.items.size() != 2)
                throw Error("malformed config: " + key + " expects [x, y]");
            return {as_double(v.items[0], key), as_double(v.items[1], key)};
        }

        inline std::string fmt_double(double d)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", d);
            std::string s(buf);
            // keep a decimal marker so the value reads back as a float in TOML
            if (s.find_first_of(".eEn") == std::string::npos)
                s += ".0";
            return s;
        }

        inline std::string fmt_point(Point2 p)
        {
            return "[" + fmt_double(p.x) + ", " + fmt_double(p.y) + "]";
        }
    }

    // Parse the flat key = value format (a TOML subset: numbers, booleans, quoted strings,
    // arrays; '#' comments; arrays may span lines). Missing keys keep their defaults.
    inline SystemConfig parse_config(const std::string &text)
    {
        using namespace detail;
        std::map<std::string, Value> kv;
        std::istringstream in(text);
        std::string line, pending;
        int line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            std::string body = trim(strip_comment(line));
            if (body.empty() && pending.empty())
                continue;
            if (!pending.empty())
            {
                pending += " " + body;
                if (bracket_balance(pending) > 0)
                    continue;
                body = pending;
                pending.clear();
            }
            else if (body.front() == '[')
                throw Error("malformed config: tables are not supported (line " + std::to_string(line_no) + ")");
            else if (bracket_balance(body) > 0)
            {
                pending = body;
                continue;
            }

            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw Error("malformed config: expected key = value (line " + std::to_string(line_no) + ")");
            const std::string key = trim(body.substr(0, eq));
            if (key.empty())
                throw Error("malformed config: empty key (line " + std::to_string(line_no) + ")");
            const std::string rhs = body.substr(eq + 1);
            Parser p(rhs);
            Value v = p.parse_value();
            p.expect_end();
            if (!kv.emplace(key, std::move(v)).second)
                throw Error("malformed config: duplicate key " + key);
        }
        if (!pending.empty())
            throw Error("malformed config: unterminated array");

        SystemConfig c;
        for (const auto &[key, v] : kv)
        {
            auto i = [&](int &dst) { dst = static_cast<int>(as_integer(v, key)); };
            auto d = [&](double &dst) { dst = as_double(v, key); };
            auto b = [&](bool &dst) { dst = as_bool(v, key); };

            if (key == "n_t_x") i(c.n_t_x);
            else if (key == "n_t_y") i(c.n_t_y);
            else if (key == "n_ris_x") i(c.n_ris_x);
            else if (key == "n_ris_y") i(c.n_ris_y);
            else if (key == "n_rf") i(c.n_rf);
            else if (key == "k_users") i(c.k_users);
            else if (key == "carrier_hz") d(c.carrier_hz);
            else if (key == "rhs_spacing_wavelengths") d(c.rhs_spacing_wavelengths);
            else if (key == "ris_spacing_wavelengths") d(c.ris_spacing_wavelengths);
            else if (key == "p_t_watts") d(c.p_t_watts);
            else if (key == "noise_dbm") d(c.noise_dbm);
            else if (key == "paths_direct") i(c.paths_direct);
            else if (key == "paths_bs_ris") i(c.paths_bs_ris);
            else if (key == "paths_ris_ue") i(c.paths_ris_ue);
            else if (key == "penetration_loss_db") d(c.penetration_loss_db);
            else if (key == "refractive_index") d(c.refractive_index);
            else if (key == "shadowing_enabled") b(c.shadowing_enabled);
            else if (key == "bs_pos") c.bs_pos = as_point(v, key);
            else if (key == "ris_pos") c.ris_pos = as_point(v, key);
            else if (key == "ue_positions")
            {
                if (v.kind != Value::Kind::array)
                    throw Error("malformed config: ue_positions expects [[x, y], ...]");
                c.ue_positions.clear();
                for (const auto &item : v.items)
                    c.ue_positions.push_back(as_point(item, key));
            }
            else if (key == "ue_placement")
            {
                const auto s = as_string(v, key);
                if (s == "fixed") c.ue_placement = UePlacement::fixed;
                else if (s == "disc") c.ue_placement = UePlacement::disc;
                else throw Error("malformed config: ue_placement must be \"fixed\" or \"disc\"");
            }
            else if (key == "ue_disc_center") c.ue_disc_center = as_point(v, key);
            else if (key == "ue_disc_radius") d(c.ue_disc_radius);
            else if (key == "ris_mode")
            {
                auto m = parse_ris_mode(as_string(v, key));
                if (!m)
                    throw Error("malformed config: ris_mode must be none, random or optimized");
                c.ris_mode = *m;
            }
            else if (key == "coupling_enabled") b(c.coupling_enabled);
            else if (key == "csi_mode")
            {
                auto m = parse_csi_mode(as_string(v, key));
                if (!m)
                    throw Error("malformed config: csi_mode must be perfect or imperfect");
                c.csi_mode = *m;
            }
            else if (key == "csi_error_radius_factor") d(c.csi_error_radius_factor);
            else if (key == "outer_iterations") i(c.outer_iterations);
            else if (key == "realizations") i(c.realizations);
            else if (key == "seed")
            {
                if (v.kind != Value::Kind::number)
                    throw Error("malformed config: seed expects an integer");
                std::uint64_t s = 0;
                auto [p, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), s);
                if (ec != std::errc() || p != v.text.data() + v.text.size())
                    throw Error("malformed config: seed expects a non-negative integer");
                c.seed = s;
            }
            else if (key == "holo_init")
            {
                const auto s = as_string(v, key);
                if (s == "holographic") c.holo_init = HoloInit::holographic;
                else if (s == "random") c.holo_init = HoloInit::random;
                else throw Error("malformed config: holo_init must be \"holographic\" or \"random\"");
            }
            else if (key == "sca_rounds") i(c.sca_rounds);
            else if (key == "dinkelbach_tol") d(c.dinkelbach_tol);
            else if (key == "dinkelbach_max_iter") i(c.dinkelbach_max_iter);
            else if (key == "rcg_max_iter") i(c.rcg_max_iter);
            else if (key == "rcg_grad_tol") d(c.rcg_grad_tol);
            else if (key == "am_rel_tol") d(c.am_rel_tol);
            else
                throw Error("malformed config: unknown key " + key);
        }
        resolve_ue_positions(c);
        validate(c);
        return c;
    }

    inline SystemConfig load_config(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw Error("malformed config: cannot open " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_config(ss.str());
    }

    inline std::string write_config(const SystemConfig &c)
    {
        using detail::fmt_double;
        using detail::fmt_point;
        std::ostringstream o;
        auto q = [](std::string_view s) { return "\"" + std::string(s) + "\""; };
        auto bl = [](bool b) { return b ? "true" : "false"; };
        o << "n_t_x = " << c.n_t_x << "\n"
          << "n_t_y = " << c.n_t_y << "\n"
          << "n_ris_x = " << c.n_ris_x << "\n"
          << "n_ris_y = " << c.n_ris_y << "\n"
          << "n_rf = " << c.n_rf << "\n"
          << "k_users = " << c.k_users << "\n"
          << "carrier_hz = " << fmt_double(c.carrier_hz) << "\n"
          << "rhs_spacing_wavelengths = " << fmt_double(c.rhs_spacing_wavelengths) << "\n"
          << "ris_spacing_wavelengths = " << fmt_double(c.ris_spacing_wavelengths) << "\n"
          << "p_t_watts = " << fmt_double(c.p_t_watts) << "\n"
          << "noise_dbm = " << fmt_double(c.noise_dbm) << "\n"
          << "paths_direct = " << c.paths_direct << "\n"
          << "paths_bs_ris = " << c.paths_bs_ris << "\n"
          << "paths_ris_ue = " << c.paths_ris_ue << "\n"
          << "penetration_loss_db = " << fmt_double(c.penetration_loss_db) << "\n"
          << "refractive_index = " << fmt_double(c.refractive_index) << "\n"
          << "shadowing_enabled = " << bl(c.shadowing_enabled) << "\n"
          << "bs_pos = " << fmt_point(c.bs_pos) << "\n"
          << "ris_pos = " << fmt_point(c.ris_pos) << "\n"
          << "ue_placement = " << q(to_string(c.ue_placement)) << "\n";
        if (c.ue_placement == UePlacement::fixed)
        {
            o << "ue_positions = [";
            for (std::size_t i = 0; i < c.ue_positions.size(); ++i)
                o << (i ? ", " : "") << fmt_point(c.ue_positions[i]);
            o << "]\n";
        }
        o << "ue_disc_center = " << fmt_point(c.ue_disc_center) << "\n"
          << "ue_disc_radius = " << fmt_double(c.ue_disc_radius) << "\n"
          << "ris_mode = " << q(to_string(c.ris_mode)) << "\n"
          << "coupling_enabled = " << bl(c.coupling_enabled) << "\n"
          << "csi_mode = " << q(to_string(c.csi_mode)) << "\n"
          << "csi_error_radius_factor = " << fmt_double(c.csi_error_radius_factor) << "\n"
          << "outer_iterations = " << c.outer_iterations << "\n"
          << "realizations = " << c.realizations << "\n"
          << "seed = " << c.seed << "\n"
          << "holo_init = " << q(to_string(c.holo_init)) << "\n"
          << "sca_rounds = " << c.sca_rounds << "\n"
          << "dinkelbach_tol = " << fmt_double(c.dinkelbach_tol) << "\n"
          << "dinkelbach_max_iter = " << c.dinkelbach_max_iter << "\n"
          << "rcg_max_iter = " << c.rcg_max_iter << "\n"
          << "rcg_grad_tol = " << fmt_double(c.rcg_grad_tol) << "\n"
          << "am_rel_tol = " << fmt_double(c.am_rel_tol) << "\n";
        return o.str();
    }
}

#endif
