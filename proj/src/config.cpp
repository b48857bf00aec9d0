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

#include "fddcsi/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fddcsi
{
    using json = nlohmann::json;

    namespace
    {
        class Section
        {
        public:
            Section(const json &j, std::string path) : j_(j), path_(std::move(path))
            {
                if (!j_.is_object())
                    throw std::invalid_argument(path_ + ": expected an object");
            }

            bool has(const std::string &key) const { return j_.contains(key); }

            std::string at(const std::string &key) const { return path_ + "." + key; }

            const json *find(const std::string &key)
            {
                seen_.insert(key);
                const auto it = j_.find(key);
                return it == j_.end() ? nullptr : &*it;
            }

            Section child(const std::string &key)
            {
                const json *v = find(key);
                static const json empty = json::object();
                return Section(v ? *v : empty, at(key));
            }

            void read(const std::string &key, double &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_number())
                        throw std::invalid_argument(at(key) + ": expected a number");
                    out = v->get<double>();
                    if (!std::isfinite(out))
                        throw std::invalid_argument(at(key) + ": must be finite");
                }
            }

            // null means "off" (returned as 1e300)
            void read_optional_db(const std::string &key, double &out)
            {
                if (const json *v = find(key))
                {
                    if (v->is_null())
                        out = 1e300;
                    else if (v->is_number())
                        out = v->get<double>();
                    else
                        throw std::invalid_argument(at(key) + ": expected a number or null");
                }
            }

            void read(const std::string &key, int &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_number_integer())
                        throw std::invalid_argument(at(key) + ": expected an integer");
                    out = v->get<int>();
                }
            }

            void read(const std::string &key, uint64_t &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_number_unsigned())
                        throw std::invalid_argument(at(key) + ": expected a non-negative integer");
                    out = v->get<uint64_t>();
                }
            }

            void read(const std::string &key, std::string &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_string())
                        throw std::invalid_argument(at(key) + ": expected a string");
                    out = v->get<std::string>();
                }
            }

            template <typename T>
            void read_list(const std::string &key, std::vector<T> &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_array())
                        throw std::invalid_argument(at(key) + ": expected an array");
                    out.clear();
                    for (size_t i = 0; i < v->size(); ++i)
                    {
                        const json &e = (*v)[i];
                        const std::string where = at(key) + "[" + std::to_string(i) + "]";
                        if constexpr (std::is_same_v<T, std::string>)
                        {
                            if (!e.is_string())
                                throw std::invalid_argument(where + ": expected a string");
                        }
                        else if constexpr (std::is_integral_v<T>)
                        {
                            if (!e.is_number_integer())
                                throw std::invalid_argument(where + ": expected an integer");
                        }
                        else if (!e.is_number())
                            throw std::invalid_argument(where + ": expected a number");
                        out.push_back(e.get<T>());
                    }
                }
            }

            const json &raw() const { return j_; }
            const std::string &path() const { return path_; }

            void finish() const
            {
                for (auto it = j_.begin(); it != j_.end(); ++it)
                    if (!seen_.count(it.key()))
                        throw std::invalid_argument(path_ + ": unknown key '" + it.key() + "'");
            }

        private:
            const json &j_;
            std::string path_;
            std::set<std::string> seen_;
        };

        std::vector<double> to_radians(const std::vector<double> &deg)
        {
            std::vector<double> out;
            for (double d : deg)
                out.push_back(deg2rad(d));
            return out;
        }

        PiecewiseLinear read_bound(const json &j, const std::string &where)
        {
            if (j.is_number())
                return PiecewiseLinear::constant(deg2rad(j.get<double>()));
            Section s(j, where);
            std::vector<double> knots, values;
            s.read_list("theta_knots_deg", knots);
            s.read_list("values_deg", values);
            s.finish();
            PiecewiseLinear f{to_radians(knots), to_radians(values)};
            f.validate(where.c_str());
            return f;
        }

        AngularSupport read_support(Section s)
        {
            AngularSupport out;
            const json *regions = s.find("regions");
            if (!regions)
            {
                s.finish();
                return AngularSupport::full_range();
            }
            if (!regions->is_array() || regions->empty())
                throw std::invalid_argument(s.at("regions") + ": expected a non-empty array");
            for (size_t i = 0; i < regions->size(); ++i)
            {
                const std::string where = s.at("regions") + "[" + std::to_string(i) + "]";
                Section r((*regions)[i], where);
                std::vector<double> theta{0.0, 180.0};
                r.read_list("theta_deg", theta);
                if (theta.size() != 2)
                    throw std::invalid_argument(where + ".theta_deg: expected [min, max]");
                AngularRegion reg;
                reg.theta_min = deg2rad(theta[0]);
                reg.theta_max = deg2rad(theta[1]);
                const json *lo = r.find("phi_min_deg"), *hi = r.find("phi_max_deg");
                if (!lo || !hi)
                    throw std::invalid_argument(where + ": phi_min_deg and phi_max_deg are required");
                reg.phi_min = read_bound(*lo, where + ".phi_min_deg");
                reg.phi_max = read_bound(*hi, where + ".phi_max_deg");
                r.finish();
                out.regions.push_back(reg);
            }
            s.finish();
            out.validate();
            return out;
        }

        json bound_json(const PiecewiseLinear &f)
        {
            if (f.is_constant())
                return rad2deg(f.values[0]);
            json j;
            for (double k : f.knots)
                j["theta_knots_deg"].push_back(rad2deg(k));
            for (double v : f.values)
                j["values_deg"].push_back(rad2deg(v));
            return j;
        }

        json db_json(double v)
        {
            return v >= 1e299 ? json(nullptr) : json(v);
        }
    }

    ExperimentConfig default_experiment_config()
    {
        ExperimentConfig c;
        c.evaluation.scenario = default_scenario();
        return c;
    }

    ExperimentConfig parse_experiment_config(const std::string &text, const std::string &origin)
    {
        json j = json::object();
        try
        {
            if (text.find_first_not_of(" \t\r\n") != std::string::npos)
                j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument(origin + ": " + e.what());
        }
        ExperimentConfig c = default_experiment_config();
        EvaluationConfig &ev = c.evaluation;
        ScenarioConfig &sc = ev.scenario;
        Section root(j, origin);

        root.read("seed", ev.seed);
        root.read("drops", ev.drops);
        root.read("workers", ev.workers);
        root.read("output_dir", c.output_dir);

        const double lambda_default = sc.carrier.wavelength(LinkEnd::Downlink);
        double sh = sc.bs.spacing_h / lambda_default, sv = sc.bs.spacing_v / lambda_default;
        {
            Section s = root.child("carrier");
            s.read("dl_center_hz", sc.carrier.dl_center_frequency);
            s.read("ul_center_hz", sc.carrier.ul_center_frequency);
            s.read("subcarrier_spacing_hz", sc.carrier.subcarrier_spacing);
            s.read("subbands", sc.carrier.subband_count);
            s.read("subband_width", sc.carrier.subband_width);
            s.finish();
            sc.carrier.validate();
        }
        {
            Section s = root.child("array");
            s.read("rows", sc.bs.rows);
            s.read("cols", sc.bs.cols);
            s.read("polarizations", sc.bs.polarizations);
            s.read("spacing_h_wavelengths", sh);
            s.read("spacing_v_wavelengths", sv);
            std::vector<double> slant;
            for (double x : sc.bs.slant_angles)
                slant.push_back(rad2deg(x));
            s.read_list("slant_deg", slant);
            std::string pattern = to_string(sc.bs.element_pattern);
            s.read("element_pattern", pattern);
            s.finish();
            if (sc.bs.polarizations == 1 && !s.has("slant_deg"))
                slant = {0.0};
            sc.bs.slant_angles = to_radians(slant);
            sc.bs.element_pattern = parse_field_pattern(pattern);
            const double lambda = sc.carrier.wavelength(LinkEnd::Downlink);
            sc.bs.spacing_h = sh * lambda;
            sc.bs.spacing_v = sv * lambda;
            sc.bs.validate();
        }
        {
            Section s = root.child("ue");
            s.read("count", sc.ue_count);
            s.read("streams", sc.streams_per_ue);
            std::vector<double> slant;
            for (double x : sc.ue.slant_angles)
                slant.push_back(rad2deg(x));
            s.read_list("slant_deg", slant);
            std::string pattern = to_string(sc.ue.pattern);
            s.read("element_pattern", pattern);
            s.finish();
            sc.ue.slant_angles = to_radians(slant);
            sc.ue.pattern = parse_field_pattern(pattern);
        }
        {
            Section s = root.child("channel");
            s.read_list("models", sc.models);
            double ds = sc.delay_spread * 1e9, sector = rad2deg(sc.sector_half_width);
            s.read("delay_spread_ns", ds);
            s.read("sector_half_width_deg", sector);
            s.read("ul_samples", sc.ul_samples);
            s.read_optional_db("ul_snr_db", sc.ul_snr_db);
            s.finish();
            sc.delay_spread = ds / 1e9;
            sc.sector_half_width = deg2rad(sector);
        }
        {
            Section s = root.child("csi");
            std::vector<std::string> schemes;
            for (Scheme x : ev.schemes)
                schemes.push_back(to_string(x));
            s.read_list("schemes", schemes);
            ev.schemes.clear();
            for (const auto &x : schemes)
                ev.schemes.push_back(parse_scheme(x));
            s.read_list("ports", ev.ports);
            for (int a : ev.ports)
                if (a < 1)
                    throw std::invalid_argument(s.at("ports") + ": port counts must be >= 1, got " + std::to_string(a));
            s.read("pilot_length", sc.measurement.pilot_length);
            s.read_optional_db("pilot_snr_db", sc.measurement.pilot_snr_db);
            Section q = s.child("quantizer");
            std::string mode = sc.quantizer.mode == QuantizerMode::Exact ? "exact" : "amplitude-phase";
            q.read("mode", mode);
            q.read("amplitude_bits", sc.quantizer.amplitude_bits);
            q.read("phase_bits", sc.quantizer.phase_bits);
            q.finish();
            s.finish();
            if (mode == "exact")
                sc.quantizer.mode = QuantizerMode::Exact;
            else if (mode == "amplitude-phase")
                sc.quantizer.mode = QuantizerMode::AmplitudePhase;
            else
                throw std::invalid_argument(q.at("mode") + ": expected 'exact' or 'amplitude-phase'");
        }
        {
            Section s = root.child("sweep");
            s.read_list("snr_db", ev.snr_db);
            s.read("total_power", sc.total_power);
            s.finish();
        }
        {
            Section s = root.child("rank_check");
            RankCheckConfig &rc = c.rank_check;
            s.read("spacing_h_wavelengths", rc.spacing_h_wavelengths);
            s.read("spacing_v_wavelengths", rc.spacing_v_wavelengths);
            s.read_list("sizes", rc.sizes);
            s.read("energy_fraction", rc.energy_fraction);
            s.read("quadrature_order", rc.quadrature_order);
            s.read_list("frequency_subbands", rc.frequency_subbands);
            s.read("frequency_spacing_hz", rc.frequency_spacing);
            if (const json *d = s.find("delay_us"))
            {
                if (!d->is_array())
                    throw std::invalid_argument(s.at("delay_us") + ": expected an array of [min, max] pairs");
                rc.delay_intervals.clear();
                for (size_t i = 0; i < d->size(); ++i)
                {
                    const json &e = (*d)[i];
                    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                        throw std::invalid_argument(s.at("delay_us") + "[" + std::to_string(i) + "]: expected [min, max]");
                    rc.delay_intervals.emplace_back(e[0].get<double>() * 1e-6, e[1].get<double>() * 1e-6);
                }
            }
            rc.support = read_support(s.child("support"));
            s.finish();
            if (!(rc.energy_fraction > 0.0 && rc.energy_fraction < 1.0))
                throw std::invalid_argument(s.at("energy_fraction") + ": must be in (0, 1)");
            if (rc.sizes.empty() || rc.quadrature_order < 2 || !(rc.spacing_h_wavelengths > 0.0) ||
                !(rc.spacing_v_wavelengths > 0.0) || !(rc.frequency_spacing > 0.0))
                throw std::invalid_argument(s.path() + ": sizes, spacings and quadrature order must be positive");
            for (int n : rc.sizes)
                if (n < 1)
                    throw std::invalid_argument(s.at("sizes") + ": sizes must be >= 1");
            for (int n : rc.frequency_subbands)
                if (n < 1)
                    throw std::invalid_argument(s.at("frequency_subbands") + ": sizes must be >= 1");
        }
        root.finish();
        ev.validate();
        return c;
    }

    ExperimentConfig load_experiment_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_experiment_config(ss.str(), path);
    }

    std::string config_to_json(const ExperimentConfig &c)
    {
        const EvaluationConfig &ev = c.evaluation;
        const ScenarioConfig &sc = ev.scenario;
        const double lambda = sc.carrier.wavelength(LinkEnd::Downlink);
        json j;
        j["seed"] = ev.seed;
        j["drops"] = ev.drops;
        j["workers"] = ev.workers;
        j["output_dir"] = c.output_dir;
        j["carrier"] = {{"dl_center_hz", sc.carrier.dl_center_frequency},
                        {"ul_center_hz", sc.carrier.ul_center_frequency},
                        {"subcarrier_spacing_hz", sc.carrier.subcarrier_spacing},
                        {"subbands", sc.carrier.subband_count},
                        {"subband_width", sc.carrier.subband_width}};
        json slant = json::array();
        for (double x : sc.bs.slant_angles)
            slant.push_back(rad2deg(x));
        j["array"] = {{"rows", sc.bs.rows},
                      {"cols", sc.bs.cols},
                      {"polarizations", sc.bs.polarizations},
                      {"spacing_h_wavelengths", sc.bs.spacing_h / lambda},
                      {"spacing_v_wavelengths", sc.bs.spacing_v / lambda},
                      {"slant_deg", slant},
                      {"element_pattern", to_string(sc.bs.element_pattern)}};
        json ue_slant = json::array();
        for (double x : sc.ue.slant_angles)
            ue_slant.push_back(rad2deg(x));
        j["ue"] = {{"count", sc.ue_count},
                   {"streams", sc.streams_per_ue},
                   {"slant_deg", ue_slant},
                   {"element_pattern", to_string(sc.ue.pattern)}};
        j["channel"] = {{"models", sc.models},
                        {"delay_spread_ns", std::round(sc.delay_spread * 1e15) / 1e6},
                        {"sector_half_width_deg", rad2deg(sc.sector_half_width)},
                        {"ul_samples", sc.ul_samples},
                        {"ul_snr_db", db_json(sc.ul_snr_db)}};
        json schemes = json::array();
        for (Scheme s : ev.schemes)
            schemes.push_back(to_string(s));
        j["csi"] = {{"schemes", schemes},
                    {"ports", ev.ports},
                    {"pilot_length", sc.measurement.pilot_length},
                    {"pilot_snr_db", db_json(sc.measurement.pilot_snr_db)},
                    {"quantizer",
                     {{"mode", sc.quantizer.mode == QuantizerMode::Exact ? "exact" : "amplitude-phase"},
                      {"amplitude_bits", sc.quantizer.amplitude_bits},
                      {"phase_bits", sc.quantizer.phase_bits}}}};
        j["sweep"] = {{"snr_db", ev.snr_db}, {"total_power", sc.total_power}};

        const RankCheckConfig &rc = c.rank_check;
        json regions = json::array();
        for (const auto &r : rc.support.regions)
            regions.push_back({{"theta_deg", {rad2deg(r.theta_min), rad2deg(r.theta_max)}},
                               {"phi_min_deg", bound_json(r.phi_min)},
                               {"phi_max_deg", bound_json(r.phi_max)}});
        json delays = json::array();
        for (auto [a, b] : rc.delay_intervals)
            delays.push_back({a * 1e6, b * 1e6});
        j["rank_check"] = {{"spacing_h_wavelengths", rc.spacing_h_wavelengths},
                           {"spacing_v_wavelengths", rc.spacing_v_wavelengths},
                           {"sizes", rc.sizes},
                           {"energy_fraction", rc.energy_fraction},
                           {"quadrature_order", rc.quadrature_order},
                           {"frequency_subbands", rc.frequency_subbands},
                           {"frequency_spacing_hz", rc.frequency_spacing},
                           {"delay_us", delays},
                           {"support", {{"regions", regions}}}};
        return j.dump(2);
    }
}
