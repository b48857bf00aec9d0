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

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#ifndef FDDCSI_DEFAULT_DATA_DIR
#define FDDCSI_DEFAULT_DATA_DIR "data"
#endif

namespace fddcsi
{
    using json = nlohmann::json;

    std::string data_directory()
    {
        const char *env = std::getenv("FDDCSI_DATA_DIR");
        if (env != nullptr && *env != '\0')
            return env;
        return FDDCSI_DEFAULT_DATA_DIR;
    }

    static void check_keys(const json &j, const std::set<std::string> &allowed, const std::string &where)
    {
        if (!j.is_object())
            throw std::invalid_argument(where + ": expected an object");
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!allowed.count(it.key()))
                throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
        for (const auto &k : allowed)
            if (!j.contains(k) && k != "los")
                throw std::invalid_argument(where + ": missing key '" + k + "'");
    }

    static double number(const json &j, const std::string &key, const std::string &where)
    {
        if (!j.at(key).is_number())
            throw std::invalid_argument(where + "." + key + ": expected a number");
        return j.at(key).get<double>();
    }

    CdlTable parse_cdl_table(const std::string &text, const std::string &origin)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument(origin + ": " + e.what());
        }
        check_keys(j, {"schema", "version", "model", "rays_per_cluster", "cluster_spreads_deg", "xpr_db", "clusters"}, origin);
        if (j.at("schema") != "fddcsi.cdl-table")
            throw std::invalid_argument(origin + ": unsupported schema");
        if (j.at("version") != 1)
            throw std::invalid_argument(origin + ": unsupported version");

        CdlTable t;
        t.model = j.at("model").get<std::string>();
        t.rays_per_cluster = j.at("rays_per_cluster").get<int>();
        if (t.rays_per_cluster < 1 || t.rays_per_cluster > 20)
            throw std::invalid_argument(origin + ": rays_per_cluster must be in 1..20");

        const auto &cs = j.at("cluster_spreads_deg");
        check_keys(cs, {"asd", "asa", "zsd", "zsa"}, origin + ".cluster_spreads_deg");
        t.c_asd = number(cs, "asd", origin), t.c_asa = number(cs, "asa", origin);
        t.c_zsd = number(cs, "zsd", origin), t.c_zsa = number(cs, "zsa", origin);

        const auto &xpr = j.at("xpr_db");
        check_keys(xpr, {"mean", "std"}, origin + ".xpr_db");
        t.xpr_mean_db = number(xpr, "mean", origin);
        t.xpr_std_db = number(xpr, "std", origin);
        if (t.xpr_std_db < 0.0)
            throw std::invalid_argument(origin + ": xpr_db.std must be non-negative");

        const auto &cl = j.at("clusters");
        if (!cl.is_array() || cl.empty())
            throw std::invalid_argument(origin + ": clusters must be a non-empty array");
        for (size_t i = 0; i < cl.size(); ++i)
        {
            const std::string where = origin + ".clusters[" + std::to_string(i) + "]";
            check_keys(cl[i], {"delay", "power_db", "aod_deg", "aoa_deg", "zod_deg", "zoa_deg", "los"}, where);
            CdlCluster c;
            c.delay = number(cl[i], "delay", where);
            c.power_db = number(cl[i], "power_db", where);
            c.aod = number(cl[i], "aod_deg", where);
            c.aoa = number(cl[i], "aoa_deg", where);
            c.zod = number(cl[i], "zod_deg", where);
            c.zoa = number(cl[i], "zoa_deg", where);
            c.los = cl[i].value("los", false);
            if (c.delay < 0.0)
                throw std::invalid_argument(where + ": negative delay");
            t.clusters.push_back(c);
        }
        return t;
    }

    CdlTable load_cdl_table_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open CDL table '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_cdl_table(ss.str(), path);
    }

    const CdlTable &cdl_table(const std::string &model)
    {
        std::string file;
        for (char c : model)
            file += c == '-' ? '_' : char(std::tolower((unsigned char)c));
        if (file.empty() || !std::all_of(file.begin(), file.end(), [](char c)
                                         { return std::isalnum((unsigned char)c) || c == '_'; }))
            throw std::invalid_argument("invalid CDL model name '" + model + "'");
        const std::string path = data_directory() + "/cdl/" + file + ".json";

        static std::mutex mtx;
        static std::map<std::string, CdlTable> cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(path);
        if (it == cache.end())
        {
            std::ifstream probe(path);
            if (!probe)
                throw std::invalid_argument("unknown CDL model '" + model + "' (no table at " + path + ")");
            CdlTable t = load_cdl_table_file(path);
            if (t.model != model)
                throw std::invalid_argument(path + ": model field '" + t.model + "' does not match '" + model + "'");
            it = cache.emplace(path, std::move(t)).first;
        }
        return it->second;
    }
}
