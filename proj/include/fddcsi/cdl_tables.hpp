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

#pragma once

#include <string>
#include <vector>

namespace fddcsi
{
    struct CdlCluster
    {
        double delay = 0.0; // Normalized
        double power_db = 0.0;
        double aod = 0.0, aoa = 0.0, zod = 0.0, zoa = 0.0; // Degrees
        bool los = false;
    };

    struct CdlTable
    {
        std::string model;
        int version = 1;
        int rays_per_cluster = 20;
        double c_asd = 0.0, c_asa = 0.0, c_zsd = 0.0, c_zsa = 0.0; // Degrees
        double xpr_mean_db = 0.0, xpr_std_db = 0.0;
        std::vector<CdlCluster> clusters;
    };

    // Data directory: FDDCSI_DATA_DIR if set, else the build-time default
    std::string data_directory();

    CdlTable parse_cdl_table(const std::string &text, const std::string &origin = "<string>");
    CdlTable load_cdl_table_file(const std::string &path);

    // Looks up <data_directory()>/cdl/<model>.json, cached per directory
    const CdlTable &cdl_table(const std::string &model);
}
