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

#include "fddcsi/config.hpp"
#include "fddcsi/rank_laws.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fddcsi
{
    struct RunOptions
    {
        std::string config_path;          // Empty: defaults
        std::optional<std::string> out_dir;
        std::optional<uint64_t> seed;
        std::optional<int> workers;
        std::optional<int> drops;
        bool progress = true;
    };

    // Exact column set of the sweep CSV
    inline constexpr const char *sweep_csv_header = "snr_db,scheme,N_a,feedback_bits,mean_nmse,mean_se_bps_hz,drops";

    void write_sweep_csv(std::ostream &out, const std::vector<SweepResult> &rows);
    void write_codebook_csv(std::ostream &out, const std::vector<SweepResult> &rows);

    struct FrequencyRankRow
    {
        int subbands = 0;
        double rho = 0.0;
        int effective_rank = 0;
        double ratio = 0.0;
        double relative_gap = 0.0;
    };

    std::vector<FrequencyRankRow> frequency_rank_convergence(const RankCheckConfig &rc);
    void write_rank_csv(std::ostream &out, const std::vector<RankConvergenceRow> &spatial,
                        const std::vector<FrequencyRankRow> &frequency);

    ExperimentConfig resolve_config(const RunOptions &opt);

    // Runs rank-check, codebook-eval or sweep; writes <out>/<command>.csv and <out>/manifest.json.
    // Returns the process exit code; partial outputs are removed on failure.
    int run_command(const std::string &command, const RunOptions &opt, std::ostream &log);
}
