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

#include "fddcsi/experiments.hpp"
#include "fddcsi/cdl_tables.hpp"
#include "fddcsi/covariance.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fddcsi
{
    namespace fs = std::filesystem;
    using json = nlohmann::json;

    void write_sweep_csv(std::ostream &out, const std::vector<SweepResult> &rows)
    {
        out << sweep_csv_header << '\n' << std::setprecision(10);
        for (const auto &r : rows)
            out << r.snr_db << ',' << r.scheme << ',' << r.ports << ',' << r.feedback_bits << ',' << r.mean_nmse << ','
                << r.mean_se << ',' << r.drops << '\n';
    }

    void write_codebook_csv(std::ostream &out, const std::vector<SweepResult> &rows)
    {
        out << "scheme,N_a,feedback_bits,mean_nmse,nmse_stderr,drops\n" << std::setprecision(10);
        for (const auto &r : rows)
            out << r.scheme << ',' << r.ports << ',' << r.feedback_bits << ',' << r.mean_nmse << ',' << r.nmse_stderr
                << ',' << r.drops << '\n';
    }

    std::vector<FrequencyRankRow> frequency_rank_convergence(const RankCheckConfig &rc)
    {
        std::vector<FrequencyRankRow> rows;
        const double rho = rho_frequency(rc.delay_intervals, rc.frequency_spacing);
        for (int n : rc.frequency_subbands)
        {
            CarrierConfig carrier;
            carrier.subband_count = n;
            carrier.subband_width = 1;
            carrier.subcarrier_spacing = rc.frequency_spacing;
            FrequencyRankRow row;
            row.subbands = n;
            row.rho = rho;
            row.effective_rank =
                effective_rank(hermitian_eigenvalues(analytic_frequency_covariance(rc.delay_intervals, carrier)), rc.energy_fraction);
            row.ratio = double(row.effective_rank) / n;
            row.relative_gap = std::abs(row.ratio - rho) / rho;
            rows.push_back(row);
        }
        return rows;
    }

    void write_rank_csv(std::ostream &out, const std::vector<RankConvergenceRow> &spatial,
                        const std::vector<FrequencyRankRow> &frequency)
    {
        out << "dimension,size,quadrature_order,rho,effective_rank,ratio,relative_gap\n" << std::setprecision(10);
        for (const auto &r : spatial)
            out << "spatial," << r.size << ',' << r.quadrature_order << ',' << r.rho << ',' << r.effective_rank << ','
                << r.ratio << ',' << r.relative_gap << '\n';
        for (const auto &r : frequency)
            out << "frequency," << r.subbands << ",0," << r.rho << ',' << r.effective_rank << ',' << r.ratio << ','
                << r.relative_gap << '\n';
    }

    ExperimentConfig resolve_config(const RunOptions &opt)
    {
        ExperimentConfig c = opt.config_path.empty() ? default_experiment_config() : load_experiment_config(opt.config_path);
        if (opt.out_dir)
            c.output_dir = *opt.out_dir;
        if (opt.seed)
            c.evaluation.seed = *opt.seed;
        if (opt.workers)
            c.evaluation.workers = *opt.workers;
        if (opt.drops)
            c.evaluation.drops = *opt.drops;
        c.evaluation.validate();
        return c;
    }

    namespace
    {
        // Files are written to temporaries and renamed on commit; anything uncommitted is removed
        class OutputGuard
        {
        public:
            explicit OutputGuard(fs::path dir) : dir_(std::move(dir)) {}

            ~OutputGuard()
            {
                if (committed_)
                    return;
                std::error_code ec;
                for (const auto &p : pending_)
                    fs::remove(p, ec);
                for (const auto &p : final_)
                    fs::remove(p, ec);
            }

            std::ofstream open(const std::string &name)
            {
                const fs::path tmp = dir_ / (name + ".partial");
                pending_.push_back(tmp);
                final_.push_back(dir_ / name);
                std::ofstream out(tmp);
                if (!out)
                    throw std::runtime_error("cannot write '" + tmp.string() + "'");
                return out;
            }

            void commit()
            {
                for (size_t i = 0; i < pending_.size(); ++i)
                    fs::rename(pending_[i], final_[i]);
                committed_ = true;
            }

            std::vector<std::string> names() const
            {
                std::vector<std::string> n;
                for (const auto &p : final_)
                    n.push_back(p.filename().string());
                return n;
            }

        private:
            fs::path dir_;
            std::vector<fs::path> pending_, final_;
            bool committed_ = false;
        };
    }

    int run_command(const std::string &command, const RunOptions &opt, std::ostream &log)
    {
        if (command != "rank-check" && command != "codebook-eval" && command != "sweep")
        {
            log << "error: unknown command '" << command << "'\n";
            return 2;
        }
        ExperimentConfig cfg;
        try
        {
            cfg = resolve_config(opt);
        }
        catch (const std::exception &e)
        {
            log << "error: " << e.what() << '\n';
            return 2;
        }

        const fs::path dir(cfg.output_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
        {
            log << "error: cannot create output directory '" << dir.string() << "': " << ec.message() << '\n';
            return 1;
        }

        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            OutputGuard guard(dir);
            json extra;
            ProgressFn progress;
            if (opt.progress)
                progress = [&](int done, int total)
                {
                    if (done == total || done % 10 == 0)
                        log << "  drop " << done << "/" << total << '\n';
                };

            if (command == "rank-check")
            {
                for (const auto &w : cfg.rank_check.support.warnings())
                    log << "warning: " << w << '\n';
                const auto &rc = cfg.rank_check;
                const auto spatial = rank_convergence(rc.support, rc.spacing_h_wavelengths, rc.spacing_v_wavelengths,
                                                      rc.sizes, rc.energy_fraction, rc.quadrature_order);
                const auto freq = frequency_rank_convergence(rc);
                auto out = guard.open("rank-check.csv");
                write_rank_csv(out, spatial, freq);
                extra["rows"] = spatial.size() + freq.size();
                for (const auto &r : spatial)
                    extra["spatial_seconds"].push_back(r.seconds);
            }
            else
            {
                const bool sweep = command == "sweep";
                const auto rows = sweep ? run_sweep(cfg.evaluation, progress) : run_codebook_eval(cfg.evaluation, progress);
                auto out = guard.open(command + ".csv");
                if (sweep)
                    write_sweep_csv(out, rows);
                else
                    write_codebook_csv(out, rows);
                extra["rows"] = rows.size();
            }

            const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            json manifest;
            manifest["tool"] = "fddcsi";
            manifest["version"] = version_string;
            manifest["command"] = command;
            manifest["config_path"] = opt.config_path;
            manifest["config"] = json::parse(config_to_json(cfg));
            manifest["seed"] = cfg.evaluation.seed;
            manifest["workers"] = cfg.evaluation.workers;
            manifest["drops"] = cfg.evaluation.drops;
            manifest["data_dir"] = data_directory();
            manifest["ul_noise"] = cfg.evaluation.scenario.ul_snr_db < 1e299;
            manifest["dl_pilot_noise"] = !cfg.evaluation.scenario.measurement.noiseless();
            manifest["elapsed_seconds"] = elapsed;
            manifest["rows"] = extra["rows"];
            if (extra.contains("spatial_seconds"))
                manifest["spatial_seconds"] = extra["spatial_seconds"];
            auto outputs = guard.names();
            outputs.push_back("manifest.json");
            manifest["outputs"] = outputs;
            {
                auto m = guard.open("manifest.json");
                m << manifest.dump(2) << '\n';
            }
            guard.commit();
            log << "wrote " << (dir / (command + ".csv")).string() << " and " << (dir / "manifest.json").string() << '\n';
        }
        catch (const std::exception &e)
        {
            log << "error: " << e.what() << '\n';
            return 1;
        }
        return 0;
    }
}
