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

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"fddcsi: FDD CSI acquisition experiments"};
    app.require_subcommand(1);

    fddcsi::RunOptions opt;
    std::string out_dir;
    uint64_t seed = 0;
    int workers = 0, drops = 0;
    bool quiet = false;

    for (const char *name : {"rank-check", "codebook-eval", "sweep"})
    {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "JSON experiment config")->check(CLI::ExistingFile);
        sub->add_option("--out-dir", out_dir, "Output directory");
        sub->add_option("--seed", seed, "Master seed");
        sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--drops", drops, "Monte-Carlo drops")->check(CLI::PositiveNumber);
        sub->add_flag("--quiet", quiet, "No progress output");
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const CLI::App *sub = app.get_subcommands().front();
    if (sub->count("--out-dir"))
        opt.out_dir = out_dir;
    if (sub->count("--seed"))
        opt.seed = seed;
    if (sub->count("--workers"))
        opt.workers = workers;
    if (sub->count("--drops"))
        opt.drops = drops;
    opt.progress = !quiet;

    return fddcsi::run_command(sub->get_name(), opt, std::cerr);
}
