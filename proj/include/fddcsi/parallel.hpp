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

#include <cstdint>
#include <functional>
#include <initializer_list>

namespace fddcsi
{
    uint64_t splitmix64(uint64_t x);

    // Independent stream seed from a base seed and a path of indices
    uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> path);

    // Runs body(i) for i in [0, count) on `workers` threads; body must only write to slot i
    void parallel_for(int count, int workers, const std::function<void(int)> &body);
}
