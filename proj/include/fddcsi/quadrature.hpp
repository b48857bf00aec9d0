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

#include <utility>
#include <vector>

namespace fddcsi
{
    // Gauss-Legendre nodes and weights on [-1, 1]
    struct GaussLegendre
    {
        std::vector<double> nodes;
        std::vector<double> weights;
    };

    const GaussLegendre &gauss_legendre(int order);

    // Nodes and weights mapped to [a, b]
    std::vector<std::pair<double, double>> gauss_legendre(double a, double b, int order);
}
