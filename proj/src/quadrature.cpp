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

#include "fddcsi/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fddcsi
{
    static GaussLegendre compute_rule(int n)
    {
        GaussLegendre r;
        r.nodes.resize(n);
        r.weights.resize(n);
        for (int i = 0; i < (n + 1) / 2; ++i)
        {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it)
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k)
                {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            if (n == 1)
                dp = 1.0, x = 0.0;
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            r.nodes[i] = -x;
            r.nodes[n - 1 - i] = x;
            r.weights[i] = r.weights[n - 1 - i] = (n == 1) ? 2.0 : w;
        }
        return r;
    }

    const GaussLegendre &gauss_legendre(int order)
    {
        if (order < 1)
            throw std::invalid_argument("gauss_legendre: order must be >= 1");
        static std::mutex mtx;
        static std::map<int, GaussLegendre> cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(order);
        if (it == cache.end())
            it = cache.emplace(order, compute_rule(order)).first;
        return it->second;
    }

    std::vector<std::pair<double, double>> gauss_legendre(double a, double b, int order)
    {
        const GaussLegendre &r = gauss_legendre(order);
        std::vector<std::pair<double, double>> out(order);
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < order; ++i)
            out[i] = {c + h * r.nodes[i], h * r.weights[i]};
        return out;
    }
}
