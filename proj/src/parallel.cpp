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

#include "fddcsi/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fddcsi
{
    uint64_t splitmix64(uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> path)
    {
        uint64_t s = splitmix64(base);
        for (uint64_t p : path)
            s = splitmix64(s ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
        return s;
    }

    void parallel_for(int count, int workers, const std::function<void(int)> &body)
    {
        if (workers < 1)
            throw std::invalid_argument("parallel_for: workers must be >= 1");
        if (workers == 1 || count <= 1)
        {
            for (int i = 0; i < count; ++i)
                body(i);
            return;
        }
        std::atomic<int> next{0};
        std::exception_ptr error;
        std::mutex mtx;
        std::vector<std::thread> pool;
        for (int w = 0; w < std::min(workers, count); ++w)
            pool.emplace_back([&]
                              {
                for (int i = next++; i < count; i = next++)
                {
                    try
                    {
                        body(i);
                    }
                    catch (...)
                    {
                        std::lock_guard<std::mutex> lock(mtx);
                        if (!error)
                            error = std::current_exception();
                        next = count;
                    }
                } });
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }
}
