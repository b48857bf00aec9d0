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

#include "fddcsi/types.hpp"

#include <iosfwd>
#include <string>

namespace fddcsi
{
    // Text format: "fddcsi-matrix 1", then "<rows> <cols>", then one line per row of "re im" pairs
    void write_matrix(std::ostream &out, const CMatrix &M);
    CMatrix read_matrix(std::istream &in);

    void export_matrix(const std::string &path, const CMatrix &M);
    CMatrix import_matrix(const std::string &path);
}
