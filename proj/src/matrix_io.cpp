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

#include "fddcsi/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace fddcsi
{
    void write_matrix(std::ostream &out, const CMatrix &M)
    {
        out << "fddcsi-matrix 1\n"
            << M.rows() << ' ' << M.cols() << '\n'
            << std::setprecision(17);
        for (Eigen::Index r = 0; r < M.rows(); ++r)
        {
            for (Eigen::Index c = 0; c < M.cols(); ++c)
                out << (c ? " " : "") << M(r, c).real() << ' ' << M(r, c).imag();
            out << '\n';
        }
    }

    CMatrix read_matrix(std::istream &in)
    {
        std::string magic;
        int version = 0;
        if (!(in >> magic >> version) || magic != "fddcsi-matrix" || version != 1)
            throw std::runtime_error("read_matrix: missing 'fddcsi-matrix 1' header");
        long long rows = -1, cols = -1;
        if (!(in >> rows >> cols) || rows < 0 || cols < 0)
            throw std::runtime_error("read_matrix: invalid dimensions");
        CMatrix M(rows, cols);
        for (long long r = 0; r < rows; ++r)
            for (long long c = 0; c < cols; ++c)
            {
                double re, im;
                if (!(in >> re >> im))
                    throw std::runtime_error("read_matrix: truncated data at row " + std::to_string(r) +
                                             ", column " + std::to_string(c));
                M(r, c) = {re, im};
            }
        std::string extra;
        if (in >> extra)
            throw std::runtime_error("read_matrix: trailing data");
        return M;
    }

    void export_matrix(const std::string &path, const CMatrix &M)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write '" + path + "'");
        write_matrix(out, M);
        if (!out)
            throw std::runtime_error("write failed for '" + path + "'");
    }

    CMatrix import_matrix(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open '" + path + "'");
        return read_matrix(in);
    }
}
