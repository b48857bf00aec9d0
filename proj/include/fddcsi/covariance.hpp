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

#include "fddcsi/multipath_channel.hpp"
#include "fddcsi/support.hpp"

#include <vector>

namespace fddcsi
{
    struct CovarianceSet
    {
        CMatrix spatial;   // R_S, N_t x N_t
        CMatrix frequency; // R_F, N_f x N_f
        CMatrix joint;     // R_J, N_t N_f x N_t N_f, empty when not requested
        int samples = 0;   // 0 for ensemble expectations
        LinkEnd link = LinkEnd::Downlink;
    };

    // Sample averages of H H^H, H^T H^*, vec(H) vec(H)^H
    CovarianceSet empirical_covariances(const std::vector<WidebandChannel> &channels, bool with_joint = true);

    // Expectation over independent uniform path phases, averaged over UE antennas
    CovarianceSet expected_covariances(const PathSet &set, LinkEnd link, const UpaConfig &upa,
                                       const CarrierConfig &carrier, const UeArrayConfig &ue, bool with_joint = true);

    // Eigenvalues descending; each eigenvector's first significant entry is real-positive
    struct EigenBasis
    {
        CMatrix vectors;
        RVector values;

        int dimension() const { return (int)values.size(); }
    };

    EigenBasis eigendecompose(const CMatrix &R);
    RVector hermitian_eigenvalues(const CMatrix &R);

    // Smallest r with the top-r eigenvalues holding at least gamma of the total
    int effective_rank(const RVector &values, double gamma);
    int effective_rank(const EigenBasis &basis, double gamma);

    // Per-polarization N_h N_v x N_h N_v covariance of steering_3d for directions uniform in (theta, phi)
    CMatrix analytic_spatial_covariance(const AngularSupport &support, const UpaConfig &upa, double wavelength,
                                        int quadrature_order = 64);

    // Quadrature order actually used for the given request
    int spatial_quadrature_order(const AngularSupport &support, const UpaConfig &upa, double wavelength,
                                 int quadrature_order);

    // E[b b^H] for delays uniform over the union of intervals (seconds)
    CMatrix analytic_frequency_covariance(const std::vector<std::pair<double, double>> &delay_intervals,
                                          const CarrierConfig &carrier);

    // Top `count` eigenpairs of outer (x) inner, built from the factor bases
    EigenBasis kronecker_top_eigen(const EigenBasis &outer, const EigenBasis &inner, int count);
}
