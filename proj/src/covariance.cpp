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

#include "fddcsi/covariance.hpp"
#include "fddcsi/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fddcsi
{
    CovarianceSet empirical_covariances(const std::vector<WidebandChannel> &channels, bool with_joint)
    {
        if (channels.empty())
            throw std::invalid_argument("empirical_covariances: no samples");
        const Eigen::Index Nt = channels[0].matrix.rows(), Nf = channels[0].matrix.cols();
        CovarianceSet out;
        out.link = channels[0].link;
        out.samples = (int)channels.size();
        out.spatial = CMatrix::Zero(Nt, Nt);
        out.frequency = CMatrix::Zero(Nf, Nf);
        if (with_joint)
            out.joint = CMatrix::Zero(Nt * Nf, Nt * Nf);
        for (const auto &ch : channels)
        {
            const CMatrix &H = ch.matrix;
            if (H.rows() != Nt || H.cols() != Nf)
                throw std::invalid_argument("empirical_covariances: samples have different dimensions");
            if (!H.allFinite())
                throw std::invalid_argument("empirical_covariances: non-finite sample");
            out.spatial.noalias() += H * H.adjoint();
            out.frequency.noalias() += H.transpose() * H.conjugate();
            if (with_joint)
            {
                const CVector h = vectorize(H);
                out.joint.noalias() += h * h.adjoint();
            }
        }
        const double s = 1.0 / double(channels.size());
        out.spatial *= s;
        out.frequency *= s;
        if (with_joint)
            out.joint *= s;
        return out;
    }

    CovarianceSet expected_covariances(const PathSet &set, LinkEnd link, const UpaConfig &upa,
                                       const CarrierConfig &carrier, const UeArrayConfig &ue, bool with_joint)
    {
        set.validate();
        const double lambda = carrier.wavelength(link);
        const int L = upa.elements_per_polarization(), P = upa.polarizations, Nt = upa.total_antennas();
        const int Nf = carrier.subband_count;

        // One column per (UE antenna, path, coupling term)
        std::vector<CVector> xs, bs;
        std::vector<double> delays;
        for (int u = 0; u < ue.antenna_count(); ++u)
            for (const Path &p : set.paths)
            {
                const CVector a = steering_3d(p.zod, p.aod, upa, lambda);
                const CVector b = delay_response(p.delay, carrier, link);
                for (const CVector &g : path_coupling_terms(p, upa, ue, u))
                {
                    CVector x(Nt);
                    for (int q = 0; q < P; ++q)
                        x.segment(q * L, L) = g[q] * a;
                    xs.push_back(x);
                    bs.push_back(b);
                    delays.push_back(p.delay);
                }
            }
        const Eigen::Index K = (Eigen::Index)xs.size();
        const double inv = 1.0 / double(ue.antenna_count());
        CMatrix X(Nt, K), B(Nf, K);
        RVector xn(K);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            X.col(k) = xs[k];
            B.col(k) = bs[k];
            xn[k] = xs[k].squaredNorm();
        }

        CovarianceSet out;
        out.link = link;
        out.spatial = (double(Nf) * inv) * (X * X.adjoint());
        out.frequency = inv * (B * xn.asDiagonal() * B.adjoint());
        if (with_joint)
        {
            const Eigen::Index D = Eigen::Index(Nt) * Nf;
            std::map<double, std::vector<Eigen::Index>> groups;
            for (Eigen::Index k = 0; k < K; ++k)
                groups[delays[k]].push_back(k);
            const double grouped_cost = double(groups.size()) * Nf * Nf * Nt * Nt;
            if (grouped_cost < double(D) * D * K)
            {
                // Columns sharing a delay share b: R_J += (b b^H) (x) (X_g X_g^H)
                out.joint = CMatrix::Zero(D, D);
                for (const auto &[tau, cols] : groups)
                {
                    CMatrix Xg(Nt, (Eigen::Index)cols.size());
                    for (size_t j = 0; j < cols.size(); ++j)
                        Xg.col(j) = X.col(cols[j]);
                    const CMatrix Q = inv * (Xg * Xg.adjoint());
                    const CVector &b = B.col(cols[0]);
                    for (int k = 0; k < Nf; ++k)
                        for (int l = 0; l < Nf; ++l)
                            out.joint.block(Eigen::Index(k) * Nt, Eigen::Index(l) * Nt, Nt, Nt) += (b[k] * std::conj(b[l])) * Q;
                }
            }
            else
            {
                CMatrix V(D, K);
                for (Eigen::Index k = 0; k < K; ++k)
                    for (int f = 0; f < Nf; ++f)
                        V.col(k).segment(Eigen::Index(f) * Nt, Nt) = B(f, k) * X.col(k);
                out.joint = inv * (V * V.adjoint());
            }
        }
        return out;
    }

    static void check_hermitian(const CMatrix &R, const char *who)
    {
        if (R.rows() != R.cols() || R.rows() == 0)
            throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
        if (!R.allFinite())
            throw std::invalid_argument(std::string(who) + ": non-finite entry");
        const double scale = std::max(R.norm(), 1e-300);
        if ((R - R.adjoint()).norm() > 1e-9 * scale)
            throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
    }

    // Hermitian solve, eigenvalues ascending. The QR iteration can stall on large clusters of
    // near-zero eigenvalues; retry on D R D^H with a fixed diagonal phase matrix D.
    static void hermitian_solve(const CMatrix &R, bool vectors, RVector &values, CMatrix *V, const char *who)
    {
        const CMatrix Rh = 0.5 * (R + R.adjoint());
        const int options = vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(Rh, options);
        for (int attempt = 1; es.info() != Eigen::Success && attempt <= 3; ++attempt)
        {
            CVector d(R.rows());
            for (Eigen::Index k = 0; k < d.size(); ++k)
                d[k] = std::polar(1.0, 0.7548776662466927 * attempt * double(k * k));
            es.compute(d.asDiagonal() * Rh * d.conjugate().asDiagonal(), options);
            if (es.info() == Eigen::Success)
            {
                values = es.eigenvalues();
                if (vectors)
                    *V = d.conjugate().asDiagonal() * es.eigenvectors();
                return;
            }
        }
        if (es.info() != Eigen::Success)
            throw std::runtime_error(std::string(who) + ": solver did not converge");
        values = es.eigenvalues();
        if (vectors)
            *V = es.eigenvectors();
    }

    EigenBasis eigendecompose(const CMatrix &R)
    {
        check_hermitian(R, "eigendecompose");
        RVector asc;
        CMatrix Vasc;
        hermitian_solve(R, true, asc, &Vasc, "eigendecompose");
        const Eigen::Index n = R.rows();

        CMatrix V = Vasc.rowwise().reverse();
        RVector lam = asc.reverse();

        std::vector<Eigen::Index> lead(n);
        for (Eigen::Index j = 0; j < n; ++j)
        {
            auto v = V.col(j);
            const double vmax = v.cwiseAbs().maxCoeff();
            Eigen::Index i = 0;
            while (i < n && std::abs(v[i]) <= 1e-8 * vmax)
                ++i;
            lead[j] = i;
            if (i < n)
                v *= std::conj(v[i]) / std::abs(v[i]);
        }

        // Near-equal eigenvalues: order by position of the first significant entry
        const double tol = 1e-10 * std::max(std::abs(lam[0]), std::abs(lam[n - 1]));
        std::vector<Eigen::Index> order(n);
        std::iota(order.begin(), order.end(), 0);
        Eigen::Index start = 0;
        while (start < n)
        {
            Eigen::Index end = start + 1;
            while (end < n && lam[end - 1] - lam[end] <= tol)
                ++end;
            std::stable_sort(order.begin() + start, order.begin() + end,
                             [&](Eigen::Index a, Eigen::Index b)
                             { return lead[a] < lead[b]; });
            start = end;
        }

        EigenBasis out;
        out.vectors.resize(n, n);
        out.values.resize(n);
        for (Eigen::Index j = 0; j < n; ++j)
        {
            out.vectors.col(j) = V.col(order[j]);
            out.values[j] = lam[order[j]];
        }
        return out;
    }

    RVector hermitian_eigenvalues(const CMatrix &R)
    {
        check_hermitian(R, "hermitian_eigenvalues");
        RVector asc;
        hermitian_solve(R, false, asc, nullptr, "hermitian_eigenvalues");
        return asc.reverse();
    }

    int effective_rank(const RVector &values, double gamma)
    {
        if (!(gamma > 0.0) || !(gamma < 1.0))
            throw std::invalid_argument("effective_rank: gamma must be in (0, 1)");
        RVector v = values.cwiseMax(0.0);
        std::sort(v.data(), v.data() + v.size(), std::greater<double>());
        const double total = v.sum();
        if (!(total > 0.0))
            throw std::invalid_argument("effective_rank: all-zero spectrum");
        double acc = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i)
        {
            acc += v[i];
            if (acc >= gamma * total * (1.0 - 1e-14))
                return int(i + 1);
        }
        return (int)v.size();
    }

    int effective_rank(const EigenBasis &basis, double gamma)
    {
        return effective_rank(basis.values, gamma);
    }

    int spatial_quadrature_order(const AngularSupport &support, const UpaConfig &upa, double wavelength,
                                 int quadrature_order)
    {
        if (quadrature_order < 2)
            throw std::invalid_argument("quadrature order must be >= 2");
        const double lh = (upa.cols - 1) * upa.spacing_h / wavelength;
        const double lv = (upa.rows - 1) * upa.spacing_v / wavelength;
        double cycles = 0.0;
        for (const auto &r : support.regions)
        {
            double wmax = 0.0;
            for (double t : r.breakpoints())
                wmax = std::max(wmax, r.phi_max(t) - r.phi_min(t));
            cycles = std::max(cycles, (lh + lv) * (r.theta_max - r.theta_min));
            cycles = std::max(cycles, lh * std::min(wmax, 2.0 * pi));
        }
        return std::max(quadrature_order, int(std::ceil(2.0 * cycles)) + 16);
    }

    CMatrix analytic_spatial_covariance(const AngularSupport &support, const UpaConfig &upa, double wavelength,
                                        int quadrature_order)
    {
        support.validate();
        upa.validate();
        const int n = spatial_quadrature_order(support, upa, wavelength, quadrature_order);
        const int Nh = upa.cols, Nv = upa.rows;
        const double area = support.area();

        std::vector<double> us, ws, wts;
        auto node = [&](double t, double p, double w)
        {
            us.push_back(std::sin(t) * std::sin(p));
            ws.push_back(std::cos(t));
            wts.push_back(w);
        };
        for (const auto &r : support.regions)
        {
            if (area > 0.0)
            {
                const auto b = r.breakpoints();
                for (size_t i = 0; i + 1 < b.size(); ++i)
                    for (auto [t, wt] : gauss_legendre(b[i], b[i + 1], n))
                        for (auto [p, wp] : gauss_legendre(r.phi_min(t), r.phi_max(t), n))
                            node(t, p, wt * wp / area);
                continue;
            }
            // Zero-measure support: equal mass per region, uniform along its extent
            const double mass = 1.0 / (double)support.regions.size();
            const double dt = r.theta_max - r.theta_min;
            if (dt > 0.0)
            {
                for (auto [t, wt] : gauss_legendre(r.theta_min, r.theta_max, n))
                    node(t, r.phi_min(t), mass * wt / dt);
                continue;
            }
            const double t = r.theta_min, p0 = r.phi_min(t), dp = r.phi_max(t) - p0;
            if (dp > 0.0)
                for (auto [p, wp] : gauss_legendre(p0, p0 + dp, n))
                    node(t, p, mass * wp / dp);
            else
                node(t, p0, mass);
        }

        // T(dh, dv) = E[exp(j 2 pi (D_h u dh + D_v w dv) / lambda)], dh in [-(N_h-1), N_h-1]
        const Eigen::Index K = (Eigen::Index)us.size();
        CMatrix X(K, 2 * Nh - 1), Y(K, 2 * Nv - 1);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double ah = 2.0 * pi * upa.spacing_h / wavelength * us[k];
            const double av = 2.0 * pi * upa.spacing_v / wavelength * ws[k];
            for (int d = -(Nh - 1); d <= Nh - 1; ++d)
                X(k, d + Nh - 1) = std::polar(wts[k], ah * d);
            for (int d = -(Nv - 1); d <= Nv - 1; ++d)
                Y(k, d + Nv - 1) = std::polar(1.0, av * d);
        }
        const CMatrix T = X.transpose() * Y;

        const int Lp = Nh * Nv;
        CMatrix R(Lp, Lp);
        for (int h1 = 0; h1 < Nh; ++h1)
            for (int v1 = 0; v1 < Nv; ++v1)
                for (int h2 = 0; h2 < Nh; ++h2)
                    for (int v2 = 0; v2 < Nv; ++v2)
                        R(h1 * Nv + v1, h2 * Nv + v2) = T(h1 - h2 + Nh - 1, v1 - v2 + Nv - 1);
        return 0.5 * (R + R.adjoint());
    }

    CMatrix analytic_frequency_covariance(const std::vector<std::pair<double, double>> &delay_intervals,
                                          const CarrierConfig &carrier)
    {
        if (delay_intervals.empty())
            throw std::invalid_argument("analytic_frequency_covariance: no delay intervals");
        double total = 0.0;
        for (auto [a, b] : delay_intervals)
        {
            if (!(a >= 0.0) || !(b > a))
                throw std::invalid_argument("analytic_frequency_covariance: need 0 <= tau_min < tau_max");
            total += b - a;
        }
        const int Nf = carrier.subband_count;
        const double df = carrier.subband_spacing();
        std::vector<cdouble> t(2 * Nf - 1);
        for (int d = -(Nf - 1); d <= Nf - 1; ++d)
        {
            cdouble acc = 0.0;
            for (auto [a, b] : delay_intervals)
            {
                const double x = pi * df * d * (b - a);
                const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
                acc += (b - a) / total * std::polar(sinc, -pi * df * d * (a + b));
            }
            t[d + Nf - 1] = acc;
        }
        CMatrix R(Nf, Nf);
        for (int k = 0; k < Nf; ++k)
            for (int l = 0; l < Nf; ++l)
                R(k, l) = t[k - l + Nf - 1];
        return R;
    }

    EigenBasis kronecker_top_eigen(const EigenBasis &outer, const EigenBasis &inner, int count)
    {
        const Eigen::Index no = outer.values.size(), ni = inner.values.size();
        if (count < 1 || count > no * ni)
            throw std::invalid_argument("kronecker_top_eigen: count out of range");
        std::vector<std::pair<Eigen::Index, Eigen::Index>> idx;
        idx.reserve(no * ni);
        for (Eigen::Index a = 0; a < no; ++a)
            for (Eigen::Index b = 0; b < ni; ++b)
                idx.emplace_back(a, b);
        std::stable_sort(idx.begin(), idx.end(), [&](const auto &x, const auto &y)
                         { return outer.values[x.first] * inner.values[x.second] >
                                  outer.values[y.first] * inner.values[y.second]; });
        EigenBasis out;
        out.vectors.resize(no * ni, count);
        out.values.resize(count);
        for (int j = 0; j < count; ++j)
        {
            const auto [a, b] = idx[j];
            out.values[j] = outer.values[a] * inner.values[b];
            for (Eigen::Index k = 0; k < no; ++k)
                out.vectors.col(j).segment(k * ni, ni) = outer.vectors(k, a) * inner.vectors.col(b);
        }
        return out;
    }
}
