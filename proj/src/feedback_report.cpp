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

#include "fddcsi/feedback_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace fddcsi
{
    static constexpr int reference_bits = 32;
    static constexpr int exact_bits = 128;

    void QuantizerConfig::validate() const
    {
        if (mode == QuantizerMode::AmplitudePhase &&
            (amplitude_bits < 1 || amplitude_bits > 16 || phase_bits < 1 || phase_bits > 16))
            throw std::invalid_argument("quantizer: amplitude and phase bits must be in 1..16");
    }

    // Nearest of two candidate cells, exact ties to the smaller index
    static int nearest(int a, int b, double da, double db)
    {
        if (std::abs(da - db) <= 1e-12 * std::max(1.0, std::max(da, db)))
            return std::min(a, b);
        return da < db ? a : b;
    }

    int quantize_amplitude(double r, int bits)
    {
        if (!std::isfinite(r))
            throw std::invalid_argument("quantize_amplitude: non-finite input");
        const int n = 1 << bits;
        r = std::clamp(r, 0.0, 1.0);
        const int lo = std::clamp(int(std::floor(r * n - 0.5)), 0, n - 1), hi = std::min(lo + 1, n - 1);
        return nearest(lo, hi, std::abs(r - amplitude_level(lo, bits)), std::abs(r - amplitude_level(hi, bits)));
    }

    double amplitude_level(int code, int bits)
    {
        return (code + 0.5) / double(1 << bits);
    }

    int quantize_phase(double phase, int bits)
    {
        if (!std::isfinite(phase))
            throw std::invalid_argument("quantize_phase: non-finite input");
        const int n = 1 << bits;
        const double d = 2.0 * pi / n;
        const int lo = int(std::floor((phase + pi) / d - 0.5));
        auto dist = [&](int i)
        { return std::abs(std::remainder(phase - phase_level(((i % n) + n) % n, bits), 2.0 * pi)); };
        const int a = ((lo % n) + n) % n, b = (((lo + 1) % n) + n) % n;
        return nearest(a, b, dist(lo), dist(lo + 1));
    }

    double phase_level(int code, int bits)
    {
        const double d = 2.0 * pi / double(1 << bits);
        return -pi + (code + 0.5) * d;
    }

    AntennaFeedback quantize(const CVector &g, const QuantizerConfig &cfg)
    {
        cfg.validate();
        if (!g.allFinite())
            throw std::invalid_argument("quantize: non-finite coefficient");
        AntennaFeedback a;
        if (cfg.mode == QuantizerMode::Exact)
        {
            a.exact.assign(g.data(), g.data() + g.size());
            a.degenerate = g.squaredNorm() == 0.0;
            return a;
        }
        const double gmax = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
        a.reference = float(gmax);
        a.degenerate = !(a.reference > 0.0f);
        for (Eigen::Index n = 0; n < g.size(); ++n)
        {
            a.amplitude_codes.push_back(a.degenerate ? 0 : quantize_amplitude(std::abs(g[n]) / gmax, cfg.amplitude_bits));
            a.phase_codes.push_back(quantize_phase(std::arg(g[n]), cfg.phase_bits));
        }
        return a;
    }

    CVector dequantize(const AntennaFeedback &a, const QuantizerConfig &cfg)
    {
        if (cfg.mode == QuantizerMode::Exact)
            return Eigen::Map<const CVector>(a.exact.data(), (Eigen::Index)a.exact.size());
        CVector g(a.amplitude_codes.size());
        for (size_t n = 0; n < a.amplitude_codes.size(); ++n)
            g[n] = a.degenerate ? cdouble(0.0)
                                : std::polar(double(a.reference) * amplitude_level(a.amplitude_codes[n], cfg.amplitude_bits),
                                             phase_level(a.phase_codes[n], cfg.phase_bits));
        return g;
    }

    CVector FeedbackReport::coefficients(int antenna) const
    {
        if (antenna < 0 || antenna >= (int)antennas.size())
            throw std::invalid_argument("FeedbackReport: antenna index out of range");
        return dequantize(antennas[antenna], quantizer);
    }

    void FeedbackReport::validate() const
    {
        quantizer.validate();
        if (ports < 1)
            throw std::invalid_argument("FeedbackReport: ports must be >= 1");
        if (antennas.empty())
            throw std::invalid_argument("FeedbackReport: no antennas");
        for (const auto &a : antennas)
        {
            const size_t n = quantizer.mode == QuantizerMode::Exact ? a.exact.size() : a.amplitude_codes.size();
            if ((int)n != ports || (quantizer.mode != QuantizerMode::Exact && a.phase_codes.size() != n))
                throw std::invalid_argument("FeedbackReport: coefficient count does not match ports");
            for (size_t i = 0; i < a.amplitude_codes.size(); ++i)
                if (a.amplitude_codes[i] < 0 || a.amplitude_codes[i] >= (1 << quantizer.amplitude_bits) ||
                    a.phase_codes[i] < 0 || a.phase_codes[i] >= (1 << quantizer.phase_bits))
                    throw std::invalid_argument("FeedbackReport: code out of range");
        }
        if (scheme == Scheme::Baseline)
        {
            if ((int)indices.size() != ports || index_bits < 1)
                throw std::invalid_argument("FeedbackReport: baseline needs one index per port");
            for (int i : indices)
                if (i < 0 || (index_bits < 31 && i >= (1 << index_bits)))
                    throw std::invalid_argument("FeedbackReport: index out of range");
        }
        else if (!indices.empty())
            throw std::invalid_argument("FeedbackReport: only the baseline carries indices");
    }

    FeedbackReport make_report(Scheme scheme, const std::vector<CVector> &per_antenna, const QuantizerConfig &cfg)
    {
        if (per_antenna.empty())
            throw std::invalid_argument("make_report: no antennas");
        FeedbackReport r;
        r.scheme = scheme;
        r.ports = (int)per_antenna[0].size();
        r.quantizer = cfg;
        for (const auto &g : per_antenna)
            r.antennas.push_back(quantize(g, cfg));
        r.validate();
        return r;
    }

    static int bits_for(long long count)
    {
        int b = 0;
        while ((1LL << b) < count)
            ++b;
        return std::max(b, 1);
    }

    FeedbackReport baseline_report(const std::vector<CMatrix> &estimates, const CMatrix &S, const CMatrix &F, int ports,
                                   const QuantizerConfig &cfg)
    {
        if (estimates.empty())
            throw std::invalid_argument("baseline_report: no channel estimates");
        std::vector<CMatrix> C;
        RMatrix power = RMatrix::Zero(S.cols(), F.cols());
        for (const auto &H : estimates)
        {
            if (H.rows() != S.rows() || H.cols() != F.rows())
                throw std::invalid_argument("baseline_report: estimate dimensions do not match the DFT bases");
            C.push_back(S.adjoint() * H * F);
            power += C.back().cwiseAbs2();
        }
        const auto pos = top_positions(power, ports);
        FeedbackReport r;
        r.scheme = Scheme::Baseline;
        r.ports = ports;
        r.quantizer = cfg;
        r.index_bits = bits_for(S.cols() * F.cols());
        for (const auto &[row, col] : pos)
            r.indices.push_back(int(row + S.cols() * col));
        for (const auto &c : C)
        {
            CVector g(ports);
            for (int n = 0; n < ports; ++n)
                g[n] = c(pos[n].first, pos[n].second);
            r.antennas.push_back(quantize(g, cfg));
        }
        r.validate();
        return r;
    }

    CMatrix baseline_reconstruct(const FeedbackReport &report, int antenna, const CMatrix &S, const CMatrix &F)
    {
        if (report.scheme != Scheme::Baseline)
            throw std::invalid_argument("baseline_reconstruct: not a baseline report");
        const CVector g = report.coefficients(antenna);
        CMatrix C = CMatrix::Zero(S.cols(), F.cols());
        for (int n = 0; n < report.ports; ++n)
        {
            const int i = report.indices[n];
            if (i >= C.size())
                throw std::invalid_argument("baseline_reconstruct: index exceeds the DFT grid");
            C(i % S.cols(), i / S.cols()) = g[n];
        }
        return S * C * F.adjoint();
    }

    std::string serialize(const FeedbackReport &report)
    {
        report.validate();
        std::ostringstream os;
        os << "fddcsi-feedback 1\n";
        os << "scheme " << to_string(report.scheme) << "\n";
        os << "ports " << report.ports << "\n";
        if (report.quantizer.mode == QuantizerMode::Exact)
            os << "quantizer exact\n";
        else
            os << "quantizer amplitude-phase " << report.quantizer.amplitude_bits << ' ' << report.quantizer.phase_bits << "\n";
        os << "ue_antennas " << report.antennas.size() << "\n";
        os << std::hexfloat;
        for (size_t u = 0; u < report.antennas.size(); ++u)
        {
            const auto &a = report.antennas[u];
            os << "antenna " << u;
            if (report.quantizer.mode == QuantizerMode::Exact)
            {
                os << "\ncoefficients";
                for (const auto &c : a.exact)
                    os << ' ' << c.real() << ',' << c.imag();
            }
            else
            {
                os << " reference " << double(a.reference) << "\ncoefficients";
                for (size_t n = 0; n < a.amplitude_codes.size(); ++n)
                    os << ' ' << a.amplitude_codes[n] << ':' << a.phase_codes[n];
            }
            os << "\n";
        }
        if (report.scheme == Scheme::Baseline)
        {
            os << std::dec << "indices " << report.index_bits;
            for (int i : report.indices)
                os << ' ' << i;
            os << "\n";
        }
        os << "end\n";
        return os.str();
    }

    static std::runtime_error parse_error(int line, const std::string &msg)
    {
        return std::runtime_error("feedback report line " + std::to_string(line) + ": " + msg);
    }

    static double parse_double(const std::string &s, int line)
    {
        char *end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw parse_error(line, "bad number '" + s + "'");
        return v;
    }

    static int parse_int(const std::string &s, int line)
    {
        char *end = nullptr;
        const long v = std::strtol(s.c_str(), &end, 10);
        if (end == s.c_str() || *end != '\0')
            throw parse_error(line, "bad integer '" + s + "'");
        return int(v);
    }

    FeedbackReport parse_report(const std::string &text)
    {
        std::istringstream in(text);
        std::string line;
        int ln = 0;
        auto next = [&]() -> std::vector<std::string>
        {
            if (!std::getline(in, line))
                throw parse_error(ln + 1, "unexpected end of input");
            ++ln;
            std::istringstream ls(line);
            std::vector<std::string> tok;
            std::string t;
            while (ls >> t)
                tok.push_back(t);
            return tok;
        };
        auto expect = [&](const std::vector<std::string> &tok, const std::string &key, size_t min_size)
        {
            if (tok.empty() || tok[0] != key || tok.size() < min_size)
                throw parse_error(ln, "expected '" + key + "'");
        };

        auto tok = next();
        if (tok.size() != 2 || tok[0] != "fddcsi-feedback" || tok[1] != "1")
            throw parse_error(ln, "missing 'fddcsi-feedback 1' header");
        FeedbackReport r;
        tok = next();
        expect(tok, "scheme", 2);
        r.scheme = parse_scheme(tok[1]);
        tok = next();
        expect(tok, "ports", 2);
        r.ports = parse_int(tok[1], ln);
        tok = next();
        expect(tok, "quantizer", 2);
        if (tok[1] == "exact" && tok.size() == 2)
            r.quantizer.mode = QuantizerMode::Exact;
        else if (tok[1] == "amplitude-phase" && tok.size() == 4)
        {
            r.quantizer.mode = QuantizerMode::AmplitudePhase;
            r.quantizer.amplitude_bits = parse_int(tok[2], ln);
            r.quantizer.phase_bits = parse_int(tok[3], ln);
        }
        else
            throw parse_error(ln, "bad quantizer line");
        tok = next();
        expect(tok, "ue_antennas", 2);
        const int U = parse_int(tok[1], ln);
        if (U < 1)
            throw parse_error(ln, "ue_antennas must be >= 1");
        const bool exact = r.quantizer.mode == QuantizerMode::Exact;
        for (int u = 0; u < U; ++u)
        {
            tok = next();
            expect(tok, "antenna", 2);
            if (parse_int(tok[1], ln) != u)
                throw parse_error(ln, "antennas out of order");
            AntennaFeedback a;
            if (!exact)
            {
                if (tok.size() != 4 || tok[2] != "reference")
                    throw parse_error(ln, "expected reference amplitude");
                a.reference = float(parse_double(tok[3], ln));
                a.degenerate = !(a.reference > 0.0f);
            }
            tok = next();
            expect(tok, "coefficients", 1);
            for (size_t i = 1; i < tok.size(); ++i)
            {
                const auto sep = tok[i].find(exact ? ',' : ':');
                if (sep == std::string::npos)
                    throw parse_error(ln, "bad coefficient '" + tok[i] + "'");
                const std::string x = tok[i].substr(0, sep), y = tok[i].substr(sep + 1);
                if (exact)
                    a.exact.emplace_back(parse_double(x, ln), parse_double(y, ln));
                else
                {
                    a.amplitude_codes.push_back(parse_int(x, ln));
                    a.phase_codes.push_back(parse_int(y, ln));
                }
            }
            if (exact)
            {
                double e = 0.0;
                for (const auto &c : a.exact)
                    e += std::norm(c);
                a.degenerate = e == 0.0;
            }
            r.antennas.push_back(std::move(a));
        }
        tok = next();
        if (r.scheme == Scheme::Baseline)
        {
            expect(tok, "indices", 2);
            r.index_bits = parse_int(tok[1], ln);
            for (size_t i = 2; i < tok.size(); ++i)
                r.indices.push_back(parse_int(tok[i], ln));
            tok = next();
        }
        if (tok.size() != 1 || tok[0] != "end")
            throw parse_error(ln, "expected 'end'");
        r.validate();
        return r;
    }

    long long feedback_bits(const FeedbackReport &report)
    {
        const long long U = (long long)report.antennas.size(), Na = report.ports;
        long long bits = 0;
        if (report.quantizer.mode == QuantizerMode::Exact)
            bits += U * Na * exact_bits;
        else
            bits += U * (reference_bits + Na * (report.quantizer.amplitude_bits + report.quantizer.phase_bits));
        bits += (long long)report.indices.size() * report.index_bits;
        return bits;
    }

    long long feedback_bits(const std::string &serialized)
    {
        return feedback_bits(parse_report(serialized));
    }

    long long feedback_bits(Scheme scheme, int ports, int ue_antennas, int antennas, int subbands,
                            const QuantizerConfig &cfg)
    {
        if (scheme == Scheme::Perfect)
            return 0;
        FeedbackReport r;
        r.scheme = scheme;
        r.ports = ports;
        r.quantizer = cfg;
        r.antennas.resize(ue_antennas);
        if (scheme == Scheme::Baseline)
        {
            r.index_bits = bits_for((long long)antennas * subbands);
            r.indices.assign(ports, 0);
        }
        return feedback_bits(r);
    }
}
