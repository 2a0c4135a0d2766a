// SPDX-License-Identifier: Apache-2.0
//
// fr3chan: large-scale indoor-office channel model for the FR3 bands
// Copyright (C) 2026 The fr3chan Authors
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

// Correlation-matrix plumbing: PSD repair, semi-definite Cholesky, and the
// multi-band joint matrix.

#include "fr3/error.hpp"
#include "fr3/lsp_gen.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace fr3
{

double min_eigenvalue(const Eigen::MatrixXd &symmetric)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericError("eigenvalue decomposition failed");
    return es.eigenvalues().minCoeff();
}

RepairResult nearest_correlation(const CorrelationMatrix &matrix)
{
    const Eigen::MatrixXd &input = matrix.values();
    if (min_eigenvalue(input) >= -kPsdTolerance)
        return {matrix, 0.0, 0};

    Eigen::MatrixXd current = input;
    const Eigen::Index n = current.rows();
    for (int it = 1; it <= kMaxRepairIterations; ++it)
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(current);
        if (es.info() != Eigen::Success)
            throw NumericError("eigenvalue decomposition failed during correlation repair");
        const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
        Eigen::MatrixXd next = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();

        Eigen::VectorXd scale(n);
        for (Eigen::Index i = 0; i < n; ++i)
            scale(i) = next(i, i) > 0.0 ? 1.0 / std::sqrt(next(i, i)) : 1.0;
        next = scale.asDiagonal() * next * scale.asDiagonal();
        next = 0.5 * (next + next.transpose()).eval();
        for (Eigen::Index i = 0; i < n; ++i)
        {
            next(i, i) = 1.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (i != j)
                    next(i, j) = std::clamp(next(i, j), -1.0, 1.0);
        }
        current = next;
        if (min_eigenvalue(current) >= -kPsdTolerance)
        {
            const double change = (current - input).cwiseAbs().maxCoeff();
            return {CorrelationMatrix(matrix.labels(), current), change, it};
        }
    }
    throw NumericError("correlation repair did not converge in " + std::to_string(kMaxRepairIterations) +
                       " iterations");
}

Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd &a, double tol)
{
    const Eigen::Index n = a.rows();
    if (a.cols() != n)
        throw DomainError("psd_cholesky needs a square matrix");
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        const double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
        const double scale = std::max(1.0, std::abs(a(j, j)));
        if (pivot < -tol * scale)
            throw DomainError("matrix is not positive semidefinite (pivot " + std::to_string(pivot) + " at axis " +
                              std::to_string(j) + ")");
        if (pivot <= tol * scale)
        {
            // Null direction: the remaining column must already be explained.
            for (Eigen::Index i = j + 1; i < n; ++i)
            {
                const double resid = a(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
                if (std::abs(resid) > std::sqrt(tol) * scale)
                    throw DomainError("matrix is not positive semidefinite (inconsistent null direction at axis " +
                                      std::to_string(j) + ")");
            }
            continue;
        }
        const double d = std::sqrt(pivot);
        l(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i)
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
    }
    return l;
}

namespace
{

std::vector<Lsp> axes_for(const CorrelationMatrix &corr)
{
    std::vector<Lsp> axes;
    for (const auto &label : corr.labels())
    {
        bool found = false;
        for (Lsp l : {Lsp::SF, Lsp::DS, Lsp::ASA, Lsp::ZSA})
            if (label == lsp_label(l))
            {
                axes.push_back(l);
                found = true;
            }
        if (!found)
            throw DomainError("unknown LSP axis '" + label + "'");
    }
    return axes;
}

} // namespace

CorrelationMatrix build_joint_correlation(std::span<const Band> bands, std::span<const CorrelationMatrix> param_corr,
                                          const CorrelationMatrix &interfreq_ds,
                                          const CorrelationMatrix &interfreq_sf, const JointOptions &options)
{
    if (bands.empty() || bands.size() != param_corr.size())
        throw DomainError("joint correlation needs one per-band matrix per band");
    if (std::abs(options.asa_zsa_interfreq_corr) > 1.0)
        throw DomainError("ASA/ZSA inter-frequency correlation must lie in [-1, 1]");

    struct Axis
    {
        std::size_t band;
        Lsp lsp;
        std::size_t local;
    };
    std::vector<Axis> axes;
    std::vector<std::string> labels;
    std::vector<std::vector<Lsp>> per_band;
    for (std::size_t b = 0; b < bands.size(); ++b)
    {
        per_band.push_back(axes_for(param_corr[b]));
        for (std::size_t k = 0; k < per_band[b].size(); ++k)
        {
            axes.push_back({b, per_band[b][k], k});
            labels.push_back(std::string(lsp_label(per_band[b][k])) + "@" + std::string(band_label(bands[b])));
        }
    }

    // Same LSP on bands a != b.
    auto same_lsp = [&](Lsp lsp, std::size_t a, std::size_t b) -> double {
        const std::string la(band_label(bands[a]));
        const std::string lb(band_label(bands[b]));
        switch (lsp)
        {
        case Lsp::DS:
            return interfreq_ds.at(la, lb);
        case Lsp::SF:
            return interfreq_sf.at(la, lb);
        default:
            return options.asa_zsa_interfreq_corr;
        }
    };
    auto local_index = [&](std::size_t b, Lsp lsp) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < per_band[b].size(); ++k)
            if (per_band[b][k] == lsp)
                return k;
        return std::nullopt;
    };

    const auto n = static_cast<Eigen::Index>(axes.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
        {
            if (i == j)
                continue;
            const Axis &x = axes[static_cast<std::size_t>(i)];
            const Axis &y = axes[static_cast<std::size_t>(j)];
            if (x.band == y.band)
            {
                m(i, j) = param_corr[x.band](x.local, y.local);
            }
            else if (x.lsp == y.lsp)
            {
                m(i, j) = same_lsp(x.lsp, x.band, y.band);
            }
            else if (options.cross_terms == CrossTermRule::Product)
            {
                // X on band a, Y on band b: via Y_a and via X_b, whichever exist.
                double acc = 0.0;
                if (const auto ya = local_index(x.band, y.lsp))
                    acc += param_corr[x.band](x.local, *ya) * same_lsp(y.lsp, x.band, y.band);
                if (const auto xb = local_index(y.band, x.lsp))
                    acc += same_lsp(x.lsp, x.band, y.band) * param_corr[y.band](*xb, y.local);
                m(i, j) = 0.5 * acc;
            }
        }
    return CorrelationMatrix(std::move(labels), m);
}

} // namespace fr3
