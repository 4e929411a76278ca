/*
 * Copyright 2026 The ergo-bounds Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ergo/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "ergo/error.hpp"
#include "ergo/simd.hpp"

namespace ergo
{

Matrix Matrix::identity(std::size_t n)
{
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
        out(i, i) = 1.0;
    }
    return out;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix out(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        require(rows[i].size() == cols, "ragged matrix rows");
        std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
    }
    return out;
}

std::vector<double> Matrix::left_multiply(std::span<const double> v) const
{
    require(v.size() == rows_, "dimension mismatch in v^T M");
    std::vector<double> out(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
    {
        if (v[i] != 0.0)
        {
            simd::axpy(v[i], row(i), out);
        }
    }
    return out;
}

std::vector<double> Matrix::apply(std::span<const double> f) const
{
    require(f.size() == cols_, "dimension mismatch in M f");
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
    {
        out[i] = simd::dot(row(i), f);
    }
    return out;
}

double Matrix::max_abs_diff(const Matrix& other) const
{
    require(rows_ == other.rows_ && cols_ == other.cols_, "dimension mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k)
    {
        worst = std::max(worst, std::fabs(data_[k] - other.data_[k]));
    }
    return worst;
}

std::vector<std::vector<double>> Matrix::to_rows() const
{
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
    {
        out[i].assign(row(i).begin(), row(i).end());
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    require(a.cols() == b.rows(), "dimension mismatch in matrix product");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        auto dst = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const double aik = a(i, k);
            if (aik != 0.0)
            {
                simd::axpy(aik, b.row(k), dst);
            }
        }
    }
    return out;
}

double spectral_radius(const Matrix& m)
{
    require(m.rows() == m.cols(), "spectral radius needs a square matrix");
    if (m.rows() == 0)
    {
        return 0.0;
    }
    Eigen::MatrixXd dense(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
    {
        for (std::size_t j = 0; j < m.cols(); ++j)
        {
            dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ergo
