/*
 * Copyright (C) 2026 the gbtc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace gbtc {

/// Dense row-major matrix of doubles. All blocks, bases and Laplacians in
/// this library are small (up to 16x16), so a plain contiguous buffer with
/// explicit loops is used throughout; no expression templates, no views.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols)
        : rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {
        assert(rows >= 0 && cols >= 0);
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return a_[static_cast<std::size_t>(r) * cols_ + c];
    }
    double operator()(int r, int c) const {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return a_[static_cast<std::size_t>(r) * cols_ + c];
    }

    const std::vector<double>& storage() const { return a_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& m);
double frobenius_norm(const Mat& m);
double max_abs_diff(const Mat& a, const Mat& b);

}  // namespace gbtc
