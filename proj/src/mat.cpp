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

#include "gbtc/mat.hpp"

#include <cmath>

#include "gbtc/errors.hpp"

namespace gbtc {

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows())
        throw InvalidArgument("matmul: inner dimensions disagree");
    Mat out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Mat transpose(const Mat& m) {
    Mat out(m.cols(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
    return out;
}

double frobenius_norm(const Mat& m) {
    double s = 0.0;
    for (double v : m.storage()) s += v * v;
    return std::sqrt(s);
}

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument("max_abs_diff: shapes disagree");
    double d = 0.0;
    for (std::size_t i = 0; i < a.storage().size(); ++i)
        d = std::max(d, std::abs(a.storage()[i] - b.storage()[i]));
    return d;
}

}  // namespace gbtc
