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

#include "gbtc/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gbtc/errors.hpp"

namespace gbtc::transforms {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEigTol = 1e-12;

// Tridiagonal QL with implicit shifts (Numerical Recipes "tqli" layout).
// d holds the diagonal, e the subdiagonal in e[0..n-2]; on return d holds
// eigenvalues and the columns of z the matching eigenvectors. z must come
// in as the identity. The rotation schedule depends only on the input
// values, so equal inputs give bit-equal outputs on every build.
void tql_implicit_shift(std::vector<double>& d, std::vector<double>& e, Mat& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e.resize(static_cast<std::size_t>(n), 0.0);
    const int cap = 64 * n;
    int iters = 0;
    for (int l = 0; l < n; ++l) {
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEigTol * dd) break;
            }
            if (m == l) break;
            if (++iters > cap)
                throw NumericFailure("tridiagonal QL did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool early = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for (int k = 0; k < n; ++k) {
                    f = z(k, i + 1);
                    z(k, i + 1) = s * z(k, i) + c * f;
                    z(k, i) = c * z(k, i) - s * f;
                }
            }
            if (early) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

// Cyclic Jacobi for dense symmetric matrices, fixed row-major sweep order.
void jacobi_symmetric(Mat& a, Mat& v, std::vector<double>& eig) {
    const int n = a.rows();
    v = Mat::identity(n);
    const double scale = std::max(1.0, frobenius_norm(a));
    const int max_sweeps = 64;
    for (int sweep = 0;; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(2.0 * off) <= kEigTol * scale) break;
        if (sweep >= max_sweeps)
            throw NumericFailure("Jacobi eigensolver did not converge");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    std::copysign(1.0, theta) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(p, k) = a(k, p);
                    a(k, q) = s * akp + c * akq;
                    a(q, k) = a(k, q);
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    eig.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a(i, i);
}

// Reorders columns of u (and eig) by the given index permutation.
void permute_columns(Mat& u, std::vector<double>& eig,
                     const std::vector<int>& idx) {
    const int n = u.rows();
    Mat out(n, n);
    std::vector<double> eout(eig.size());
    for (int j = 0; j < n; ++j) {
        const int src = idx[static_cast<std::size_t>(j)];
        eout[static_cast<std::size_t>(j)] = eig[static_cast<std::size_t>(src)];
        for (int i = 0; i < n; ++i) out(i, j) = u(i, src);
    }
    u = std::move(out);
    eig = std::move(eout);
}

void check_basis_shapes(const Mat& block, const OrthonormalBasis& u_vert,
                        const OrthonormalBasis& u_horiz) {
    if (block.rows() != block.cols())
        throw InvalidArgument("separable transform requires a square block");
    const int n = block.rows();
    if (u_vert.u.rows() != n || u_vert.u.cols() != n || u_horiz.u.rows() != n ||
        u_horiz.u.cols() != n)
        throw InvalidArgument("basis dimensions do not match block size");
}

}  // namespace

LaplacianMatrix path_graph_laplacian(const PathGraphWeights& weights) {
    const int n = weights.n;
    if (n < 2) throw InvalidArgument("path graph needs at least 2 vertices");
    if (static_cast<int>(weights.w.size()) != n - 1)
        throw InvalidArgument("path graph on n vertices needs n-1 weights");
    for (double w : weights.w)
        if (!(w > 0.0) || !std::isfinite(w))
            throw InvalidArgument("path weights must be positive and finite");
    LaplacianMatrix lap{Mat(n, n)};
    Mat& m = lap.m;
    for (int i = 0; i < n - 1; ++i) {
        const double w = weights.w[static_cast<std::size_t>(i)];
        m(i, i) += w;
        m(i + 1, i + 1) += w;
        m(i, i + 1) -= w;
        m(i + 1, i) -= w;
    }
    return lap;
}

OrthonormalBasis graph_fourier_basis(const LaplacianMatrix& laplacian) {
    const Mat& m = laplacian.m;
    const int n = m.rows();
    if (n < 1 || m.cols() != n)
        throw InvalidArgument("Laplacian must be square and non-empty");
    std::vector<double> d(static_cast<std::size_t>(n));
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        d[static_cast<std::size_t>(i)] = m(i, i);
        if (i + 1 < n) {
            if (m(i, i + 1) != m(i + 1, i))
                throw InvalidArgument("Laplacian must be symmetric");
            e[static_cast<std::size_t>(i)] = m(i, i + 1);
        }
        for (int j = i + 2; j < n; ++j)
            if (m(i, j) != 0.0 || m(j, i) != 0.0)
                throw InvalidArgument("expected a tridiagonal path Laplacian");
    }
    OrthonormalBasis basis;
    basis.kind = BasisKind::Gbt;
    basis.u = Mat::identity(n);
    tql_implicit_shift(d, e, basis.u);
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)];
    });
    basis.eigenvalues = d;
    permute_columns(basis.u, basis.eigenvalues, idx);
    apply_sign_convention(basis.u);
    return basis;
}

OrthonormalBasis dct_basis(int n) {
    if (n < 1) throw InvalidArgument("dct_basis: n must be positive");
    OrthonormalBasis basis;
    basis.kind = BasisKind::Dct;
    basis.u = Mat(n, n);
    const double c0 = std::sqrt(1.0 / n);
    const double ck = std::sqrt(2.0 / n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            basis.u(j, k) = (k == 0 ? c0 : ck) *
                            std::cos(kPi * (2.0 * j + 1.0) * k / (2.0 * n));
    apply_sign_convention(basis.u);
    return basis;
}

OrthonormalBasis dst_basis(int n) {
    if (n < 1) throw InvalidArgument("dst_basis: n must be positive");
    OrthonormalBasis basis;
    basis.kind = BasisKind::Dst;
    basis.u = Mat(n, n);
    const double norm = 2.0 / std::sqrt(2.0 * n + 1.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            basis.u(j, k) = norm * std::sin(kPi * (2.0 * j + 1.0) * (k + 1.0) /
                                            (2.0 * n + 1.0));
    apply_sign_convention(basis.u);
    return basis;
}

PathGraphWeights weights_from_msd(const std::vector<double>& msd, double alpha) {
    if (msd.empty()) throw InvalidArgument("weights_from_msd: empty msd");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidArgument("weights_from_msd: alpha must be positive");
    PathGraphWeights weights;
    weights.n = static_cast<int>(msd.size()) + 1;
    weights.w.reserve(msd.size());
    for (double delta : msd) {
        if (!(delta >= 0.0) || !std::isfinite(delta))
            throw InvalidArgument("weights_from_msd: msd must be non-negative");
        weights.w.push_back(1.0 / (delta + 2.0 * alpha));
    }
    return weights;
}

CoeffBlock forward_separable(const Mat& block, const OrthonormalBasis& u_vert,
                             const OrthonormalBasis& u_horiz) {
    check_basis_shapes(block, u_vert, u_horiz);
    return matmul(matmul(transpose(u_vert.u), block), u_horiz.u);
}

Mat inverse_separable(const CoeffBlock& coeffs, const OrthonormalBasis& u_vert,
                      const OrthonormalBasis& u_horiz) {
    check_basis_shapes(coeffs, u_vert, u_horiz);
    return matmul(matmul(u_vert.u, coeffs), transpose(u_horiz.u));
}

OrthonormalBasis klt_from_covariance(const Mat& covariance) {
    const int n = covariance.rows();
    if (n < 1 || covariance.cols() != n)
        throw InvalidArgument("covariance must be square and non-empty");
    double max_abs = 0.0;
    double asym = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            max_abs = std::max(max_abs, std::abs(covariance(i, j)));
            asym = std::max(asym, std::abs(covariance(i, j) - covariance(j, i)));
        }
    }
    if (asym > 1e-9 * std::max(1.0, max_abs))
        throw InvalidArgument("covariance must be symmetric");
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = 0.5 * (covariance(i, j) + covariance(j, i));
    OrthonormalBasis basis;
    basis.kind = BasisKind::Klt;
    jacobi_symmetric(a, basis.u, basis.eigenvalues);
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
        return basis.eigenvalues[static_cast<std::size_t>(x)] >
               basis.eigenvalues[static_cast<std::size_t>(y)];
    });
    permute_columns(basis.u, basis.eigenvalues, idx);
    apply_sign_convention(basis.u);
    return basis;
}

void apply_sign_convention(Mat& u) {
    // Entries within one part in 1e9 of the column maximum count as tied, so
    // independently computed copies of the same basis resolve ties the same
    // way despite last-ulp rounding differences.
    for (int j = 0; j < u.cols(); ++j) {
        double best = 0.0;
        for (int i = 0; i < u.rows(); ++i)
            best = std::max(best, std::abs(u(i, j)));
        if (best == 0.0) continue;
        const double cut = best * (1.0 - 1e-9);
        int arg = 0;
        for (int i = 0; i < u.rows(); ++i) {
            if (std::abs(u(i, j)) >= cut) {
                arg = i;
                break;
            }
        }
        if (u(arg, j) < 0.0)
            for (int i = 0; i < u.rows(); ++i) u(i, j) = -u(i, j);
    }
}

}  // namespace gbtc::transforms
