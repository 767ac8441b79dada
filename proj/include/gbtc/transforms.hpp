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

#include <vector>

#include "gbtc/mat.hpp"

namespace gbtc::transforms {

/// Regularizer added to mean squared differences before inversion; keeps
/// edge weights finite. Small relative to pixel-scale statistics.
inline constexpr double kDefaultAlpha = 1e-2;

/// Positive edge weights of a path graph on n vertices. w[i] weights the
/// edge between vertices i and i+1.
struct PathGraphWeights {
    int n = 0;
    std::vector<double> w;
};

/// Combinatorial graph Laplacian: symmetric, rows sum to zero,
/// off-diagonals non-positive, positive semidefinite with a constant
/// null vector.
struct LaplacianMatrix {
    Mat m;
};

enum class BasisKind { Dct, Dst, Gbt, Klt };

/// Orthonormal transform with columns as basis vectors.
///
/// Sign convention: in every column the entry of largest magnitude is
/// non-negative, ties resolved at the lowest row index. Column order is
/// fixed by the associated spectrum: ascending Laplacian eigenvalues for
/// Gbt, descending covariance eigenvalues for Klt, natural frequency
/// order for the fixed Dct/Dst bases (whose `eigenvalues` stay empty).
/// Ties between equal eigenvalues keep the solver's resolution order, so
/// identical input bits always produce identical output bits.
struct OrthonormalBasis {
    Mat u;
    BasisKind kind = BasisKind::Dct;
    std::vector<double> eigenvalues;
};

/// Transform coefficients of one n x n block.
using CoeffBlock = Mat;

/// Tridiagonal Laplacian of a path graph from its edge weights.
LaplacianMatrix path_graph_laplacian(const PathGraphWeights& weights);

/// Eigenbasis of a path-graph Laplacian, columns in ascending eigenvalue
/// order. Deterministic: a fixed-sweep tridiagonal QL solver with implicit
/// shifts, tolerance 1e-12, iteration cap 64*n (NumericFailure beyond it).
OrthonormalBasis graph_fourier_basis(const LaplacianMatrix& laplacian);

/// Orthonormal type-II cosine basis.
OrthonormalBasis dct_basis(int n);

/// Orthonormal type-VII sine basis (the ADST of video coding).
OrthonormalBasis dst_basis(int n);

/// Closed-form path weights from mean squared differences between
/// adjacent positions: w[i] = 1 / (msd[i] + 2*alpha).
PathGraphWeights weights_from_msd(const std::vector<double>& msd, double alpha);

/// Separable 2D transform: u_vert^T * block * u_horiz. u_vert acts on the
/// columns of the block, u_horiz on its rows.
CoeffBlock forward_separable(const Mat& block, const OrthonormalBasis& u_vert,
                             const OrthonormalBasis& u_horiz);

/// Inverse of forward_separable: u_vert * coeffs * u_horiz^T.
Mat inverse_separable(const CoeffBlock& coeffs, const OrthonormalBasis& u_vert,
                      const OrthonormalBasis& u_horiz);

/// Eigenbasis of a symmetric PSD covariance matrix, columns in descending
/// eigenvalue order. Deterministic cyclic Jacobi with fixed sweep order.
OrthonormalBasis klt_from_covariance(const Mat& covariance);

/// Applies the shared column sign convention in place.
void apply_sign_convention(Mat& u);

}  // namespace gbtc::transforms
