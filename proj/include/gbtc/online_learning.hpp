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

#include <string>
#include <utility>
#include <vector>

#include "gbtc/image.hpp"
#include "gbtc/mat.hpp"
#include "gbtc/transforms.hpp"

namespace gbtc::online_learning {

/// L-shaped causal neighborhood of an n x n block: the 2n x 2n square whose
/// bottom-right quadrant is the block itself, that quadrant excluded. z lists
/// its 3n^2 pixels in raster order over the square.
struct BlockTemplate {
    int n = 0;
    int row = 0;
    int col = 0;
    std::vector<double> z;
};

/// Per-cluster online statistics: sample count, EMA centroid over templates,
/// and mean squared differences between vertically / horizontally adjacent
/// reconstructed pixels (n-1 path edges each).
struct ClusterState {
    int m = 0;
    std::vector<double> centroid;
    std::vector<double> msd_vert;
    std::vector<double> msd_horiz;
};

/// Cuts the template of the block whose top-left pixel is (row, col) out of
/// the reconstructed image. Throws TemplateUnavailable for blocks in the
/// first block row or column.
BlockTemplate extract_template(const Image& recon, int row, int col, int n);

/// Sums of squared differences between adjacent pixels of one n x n block.
/// first = vertical edges (along columns), second = horizontal edges (along
/// rows); each vector has n-1 entries, each entry sums n squared differences.
std::pair<std::vector<double>, std::vector<double>> block_ssd_sums(
    const Mat& block);

/// EMA step c <- c + rho * (z - c).
void update_centroid(ClusterState& cluster, const std::vector<double>& z,
                     double rho);

/// Folds one block's squared-difference sums into the running MSDs:
/// delta <- (n*M*delta + sum) / (n*(M+1)) per edge, then M <- M+1.
void update_msd(ClusterState& cluster, const Mat& block);

/// The K-cluster bank driven identically by encoder and decoder. Strictly
/// sequential: blocks must arrive in raster scan order.
class ClusterBank {
public:
    ClusterBank(int k, int n, double rho, double alpha, int m_min);

    int k() const { return static_cast<int>(clusters_.size()); }
    int n() const { return n_; }
    double rho() const { return rho_; }
    double alpha() const { return alpha_; }
    int m_min() const { return m_min_; }
    int init_count() const { return init_count_; }
    bool fully_initialized() const { return init_count_ == k(); }
    const ClusterState& cluster(int index) const;

    /// Index of the centroid closest to z in squared Euclidean distance,
    /// ties to the lowest index. Requires a fully initialized bank.
    int nearest_cluster(const BlockTemplate& z) const;

    /// True once the cluster has collected at least m_min block samples.
    bool gbt_available(int index) const;

    /// Separable GBT pair (u_vert, u_horiz) from the cluster's MSDs.
    std::pair<transforms::OrthonormalBasis, transforms::OrthonormalBasis>
    derive_gbt(int index) const;

    /// Routes one block through the bank: during warm-up the template seeds
    /// the next centroid and the block seeds its MSDs (M=1); afterwards the
    /// nearest cluster gets the EMA and MSD updates. Returns the cluster
    /// index. Runs for every eligible block regardless of the transform the
    /// coder picked.
    int process_block(const BlockTemplate& z, const Mat& recon_block);

    /// Plain-text state dump with hexfloat doubles; byte-equal dumps mean
    /// bit-equal learning state.
    std::string dump_state() const;

private:
    int n_;
    double rho_;
    double alpha_;
    int m_min_;
    int init_count_ = 0;
    std::vector<ClusterState> clusters_;
};

}  // namespace gbtc::online_learning
