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

#include "gbtc/online_learning.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gbtc/errors.hpp"

namespace gbtc::online_learning {

namespace {

void check_block(const Mat& block, int n) {
    if (block.rows() != n || block.cols() != n)
        throw InvalidArgument("block size does not match bank configuration");
}

void append_hexfloats(std::ostringstream& out, const char* label,
                      const std::vector<double>& v) {
    out << label;
    char buf[48];
    for (double x : v) {
        std::snprintf(buf, sizeof(buf), " %a", x);
        out << buf;
    }
    out << '\n';
}

}  // namespace

BlockTemplate extract_template(const Image& recon, int row, int col, int n) {
    if (n < 2) throw InvalidArgument("extract_template: n must be >= 2");
    if (row % n != 0 || col % n != 0)
        throw InvalidArgument("extract_template: position off the block grid");
    if (row + n > recon.height || col + n > recon.width)
        throw InvalidArgument("extract_template: block outside the image");
    if (row < n || col < n)
        throw TemplateUnavailable(
            "no template in the first block row or column");
    BlockTemplate t;
    t.n = n;
    t.row = row;
    t.col = col;
    t.z.reserve(static_cast<std::size_t>(3) * n * n);
    for (int y = 0; y < 2 * n; ++y) {
        for (int x = 0; x < 2 * n; ++x) {
            if (y >= n && x >= n) continue;
            t.z.push_back(
                static_cast<double>(recon.at(row - n + y, col - n + x)));
        }
    }
    return t;
}

std::pair<std::vector<double>, std::vector<double>> block_ssd_sums(
    const Mat& block) {
    if (block.rows() != block.cols() || block.rows() < 2)
        throw InvalidArgument("block_ssd_sums: block must be square, n >= 2");
    const int n = block.rows();
    std::vector<double> vert(static_cast<std::size_t>(n - 1), 0.0);
    std::vector<double> horiz(static_cast<std::size_t>(n - 1), 0.0);
    for (int u = 0; u < n - 1; ++u) {
        for (int i = 0; i < n; ++i) {
            const double dv = block(u, i) - block(u + 1, i);
            const double dh = block(i, u) - block(i, u + 1);
            vert[static_cast<std::size_t>(u)] += dv * dv;
            horiz[static_cast<std::size_t>(u)] += dh * dh;
        }
    }
    return {std::move(vert), std::move(horiz)};
}

void update_centroid(ClusterState& cluster, const std::vector<double>& z,
                     double rho) {
    if (!(rho > 0.0) || rho > 1.0)
        throw InvalidArgument("update_centroid: rho must be in (0, 1]");
    if (z.size() != cluster.centroid.size())
        throw InvalidArgument("update_centroid: template length mismatch");
    for (std::size_t i = 0; i < z.size(); ++i)
        cluster.centroid[i] += rho * (z[i] - cluster.centroid[i]);
}

void update_msd(ClusterState& cluster, const Mat& block) {
    const int n = block.rows();
    if (block.cols() != n || n < 2)
        throw InvalidArgument("update_msd: block must be square, n >= 2");
    if (cluster.m == 0 && cluster.msd_vert.empty()) {
        cluster.msd_vert.assign(static_cast<std::size_t>(n - 1), 0.0);
        cluster.msd_horiz.assign(static_cast<std::size_t>(n - 1), 0.0);
    }
    if (static_cast<std::size_t>(n - 1) != cluster.msd_vert.size() ||
        cluster.msd_vert.size() != cluster.msd_horiz.size())
        throw InvalidArgument("update_msd: block size mismatch");
    const auto [vert, horiz] = block_ssd_sums(block);
    const double m = static_cast<double>(cluster.m);
    const double denom = static_cast<double>(n) * (m + 1.0);
    for (std::size_t u = 0; u + 1 < static_cast<std::size_t>(n); ++u) {
        cluster.msd_vert[u] = (n * m * cluster.msd_vert[u] + vert[u]) / denom;
        cluster.msd_horiz[u] = (n * m * cluster.msd_horiz[u] + horiz[u]) / denom;
    }
    cluster.m += 1;
}

ClusterBank::ClusterBank(int k, int n, double rho, double alpha, int m_min)
    : n_(n), rho_(rho), alpha_(alpha), m_min_(m_min) {
    if (k < 1) throw InvalidArgument("ClusterBank: K must be >= 1");
    if (n < 2) throw InvalidArgument("ClusterBank: n must be >= 2");
    if (!(rho > 0.0) || rho > 1.0)
        throw InvalidArgument("ClusterBank: rho must be in (0, 1]");
    if (!(alpha > 0.0)) throw InvalidArgument("ClusterBank: alpha must be > 0");
    if (m_min < 1) throw InvalidArgument("ClusterBank: m_min must be >= 1");
    clusters_.resize(static_cast<std::size_t>(k));
    for (ClusterState& c : clusters_) {
        c.centroid.assign(static_cast<std::size_t>(3) * n * n, 0.0);
        c.msd_vert.assign(static_cast<std::size_t>(n - 1), 0.0);
        c.msd_horiz.assign(static_cast<std::size_t>(n - 1), 0.0);
    }
}

const ClusterState& ClusterBank::cluster(int index) const {
    if (index < 0 || index >= k())
        throw InvalidArgument("ClusterBank: cluster index out of range");
    return clusters_[static_cast<std::size_t>(index)];
}

int ClusterBank::nearest_cluster(const BlockTemplate& z) const {
    if (!fully_initialized())
        throw InvalidArgument("nearest_cluster: bank not fully initialized");
    if (z.z.size() != static_cast<std::size_t>(3) * n_ * n_)
        throw InvalidArgument("nearest_cluster: template length mismatch");
    int best = 0;
    double best_d2 = -1.0;
    for (int idx = 0; idx < k(); ++idx) {
        const std::vector<double>& c =
            clusters_[static_cast<std::size_t>(idx)].centroid;
        double d2 = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double d = z.z[i] - c[i];
            d2 += d * d;
        }
        if (best_d2 < 0.0 || d2 < best_d2) {
            best_d2 = d2;
            best = idx;
        }
    }
    return best;
}

bool ClusterBank::gbt_available(int index) const {
    return cluster(index).m >= m_min_;
}

std::pair<transforms::OrthonormalBasis, transforms::OrthonormalBasis>
ClusterBank::derive_gbt(int index) const {
    if (!gbt_available(index))
        throw InvalidArgument("derive_gbt: cluster has too few samples");
    const ClusterState& c = cluster(index);
    auto u_vert = transforms::graph_fourier_basis(transforms::path_graph_laplacian(
        transforms::weights_from_msd(c.msd_vert, alpha_)));
    auto u_horiz = transforms::graph_fourier_basis(transforms::path_graph_laplacian(
        transforms::weights_from_msd(c.msd_horiz, alpha_)));
    return {std::move(u_vert), std::move(u_horiz)};
}

int ClusterBank::process_block(const BlockTemplate& z, const Mat& recon_block) {
    check_block(recon_block, n_);
    if (z.z.size() != static_cast<std::size_t>(3) * n_ * n_)
        throw InvalidArgument("process_block: template length mismatch");
    if (!fully_initialized()) {
        const int idx = init_count_;
        ClusterState& c = clusters_[static_cast<std::size_t>(idx)];
        c.centroid = z.z;
        update_msd(c, recon_block);
        ++init_count_;
        return idx;
    }
    const int idx = nearest_cluster(z);
    ClusterState& c = clusters_[static_cast<std::size_t>(idx)];
    update_centroid(c, z.z, rho_);
    update_msd(c, recon_block);
    return idx;
}

std::string ClusterBank::dump_state() const {
    std::ostringstream out;
    char buf[48];
    out << "bank K=" << k() << " n=" << n_ << " m_min=" << m_min_;
    std::snprintf(buf, sizeof(buf), " rho=%a alpha=%a", rho_, alpha_);
    out << buf << " init_count=" << init_count_ << '\n';
    for (int idx = 0; idx < k(); ++idx) {
        const ClusterState& c = clusters_[static_cast<std::size_t>(idx)];
        out << "cluster " << idx << " M=" << c.m << '\n';
        append_hexfloats(out, "centroid", c.centroid);
        append_hexfloats(out, "msd_vert", c.msd_vert);
        append_hexfloats(out, "msd_horiz", c.msd_horiz);
    }
    return out.str();
}

}  // namespace gbtc::online_learning
