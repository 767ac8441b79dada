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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbtc/codec.hpp"
#include "gbtc/errors.hpp"
#include "gbtc/eval.hpp"
#include "gbtc/image.hpp"

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

std::uint64_t seed_from_env() {
    const char* env = std::getenv("GBTC_SEED");
    if (!env || !*env) return kDefaultSeed;
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw gbtc::InvalidArgument("GBTC_SEED must be an unsigned integer");
}

gbtc::codec::TransformSet parse_transforms(const std::string& name) {
    if (name == "dct") return gbtc::codec::TransformSet::kDctOnly;
    if (name == "dct+gbt") return gbtc::codec::TransformSet::kDctGbt;
    if (name == "dct+dst") return gbtc::codec::TransformSet::kDctDst;
    throw gbtc::InvalidArgument("unknown --transforms value: " + name);
}

std::vector<std::uint8_t> read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gbtc::IoFailure("cannot open " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw gbtc::IoFailure("read failed for " + path);
    return data;
}

void write_binary(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gbtc::IoFailure("cannot create " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw gbtc::IoFailure("write failed for " + path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gbtc::IoFailure("cannot create " + path);
    out << text;
    if (!out) throw gbtc::IoFailure("write failed for " + path);
}

std::string format_psnr(double v) {
    if (std::isinf(v)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// Flags shared by every command that configures the codec.
struct CodecFlags {
    int qp = 27;
    int block_size = 16;
    int clusters = 8;
    int m_min = 4;
    double rho = 0.1;
    double alpha = gbtc::transforms::kDefaultAlpha;
    double lambda_scale = 0.85;
    std::string transforms = "dct+gbt";

    void attach(CLI::App* cmd, bool with_qp) {
        if (with_qp) cmd->add_option("--qp", qp, "Quantization parameter [0,51]");
        cmd->add_option("--block-size", block_size, "Coding block size (even)");
        cmd->add_option("--clusters", clusters, "Cluster count K");
        cmd->add_option("--m-min", m_min, "Samples required before a cluster's GBT is used");
        cmd->add_option("--rho", rho, "Centroid EMA learning rate");
        cmd->add_option("--alpha", alpha, "Edge weight regularizer");
        cmd->add_option("--lambda-scale", lambda_scale, "RD lambda scale factor");
        cmd->add_option("--transforms", transforms, "Transform scenario")
            ->check(CLI::IsMember({"dct", "dct+gbt", "dct+dst"}));
    }

    gbtc::codec::CodecConfig config(int width, int height) const {
        gbtc::codec::CodecConfig cfg;
        cfg.width = width;
        cfg.height = height;
        cfg.n = block_size;
        cfg.qp = qp;
        cfg.k_clusters = clusters;
        cfg.m_min = m_min;
        cfg.rho = rho;
        cfg.alpha = alpha;
        cfg.lambda_scale = lambda_scale;
        cfg.transform_set = parse_transforms(transforms);
        return cfg;
    }
};

int run_encode(const std::string& input, const std::string& output,
               const CodecFlags& flags) {
    const gbtc::Image img = gbtc::load_pgm(input);
    const gbtc::codec::CodecConfig cfg = flags.config(img.width, img.height);
    const gbtc::codec::EncodeResult res = gbtc::codec::encode_image(img, cfg);
    write_binary(output, res.stream);
    std::printf("%.6f,%s,%.2f\n", res.stats.rate_bpp(),
                format_psnr(gbtc::eval::psnr(img, res.recon)).c_str(),
                res.stats.alt_usage_pct());
    return 0;
}

int run_decode(const std::string& input, const std::string& output,
               const std::string& dump_state) {
    const std::vector<std::uint8_t> stream = read_binary(input);
    const gbtc::codec::DecodeResult res = gbtc::codec::decode_image(stream);
    gbtc::save_pgm(output, res.image);
    if (!dump_state.empty()) write_text(dump_state, res.bank.dump_state());
    return 0;
}

int run_metrics(const std::string& a_path, const std::string& b_path,
                int glnu_levels) {
    const gbtc::Image a = gbtc::load_pgm(a_path);
    const gbtc::Image b = gbtc::load_pgm(b_path);
    std::printf("%s,%.6f,%.2f,%.2f\n",
                format_psnr(gbtc::eval::psnr(a, b)).c_str(),
                gbtc::eval::ssim(a, b), gbtc::eval::glnu(a, glnu_levels),
                gbtc::eval::glnu(b, glnu_levels));
    return 0;
}

int run_pse(const std::string& model_name, std::vector<int> sizes, int nodes,
            int test_samples, int trials, std::uint64_t seed,
            const std::string& out_path) {
    gbtc::transforms::PathGraphWeights weights;
    if (model_name == "uniform")
        weights = gbtc::eval::uniform_path_weights(nodes);
    else if (model_name == "nonuniform")
        weights = gbtc::eval::nonuniform_path_weights();
    else
        throw gbtc::InvalidArgument("unknown --model value: " + model_name);
    const gbtc::eval::GmrfModel model = gbtc::eval::make_path_gmrf(weights);
    std::sort(sizes.begin(), sizes.end());
    const auto results = gbtc::eval::run_pse_experiment(model, sizes,
                                                        test_samples, trials,
                                                        seed);
    std::ostringstream csv;
    csv << "training_size,dct,gbt,klt\n";
    char buf[96];
    for (const gbtc::eval::PseResult& r : results) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f\n", r.training_size,
                      r.dct, r.gbt, r.klt);
        csv << buf;
    }
    if (out_path.empty())
        std::fputs(csv.str().c_str(), stdout);
    else
        write_text(out_path, csv.str());
    return 0;
}

std::vector<std::string> collect_pgms(const std::vector<std::string>& inputs) {
    std::vector<std::string> files;
    for (const std::string& in : inputs) {
        if (fs::is_directory(in)) {
            for (const auto& entry : fs::directory_iterator(in))
                if (entry.is_regular_file() && entry.path().extension() == ".pgm")
                    files.push_back(entry.path().string());
        } else {
            files.push_back(in);
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw gbtc::InvalidArgument("rd-sweep: no input PGM files");
    return files;
}

int run_rd_sweep(const std::vector<std::string>& inputs, std::vector<int> qps,
                 const CodecFlags& flags, const std::string& out_path) {
    if (qps.empty()) throw gbtc::InvalidArgument("rd-sweep: no QP values");
    std::sort(qps.begin(), qps.end());
    const std::vector<std::string> files = collect_pgms(inputs);
    std::ostringstream csv;
    csv << "image,qp,rate_bpp,psnr_db,ssim\n";
    char buf[160];
    for (const std::string& path : files) {
        const gbtc::Image img = gbtc::load_pgm(path);
        const std::string name = fs::path(path).filename().string();
        for (int qp : qps) {
            CodecFlags f = flags;
            f.qp = qp;
            const auto cfg = f.config(img.width, img.height);
            const auto res = gbtc::codec::encode_image(img, cfg);
            std::snprintf(buf, sizeof(buf), "%s,%d,%.6f,%s,%.6f\n",
                          name.c_str(), qp, res.stats.rate_bpp(),
                          format_psnr(gbtc::eval::psnr(img, res.recon)).c_str(),
                          gbtc::eval::ssim(img, res.recon));
            csv << buf;
        }
    }
    if (out_path.empty())
        std::fputs(csv.str().c_str(), stdout);
    else
        write_text(out_path, csv.str());
    return 0;
}

std::map<std::string, std::vector<gbtc::eval::RdPoint>> read_rd_csv(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gbtc::IoFailure("cannot open " + path);
    std::map<std::string, std::vector<gbtc::eval::RdPoint>> groups;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.rfind("image,", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        std::istringstream row(line);
        std::string image, qp, rate, psnr_s, ssim_s;
        if (!std::getline(row, image, ',') || !std::getline(row, qp, ',') ||
            !std::getline(row, rate, ',') || !std::getline(row, psnr_s, ',') ||
            !std::getline(row, ssim_s))
            throw gbtc::InvalidArgument(path + ": malformed CSV row: " + line);
        try {
            gbtc::eval::RdPoint p;
            p.rate_bpp = std::stod(rate);
            p.psnr_db = std::stod(psnr_s);
            p.ssim = std::stod(ssim_s);
            groups[image].push_back(p);
        } catch (const std::exception&) {
            throw gbtc::InvalidArgument(path + ": non-numeric CSV row: " + line);
        }
    }
    if (groups.empty()) throw gbtc::InvalidArgument(path + ": no RD rows");
    return groups;
}

int run_bd_rate(const std::string& anchor_path, const std::string& test_path) {
    const auto anchor = read_rd_csv(anchor_path);
    const auto test = read_rd_csv(test_path);
    double sum = 0.0;
    int count = 0;
    for (const auto& [image, anchor_pts] : anchor) {
        const auto it = test.find(image);
        if (it == test.end())
            throw gbtc::InvalidArgument("bd-rate: image missing from test CSV: " +
                                        image);
        const double bd = gbtc::eval::bd_rate(anchor_pts, it->second);
        std::printf("%s,%.4f\n", image.c_str(), bd);
        sum += bd;
        ++count;
    }
    std::printf("ALL,%.4f\n", sum / count);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "gbtc: adaptive graph-transform image codec and its evaluation tools"};
    app.require_subcommand(1);

    CodecFlags enc_flags;
    std::string enc_in, enc_out;
    CLI::App* enc = app.add_subcommand(
        "encode", "Encode a PGM image; prints rate_bpp,psnr_db,gbt_usage_pct");
    enc->add_option("input", enc_in, "Input PGM (P5) file")->required();
    enc->add_option("output", enc_out, "Output bitstream file")->required();
    enc_flags.attach(enc, true);

    std::string dec_in, dec_out, dec_dump;
    CLI::App* dec = app.add_subcommand("decode", "Decode a bitstream to PGM");
    dec->add_option("input", dec_in, "Input bitstream file")->required();
    dec->add_option("output", dec_out, "Output PGM file")->required();
    dec->add_option("--dump-state", dec_dump,
                    "Write the decoder's final cluster-state dump here");

    std::string met_a, met_b;
    int met_levels = 16;
    CLI::App* met = app.add_subcommand(
        "metrics", "Compare two PGMs; prints psnr_db,ssim,glnu_a,glnu_b");
    met->add_option("a", met_a, "Reference PGM")->required();
    met->add_option("b", met_b, "Test PGM")->required();
    met->add_option("--glnu-levels", met_levels, "Gray-level bins for GLNU");

    std::string pse_model = "uniform", pse_out;
    std::vector<int> pse_sizes = {2,    4,    8,    16,   32,   64,  128,
                                  256,  512,  1024, 2048, 4096, 8192, 16384};
    int pse_nodes = 8, pse_test = 1000, pse_trials = 20;
    std::uint64_t pse_seed = 0;
    CLI::App* pse = app.add_subcommand(
        "pse-experiment",
        "Mean power-spectral-entropy of DCT/GBT/KLT on GMRF samples; "
        "CSV columns: training_size,dct,gbt,klt");
    pse->add_option("--model", pse_model, "GMRF path model")
        ->check(CLI::IsMember({"uniform", "nonuniform"}));
    pse->add_option("--sizes", pse_sizes, "Training set sizes")->delimiter(',');
    pse->add_option("--nodes", pse_nodes, "Path length for the uniform model");
    pse->add_option("--test-samples", pse_test, "Held-out samples per trial");
    pse->add_option("--trials", pse_trials, "Independent repetitions");
    pse->add_option("--seed", pse_seed, "RNG seed (default: GBTC_SEED or 1)");
    pse->add_option("--out", pse_out, "Output CSV path (default stdout)");

    CodecFlags sweep_flags;
    std::vector<std::string> sweep_inputs;
    std::vector<int> sweep_qps = {23, 27, 31, 35, 39};
    std::string sweep_out;
    CLI::App* sweep = app.add_subcommand(
        "rd-sweep",
        "Encode PGMs across QPs; CSV columns: image,qp,rate_bpp,psnr_db,ssim");
    sweep->add_option("inputs", sweep_inputs, "PGM files or directories")
        ->required();
    sweep->add_option("--qps", sweep_qps, "QP values")->delimiter(',');
    sweep_flags.attach(sweep, false);
    sweep->add_option("--out", sweep_out, "Output CSV path (default stdout)");

    std::string bd_anchor, bd_test;
    CLI::App* bd = app.add_subcommand(
        "bd-rate",
        "BD-rate of test vs anchor rd-sweep CSVs; prints image,percent rows "
        "then an ALL,mean row");
    bd->add_option("anchor", bd_anchor, "Anchor rd-sweep CSV")->required();
    bd->add_option("test", bd_test, "Test rd-sweep CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (enc->parsed()) return run_encode(enc_in, enc_out, enc_flags);
        if (dec->parsed()) return run_decode(dec_in, dec_out, dec_dump);
        if (met->parsed()) return run_metrics(met_a, met_b, met_levels);
        if (pse->parsed())
            return run_pse(pse_model, pse_sizes, pse_nodes, pse_test,
                           pse_trials,
                           pse->count("--seed") ? pse_seed : seed_from_env(),
                           pse_out);
        if (sweep->parsed())
            return run_rd_sweep(sweep_inputs, sweep_qps, sweep_flags, sweep_out);
        if (bd->parsed()) return run_bd_rate(bd_anchor, bd_test);
    } catch (const gbtc::IoFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const gbtc::CorruptStream& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const gbtc::InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
