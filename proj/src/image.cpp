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

#include "gbtc/image.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

#include "gbtc/errors.hpp"

namespace gbtc {

namespace {

// Next header token, skipping whitespace and '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parse_header_int(std::istream& in, const char* what) {
    const std::string tok = next_token(in);
    if (tok.empty()) throw IoFailure(std::string("PGM header: missing ") + what);
    int value = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9')
            throw IoFailure(std::string("PGM header: bad ") + what);
        value = value * 10 + (ch - '0');
        if (value > 1 << 20) throw IoFailure(std::string("PGM header: huge ") + what);
    }
    return value;
}

}  // namespace

Image load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    if (next_token(in) != "P5") throw IoFailure(path + ": not a binary PGM (P5)");
    Image img;
    img.width = parse_header_int(in, "width");
    img.height = parse_header_int(in, "height");
    const int maxval = parse_header_int(in, "maxval");
    if (img.width <= 0 || img.height <= 0)
        throw IoFailure(path + ": non-positive dimensions");
    if (maxval <= 0 || maxval > 255)
        throw IoFailure(path + ": only 8-bit PGM is supported");
    // The maxval is followed by exactly one whitespace byte, already
    // consumed by the tokenizer.
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.pixels.size())
        throw IoFailure(path + ": truncated pixel data");
    return img;
}

void save_pgm(const std::string& path, const Image& image) {
    if (image.width <= 0 || image.height <= 0 ||
        image.pixels.size() !=
            static_cast<std::size_t>(image.width) * image.height)
        throw InvalidArgument("save_pgm: malformed image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot create " + path);
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) throw IoFailure("write failed for " + path);
}

}  // namespace gbtc
