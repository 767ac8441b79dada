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
#include <cstdint>
#include <string>
#include <vector>

namespace gbtc {

/// 8-bit grayscale image, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h)
        : width(w), height(h),
          pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

    std::uint8_t& at(int y, int x) {
        assert(x >= 0 && x < width && y >= 0 && y < height);
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t at(int y, int x) const {
        assert(x >= 0 && x < width && y >= 0 && y < height);
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

/// Reads a binary (P5) PGM file with maxval <= 255. Throws IoFailure on
/// missing files, truncated data or unsupported headers.
Image load_pgm(const std::string& path);

/// Writes a binary (P5) PGM file with maxval 255.
void save_pgm(const std::string& path, const Image& image);

}  // namespace gbtc
