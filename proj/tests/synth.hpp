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

// Deterministic synthetic image generators for the test suites. All
// generators are pure functions of their arguments; noise is driven by an
// explicit seed so every run reproduces the same pixels.

#pragma once

#include <cstdint>
#include <vector>

#include "gbtc/image.hpp"
#include "gbtc/mat.hpp"

namespace synth {

gbtc::Image constant(int width, int height, std::uint8_t value);

/// Uniform pseudo-random bytes.
gbtc::Image uniform_noise(int width, int height, std::uint64_t seed);

/// Smooth diagonal luminance ramp with a superimposed low-frequency sine.
gbtc::Image gradient_sine(int width, int height);

/// Sum of a vertical and a horizontal square wave (a plaid). period_* is
/// the full period in pixels, half high and half low.
gbtc::Image plaid(int width, int height, int period_x, int period_y, int lo,
                  int hi);

/// Sum of a vertical and a horizontal sinusoid with real-valued periods.
gbtc::Image sine_plaid(int width, int height, double period_x,
                       double period_y);

/// Hard-edged stripes perpendicular to the direction (a, b):
/// high when ((a*x + b*y) mod period) < period/2.
gbtc::Image diagonal_stripes(int width, int height, int a, int b, int period,
                             int lo, int hi);

gbtc::Image checkerboard(int width, int height, int cell, int lo, int hi);

/// Dark grid lines of the given thickness on a light background.
gbtc::Image grid_lines(int width, int height, int period, int thickness,
                       int fg, int bg);

/// Running-bond brick pattern with dark mortar joints.
gbtc::Image bricks(int width, int height, int brick_w, int brick_h,
                   int mortar);

/// Overlapping random axis-aligned rectangles of random grey levels.
gbtc::Image random_rects(int width, int height, std::uint64_t seed,
                         int count);

/// Five 320x320 images of varied content (noise, smooth, periodic, blocky,
/// composite) used for encoder/decoder state-mirroring checks.
std::vector<gbtc::Image> mirroring_suite();

/// Ten 320x320 regular directional textures used for rate-distortion
/// comparisons between the fixed and the adaptive transform set.
std::vector<gbtc::Image> texture_suite();

/// n x n block of uniform pseudo-random integer pixel values in [0, 255].
gbtc::Mat random_pixel_block(int n, std::uint64_t& state);

}  // namespace synth
