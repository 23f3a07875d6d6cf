/* Copyright 2026 The FRInGe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fringe/grid.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace fringe {

std::optional<GridShape> GridFromShape(const Shape& shape) {
  if (shape.size() < 2) return std::nullopt;
  GridShape g;
  g.height = shape[shape.size() - 2];
  g.width = shape[shape.size() - 1];
  g.channels = 1;
  for (std::size_t i = 0; i + 2 < shape.size(); ++i) g.channels *= shape[i];
  return g;
}

GridShape GridOrRow(const Shape& shape) {
  if (auto g = GridFromShape(shape)) return *g;
  return GridShape{1, 1, ShapeSize(shape)};
}

namespace {

void RequireGrid(const GridShape& grid, const Tensor& u, const char* what) {
  if (u.size() != grid.size()) {
    throw ShapeError(fmt::format("{}: tensor has {} values, grid needs {}",
                                 what, u.size(), grid.size()));
  }
}

std::size_t Clamp(std::ptrdiff_t i, std::size_t n) {
  if (i < 0) return 0;
  if (i >= static_cast<std::ptrdiff_t>(n)) return n - 1;
  return static_cast<std::size_t>(i);
}

// Applies a 1-D kernel of size 2r+1 along rows (axis = 1) or columns
// (axis = 0) of every channel plane.
Tensor Convolve1d(const GridShape& grid, const Tensor& u,
                  const std::vector<double>& kernel, int axis) {
  const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  Tensor out(u.shape());
  auto src = u.values();
  auto dst = out.mutable_values();
  for (std::size_t c = 0; c < grid.channels; ++c) {
    const std::size_t base = c * grid.plane();
    for (std::size_t i = 0; i < grid.height; ++i) {
      for (std::size_t j = 0; j < grid.width; ++j) {
        double acc = 0.0;
        for (std::ptrdiff_t o = -r; o <= r; ++o) {
          std::size_t ii = i;
          std::size_t jj = j;
          if (axis == 0) {
            ii = Clamp(static_cast<std::ptrdiff_t>(i) + o, grid.height);
          } else {
            jj = Clamp(static_cast<std::ptrdiff_t>(j) + o, grid.width);
          }
          acc += kernel[static_cast<std::size_t>(o + r)] *
                 src[base + ii * grid.width + jj];
        }
        dst[base + i * grid.width + j] = acc;
      }
    }
  }
  return out;
}

}  // namespace

Tensor Laplacian(const GridShape& grid, const Tensor& u) {
  RequireGrid(grid, u, "laplacian");
  Tensor out(u.shape());
  auto src = u.values();
  auto dst = out.mutable_values();
  const auto h = static_cast<std::ptrdiff_t>(grid.height);
  const auto w = static_cast<std::ptrdiff_t>(grid.width);
  for (std::size_t c = 0; c < grid.channels; ++c) {
    const double* plane = src.data() + c * grid.plane();
    double* res = dst.data() + c * grid.plane();
    for (std::ptrdiff_t i = 0; i < h; ++i) {
      for (std::ptrdiff_t j = 0; j < w; ++j) {
        auto at = [&](std::ptrdiff_t a, std::ptrdiff_t b) {
          return plane[Clamp(a, grid.height) * grid.width + Clamp(b, grid.width)];
        };
        const double v = plane[i * w + j];
        res[i * w + j] = (v - at(i - 1, j)) + (v - at(i + 1, j)) +
                         (v - at(i, j - 1)) + (v - at(i, j + 1));
      }
    }
  }
  return out;
}

Tensor LaplacianTranspose(const GridShape& grid, const Tensor& w) {
  RequireGrid(grid, w, "laplacian_transpose");
  Tensor out(w.shape());
  auto src = w.values();
  auto dst = out.mutable_values();
  const auto h = static_cast<std::ptrdiff_t>(grid.height);
  const auto wd = static_cast<std::ptrdiff_t>(grid.width);
  for (std::size_t c = 0; c < grid.channels; ++c) {
    const double* plane = src.data() + c * grid.plane();
    double* res = dst.data() + c * grid.plane();
    for (std::ptrdiff_t i = 0; i < h; ++i) {
      for (std::ptrdiff_t j = 0; j < wd; ++j) {
        const double v = plane[i * wd + j];
        res[i * wd + j] += 4.0 * v;
        const std::ptrdiff_t di[4] = {-1, 1, 0, 0};
        const std::ptrdiff_t dj[4] = {0, 0, -1, 1};
        for (int n = 0; n < 4; ++n) {
          const std::size_t a = Clamp(i + di[n], grid.height);
          const std::size_t b = Clamp(j + dj[n], grid.width);
          res[a * grid.width + b] -= v;
        }
      }
    }
  }
  return out;
}

Tensor GaussianBlur(const GridShape& grid, const Tensor& u, double sigma,
                    std::size_t radius) {
  RequireGrid(grid, u, "gaussian_blur");
  if (!(sigma > 0.0)) throw Error("gaussian_blur: sigma must be positive");
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (std::size_t k = 0; k < kernel.size(); ++k) {
    const double d = static_cast<double>(k) - static_cast<double>(radius);
    kernel[k] = std::exp(-0.5 * d * d / (sigma * sigma));
    total += kernel[k];
  }
  for (double& k : kernel) k /= total;
  return Convolve1d(grid, Convolve1d(grid, u, kernel, 1), kernel, 0);
}

Tensor BoxBlur(const GridShape& grid, const Tensor& u, std::size_t k) {
  RequireGrid(grid, u, "box_blur");
  if (k % 2 == 0) throw Error("box_blur: kernel size must be odd");
  std::vector<double> kernel(k, 1.0 / static_cast<double>(k));
  return Convolve1d(grid, Convolve1d(grid, u, kernel, 1), kernel, 0);
}

}  // namespace fringe
