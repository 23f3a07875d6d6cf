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

// Spatial stencils on [channels, H, W] grids. All of them use replicate
// boundary handling: an out-of-range neighbor reads the nearest edge value.

#ifndef FRINGE_GRID_H_
#define FRINGE_GRID_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "fringe/tensor.h"

namespace fringe {

struct GridShape {
  std::size_t channels = 1;
  std::size_t height = 1;
  std::size_t width = 1;

  std::size_t plane() const { return height * width; }
  std::size_t size() const { return channels * height * width; }
};

// Interprets a tensor shape as a spatial grid. Rank 2 is [H, W], rank 3 is
// [C, H, W]; higher ranks fold leading axes into channels. Rank 1 vectors
// have no spatial structure and yield nullopt.
std::optional<GridShape> GridFromShape(const Shape& shape);

// Like GridFromShape, but a rank-1 vector becomes a single 1 x n row.
GridShape GridOrRow(const Shape& shape);

// 5-point Laplacian: 4u - (up + down + left + right).
Tensor Laplacian(const GridShape& grid, const Tensor& u);
// Adjoint of Laplacian, written as a scatter so it is an independent code
// path from the gather above.
Tensor LaplacianTranspose(const GridShape& grid, const Tensor& w);

// Normalized Gaussian filter, applied separably per channel with kernel
// radius `radius` (kernel size 2 * radius + 1).
Tensor GaussianBlur(const GridShape& grid, const Tensor& u, double sigma,
                    std::size_t radius);

// Box filter of odd size k, stride 1, same-size output.
Tensor BoxBlur(const GridShape& grid, const Tensor& u, std::size_t k);

}  // namespace fringe

#endif  // FRINGE_GRID_H_
