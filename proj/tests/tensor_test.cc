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

#include "fringe/tensor.h"

#include <cmath>

#include <gtest/gtest.h>

namespace fringe {
namespace {

TEST(TensorTest, ElementwiseOps) {
  const Tensor a = Tensor::FromVector({1, 2});
  const Tensor b = Tensor::FromVector({3, 4});
  EXPECT_EQ(Mul(a, b), Tensor::FromVector({3, 8}));
  EXPECT_EQ(Add(a, Tensor::ZerosLike(a)), a);
  EXPECT_EQ(Sub(a, a), Tensor::ZerosLike(a));
  EXPECT_EQ(Axpy(a, 2.0, b), Tensor::FromVector({7, 10}));
  EXPECT_EQ(Scale(a, -1.0), Tensor::FromVector({-1, -2}));
}

TEST(TensorTest, ShapeMismatchThrows) {
  EXPECT_THROW(Add(Tensor::FromVector({1, 2}), Tensor::FromVector({1, 2, 3})),
               ShapeError);
  EXPECT_THROW(Dot(Tensor(Shape{2, 2}), Tensor(Shape{4})), ShapeError);
  EXPECT_THROW(Tensor(Shape{2, 0}), ShapeError);
  EXPECT_THROW(Tensor(Shape{2}, {1.0}), ShapeError);
}

TEST(TensorTest, NonFiniteIsRejected) {
  const Tensor bad = Tensor::FromVector({1.0, NAN});
  EXPECT_FALSE(bad.AllFinite());
  EXPECT_THROW(bad.CheckFinite("probe"), NonFiniteError);
  EXPECT_THROW(Add(bad, bad), NonFiniteError);
}

TEST(TensorTest, DotAndNorm) {
  EXPECT_EQ(Dot(Tensor::FromVector({1, 0}), Tensor::FromVector({0, 1})), 0.0);
  const Tensor u = Tensor::FromVector({0.6, 0.8});
  EXPECT_NEAR(Dot(u, u), 1.0, 1e-15);
  EXPECT_EQ(Dot(Tensor::FromVector({1, 2, 3}), Tensor::FromVector({4, 5, 6})), 32.0);
  EXPECT_EQ(Norm2(Tensor::FromVector({3, 4})), 5.0);
  EXPECT_EQ(Norm2(Tensor::Zeros({7})), 0.0);
  EXPECT_EQ(Norm2(Tensor::FromVector({1, 1, 1, 1})), 2.0);
  EXPECT_EQ(Sum(Tensor::FromVector({1, 2, 3.5})), 6.5);
}

TEST(TensorTest, DotSymmetryAndNormConsistency) {
  const Tensor a({3, 2}, {0.3, -1.2, 4.5, 2.2, -0.7, 1e-3});
  const Tensor b({3, 2}, {1.1, 0.2, -3.3, 0.9, 5.0, -2.0});
  EXPECT_EQ(Dot(a, b), Dot(b, a));
  const double n = Norm2(a);
  EXPECT_NEAR(n * n, Dot(a, a), 1e-12 * Dot(a, a));
}

TEST(TensorTest, ReshapeKeepsData) {
  const Tensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  const Tensor r = a.Reshaped({3, 2});
  EXPECT_EQ(r.shape(), (Shape{3, 2}));
  EXPECT_EQ(r.data(), a.data());
  EXPECT_THROW(a.Reshaped({4}), ShapeError);
  EXPECT_EQ(ShapeToString(a.shape()), "[2,3]");
}

}  // namespace
}  // namespace fringe
