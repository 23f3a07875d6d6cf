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
#include <utility>

#include <fmt/format.h>

namespace fringe {

std::size_t ShapeSize(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return shape.empty() ? 0 : n;
}

std::string ShapeToString(const Shape& shape) {
  return fmt::format("[{}]", fmt::join(shape, ","));
}

namespace {

void ValidateShape(const Shape& shape) {
  if (shape.empty()) throw ShapeError("tensor shape must have rank >= 1");
  for (std::size_t e : shape) {
    if (e == 0) {
      throw ShapeError("tensor extents must be positive, got " +
                       ShapeToString(shape));
    }
  }
}

void RequireSameShape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.SameShape(b)) {
    throw ShapeError(fmt::format("{}: shape mismatch {} vs {}", op,
                                 ShapeToString(a.shape()),
                                 ShapeToString(b.shape())));
  }
}

}  // namespace

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  ValidateShape(shape_);
  data_.assign(ShapeSize(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  ValidateShape(shape_);
  if (ShapeSize(shape_) != data_.size()) {
    throw ShapeError(fmt::format("shape {} needs {} values, got {}",
                                 ShapeToString(shape_), ShapeSize(shape_),
                                 data_.size()));
  }
}

Tensor Tensor::Filled(const Shape& shape, double value) {
  Tensor t(shape);
  for (double& v : t.data_) v = value;
  return t;
}

Tensor Tensor::FromVector(std::vector<double> values) {
  Shape shape{values.size()};
  return Tensor(std::move(shape), std::move(values));
}

bool Tensor::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::CheckFinite(const std::string& what) const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw NonFiniteError(
          fmt::format("{}: non-finite value at flat index {}", what, i));
    }
  }
}

Tensor Tensor::Reshaped(Shape shape) const {
  return Tensor(std::move(shape), data_);
}

Tensor Elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "elementwise");
  Tensor out(a.shape());
  auto x = a.values();
  auto y = b.values();
  auto z = out.mutable_values();
  switch (op) {
    case ElementwiseOp::kAdd:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + y[i];
      break;
    case ElementwiseOp::kSub:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] - y[i];
      break;
    case ElementwiseOp::kMul:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] * y[i];
      break;
  }
  out.CheckFinite("elementwise");
  return out;
}

Tensor Scale(const Tensor& a, double s) {
  Tensor out(a.shape());
  auto x = a.values();
  auto z = out.mutable_values();
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = s * x[i];
  return out;
}

Tensor Axpy(const Tensor& a, double s, const Tensor& b) {
  RequireSameShape(a, b, "axpy");
  Tensor out(a.shape());
  auto x = a.values();
  auto y = b.values();
  auto z = out.mutable_values();
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + s * y[i];
  return out;
}

double Dot(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "dot");
  double acc = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double Norm2(const Tensor& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += v * v;
  return std::sqrt(acc);
}

double Sum(const Tensor& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += v;
  return acc;
}

}  // namespace fringe
