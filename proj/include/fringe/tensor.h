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

#ifndef FRINGE_TENSOR_H_
#define FRINGE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fringe {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

using Shape = std::vector<std::size_t>;

std::size_t ShapeSize(const Shape& shape);
std::string ShapeToString(const Shape& shape);

// Dense row-major array of doubles. Extents are strictly positive.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);  // zero-filled
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Zeros(const Shape& shape) { return Tensor(shape); }
  static Tensor Filled(const Shape& shape, double value);
  static Tensor ZerosLike(const Tensor& t) { return Tensor(t.shape()); }
  static Tensor FromVector(std::vector<double> values);  // rank-1

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::size_t rank() const { return shape_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<const double> values() const { return data_; }
  std::span<double> mutable_values() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  bool AllFinite() const;
  // Throws NonFiniteError naming `what` if any entry is NaN/Inf.
  void CheckFinite(const std::string& what) const;

  // Same data, different extents; sizes must agree.
  Tensor Reshaped(Shape shape) const;

  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

enum class ElementwiseOp { kAdd, kSub, kMul };

Tensor Elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b);
inline Tensor Add(const Tensor& a, const Tensor& b) {
  return Elementwise(ElementwiseOp::kAdd, a, b);
}
inline Tensor Sub(const Tensor& a, const Tensor& b) {
  return Elementwise(ElementwiseOp::kSub, a, b);
}
inline Tensor Mul(const Tensor& a, const Tensor& b) {
  return Elementwise(ElementwiseOp::kMul, a, b);
}

Tensor Scale(const Tensor& a, double s);
// a + s * b
Tensor Axpy(const Tensor& a, double s, const Tensor& b);

double Dot(const Tensor& a, const Tensor& b);
double Norm2(const Tensor& a);
double Sum(const Tensor& a);

}  // namespace fringe

#endif  // FRINGE_TENSOR_H_
