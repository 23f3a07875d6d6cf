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

// Small feedforward classifiers with exact derivatives.
//
// A ModelGraph maps an input tensor to C logits. Besides plain evaluation it
// provides reverse-mode products J^T u and forward-mode products J v, where J
// is the Jacobian of the logits with respect to the input. Both are exact up
// to floating point; there is no finite differencing anywhere in here.
//
// Supported layers:
//   dense       y = W flatten(x) + b, W stored [out, in] row-major
//   conv2d      stride 1, zero padding, input [C_in, H, W],
//               weights [C_out, C_in, kh, kw]
//   activation  tanh, softplus, relu (subgradient 0 at the kink), square

#ifndef FRINGE_MODEL_H_
#define FRINGE_MODEL_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fringe/tensor.h"

namespace fringe {

enum class LayerKind { kDense, kConv2d, kActivation };
enum class Activation { kNone, kTanh, kSoftplus, kRelu, kSquare };

std::string_view LayerKindName(LayerKind kind);
std::string_view ActivationName(Activation act);
LayerKind ParseLayerKind(std::string_view name);
Activation ParseActivation(std::string_view name);

struct LayerSpec {
  LayerKind kind = LayerKind::kActivation;
  Activation activation = Activation::kNone;
  Tensor weights;
  Tensor bias;
  std::size_t padding = 0;  // conv2d only

  static LayerSpec Dense(Tensor weights, Tensor bias);
  static LayerSpec Conv2d(Tensor weights, Tensor bias, std::size_t padding);
  static LayerSpec Act(Activation activation);
};

struct PredictiveState {
  Tensor logits;
  Tensor probs;
};

// Numerically stable softmax (max subtraction). Probabilities are floored at
// the smallest normal double so they stay strictly positive.
Tensor Softmax(const Tensor& logits);

// KL(p || q) for strictly positive distributions of equal length.
double KlDivergence(const Tensor& p, const Tensor& q);

class ModelGraph {
 public:
  ModelGraph(Shape input_shape, std::size_t class_count,
             std::vector<LayerSpec> layers);

  const Shape& input_shape() const { return input_shape_; }
  std::size_t input_size() const { return ShapeSize(input_shape_); }
  std::size_t class_count() const { return class_count_; }
  const std::vector<LayerSpec>& layers() const { return layers_; }

  Tensor Logits(const Tensor& x) const;
  PredictiveState Forward(const Tensor& x) const;

  // J_F(x)^T u, shaped like x.
  Tensor Vjp(const Tensor& x, const Tensor& u) const;
  // J_F(x) v, length C.
  Tensor Jvp(const Tensor& x, const Tensor& v) const;

  // Gradient of the t-th logit.
  Tensor GradScore(const Tensor& x, std::size_t target) const;

  void CheckInput(const Tensor& x) const;
  void CheckClass(std::size_t target) const;

 private:
  struct LayerShapes {
    Shape in;
    Shape out;
  };

  // Returns the input of every layer plus the final output.
  std::vector<Tensor> Trace(const Tensor& x) const;

  Shape input_shape_;
  std::size_t class_count_;
  std::vector<LayerSpec> layers_;
  std::vector<LayerShapes> shapes_;
};

}  // namespace fringe

#endif  // FRINGE_MODEL_H_
