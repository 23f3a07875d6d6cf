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

#include "fringe/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

namespace fringe {

std::string_view LayerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kDense:
      return "dense";
    case LayerKind::kConv2d:
      return "conv2d";
    case LayerKind::kActivation:
      return "activation";
  }
  return "?";
}

std::string_view ActivationName(Activation act) {
  switch (act) {
    case Activation::kNone:
      return "none";
    case Activation::kTanh:
      return "tanh";
    case Activation::kSoftplus:
      return "softplus";
    case Activation::kRelu:
      return "relu";
    case Activation::kSquare:
      return "square";
  }
  return "?";
}

LayerKind ParseLayerKind(std::string_view name) {
  if (name == "dense") return LayerKind::kDense;
  if (name == "conv2d") return LayerKind::kConv2d;
  if (name == "activation") return LayerKind::kActivation;
  throw Error(fmt::format("unknown layer kind '{}'", name));
}

Activation ParseActivation(std::string_view name) {
  if (name == "none") return Activation::kNone;
  if (name == "tanh") return Activation::kTanh;
  if (name == "softplus") return Activation::kSoftplus;
  if (name == "relu") return Activation::kRelu;
  if (name == "square") return Activation::kSquare;
  throw Error(fmt::format("unknown activation '{}'", name));
}

LayerSpec LayerSpec::Dense(Tensor weights, Tensor bias) {
  LayerSpec s;
  s.kind = LayerKind::kDense;
  s.weights = std::move(weights);
  s.bias = std::move(bias);
  return s;
}

LayerSpec LayerSpec::Conv2d(Tensor weights, Tensor bias, std::size_t padding) {
  LayerSpec s;
  s.kind = LayerKind::kConv2d;
  s.weights = std::move(weights);
  s.bias = std::move(bias);
  s.padding = padding;
  return s;
}

LayerSpec LayerSpec::Act(Activation activation) {
  LayerSpec s;
  s.kind = LayerKind::kActivation;
  s.activation = activation;
  return s;
}

Tensor Softmax(const Tensor& logits) {
  auto z = logits.values();
  double zmax = -std::numeric_limits<double>::infinity();
  for (double v : z) zmax = std::max(zmax, v);
  Tensor p(logits.shape());
  auto out = p.mutable_values();
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - zmax);
    total += out[i];
  }
  constexpr double kFloor = std::numeric_limits<double>::min();
  for (double& v : out) v = std::max(v / total, kFloor);
  return p;
}

double KlDivergence(const Tensor& p, const Tensor& q) {
  if (p.size() != q.size()) throw ShapeError("kl: length mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) kl += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  return std::max(kl, 0.0);
}

namespace {

double ActivationValue(Activation act, double x) {
  switch (act) {
    case Activation::kNone:
      return x;
    case Activation::kTanh:
      return std::tanh(x);
    case Activation::kSoftplus:
      return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
    case Activation::kRelu:
      return x > 0.0 ? x : 0.0;
    case Activation::kSquare:
      return x * x;
  }
  return x;
}

double ActivationSlope(Activation act, double x) {
  switch (act) {
    case Activation::kNone:
      return 1.0;
    case Activation::kTanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::kSoftplus:
      return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                      : std::exp(x) / (1.0 + std::exp(x));
    case Activation::kRelu:
      return x > 0.0 ? 1.0 : 0.0;
    case Activation::kSquare:
      return 2.0 * x;
  }
  return 1.0;
}

struct ConvDims {
  std::size_t cin, h, w, cout, kh, kw, pad, oh, ow;
};

ConvDims GetConvDims(const Shape& in, const LayerSpec& layer) {
  const Shape& ws = layer.weights.shape();
  ConvDims d{};
  d.cin = in[0];
  d.h = in[1];
  d.w = in[2];
  d.cout = ws[0];
  d.kh = ws[2];
  d.kw = ws[3];
  d.pad = layer.padding;
  d.oh = d.h + 2 * d.pad - d.kh + 1;
  d.ow = d.w + 2 * d.pad - d.kw + 1;
  return d;
}

// out[co, i, j] += sum W[co, ci, a, b] * x[ci, i + a - pad, j + b - pad]
void ConvAccumulate(const ConvDims& d, std::span<const double> w,
                    std::span<const double> x, std::span<double> out) {
  for (std::size_t co = 0; co < d.cout; ++co) {
    for (std::size_t ci = 0; ci < d.cin; ++ci) {
      for (std::size_t a = 0; a < d.kh; ++a) {
        for (std::size_t b = 0; b < d.kw; ++b) {
          const double wv = w[((co * d.cin + ci) * d.kh + a) * d.kw + b];
          for (std::size_t i = 0; i < d.oh; ++i) {
            const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(i + a) -
                                     static_cast<std::ptrdiff_t>(d.pad);
            if (r < 0 || r >= static_cast<std::ptrdiff_t>(d.h)) continue;
            for (std::size_t j = 0; j < d.ow; ++j) {
              const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(j + b) -
                                       static_cast<std::ptrdiff_t>(d.pad);
              if (c < 0 || c >= static_cast<std::ptrdiff_t>(d.w)) continue;
              out[(co * d.oh + i) * d.ow + j] +=
                  wv * x[(ci * d.h + static_cast<std::size_t>(r)) * d.w +
                         static_cast<std::size_t>(c)];
            }
          }
        }
      }
    }
  }
}

// Adjoint of ConvAccumulate with respect to x.
void ConvTransposeAccumulate(const ConvDims& d, std::span<const double> w,
                             std::span<const double> gout,
                             std::span<double> gx) {
  for (std::size_t co = 0; co < d.cout; ++co) {
    for (std::size_t ci = 0; ci < d.cin; ++ci) {
      for (std::size_t a = 0; a < d.kh; ++a) {
        for (std::size_t b = 0; b < d.kw; ++b) {
          const double wv = w[((co * d.cin + ci) * d.kh + a) * d.kw + b];
          for (std::size_t i = 0; i < d.oh; ++i) {
            const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(i + a) -
                                     static_cast<std::ptrdiff_t>(d.pad);
            if (r < 0 || r >= static_cast<std::ptrdiff_t>(d.h)) continue;
            for (std::size_t j = 0; j < d.ow; ++j) {
              const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(j + b) -
                                       static_cast<std::ptrdiff_t>(d.pad);
              if (c < 0 || c >= static_cast<std::ptrdiff_t>(d.w)) continue;
              gx[(ci * d.h + static_cast<std::size_t>(r)) * d.w +
                 static_cast<std::size_t>(c)] +=
                  wv * gout[(co * d.oh + i) * d.ow + j];
            }
          }
        }
      }
    }
  }
}

// Linear part of a dense/conv layer applied to `x` (no bias).
void LinearApply(const LayerSpec& layer, const Shape& in_shape,
                 std::span<const double> x, std::span<double> out) {
  if (layer.kind == LayerKind::kDense) {
    const std::size_t nout = layer.bias.size();
    const std::size_t nin = x.size();
    auto w = layer.weights.values();
    for (std::size_t o = 0; o < nout; ++o) {
      double acc = 0.0;
      const double* row = w.data() + o * nin;
      for (std::size_t i = 0; i < nin; ++i) acc += row[i] * x[i];
      out[o] += acc;
    }
  } else {
    ConvAccumulate(GetConvDims(in_shape, layer), layer.weights.values(), x,
                   out);
  }
}

void LinearTransposeApply(const LayerSpec& layer, const Shape& in_shape,
                          std::span<const double> gout, std::span<double> gx) {
  if (layer.kind == LayerKind::kDense) {
    const std::size_t nout = layer.bias.size();
    const std::size_t nin = gx.size();
    auto w = layer.weights.values();
    for (std::size_t o = 0; o < nout; ++o) {
      const double g = gout[o];
      if (g == 0.0) continue;
      const double* row = w.data() + o * nin;
      for (std::size_t i = 0; i < nin; ++i) gx[i] += row[i] * g;
    }
  } else {
    ConvTransposeAccumulate(GetConvDims(in_shape, layer),
                            layer.weights.values(), gout, gx);
  }
}

void AddBias(const LayerSpec& layer, const Shape& out_shape,
             std::span<double> out) {
  auto b = layer.bias.values();
  if (layer.kind == LayerKind::kDense) {
    for (std::size_t o = 0; o < out.size(); ++o) out[o] += b[o];
  } else {
    const std::size_t plane = out_shape[1] * out_shape[2];
    for (std::size_t co = 0; co < out_shape[0]; ++co) {
      for (std::size_t k = 0; k < plane; ++k) out[co * plane + k] += b[co];
    }
  }
}

}  // namespace

ModelGraph::ModelGraph(Shape input_shape, std::size_t class_count,
                       std::vector<LayerSpec> layers)
    : input_shape_(std::move(input_shape)),
      class_count_(class_count),
      layers_(std::move(layers)) {
  if (input_shape_.empty() || ShapeSize(input_shape_) == 0) {
    throw ShapeError("model input_shape must be non-empty with positive extents");
  }
  if (class_count_ < 2) throw Error("model class_count must be >= 2");

  Shape cur = input_shape_;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const LayerSpec& layer = layers_[li];
    LayerShapes ls{cur, cur};
    switch (layer.kind) {
      case LayerKind::kDense: {
        const std::size_t nin = ShapeSize(cur);
        const std::size_t nout = layer.bias.size();
        if (nout == 0 || layer.weights.size() != nin * nout) {
          throw ShapeError(fmt::format(
              "layer {}: dense weights have {} values, expected {}x{}", li,
              layer.weights.size(), nout, nin));
        }
        ls.out = Shape{nout};
        break;
      }
      case LayerKind::kConv2d: {
        const Shape& ws = layer.weights.shape();
        if (cur.size() != 3 || ws.size() != 4 || ws[1] != cur[0] ||
            layer.bias.size() != ws[0]) {
          throw ShapeError(fmt::format(
              "layer {}: conv2d weights {} incompatible with input {}", li,
              ShapeToString(ws), ShapeToString(cur)));
        }
        if (cur[1] + 2 * layer.padding < ws[2] ||
            cur[2] + 2 * layer.padding < ws[3]) {
          throw ShapeError(fmt::format("layer {}: conv2d kernel larger than input", li));
        }
        ls.out = Shape{ws[0], cur[1] + 2 * layer.padding - ws[2] + 1,
                       cur[2] + 2 * layer.padding - ws[3] + 1};
        break;
      }
      case LayerKind::kActivation:
        break;
    }
    if (layer.kind != LayerKind::kActivation) {
      layer.weights.CheckFinite(fmt::format("layer {} weights", li));
      layer.bias.CheckFinite(fmt::format("layer {} bias", li));
    }
    shapes_.push_back(ls);
    cur = ls.out;
  }
  if (ShapeSize(cur) != class_count_) {
    throw ShapeError(fmt::format("model output has {} values, class_count is {}",
                                 ShapeSize(cur), class_count_));
  }
}

void ModelGraph::CheckInput(const Tensor& x) const {
  if (x.shape() != input_shape_) {
    throw ShapeError(fmt::format("input shape {} does not match model input {}",
                                 ShapeToString(x.shape()),
                                 ShapeToString(input_shape_)));
  }
}

void ModelGraph::CheckClass(std::size_t target) const {
  if (target >= class_count_) {
    throw Error(fmt::format("target class {} out of range [0, {})", target,
                            class_count_));
  }
}

std::vector<Tensor> ModelGraph::Trace(const Tensor& x) const {
  CheckInput(x);
  std::vector<Tensor> acts;
  acts.reserve(layers_.size() + 1);
  acts.push_back(x);
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const LayerSpec& layer = layers_[li];
    const Tensor& in = acts.back();
    Tensor out(shapes_[li].out);
    if (layer.kind == LayerKind::kActivation) {
      auto src = in.values();
      auto dst = out.mutable_values();
      for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = ActivationValue(layer.activation, src[i]);
      }
    } else {
      LinearApply(layer, shapes_[li].in, in.values(), out.mutable_values());
      AddBias(layer, shapes_[li].out, out.mutable_values());
    }
    out.CheckFinite(fmt::format("layer {} ({}) output", li,
                                LayerKindName(layer.kind)));
    acts.push_back(std::move(out));
  }
  return acts;
}

Tensor ModelGraph::Logits(const Tensor& x) const {
  std::vector<Tensor> acts = Trace(x);
  return acts.back().Reshaped(Shape{class_count_});
}

PredictiveState ModelGraph::Forward(const Tensor& x) const {
  PredictiveState st;
  st.logits = Logits(x);
  st.probs = Softmax(st.logits);
  return st;
}

Tensor ModelGraph::Vjp(const Tensor& x, const Tensor& u) const {
  if (u.size() != class_count_) {
    throw ShapeError(fmt::format("vjp: cotangent has {} values, expected {}",
                                 u.size(), class_count_));
  }
  std::vector<Tensor> acts = Trace(x);
  Tensor grad = u.Reshaped(shapes_.empty() ? input_shape_ : shapes_.back().out);
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const LayerSpec& layer = layers_[li];
    Tensor gin(shapes_[li].in);
    if (layer.kind == LayerKind::kActivation) {
      auto pre = acts[li].values();
      auto g = grad.values();
      auto dst = gin.mutable_values();
      for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = g[i] * ActivationSlope(layer.activation, pre[i]);
      }
    } else {
      LinearTransposeApply(layer, shapes_[li].in, grad.values(),
                           gin.mutable_values());
    }
    grad = std::move(gin);
  }
  return grad.Reshaped(input_shape_);
}

Tensor ModelGraph::Jvp(const Tensor& x, const Tensor& v) const {
  CheckInput(x);
  if (v.shape() != input_shape_) {
    throw ShapeError(fmt::format("jvp: tangent shape {} does not match input {}",
                                 ShapeToString(v.shape()),
                                 ShapeToString(input_shape_)));
  }
  Tensor value = x;
  Tensor tangent = v;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const LayerSpec& layer = layers_[li];
    Tensor next_value(shapes_[li].out);
    Tensor next_tangent(shapes_[li].out);
    if (layer.kind == LayerKind::kActivation) {
      auto xv = value.values();
      auto tv = tangent.values();
      auto nv = next_value.mutable_values();
      auto nt = next_tangent.mutable_values();
      for (std::size_t i = 0; i < nv.size(); ++i) {
        nv[i] = ActivationValue(layer.activation, xv[i]);
        nt[i] = tv[i] * ActivationSlope(layer.activation, xv[i]);
      }
    } else {
      LinearApply(layer, shapes_[li].in, value.values(),
                  next_value.mutable_values());
      AddBias(layer, shapes_[li].out, next_value.mutable_values());
      LinearApply(layer, shapes_[li].in, tangent.values(),
                  next_tangent.mutable_values());
    }
    next_value.CheckFinite(fmt::format("layer {} output", li));
    value = std::move(next_value);
    tangent = std::move(next_tangent);
  }
  return tangent.Reshaped(Shape{class_count_});
}

Tensor ModelGraph::GradScore(const Tensor& x, std::size_t target) const {
  CheckClass(target);
  Tensor e(Shape{class_count_});
  e[target] = 1.0;
  return Vjp(x, e);
}

}  // namespace fringe
