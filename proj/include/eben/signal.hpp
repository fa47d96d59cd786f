#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "eben/errors.hpp"

namespace eben {

// Mono sample sequence with a sample rate. Samples are dimensionless
// amplitudes, nominally in [-1, 1].
struct Signal {
  std::vector<double> samples;
  int sample_rate_hz = 0;

  Signal() = default;
  Signal(std::vector<double> s, int rate)
      : samples(std::move(s)), sample_rate_hz(rate) {}

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

inline void validate(const Signal& s) {
  if (s.sample_rate_hz <= 0)
    throw ArgumentError("signal sample rate must be positive");
  for (double v : s.samples)
    if (!std::isfinite(v)) throw ArgumentError("signal contains NaN or Inf");
}

// Dense row-major tensor of doubles. The flat layout is the single storage
// convention shared with the weights file format.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shp) : shape(std::move(shp)) {
    data.assign(num_elements(shape), 0.0);
  }
  Tensor(std::vector<std::size_t> shp, std::vector<double> d)
      : shape(std::move(shp)), data(std::move(d)) {
    if (data.size() != num_elements(shape))
      throw ShapeError("tensor data length does not match shape");
  }

  static std::size_t num_elements(const std::vector<std::size_t>& shp) {
    std::size_t n = 1;
    for (std::size_t e : shp) n *= e;
    return shp.empty() ? 0 : n;
  }

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }

  // 2-D accessors; most of the library works on [channels, time] tensors.
  double& at(std::size_t c, std::size_t t) { return data[c * shape[1] + t]; }
  double at(std::size_t c, std::size_t t) const {
    return data[c * shape[1] + t];
  }
  // 3-D accessor for [out, in, k] convolution kernels.
  double& at(std::size_t a, std::size_t b, std::size_t c) {
    return data[(a * shape[1] + b) * shape[2] + c];
  }
  double at(std::size_t a, std::size_t b, std::size_t c) const {
    return data[(a * shape[1] + b) * shape[2] + c];
  }
};

inline void validate(const Tensor& t) {
  if (t.data.size() != Tensor::num_elements(t.shape))
    throw ShapeError("tensor data length does not match shape");
  for (std::size_t e : t.shape)
    if (e == 0) throw ShapeError("tensor extents must be positive");
  for (double v : t.data)
    if (!std::isfinite(v)) throw ArgumentError("tensor contains NaN or Inf");
}

// Geometry of a strided 1-D convolution.
struct ConvSpec {
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t kernel_size = 1;
  std::size_t stride = 1;
  std::size_t dilation = 1;
  std::size_t groups = 1;
  std::size_t pad_left = 0;
  std::size_t pad_right = 0;

  // T_out for the forward (downsampling) direction.
  std::size_t out_length(std::size_t t_in) const {
    const std::ptrdiff_t span =
        static_cast<std::ptrdiff_t>(t_in + pad_left + pad_right) -
        static_cast<std::ptrdiff_t>(dilation * (kernel_size - 1)) - 1;
    if (span < 0) return 0;
    return static_cast<std::size_t>(span) / stride + 1;
  }

  // T_out for the transposed (upsampling) direction.
  std::size_t transposed_out_length(std::size_t t_in) const {
    return (t_in - 1) * stride + dilation * (kernel_size - 1) + 1 - pad_left -
           pad_right;
  }
};

inline void validate(const ConvSpec& s) {
  if (s.in_channels == 0 || s.out_channels == 0 || s.kernel_size == 0 ||
      s.stride == 0 || s.dilation == 0 || s.groups == 0)
    throw ArgumentError("conv spec extents must be positive");
  if (s.in_channels % s.groups != 0 || s.out_channels % s.groups != 0)
    throw ArgumentError("channel counts must be divisible by groups");
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double energy(const std::vector<double>& v) { return dot(v, v); }

inline double snr_db(const std::vector<double>& reference,
                     const std::vector<double>& noisy) {
  double sig = 0.0, err = 0.0;
  const std::size_t n = std::min(reference.size(), noisy.size());
  for (std::size_t i = 0; i < n; ++i) {
    sig += reference[i] * reference[i];
    const double d = noisy[i] - reference[i];
    err += d * d;
  }
  if (err <= 0.0) return 300.0;  // exact reconstruction
  return 10.0 * std::log10(sig / err);
}

}  // namespace eben
