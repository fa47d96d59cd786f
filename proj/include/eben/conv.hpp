#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eben/errors.hpp"
#include "eben/signal.hpp"

namespace eben {

// Strided 1-D convolution in the cross-correlation convention (no kernel
// flip). input [C_in, T], weight [C_out, C_in/groups, K], bias [C_out].
// out[c,t] = bias[c] + sum_{c',k} w[c,c',k] * x[c'', t*stride + k*dilation - pad_left]
inline Tensor conv1d(const Tensor& input, const Tensor& weight,
                     const std::vector<double>& bias, const ConvSpec& spec) {
  validate(spec);
  if (input.rank() != 2 || weight.rank() != 3)
    throw ShapeError("conv1d expects input [C,T] and weight [Co,Ci/g,K]");
  const std::size_t c_in = input.shape[0];
  const std::size_t t_in = input.shape[1];
  if (c_in != spec.in_channels)
    throw ShapeError("conv1d input channels mismatch: got " +
                     std::to_string(c_in) + ", spec says " +
                     std::to_string(spec.in_channels));
  if (weight.shape[0] != spec.out_channels ||
      weight.shape[1] != spec.in_channels / spec.groups ||
      weight.shape[2] != spec.kernel_size)
    throw ShapeError("conv1d weight shape mismatch");
  if (!bias.empty() && bias.size() != spec.out_channels)
    throw ShapeError("conv1d bias length mismatch");

  const std::size_t t_out = spec.out_length(t_in);
  Tensor out({spec.out_channels, t_out});
  const std::size_t cpg_in = spec.in_channels / spec.groups;
  const std::size_t cpg_out = spec.out_channels / spec.groups;

  for (std::size_t co = 0; co < spec.out_channels; ++co) {
    const std::size_t g = co / cpg_out;
    const std::size_t ci0 = g * cpg_in;
    const double b = bias.empty() ? 0.0 : bias[co];
    for (std::size_t t = 0; t < t_out; ++t) {
      double acc = b;
      const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(t * spec.stride) -
                                  static_cast<std::ptrdiff_t>(spec.pad_left);
      for (std::size_t cl = 0; cl < cpg_in; ++cl) {
        const double* xrow = &input.data[(ci0 + cl) * t_in];
        const double* wrow =
            &weight.data[(co * cpg_in + cl) * spec.kernel_size];
        for (std::size_t k = 0; k < spec.kernel_size; ++k) {
          const std::ptrdiff_t ti =
              base + static_cast<std::ptrdiff_t>(k * spec.dilation);
          if (ti >= 0 && ti < static_cast<std::ptrdiff_t>(t_in))
            acc += wrow[k] * xrow[ti];
        }
      }
      out.at(co, t) = acc;
    }
  }
  return out;
}

// Transposed (fractionally strided) 1-D convolution, the adjoint of conv1d.
// input [C_in, T], weight [C_in, C_out/groups, K], bias [C_out].
// T_out = (T-1)*stride + dilation*(K-1) + 1 - pad_left - pad_right.
inline Tensor conv1d_transposed(const Tensor& input, const Tensor& weight,
                                const std::vector<double>& bias,
                                const ConvSpec& spec) {
  validate(spec);
  if (input.rank() != 2 || weight.rank() != 3)
    throw ShapeError("conv1d_transposed expects input [C,T] and weight [Ci,Co/g,K]");
  const std::size_t c_in = input.shape[0];
  const std::size_t t_in = input.shape[1];
  if (c_in != spec.in_channels)
    throw ShapeError("conv1d_transposed input channels mismatch");
  if (weight.shape[0] != spec.in_channels ||
      weight.shape[1] != spec.out_channels / spec.groups ||
      weight.shape[2] != spec.kernel_size)
    throw ShapeError("conv1d_transposed weight shape mismatch");
  if (!bias.empty() && bias.size() != spec.out_channels)
    throw ShapeError("conv1d_transposed bias length mismatch");

  const std::size_t t_out = spec.transposed_out_length(t_in);
  Tensor out({spec.out_channels, t_out});
  const std::size_t cpg_in = spec.in_channels / spec.groups;
  const std::size_t cpg_out = spec.out_channels / spec.groups;

  if (!bias.empty()) {
    for (std::size_t co = 0; co < spec.out_channels; ++co)
      for (std::size_t u = 0; u < t_out; ++u) out.at(co, u) = bias[co];
  }
  // scatter: input sample t lands at u = t*stride + k*dilation - pad_left
  for (std::size_t ci = 0; ci < c_in; ++ci) {
    const std::size_t g = ci / cpg_in;
    const std::size_t co0 = g * cpg_out;
    const double* xrow = &input.data[ci * t_in];
    for (std::size_t cl = 0; cl < cpg_out; ++cl) {
      double* orow = &out.data[(co0 + cl) * t_out];
      const double* wrow = &weight.data[(ci * cpg_out + cl) * spec.kernel_size];
      for (std::size_t t = 0; t < t_in; ++t) {
        const double x = xrow[t];
        if (x == 0.0) continue;
        const std::ptrdiff_t base =
            static_cast<std::ptrdiff_t>(t * spec.stride) -
            static_cast<std::ptrdiff_t>(spec.pad_left);
        for (std::size_t k = 0; k < spec.kernel_size; ++k) {
          const std::ptrdiff_t u =
              base + static_cast<std::ptrdiff_t>(k * spec.dilation);
          if (u >= 0 && u < static_cast<std::ptrdiff_t>(t_out))
            orow[u] += wrow[k] * x;
        }
      }
    }
  }
  return out;
}

}  // namespace eben
