#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "artforge/tensor.hpp"

namespace artforge {

/// Invertible feature transform that AdaIN operates in.
///
/// `identity` works directly on pixels. `gaussian_pyramid` with L levels
/// produces L-1 band-pass levels plus a low-pass residual (5-tap binomial
/// kernel, reflect-101 boundary); the bands store exactly what the
/// upsampled coarser level misses, so decoding reconstructs the input up to
/// rounding.
class FeatureCodec {
 public:
  enum class Kind { identity, gaussian_pyramid };

  static FeatureCodec identity() { return FeatureCodec(Kind::identity, 1); }
  static FeatureCodec gaussian_pyramid(int levels = 3);
  /// Parses "identity" or "gaussian_pyramid:<L>" (also "pyramid:<L>").
  static FeatureCodec parse(const std::string& descriptor);

  Kind kind() const noexcept { return kind_; }
  int levels() const noexcept { return levels_; }
  std::string descriptor() const;

  std::vector<FeatureTensor> encode(const FeatureTensor& input) const;
  FeatureTensor decode(std::span<const FeatureTensor> levels) const;

  friend bool operator==(const FeatureCodec&, const FeatureCodec&) = default;

 private:
  FeatureCodec(Kind kind, int levels) : kind_(kind), levels_(levels) {}

  Kind kind_;
  int levels_;
};

/// Blur with [1 4 6 4 1]/16 in both directions, then keep even rows/columns.
/// Output extents are ceil(h/2) x ceil(w/2).
FeatureTensor pyr_down(const FeatureTensor& in);

/// Zero-insert to (height, width) and blur with twice the binomial kernel.
FeatureTensor pyr_up(const FeatureTensor& coarse, std::size_t height, std::size_t width);

}  // namespace artforge
