#pragma once

#include <vector>

#include "artforge/codec.hpp"
#include "artforge/tensor.hpp"

namespace artforge {

inline constexpr double kDefaultEps = 1e-5;

/// Per-channel spatial mean and stabilized population standard deviation
/// sqrt(var + eps).
struct ChannelStats {
  std::vector<double> mean;
  std::vector<double> std;

  std::size_t channels() const noexcept { return mean.size(); }
};

/// Stylization weight and variance stabilizer.
struct StyleSpec {
  /// 1 = full stylization, 0 = content unchanged.
  double alpha = 1.0;
  double eps = kDefaultEps;
};

/// Throws ValidationError on an empty tensor or eps < 0.
ChannelStats channel_stats(const FeatureTensor& f, double eps = kDefaultEps);

/// Adaptive instance normalization: re-normalizes every content channel to
/// the style mean and std. Throws on channel mismatch or eps <= 0.
FeatureTensor adain(const FeatureTensor& content, const ChannelStats& style_stats, double eps = kDefaultEps);

/// alpha * stylized + (1 - alpha) * content, elementwise.
FeatureTensor blend(const FeatureTensor& content, const FeatureTensor& stylized, double alpha);

/// Encoded levels of a stylization before decoding.
struct StylizedFeatures {
  std::vector<FeatureTensor> content;
  std::vector<FeatureTensor> style;
  /// adain output per level, before blending.
  std::vector<FeatureTensor> transferred;
  /// Blended levels; these are what gets decoded.
  std::vector<FeatureTensor> blended;
};

/// Runs AdaIN and blending level by level; the style image gets its own encoding.
StylizedFeatures stylize_features(const PixelImage& content, const PixelImage& style, const FeatureCodec& codec,
                                  const StyleSpec& spec);

/// Stylized image with exactly the content image's dimensions, clamped to [0, 1] after decoding.
PixelImage stylize(const PixelImage& content, const PixelImage& style, const FeatureCodec& codec,
                   const StyleSpec& spec = {});

}  // namespace artforge
