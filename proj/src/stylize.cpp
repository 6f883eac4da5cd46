#include "artforge/stylize.hpp"

#include <cmath>
#include <string>

#include "artforge/error.hpp"

namespace artforge {

ChannelStats channel_stats(const FeatureTensor& f, double eps) {
  if (f.empty()) throw ValidationError("channel_stats of an empty tensor");
  if (!(eps >= 0.0)) throw ValidationError("eps must be non-negative");
  ChannelStats s;
  s.mean.resize(f.channels());
  s.std.resize(f.channels());
  for (std::size_t c = 0; c < f.channels(); ++c) {
    // Welford, single pass.
    double mean = 0.0, m2 = 0.0;
    std::size_t n = 0;
    for (double v : f.channel(c)) {
      ++n;
      const double d = v - mean;
      mean += d / static_cast<double>(n);
      m2 += d * (v - mean);
    }
    s.mean[c] = mean;
    s.std[c] = std::sqrt(m2 / static_cast<double>(n) + eps);
  }
  return s;
}

FeatureTensor adain(const FeatureTensor& content, const ChannelStats& style_stats, double eps) {
  if (!(eps > 0.0)) throw ValidationError("adain requires eps > 0");
  if (style_stats.channels() != content.channels() || style_stats.std.size() != content.channels())
    throw ValidationError("adain channel mismatch: content has " + std::to_string(content.channels()) +
                          ", style stats have " + std::to_string(style_stats.channels()));
  const ChannelStats cs = channel_stats(content, eps);
  FeatureTensor out = content;
  for (std::size_t c = 0; c < content.channels(); ++c) {
    const double scale = style_stats.std[c] / cs.std[c];
    for (double& v : out.channel(c)) v = scale * (v - cs.mean[c]) + style_stats.mean[c];
  }
  return out;
}

FeatureTensor blend(const FeatureTensor& content, const FeatureTensor& stylized, double alpha) {
  if (!content.same_shape(stylized)) throw ValidationError("blend shape mismatch");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  FeatureTensor out = content;
  auto o = out.values();
  const auto s = stylized.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = alpha * s[i] + (1.0 - alpha) * o[i];
  return out;
}

StylizedFeatures stylize_features(const PixelImage& content, const PixelImage& style, const FeatureCodec& codec,
                                  const StyleSpec& spec) {
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  if (!(spec.eps > 0.0)) throw ValidationError("eps must be positive");
  StylizedFeatures f;
  f.content = codec.encode(content.tensor());
  f.style = codec.encode(style.tensor());
  if (f.content.size() != f.style.size()) throw Error("codec produced mismatched level counts");
  f.transferred.reserve(f.content.size());
  f.blended.reserve(f.content.size());
  for (std::size_t l = 0; l < f.content.size(); ++l) {
    f.transferred.push_back(adain(f.content[l], channel_stats(f.style[l], spec.eps), spec.eps));
    f.blended.push_back(blend(f.content[l], f.transferred[l], spec.alpha));
  }
  return f;
}

PixelImage stylize(const PixelImage& content, const PixelImage& style, const FeatureCodec& codec,
                   const StyleSpec& spec) {
  const StylizedFeatures f = stylize_features(content, style, codec, spec);
  return PixelImage::from_tensor_clamped(codec.decode(f.blended));
}

}  // namespace artforge
