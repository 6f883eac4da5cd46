#include "artforge/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "artforge/error.hpp"

namespace artforge {

FeatureTensor::FeatureTensor(std::size_t channels, std::size_t height, std::size_t width, double fill)
    : channels_(channels), height_(height), width_(width), values_(channels * height * width, fill) {
  if (!std::isfinite(fill)) throw ValidationError("tensor fill value is not finite");
}

FeatureTensor::FeatureTensor(std::size_t channels, std::size_t height, std::size_t width,
                             std::vector<double> values)
    : channels_(channels), height_(height), width_(width), values_(std::move(values)) {
  if (values_.size() != channels * height * width)
    throw ValidationError("tensor has " + std::to_string(values_.size()) + " values, expected " +
                          std::to_string(channels * height * width));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i])) throw ValidationError("tensor value is not finite", {i});
}

PixelImage::PixelImage(std::size_t width, std::size_t height, std::vector<double> values) {
  if (width == 0 || height == 0) throw ValidationError("image dimensions must be positive");
  tensor_ = FeatureTensor(kChannels, height, width, std::move(values));
  const auto v = tensor_.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < 0.0 || v[i] > 1.0) throw ValidationError("pixel value outside [0, 1]", {i});
}

PixelImage PixelImage::filled(std::size_t width, std::size_t height, double r, double g, double b) {
  std::vector<double> values(kChannels * width * height);
  const std::size_t plane = width * height;
  std::fill_n(values.begin(), plane, r);
  std::fill_n(values.begin() + static_cast<std::ptrdiff_t>(plane), plane, g);
  std::fill_n(values.begin() + static_cast<std::ptrdiff_t>(2 * plane), plane, b);
  return PixelImage(width, height, std::move(values));
}

PixelImage PixelImage::from_tensor_clamped(const FeatureTensor& t) {
  if (t.channels() != kChannels) throw ValidationError("expected a 3-channel tensor");
  std::vector<double> values(t.values().begin(), t.values().end());
  for (double& v : values) v = std::clamp(v, 0.0, 1.0);
  return PixelImage(t.width(), t.height(), std::move(values));
}

}  // namespace artforge
