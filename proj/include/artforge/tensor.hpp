#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace artforge {

/// Channel-major (C, H, W) array of finite reals.
class FeatureTensor {
 public:
  FeatureTensor() = default;
  FeatureTensor(std::size_t channels, std::size_t height, std::size_t width, double fill = 0.0);
  /// Throws ValidationError if the value count does not match or a value is not finite.
  FeatureTensor(std::size_t channels, std::size_t height, std::size_t width, std::vector<double> values);

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  bool same_shape(const FeatureTensor& o) const noexcept {
    return channels_ == o.channels_ && height_ == o.height_ && width_ == o.width_;
  }

  double& at(std::size_t c, std::size_t y, std::size_t x) { return values_[(c * height_ + y) * width_ + x]; }
  double at(std::size_t c, std::size_t y, std::size_t x) const { return values_[(c * height_ + y) * width_ + x]; }

  std::span<double> channel(std::size_t c) { return {values_.data() + c * plane_size(), plane_size()}; }
  std::span<const double> channel(std::size_t c) const {
    return {values_.data() + c * plane_size(), plane_size()};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const FeatureTensor&, const FeatureTensor&) = default;

 private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> values_;
};

/// RGB image with values in [0, 1], stored channel-major.
class PixelImage {
 public:
  static constexpr std::size_t kChannels = 3;

  PixelImage() = default;
  /// Throws ValidationError on zero dimensions, wrong value count, or values outside [0, 1].
  PixelImage(std::size_t width, std::size_t height, std::vector<double> values);

  static PixelImage filled(std::size_t width, std::size_t height, double r, double g, double b);
  /// Clamps every value into [0, 1]; the tensor must have 3 channels.
  static PixelImage from_tensor_clamped(const FeatureTensor& t);

  std::size_t width() const noexcept { return tensor_.width(); }
  std::size_t height() const noexcept { return tensor_.height(); }
  double at(std::size_t c, std::size_t y, std::size_t x) const { return tensor_.at(c, y, x); }
  std::span<const double> values() const noexcept { return tensor_.values(); }

  const FeatureTensor& tensor() const noexcept { return tensor_; }

  friend bool operator==(const PixelImage&, const PixelImage&) = default;

 private:
  FeatureTensor tensor_;
};

}  // namespace artforge
