#include "artforge/codec.hpp"

#include <array>
#include <charconv>

#include "artforge/error.hpp"

namespace artforge {

namespace {

constexpr std::array<double, 5> kBinomial = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

// reflect-101: -1 -> 1, n -> n-2
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto m = static_cast<std::ptrdiff_t>(n);
  while (i < 0 || i >= m) {
    if (i < 0) i = -i;
    if (i >= m) i = 2 * (m - 1) - i;
  }
  return static_cast<std::size_t>(i);
}

}  // namespace

FeatureTensor pyr_down(const FeatureTensor& in) {
  const std::size_t C = in.channels(), H = in.height(), W = in.width();
  const std::size_t h2 = (H + 1) / 2, w2 = (W + 1) / 2;

  FeatureTensor rows(C, H, w2);
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t y = 0; y < H; ++y)
      for (std::size_t x = 0; x < w2; ++x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < kBinomial.size(); ++k)
          acc += kBinomial[k] * in.at(c, y, reflect(static_cast<std::ptrdiff_t>(2 * x + k) - 2, W));
        rows.at(c, y, x) = acc;
      }

  FeatureTensor out(C, h2, w2);
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t y = 0; y < h2; ++y)
      for (std::size_t x = 0; x < w2; ++x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < kBinomial.size(); ++k)
          acc += kBinomial[k] * rows.at(c, reflect(static_cast<std::ptrdiff_t>(2 * y + k) - 2, H), x);
        out.at(c, y, x) = acc;
      }
  return out;
}

FeatureTensor pyr_up(const FeatureTensor& coarse, std::size_t H, std::size_t W) {
  const std::size_t C = coarse.channels();
  if (coarse.height() != (H + 1) / 2 || coarse.width() != (W + 1) / 2)
    throw ValidationError("pyr_up: coarse level does not match target extents");

  // Sample of the zero-inserted signal at fine index i (0 at odd positions).
  auto tap = [](std::ptrdiff_t i, std::size_t n) -> std::ptrdiff_t {
    const std::size_t r = reflect(i, n);
    return (r % 2 == 0) ? static_cast<std::ptrdiff_t>(r / 2) : -1;
  };

  FeatureTensor cols(C, coarse.height(), W);
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t y = 0; y < coarse.height(); ++y)
      for (std::size_t x = 0; x < W; ++x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < kBinomial.size(); ++k) {
          const auto src = tap(static_cast<std::ptrdiff_t>(x + k) - 2, W);
          if (src >= 0) acc += 2.0 * kBinomial[k] * coarse.at(c, y, static_cast<std::size_t>(src));
        }
        cols.at(c, y, x) = acc;
      }

  FeatureTensor out(C, H, W);
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t y = 0; y < H; ++y)
      for (std::size_t x = 0; x < W; ++x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < kBinomial.size(); ++k) {
          const auto src = tap(static_cast<std::ptrdiff_t>(y + k) - 2, H);
          if (src >= 0) acc += 2.0 * kBinomial[k] * cols.at(c, static_cast<std::size_t>(src), x);
        }
        out.at(c, y, x) = acc;
      }
  return out;
}

FeatureCodec FeatureCodec::gaussian_pyramid(int levels) {
  if (levels < 1) throw ValidationError("pyramid needs at least one level");
  return FeatureCodec(Kind::gaussian_pyramid, levels);
}

FeatureCodec FeatureCodec::parse(const std::string& descriptor) {
  if (descriptor == "identity") return identity();
  for (const std::string prefix : {"gaussian_pyramid", "pyramid"}) {
    if (descriptor == prefix) return gaussian_pyramid();
    if (descriptor.starts_with(prefix + ":")) {
      const char* first = descriptor.data() + prefix.size() + 1;
      const char* last = descriptor.data() + descriptor.size();
      int levels = 0;
      auto [ptr, ec] = std::from_chars(first, last, levels);
      if (ec != std::errc{} || ptr != last) break;
      return gaussian_pyramid(levels);
    }
  }
  throw ValidationError("unknown codec descriptor '" + descriptor + "'");
}

std::string FeatureCodec::descriptor() const {
  if (kind_ == Kind::identity) return "identity";
  return "gaussian_pyramid:" + std::to_string(levels_);
}

std::vector<FeatureTensor> FeatureCodec::encode(const FeatureTensor& input) const {
  if (input.empty()) throw ValidationError("cannot encode an empty tensor");
  if (kind_ == Kind::identity) return {input};

  std::vector<FeatureTensor> out;
  out.reserve(static_cast<std::size_t>(levels_));
  FeatureTensor current = input;
  for (int l = 0; l + 1 < levels_; ++l) {
    FeatureTensor next = pyr_down(current);
    const FeatureTensor up = pyr_up(next, current.height(), current.width());
    auto band = current.values();
    const auto u = up.values();
    for (std::size_t i = 0; i < band.size(); ++i) band[i] -= u[i];
    out.push_back(std::move(current));
    current = std::move(next);
  }
  out.push_back(std::move(current));
  return out;
}

FeatureTensor FeatureCodec::decode(std::span<const FeatureTensor> levels) const {
  if (levels.empty()) throw ValidationError("cannot decode zero levels");
  if (kind_ == Kind::identity) {
    if (levels.size() != 1) throw ValidationError("identity codec expects exactly one level");
    return levels.front();
  }
  if (levels.size() != static_cast<std::size_t>(levels_))
    throw ValidationError("pyramid codec expects " + std::to_string(levels_) + " levels, got " +
                          std::to_string(levels.size()));

  FeatureTensor current = levels.back();
  for (std::size_t l = levels.size() - 1; l-- > 0;) {
    const FeatureTensor& band = levels[l];
    if (band.channels() != current.channels())
      throw ValidationError("pyramid levels disagree on channel count");
    FeatureTensor up = pyr_up(current, band.height(), band.width());
    auto v = up.values();
    const auto b = band.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += b[i];
    current = std::move(up);
  }
  return current;
}

}  // namespace artforge
