#include "artforge/raster_io.hpp"

#include <cmath>
#include <fstream>

#include <opencv2/imgcodecs.hpp>

#include "artforge/error.hpp"

namespace artforge {

ImageFormat parse_image_format(const std::string& name) {
  if (name == "jpg" || name == "jpeg") return ImageFormat::jpeg;
  if (name == "png") return ImageFormat::png;
  throw ValidationError("unsupported output format '" + name + "'");
}

std::string extension_for(ImageFormat format) { return format == ImageFormat::png ? ".png" : ".jpg"; }

namespace {

PixelImage from_mat(const cv::Mat& bgr) {
  const auto W = static_cast<std::size_t>(bgr.cols), H = static_cast<std::size_t>(bgr.rows);
  std::vector<double> values(3 * W * H);
  for (std::size_t y = 0; y < H; ++y) {
    const auto* row = bgr.ptr<unsigned char>(static_cast<int>(y));
    for (std::size_t x = 0; x < W; ++x)
      for (std::size_t c = 0; c < 3; ++c)
        values[(c * H + y) * W + x] = static_cast<double>(row[3 * x + (2 - c)]) / 255.0;
  }
  return PixelImage(W, H, std::move(values));
}

cv::Mat to_mat(const PixelImage& img) {
  const std::size_t W = img.width(), H = img.height();
  cv::Mat bgr(static_cast<int>(H), static_cast<int>(W), CV_8UC3);
  for (std::size_t y = 0; y < H; ++y) {
    auto* row = bgr.ptr<unsigned char>(static_cast<int>(y));
    for (std::size_t x = 0; x < W; ++x)
      for (std::size_t c = 0; c < 3; ++c)
        row[3 * x + (2 - c)] = static_cast<unsigned char>(std::lround(img.at(c, y, x) * 255.0));
  }
  return bgr;
}

}  // namespace

PixelImage decode_image(std::span<const unsigned char> bytes) {
  if (bytes.empty()) throw IoError("empty image buffer");
  const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<unsigned char*>(bytes.data()));
  const cv::Mat bgr = cv::imdecode(buf, cv::IMREAD_COLOR);
  if (bgr.empty()) throw IoError("cannot decode image");
  return from_mat(bgr);
}

PixelImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_image(bytes);
  } catch (const IoError&) {
    throw IoError("cannot decode image " + path.string());
  }
}

std::vector<unsigned char> encode_image(const PixelImage& image, ImageFormat format, int jpeg_quality) {
  if (jpeg_quality < 1 || jpeg_quality > 100) throw ValidationError("JPEG quality must lie in [1, 100]");
  std::vector<unsigned char> out;
  std::vector<int> params;
  if (format == ImageFormat::jpeg) params = {cv::IMWRITE_JPEG_QUALITY, jpeg_quality};
  if (!cv::imencode(extension_for(format), to_mat(image), out, params)) throw IoError("image encoding failed");
  return out;
}

void write_image(const std::filesystem::path& path, const PixelImage& image, ImageFormat format, int jpeg_quality) {
  const auto bytes = encode_image(image, format, jpeg_quality);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace artforge
