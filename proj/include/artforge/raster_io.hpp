#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "artforge/tensor.hpp"

namespace artforge {

enum class ImageFormat { jpeg, png };

/// "jpg", "jpeg" or "png".
ImageFormat parse_image_format(const std::string& name);
std::string extension_for(ImageFormat format);

/// Decodes any format OpenCV reads into RGB in [0, 1]. Grayscale inputs are
/// expanded to three channels. Throws IoError when decoding fails.
PixelImage decode_image(std::span<const unsigned char> bytes);
PixelImage read_image(const std::filesystem::path& path);

/// 8-bit encoding; values are rounded to the nearest of 256 levels.
std::vector<unsigned char> encode_image(const PixelImage& image, ImageFormat format, int jpeg_quality = 95);
void write_image(const std::filesystem::path& path, const PixelImage& image, ImageFormat format,
                 int jpeg_quality = 95);

}  // namespace artforge
