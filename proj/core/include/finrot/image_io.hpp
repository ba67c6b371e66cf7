#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "finrot/image.hpp"

namespace finrot {

/// Display metadata recorded alongside screen-image files: the display mode
/// that produced the values ("normalize-joint", "normalize-per-channel",
/// "clip", ...) and the data extrema the map was derived from. Written as PNG
/// tEXt chunks (keys finrot:mode, finrot:s, finrot:S) or PNM header comments.
struct ImageMetadata {
    std::string mode;
    std::optional<NormalizationStats> stats;
};

using AnyImage = std::variant<MonoImage, RgbImage>;

/// 8-bit quantization used for PNG/PNM output: byte = round-half-away(v*255);
/// ingestion maps byte/255 back to [0, 1].
unsigned char quantize_byte(double v);

/// Reads an image by extension: .png (8-bit gray or RGB, no alpha),
/// .pgm / .ppm (ASCII P2 / P3, maxval 255) load as screen-images; .csv loads
/// a mono data-image (unbounded full-precision values). Non-square inputs
/// throw FormatError.
AnyImage read_image(const std::filesystem::path& path);

MonoImage read_csv_image(const std::filesystem::path& path);

/// Writers require screen-domain pixels for the quantized formats (PNG/PNM)
/// and throw DomainError on a data-image; CSV accepts either domain and
/// stores full precision, row-major (i_x major).
void write_png(const std::filesystem::path& path, const MonoImage& image,
               const ImageMetadata* meta = nullptr);
void write_png(const std::filesystem::path& path, const RgbImage& image,
               const ImageMetadata* meta = nullptr);
void write_pnm(const std::filesystem::path& path, const MonoImage& image,
               const ImageMetadata* meta = nullptr);
void write_pnm(const std::filesystem::path& path, const RgbImage& image,
               const ImageMetadata* meta = nullptr);
void write_csv_image(const std::filesystem::path& path, const MonoImage& image);

/// Dispatch on the output extension (.png, .pgm/.ppm, .csv). For RGB images a
/// .csv target writes three files with -r/-g/-b inserted before the suffix.
void write_image(const std::filesystem::path& path, const AnyImage& image,
                 const ImageMetadata* meta = nullptr);

}  // namespace finrot
