#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "tessera/tensor.hpp"

namespace tessera {

/// Quantizes a tensor value to a byte: clamp(round-half-up((v+1)*127.5), 0, 255).
std::uint8_t quantize_unit(double v);

/// Inverse mapping: byte/127.5 - 1.
double dequantize_unit(std::uint8_t byte);

/// Serializes to binary PGM (P5) for 1 channel or PPM (P6) for 3 channels,
/// maxval 255, header "P5\n<w> <h>\n255\n" / "P6\n...". Byte-exact: the
/// same tensor always yields the same bytes.
std::string encode_pnm(const ImageTensor& x);

/// Parses a binary PGM/PPM produced by encode_pnm (maxval must be 255;
/// whitespace-separated header tokens with optional '#' comments).
ImageTensor decode_pnm(const std::string& bytes);

void write_image(const ImageTensor& x, const std::filesystem::path& path);
ImageTensor read_image(const std::filesystem::path& path);

} // namespace tessera
