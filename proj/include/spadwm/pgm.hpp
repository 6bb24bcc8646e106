#pragma once

// Binary PGM (P5) with maxval 255. Comments (`#` to end of line) are
// accepted anywhere whitespace is allowed in the header.

#include <filesystem>
#include <string>
#include <string_view>

#include "spadwm/image.hpp"

namespace spadwm {

GrayImage parse_pgm(std::string_view bytes);
std::string encode_pgm(const GrayImage& img);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

}  // namespace spadwm
