#pragma once

#include <string>

namespace canalkit {

/// Shared float format for every text artifact: 9 significant digits,
/// shortest form, negative zero and NaN sign normalized away so identical
/// values always serialize to identical bytes.
std::string format_g9(double v);

/// Writes through a sibling temp file plus rename, so a failure partway
/// never leaves a truncated artifact behind. Throws IoError carrying the
/// destination path.
void write_text_atomic(const std::string& path, const std::string& content);

/// Whole-file read. Throws IoError carrying the path.
std::string read_text_file(const std::string& path);

}  // namespace canalkit
