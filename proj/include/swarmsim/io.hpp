#pragma once

#include <string>

#include "swarmsim/grid.hpp"

namespace swarmsim {

// binary PGM (P5, maxval 255); file row 0 is the max-y grid row
std::string pgm_bytes(const ByteGrid& grid);
void write_pgm(const std::string& path, const ByteGrid& grid);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace swarmsim
