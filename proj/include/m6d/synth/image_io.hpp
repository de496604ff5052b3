#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace m6d::synth {

struct PngImage {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 or 3
  std::vector<uint8_t> data;
};

void write_png(const std::string& path, int width, int height, int channels,
               const uint8_t* data);
PngImage read_png(const std::string& path);

}  // namespace m6d::synth
