#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "m6d/synth/catalog.hpp"
#include "m6d/synth/scene.hpp"

namespace m6d::synth {

// "M6DC" tensor container: magic, then LE u32 width/height/channels/dtype
// (0 = f32, 1 = u8), then the row-major payload.
struct M6dcTensor {
  uint32_t width = 0, height = 0, channels = 0, dtype = 0;
  std::vector<float> f32;
  std::vector<uint8_t> u8;
};
void write_m6dc(const std::string& path, uint32_t w, uint32_t h, uint32_t c,
                const float* data);
void write_m6dc(const std::string& path, uint32_t w, uint32_t h, uint32_t c,
                const uint8_t* data);
M6dcTensor read_m6dc(const std::string& path);

// Per-sample sidecar record, fixed key order, >= 9 significant digits.
void write_meta(const std::string& path, const SceneSample& s);
void read_meta(const std::string& path, SceneSample& s);

// Dataset directory layout:
//   meshes/obj_%02d.txt (+ .sym)   object models
//   sample_%06d/{rgb.png, mask.png, cor.m6dc, sra.m6dc, meta.txt}
//   manifest.txt                   one line per sample
class DatasetWriter {
 public:
  DatasetWriter(const std::string& dir, const std::vector<CatalogEntry>& catalog);
  void add(const SceneSample& sample);  // samples must arrive in index order
  int count() const { return count_; }
  void finish();  // writes the manifest

 private:
  std::string dir_;
  int count_ = 0;
  std::vector<std::string> manifest_;
};

class DatasetReader {
 public:
  explicit DatasetReader(const std::string& dir);
  size_t size() const { return count_; }
  SceneSample read(size_t index) const;  // maps round-trip bit-exactly
  const std::vector<geom::TriMesh>& meshes() const { return meshes_; }
  const std::string& dir() const { return dir_; }
  std::string sample_dir(size_t index) const;

 private:
  std::string dir_;
  size_t count_ = 0;
  std::vector<geom::TriMesh> meshes_;
};

// Reads one sample_%06d directory (used by `infer` on a bare sample dir).
SceneSample read_sample_dir(const std::string& sample_dir);

}  // namespace m6d::synth
