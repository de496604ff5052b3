#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "m6d/errors.hpp"
#include "m6d/synth/dataset.hpp"

namespace fs = std::filesystem;
using namespace m6d;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("m6dc: round trip, magic, truncation") {
  TempDir tmp("m6d_codec_test");
  const std::string path = (tmp.path / "t.m6dc").string();

  std::vector<float> data(4 * 3 * 2);
  for (size_t i = 0; i < data.size(); ++i) data[i] = float(i) * 0.25f - 1.0f;
  synth::write_m6dc(path, 4, 3, 2, data.data());
  const auto back = synth::read_m6dc(path);
  CHECK(back.width == 4);
  CHECK(back.height == 3);
  CHECK(back.channels == 2);
  CHECK(back.dtype == 0);
  CHECK(back.f32 == data);

  // corrupt magic
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(synth::read_m6dc(path), FormatViolation);

  // truncated payload
  synth::write_m6dc(path, 4, 3, 2, data.data());
  fs::resize_file(path, fs::file_size(path) - 7);
  CHECK_THROWS_AS(synth::read_m6dc(path), FormatViolation);
}

TEST_CASE("dataset: write/read round trip is bit exact") {
  TempDir tmp("m6d_dataset_test");
  const auto catalog = synth::make_catalog();
  synth::SceneGenConfig cfg;
  cfg.occlusion_target = 0.25;

  std::vector<synth::SceneSample> samples;
  for (int i = 0; i < 10; ++i) samples.push_back(synth::make_scene(900 + i, catalog, cfg));

  synth::DatasetWriter writer(tmp.path.string(), catalog);
  for (const auto& s : samples) writer.add(s);
  writer.finish();
  CHECK(writer.count() == 10);

  synth::DatasetReader reader(tmp.path.string());
  REQUIRE(reader.size() == 10);
  REQUIRE(reader.meshes().size() == catalog.size());

  for (size_t i = 0; i < reader.size(); ++i) {
    const auto s = reader.read(i);
    CHECK(s.maps.rgb == samples[i].maps.rgb);
    CHECK(s.maps.cor == samples[i].maps.cor);
    CHECK(s.maps.mask == samples[i].maps.mask);
    CHECK(s.maps.sra == samples[i].maps.sra);
    CHECK(s.object_id == samples[i].object_id);
    for (int a = 0; a < 9; ++a)
      CHECK(std::abs(s.gt_pose.rotation[a] - samples[i].gt_pose.rotation[a]) < 1e-7);
    for (int a = 0; a < 3; ++a)
      CHECK(std::abs(s.gt_pose.translation[a] - samples[i].gt_pose.translation[a]) < 1e-7);
    CHECK(s.crop.side == doctest::Approx(samples[i].crop.side).epsilon(1e-9));
    CHECK(s.visible_fraction == doctest::Approx(samples[i].visible_fraction).epsilon(1e-9));
  }

  // loaded meshes reproduce diameters
  for (size_t i = 0; i < catalog.size(); ++i)
    CHECK(geom::diameter(reader.meshes()[i]) ==
          doctest::Approx(geom::diameter(catalog[i].mesh)).epsilon(1e-9));
}

TEST_CASE("dataset: corruption is reported as FormatViolation") {
  TempDir tmp("m6d_dataset_corrupt");
  const auto catalog = synth::make_catalog();
  synth::DatasetWriter writer(tmp.path.string(), catalog);
  writer.add(synth::make_scene(1, catalog, {}));
  writer.finish();

  const fs::path cor = tmp.path / "sample_000000" / "cor.m6dc";
  fs::resize_file(cor, fs::file_size(cor) / 2);
  synth::DatasetReader reader(tmp.path.string());
  CHECK_THROWS_AS(reader.read(0), FormatViolation);

  // bad meta key order
  const fs::path meta = tmp.path / "sample_000000" / "meta.txt";
  std::ofstream(meta) << "bogus = 1\n";
  CHECK_THROWS_AS(reader.read(0), FormatViolation);
}
