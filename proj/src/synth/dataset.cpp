#include "m6d/synth/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "m6d/errors.hpp"
#include "m6d/synth/image_io.hpp"

namespace fs = std::filesystem;

namespace m6d::synth {

namespace {

constexpr char kMagic[4] = {'M', '6', 'D', 'C'};

void put_u32(std::ofstream& out, uint32_t v) {
  uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::ifstream& in, const std::string& path) {
  uint8_t b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw FormatViolation("truncated m6dc header: " + path);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}

std::string sample_name(size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%06zu", index);
  return buf;
}

}  // namespace

void write_m6dc(const std::string& path, uint32_t w, uint32_t h, uint32_t c,
                const float* data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  out.write(kMagic, 4);
  put_u32(out, w);
  put_u32(out, h);
  put_u32(out, c);
  put_u32(out, 0);
  // f32 payload serialized byte-wise LE (host is LE on all supported targets)
  out.write(reinterpret_cast<const char*>(data), std::streamsize(sizeof(float)) * w * h * c);
  if (!out) throw IoFailure("write failed: " + path);
}

void write_m6dc(const std::string& path, uint32_t w, uint32_t h, uint32_t c,
                const uint8_t* data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  out.write(kMagic, 4);
  put_u32(out, w);
  put_u32(out, h);
  put_u32(out, c);
  put_u32(out, 1);
  out.write(reinterpret_cast<const char*>(data), std::streamsize(w) * h * c);
  if (!out) throw IoFailure("write failed: " + path);
}

M6dcTensor read_m6dc(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open: " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatViolation("bad m6dc magic: " + path);
  M6dcTensor t;
  t.width = get_u32(in, path);
  t.height = get_u32(in, path);
  t.channels = get_u32(in, path);
  t.dtype = get_u32(in, path);
  const size_t n = size_t(t.width) * t.height * t.channels;
  if (t.width == 0 || t.height == 0 || t.channels == 0 || t.channels > 16 || n > (64u << 20))
    throw FormatViolation("implausible m6dc dimensions: " + path);
  if (t.dtype == 0) {
    t.f32.resize(n);
    if (!in.read(reinterpret_cast<char*>(t.f32.data()), std::streamsize(n * sizeof(float))))
      throw FormatViolation("truncated m6dc payload: " + path);
  } else if (t.dtype == 1) {
    t.u8.resize(n);
    if (!in.read(reinterpret_cast<char*>(t.u8.data()), std::streamsize(n)))
      throw FormatViolation("truncated m6dc payload: " + path);
  } else {
    throw FormatViolation("unknown m6dc dtype tag: " + path);
  }
  return t;
}

void write_meta(const std::string& path, const SceneSample& s) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  char buf[512];
  out << "object_id = " << s.object_id << "\n";
  out << "rotation =";
  for (double v : s.gt_pose.rotation) {
    std::snprintf(buf, sizeof buf, " %.12g", v);
    out << buf;
  }
  out << "\ntranslation =";
  for (double v : s.gt_pose.translation) {
    std::snprintf(buf, sizeof buf, " %.12g", v);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "\nintrinsics = %.12g %.12g %.12g %.12g %d %d\n",
                s.intrinsics.fx, s.intrinsics.fy, s.intrinsics.cx, s.intrinsics.cy,
                s.intrinsics.width, s.intrinsics.height);
  out << buf;
  std::snprintf(buf, sizeof buf, "crop = %.12g %.12g %.12g %d\n", s.crop.cx, s.crop.cy,
                s.crop.side, s.crop.out_size);
  out << buf;
  std::snprintf(buf, sizeof buf, "visible_fraction = %.12g\n", s.visible_fraction);
  out << buf;
  if (!out) throw IoFailure("write failed: " + path);
}

void read_meta(const std::string& path, SceneSample& s) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open: " + path);
  auto next = [&](const char* key) {
    std::string line;
    if (!std::getline(in, line)) throw FormatViolation("truncated meta record: " + path);
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.substr(0, eq).find(key) == std::string::npos)
      throw FormatViolation(std::string("meta record missing key '") + key + "': " + path);
    return std::istringstream(line.substr(eq + 1));
  };
  {
    auto ss = next("object_id");
    if (!(ss >> s.object_id)) throw FormatViolation("bad object_id: " + path);
  }
  {
    auto ss = next("rotation");
    for (double& v : s.gt_pose.rotation)
      if (!(ss >> v)) throw FormatViolation("bad rotation: " + path);
  }
  {
    auto ss = next("translation");
    for (double& v : s.gt_pose.translation)
      if (!(ss >> v)) throw FormatViolation("bad translation: " + path);
  }
  {
    auto ss = next("intrinsics");
    if (!(ss >> s.intrinsics.fx >> s.intrinsics.fy >> s.intrinsics.cx >> s.intrinsics.cy >>
          s.intrinsics.width >> s.intrinsics.height))
      throw FormatViolation("bad intrinsics: " + path);
  }
  {
    auto ss = next("crop");
    if (!(ss >> s.crop.cx >> s.crop.cy >> s.crop.side >> s.crop.out_size))
      throw FormatViolation("bad crop: " + path);
  }
  {
    auto ss = next("visible_fraction");
    if (!(ss >> s.visible_fraction)) throw FormatViolation("bad visible_fraction: " + path);
  }
}

DatasetWriter::DatasetWriter(const std::string& dir, const std::vector<CatalogEntry>& catalog)
    : dir_(dir) {
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "meshes", ec);
  if (ec) throw IoFailure("cannot create dataset directory: " + dir);
  for (size_t i = 0; i < catalog.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "obj_%02zu.txt", i);
    geom::save_mesh(catalog[i].mesh, (fs::path(dir) / "meshes" / buf).string());
  }
}

void DatasetWriter::add(const SceneSample& s) {
  const auto& m = s.maps;
  const fs::path sdir = fs::path(dir_) / sample_name(size_t(count_));
  std::error_code ec;
  fs::create_directories(sdir, ec);
  if (ec) throw IoFailure("cannot create sample directory: " + sdir.string());

  std::vector<uint8_t> rgb8(m.rgb.size());
  for (size_t i = 0; i < m.rgb.size(); ++i)
    rgb8[i] = uint8_t(std::lround(double(m.rgb[i]) * 255.0));
  write_png((sdir / "rgb.png").string(), m.rgb_res, m.rgb_res, 3, rgb8.data());

  std::vector<uint8_t> mask8(m.mask.size());
  for (size_t i = 0; i < m.mask.size(); ++i) mask8[i] = m.mask[i] ? 255 : 0;
  write_png((sdir / "mask.png").string(), m.map_res, m.map_res, 1, mask8.data());

  write_m6dc((sdir / "cor.m6dc").string(), uint32_t(m.map_res), uint32_t(m.map_res), 3,
             m.cor.data());
  write_m6dc((sdir / "sra.m6dc").string(), uint32_t(m.map_res), uint32_t(m.map_res), 1,
             m.sra.data());
  write_meta((sdir / "meta.txt").string(), s);

  char buf[160];
  std::snprintf(buf, sizeof buf, "%s object_id=%d visible_fraction=%.12g warned=%d",
                sample_name(size_t(count_)).c_str(), s.object_id, s.visible_fraction,
                s.occlusion_warning ? 1 : 0);
  manifest_.emplace_back(buf);
  ++count_;
}

void DatasetWriter::finish() {
  std::ofstream out(fs::path(dir_) / "manifest.txt");
  if (!out) throw IoFailure("cannot write manifest in " + dir_);
  for (const auto& line : manifest_) out << line << "\n";
  if (!out) throw IoFailure("manifest write failed in " + dir_);
}

DatasetReader::DatasetReader(const std::string& dir) : dir_(dir) {
  if (!fs::exists(dir)) throw IoFailure("dataset directory does not exist: " + dir);
  while (fs::exists(fs::path(dir) / sample_name(count_))) ++count_;
  const fs::path mesh_dir = fs::path(dir) / "meshes";
  for (size_t i = 0;; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "obj_%02zu.txt", i);
    const fs::path p = mesh_dir / buf;
    if (!fs::exists(p)) break;
    meshes_.push_back(geom::load_mesh(p.string()));
  }
}

std::string DatasetReader::sample_dir(size_t index) const {
  return (fs::path(dir_) / sample_name(index)).string();
}

SceneSample DatasetReader::read(size_t index) const {
  if (index >= count_) throw IoFailure("sample index out of range");
  return read_sample_dir(sample_dir(index));
}

SceneSample read_sample_dir(const std::string& sdir) {
  SceneSample s;
  read_meta((fs::path(sdir) / "meta.txt").string(), s);

  const PngImage rgb = read_png((fs::path(sdir) / "rgb.png").string());
  if (rgb.channels != 3) throw FormatViolation("rgb.png must be RGB: " + sdir);
  s.maps.rgb_res = rgb.width;
  s.maps.rgb.resize(rgb.data.size());
  for (size_t i = 0; i < rgb.data.size(); ++i)
    s.maps.rgb[i] = float(rgb.data[i]) / 255.0f;

  const PngImage mask = read_png((fs::path(sdir) / "mask.png").string());
  if (mask.channels != 1) throw FormatViolation("mask.png must be grayscale: " + sdir);
  s.maps.map_res = mask.width;
  s.maps.mask.resize(mask.data.size());
  for (size_t i = 0; i < mask.data.size(); ++i) s.maps.mask[i] = mask.data[i] >= 128 ? 1 : 0;

  const M6dcTensor cor = read_m6dc((fs::path(sdir) / "cor.m6dc").string());
  if (cor.dtype != 0 || cor.channels != 3 || int(cor.width) != s.maps.map_res)
    throw FormatViolation("cor.m6dc has wrong layout: " + sdir);
  s.maps.cor = cor.f32;

  const M6dcTensor sra = read_m6dc((fs::path(sdir) / "sra.m6dc").string());
  if (sra.dtype != 1 || sra.channels != 1 || int(sra.width) != s.maps.map_res)
    throw FormatViolation("sra.m6dc has wrong layout: " + sdir);
  s.maps.sra = sra.u8;

  s.maps.depth.assign(size_t(s.maps.map_res) * s.maps.map_res, 0.0f);  // not persisted
  return s;
}

}  // namespace m6d::synth
