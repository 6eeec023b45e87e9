#include "silverseg/nifti.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace silverseg {

namespace {

constexpr int kHeaderSize = 348;
constexpr std::int16_t DT_UINT8 = 2;
constexpr std::int16_t DT_INT16 = 4;
constexpr std::int16_t DT_FLOAT32 = 16;

// Fields of the 348-byte NIfTI-1 header this reader actually consumes.
struct Header {
  std::int32_t sizeof_hdr = 0;
  std::int16_t dim[8] = {};
  std::int16_t datatype = 0;
  std::int16_t bitpix = 0;
  float pixdim[8] = {};
  float vox_offset = 0;
  float scl_slope = 0;
  float scl_inter = 0;
  char magic[4] = {};
};

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_gzip_path(const std::string& path) { return has_suffix(path, ".gz"); }

// ---- byte-level stream pair: plain fstream or zlib gzFile, picked by suffix

class ByteReader {
public:
  ByteReader(const std::string& path, bool gzip) : path_(path), gzip_(gzip) {
    if (gzip_) {
      gz_ = gzopen(path.c_str(), "rb");
      if (!gz_) throw Error("cannot open '" + path + "' for reading");
    } else {
      fs_.open(path, std::ios::binary);
      if (!fs_) throw Error("cannot open '" + path + "' for reading");
    }
  }
  ~ByteReader() {
    if (gz_) gzclose(gz_);
  }
  ByteReader(const ByteReader&) = delete;
  ByteReader& operator=(const ByteReader&) = delete;

  // Reads exactly n bytes or throws (truncation is always an error here).
  void read_exact(void* dst, std::size_t n, const char* what) {
    std::size_t got = 0;
    auto* p = static_cast<char*>(dst);
    if (gzip_) {
      while (got < n) {
        const unsigned chunk =
            static_cast<unsigned>(std::min<std::size_t>(n - got, 1u << 30));
        const int r = gzread(gz_, p + got, chunk);
        if (r < 0) throw Error("gzip read error in '" + path_ + "'");
        if (r == 0) break;
        got += static_cast<std::size_t>(r);
      }
    } else {
      fs_.read(p, static_cast<std::streamsize>(n));
      got = static_cast<std::size_t>(fs_.gcount());
    }
    if (got != n) {
      std::ostringstream os;
      os << "'" << path_ << "': truncated " << what << " (wanted " << n << " bytes, got "
         << got << ")";
      throw Error(os.str());
    }
  }

  void skip(std::size_t n) {
    std::vector<char> scratch(std::min<std::size_t>(n, 1u << 16));
    std::size_t left = n;
    while (left > 0) {
      const std::size_t chunk = std::min(left, scratch.size());
      read_exact(scratch.data(), chunk, "pre-data bytes");
      left -= chunk;
    }
  }

private:
  std::string path_;
  bool gzip_ = false;
  gzFile gz_ = nullptr;
  std::ifstream fs_;
};

class ByteWriter {
public:
  ByteWriter(const std::string& path, bool gzip) : path_(path), gzip_(gzip) {
    if (gzip_) {
      gz_ = gzopen(path.c_str(), "wb");
      if (!gz_) throw Error("cannot open '" + path + "' for writing");
    } else {
      fs_.open(path, std::ios::binary | std::ios::trunc);
      if (!fs_) throw Error("cannot open '" + path + "' for writing");
    }
  }
  ~ByteWriter() {
    if (gz_) gzclose(gz_);
  }
  ByteWriter(const ByteWriter&) = delete;
  ByteWriter& operator=(const ByteWriter&) = delete;

  void write(const void* src, std::size_t n) {
    if (gzip_) {
      const auto* p = static_cast<const char*>(src);
      std::size_t done = 0;
      while (done < n) {
        const unsigned chunk =
            static_cast<unsigned>(std::min<std::size_t>(n - done, 1u << 30));
        if (gzwrite(gz_, p + done, chunk) != static_cast<int>(chunk))
          throw Error("gzip write error in '" + path_ + "'");
        done += chunk;
      }
    } else {
      fs_.write(static_cast<const char*>(src), static_cast<std::streamsize>(n));
      if (!fs_) throw Error("write error in '" + path_ + "'");
    }
  }

  void close() {
    if (gzip_) {
      if (gz_ && gzclose(gz_) != Z_OK) throw Error("gzip close error in '" + path_ + "'");
      gz_ = nullptr;
    } else {
      fs_.close();
      if (fs_.fail()) throw Error("close error in '" + path_ + "'");
    }
  }

private:
  std::string path_;
  bool gzip_ = false;
  gzFile gz_ = nullptr;
  std::ofstream fs_;
};

// ---- little/big-endian scalar decoding from a raw byte buffer

template <typename T>
T load_scalar(const unsigned char* p, bool swap) {
  std::array<unsigned char, sizeof(T)> buf;
  std::memcpy(buf.data(), p, sizeof(T));
  if (swap) std::reverse(buf.begin(), buf.end());
  T v;
  std::memcpy(&v, buf.data(), sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    // Buffer was normalized to file order already; the swap flag above is
    // relative to little-endian, so flip once more on big-endian hosts.
    std::reverse(reinterpret_cast<unsigned char*>(&v),
                 reinterpret_cast<unsigned char*>(&v) + sizeof(T));
  }
  return v;
}

template <typename T>
void store_le(unsigned char* p, T v) {
  std::memcpy(p, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(p, p + sizeof(T));
}

Header parse_header(const unsigned char* raw, const std::string& path, bool& swap) {
  Header h;
  swap = false;
  h.sizeof_hdr = load_scalar<std::int32_t>(raw + 0, false);
  if (h.sizeof_hdr != kHeaderSize) {
    h.sizeof_hdr = load_scalar<std::int32_t>(raw + 0, true);
    if (h.sizeof_hdr != kHeaderSize)
      throw Error("'" + path + "': not a NIfTI-1 file (sizeof_hdr != 348)");
    swap = true;
  }
  for (int i = 0; i < 8; ++i)
    h.dim[i] = load_scalar<std::int16_t>(raw + 40 + 2 * i, swap);
  h.datatype = load_scalar<std::int16_t>(raw + 70, swap);
  h.bitpix = load_scalar<std::int16_t>(raw + 72, swap);
  for (int i = 0; i < 8; ++i)
    h.pixdim[i] = load_scalar<float>(raw + 76 + 4 * i, swap);
  h.vox_offset = load_scalar<float>(raw + 108, swap);
  h.scl_slope = load_scalar<float>(raw + 112, swap);
  h.scl_inter = load_scalar<float>(raw + 116, swap);
  std::memcpy(h.magic, raw + 344, 4);
  return h;
}

int bytes_per_voxel(std::int16_t datatype) {
  switch (datatype) {
    case DT_UINT8: return 1;
    case DT_INT16: return 2;
    case DT_FLOAT32: return 4;
  }
  return 0;
}

// Path of the data file for an "ni1" header/data pair.
std::string paired_img_path(const std::string& hdr_path) {
  std::string p = hdr_path;
  const bool gz = is_gzip_path(p);
  if (gz) p = p.substr(0, p.size() - 3);
  if (!has_suffix(p, ".hdr"))
    throw Error("'" + hdr_path + "': paired NIfTI (magic \"ni1\") requires a .hdr path");
  p = p.substr(0, p.size() - 4) + ".img";
  return gz ? p + ".gz" : p;
}

}  // namespace

VoxelVolume load_volume(const std::string& path) {
  const bool gzip = is_gzip_path(path);
  ByteReader in(path, gzip);

  unsigned char raw[kHeaderSize];
  in.read_exact(raw, kHeaderSize, "header");
  bool swap = false;
  Header h = parse_header(raw, path, swap);

  const bool single_file = std::memcmp(h.magic, "n+1", 4) == 0;
  const bool pair_file = std::memcmp(h.magic, "ni1", 4) == 0;
  if (!single_file && !pair_file)
    throw Error("'" + path + "': unrecognized NIfTI magic (expected \"n+1\" or \"ni1\")");

  if (h.dim[0] != 3) {
    std::ostringstream os;
    os << "'" << path << "': unsupported dimensionality: dim[0] = " << h.dim[0]
       << " (only 3D volumes are handled)";
    throw Error(os.str());
  }
  const int bpv = bytes_per_voxel(h.datatype);
  if (bpv == 0) {
    std::ostringstream os;
    os << "'" << path << "': unsupported datatype code " << h.datatype
       << " (supported: 2=uint8, 4=int16, 16=float32)";
    throw Error(os.str());
  }
  if (h.bitpix != 8 * bpv) {
    std::ostringstream os;
    os << "'" << path << "': bitpix " << h.bitpix << " inconsistent with datatype "
       << h.datatype;
    throw Error(os.str());
  }

  Grid g;
  for (int i = 0; i < 3; ++i) {
    if (h.dim[1 + i] <= 0) {
      std::ostringstream os;
      os << "'" << path << "': nonpositive dim[" << (1 + i) << "] = " << h.dim[1 + i];
      throw Error(os.str());
    }
    if (!(h.pixdim[1 + i] > 0.0f)) {
      std::ostringstream os;
      os << "'" << path << "': nonpositive pixdim[" << (1 + i) << "] = " << h.pixdim[1 + i];
      throw Error(os.str());
    }
    g.dim[i] = h.dim[1 + i];
    g.spacing[i] = static_cast<double>(h.pixdim[1 + i]);
  }

  const std::size_t nvox = g.voxel_count();
  std::vector<unsigned char> payload(nvox * static_cast<std::size_t>(bpv));

  if (single_file) {
    if (!(h.vox_offset >= kHeaderSize)) {
      std::ostringstream os;
      os << "'" << path << "': invalid vox_offset " << h.vox_offset;
      throw Error(os.str());
    }
    in.skip(static_cast<std::size_t>(h.vox_offset) - kHeaderSize);
    in.read_exact(payload.data(), payload.size(), "voxel data");
  } else {
    const std::string img = paired_img_path(path);
    ByteReader data_in(img, is_gzip_path(img));
    data_in.read_exact(payload.data(), payload.size(), "voxel data");
  }

  const bool apply_scale = h.scl_slope != 0.0f;
  const double slope = static_cast<double>(h.scl_slope);
  const double inter = static_cast<double>(h.scl_inter);

  std::vector<float> out(nvox);
  for (std::size_t i = 0; i < nvox; ++i) {
    double v = 0.0;
    switch (h.datatype) {
      case DT_UINT8: v = payload[i]; break;
      case DT_INT16: v = load_scalar<std::int16_t>(payload.data() + 2 * i, swap); break;
      case DT_FLOAT32: v = load_scalar<float>(payload.data() + 4 * i, swap); break;
    }
    if (apply_scale) v = v * slope + inter;
    out[i] = static_cast<float>(v);
  }
  return VoxelVolume(g, IntensityKind::raw, std::move(out));
}

BinaryMask load_mask(const std::string& path) {
  VoxelVolume vol = load_volume(path);
  std::vector<std::uint8_t> bits(vol.values().size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const float v = vol.values()[i];
    if (v == 0.0f)
      bits[i] = 0;
    else if (v == 1.0f)
      bits[i] = 1;
    else {
      std::ostringstream os;
      os << "'" << path << "': mask voxel at linear index " << i << " is " << v
         << ", expected 0 or 1";
      throw Error(os.str());
    }
  }
  return BinaryMask(vol.grid(), std::move(bits));
}

namespace {

void write_nifti(const Grid& g, std::int16_t datatype, const void* payload,
                 std::size_t payload_bytes, const std::string& path) {
  unsigned char raw[kHeaderSize + 4] = {}; // header + extension indicator
  store_le<std::int32_t>(raw + 0, kHeaderSize);
  raw[38] = 'r'; // "regular" flag, ANALYZE leftover kept for compatibility
  std::int16_t dim[8] = {3, static_cast<std::int16_t>(g.dim[0]),
                         static_cast<std::int16_t>(g.dim[1]),
                         static_cast<std::int16_t>(g.dim[2]), 1, 1, 1, 1};
  for (int i = 0; i < 8; ++i) store_le<std::int16_t>(raw + 40 + 2 * i, dim[i]);
  store_le<std::int16_t>(raw + 70, datatype);
  store_le<std::int16_t>(raw + 72, static_cast<std::int16_t>(8 * bytes_per_voxel(datatype)));
  float pixdim[8] = {1.0f, static_cast<float>(g.spacing[0]), static_cast<float>(g.spacing[1]),
                     static_cast<float>(g.spacing[2]), 0.0f, 0.0f, 0.0f, 0.0f};
  for (int i = 0; i < 8; ++i) store_le<float>(raw + 76 + 4 * i, pixdim[i]);
  store_le<float>(raw + 108, 352.0f); // vox_offset
  store_le<float>(raw + 112, 1.0f);   // scl_slope
  store_le<float>(raw + 116, 0.0f);   // scl_inter
  raw[123] = 2;                       // xyzt_units: millimetres
  const char descrip[] = "silverseg";
  std::memcpy(raw + 148, descrip, sizeof(descrip));
  std::memcpy(raw + 344, "n+1", 4);

  for (int i = 0; i < 3; ++i) {
    if (g.dim[i] > 32767)
      throw Error("'" + path + "': dimension too large for a NIfTI-1 short: " +
                  std::to_string(g.dim[i]));
  }

  ByteWriter out(path, is_gzip_path(path));
  out.write(raw, sizeof(raw));
  out.write(payload, payload_bytes);
  out.close();
}

}  // namespace

void save_volume(const VoxelVolume& vol, const std::string& path) {
  const auto vals = vol.values();
  if constexpr (std::endian::native == std::endian::little) {
    write_nifti(vol.grid(), DT_FLOAT32, vals.data(), vals.size() * 4, path);
  } else {
    std::vector<unsigned char> buf(vals.size() * 4);
    for (std::size_t i = 0; i < vals.size(); ++i) store_le<float>(buf.data() + 4 * i, vals[i]);
    write_nifti(vol.grid(), DT_FLOAT32, buf.data(), buf.size(), path);
  }
}

void save_volume(const BinaryMask& mask, const std::string& path) {
  const auto vals = mask.values();
  write_nifti(mask.grid(), DT_UINT8, vals.data(), vals.size(), path);
}

}  // namespace silverseg
