#include "silverseg/volume.hpp"

#include <cmath>
#include <sstream>

namespace silverseg {

const char* to_string(PlaneAxis axis) {
  switch (axis) {
    case PlaneAxis::axial: return "axial";
    case PlaneAxis::coronal: return "coronal";
    case PlaneAxis::sagittal: return "sagittal";
  }
  return "?";
}

PlaneAxis plane_axis_from_string(const std::string& name) {
  if (name == "axial") return PlaneAxis::axial;
  if (name == "coronal") return PlaneAxis::coronal;
  if (name == "sagittal") return PlaneAxis::sagittal;
  throw Error("unknown plane axis '" + name + "' (expected axial, coronal or sagittal)");
}

void Grid::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (dim[i] <= 0) {
      std::ostringstream os;
      os << "grid dim[" << i << "] must be positive, got " << dim[i];
      throw Error(os.str());
    }
    if (!(spacing[i] > 0.0) || !std::isfinite(spacing[i])) {
      std::ostringstream os;
      os << "grid spacing[" << i << "] must be positive and finite, got " << spacing[i];
      throw Error(os.str());
    }
  }
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << dim[0] << "x" << dim[1] << "x" << dim[2] << " @ (" << spacing[0] << ", "
     << spacing[1] << ", " << spacing[2] << ") mm";
  return os.str();
}

namespace {

void check_kind_range(IntensityKind kind, std::span<const float> data) {
  double lo = 0.0, hi = 0.0;
  switch (kind) {
    case IntensityKind::raw: return;
    case IntensityKind::normalized: lo = 0.0; hi = 1000.0; break;
    case IntensityKind::probability: lo = 0.0; hi = 1.0; break;
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const float v = data[i];
    if (!(v >= lo && v <= hi)) {
      std::ostringstream os;
      os << (kind == IntensityKind::probability ? "probability" : "normalized")
         << " volume value out of [" << lo << ", " << hi << "] at linear index " << i
         << ": " << v;
      throw Error(os.str());
    }
  }
}

}  // namespace

VoxelVolume::VoxelVolume(Grid grid, IntensityKind kind, std::vector<float> data)
    : grid_(grid), kind_(kind), data_(std::move(data)) {
  grid_.validate();
  if (data_.size() != grid_.voxel_count()) {
    std::ostringstream os;
    os << "volume data length " << data_.size() << " does not match grid "
       << grid_.describe();
    throw Error(os.str());
  }
  check_kind_range(kind_, data_);
}

BinaryMask::BinaryMask(Grid grid, std::vector<std::uint8_t> data)
    : grid_(grid), data_(std::move(data)) {
  grid_.validate();
  if (data_.size() != grid_.voxel_count()) {
    std::ostringstream os;
    os << "mask data length " << data_.size() << " does not match grid "
       << grid_.describe();
    throw Error(os.str());
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (data_[i] > 1) {
      std::ostringstream os;
      os << "mask value must be 0 or 1, got " << int(data_[i]) << " at linear index " << i;
      throw Error(os.str());
    }
  }
}

std::size_t BinaryMask::foreground_count() const {
  std::size_t n = 0;
  for (auto v : data_) n += v;
  return n;
}

VoxelVolume reinterpret_kind(const VoxelVolume& vol, IntensityKind kind) {
  return VoxelVolume(vol.grid(), kind,
                     std::vector<float>(vol.values().begin(), vol.values().end()));
}

std::vector<Slice2D> extract_slices(const VoxelVolume& vol, PlaneAxis axis) {
  const Grid& g = vol.grid();
  const std::int64_t nx = g.nx(), ny = g.ny(), nz = g.nz();
  std::vector<Slice2D> out;

  switch (axis) {
    case PlaneAxis::axial: { // fixed z, slice axes (x, y)
      out.reserve(static_cast<std::size_t>(nz));
      for (std::int64_t z = 0; z < nz; ++z) {
        Slice2D s{nx, ny, {}};
        s.data.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
        const float* src = vol.values().data() + g.index(0, 0, z);
        std::copy(src, src + s.data.size(), s.data.begin());
        out.push_back(std::move(s));
      }
      break;
    }
    case PlaneAxis::coronal: { // fixed y, slice axes (x, z)
      out.reserve(static_cast<std::size_t>(ny));
      for (std::int64_t y = 0; y < ny; ++y) {
        Slice2D s{nx, nz, {}};
        s.data.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nz));
        for (std::int64_t z = 0; z < nz; ++z) {
          const float* src = vol.values().data() + g.index(0, y, z);
          std::copy(src, src + nx,
                    s.data.begin() + static_cast<std::size_t>(z) * static_cast<std::size_t>(nx));
        }
        out.push_back(std::move(s));
      }
      break;
    }
    case PlaneAxis::sagittal: { // fixed x, slice axes (y, z)
      out.reserve(static_cast<std::size_t>(nx));
      for (std::int64_t x = 0; x < nx; ++x) {
        Slice2D s{ny, nz, {}};
        s.data.resize(static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz));
        std::size_t k = 0;
        for (std::int64_t z = 0; z < nz; ++z)
          for (std::int64_t y = 0; y < ny; ++y) s.data[k++] = vol.at(x, y, z);
        out.push_back(std::move(s));
      }
      break;
    }
  }
  return out;
}

VoxelVolume reconstruct_slices(const std::vector<Slice2D>& slices, PlaneAxis axis,
                               const std::array<double, 3>& spacing, IntensityKind kind) {
  if (slices.empty()) throw Error("reconstruct_slices: empty slice list");
  const std::int64_t n0 = slices.front().n0, n1 = slices.front().n1;
  for (std::size_t k = 0; k < slices.size(); ++k) {
    if (slices[k].n0 != n0 || slices[k].n1 != n1) {
      std::ostringstream os;
      os << "reconstruct_slices: slice " << k << " shape " << slices[k].n0 << "x"
         << slices[k].n1 << " differs from first slice " << n0 << "x" << n1;
      throw Error(os.str());
    }
    if (slices[k].data.size() !=
        static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1))
      throw Error("reconstruct_slices: slice data length does not match its shape");
  }

  const auto nk = static_cast<std::int64_t>(slices.size());
  Grid g;
  g.spacing = spacing;
  switch (axis) {
    case PlaneAxis::axial: g.dim = {n0, n1, nk}; break;
    case PlaneAxis::coronal: g.dim = {n0, nk, n1}; break;
    case PlaneAxis::sagittal: g.dim = {nk, n0, n1}; break;
  }
  std::vector<float> data(g.voxel_count());

  for (std::int64_t k = 0; k < nk; ++k) {
    const Slice2D& s = slices[static_cast<std::size_t>(k)];
    switch (axis) {
      case PlaneAxis::axial:
        std::copy(s.data.begin(), s.data.end(), data.begin() + g.index(0, 0, k));
        break;
      case PlaneAxis::coronal:
        for (std::int64_t z = 0; z < n1; ++z)
          std::copy(s.data.begin() + static_cast<std::size_t>(z) * static_cast<std::size_t>(n0),
                    s.data.begin() + static_cast<std::size_t>(z + 1) * static_cast<std::size_t>(n0),
                    data.begin() + g.index(0, k, z));
        break;
      case PlaneAxis::sagittal: {
        std::size_t i = 0;
        for (std::int64_t z = 0; z < n1; ++z)
          for (std::int64_t y = 0; y < n0; ++y) data[g.index(k, y, z)] = s.data[i++];
        break;
      }
    }
  }
  return VoxelVolume(g, kind, std::move(data));
}

}  // namespace silverseg
