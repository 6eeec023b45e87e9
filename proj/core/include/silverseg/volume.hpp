#ifndef SILVERSEG_VOLUME_HPP
#define SILVERSEG_VOLUME_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "silverseg/error.hpp"

/*
 * Volume data model shared by every other module.
 *
 * Layout convention, fixed globally: dense row-major storage with x
 * fastest, i.e. linear index = (z * ny + y) * nx + x. Axial slices
 * (fixed z) are therefore contiguous, coronal slices (fixed y) are
 * blocked, and sagittal slices (fixed x) are the fully strided case.
 * Volumes and masks are immutable after construction; all operations
 * here are pure functions, so sharing across threads is safe.
 */

namespace silverseg {

enum class IntensityKind { raw, normalized, probability };

enum class PlaneAxis { axial, coronal, sagittal };

const char* to_string(PlaneAxis axis);
PlaneAxis plane_axis_from_string(const std::string& name);

/// Voxel lattice: per-axis counts plus physical spacing in millimetres.
/// Two objects live on the same grid iff dims and spacing agree exactly.
struct Grid {
  std::array<std::int64_t, 3> dim{0, 0, 0};     // nx, ny, nz
  std::array<double, 3> spacing{1.0, 1.0, 1.0}; // sx, sy, sz (mm)

  std::int64_t nx() const { return dim[0]; }
  std::int64_t ny() const { return dim[1]; }
  std::int64_t nz() const { return dim[2]; }
  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dim[0]) * static_cast<std::size_t>(dim[1]) *
           static_cast<std::size_t>(dim[2]);
  }
  std::size_t index(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return (static_cast<std::size_t>(z) * static_cast<std::size_t>(dim[1]) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(dim[0]) +
           static_cast<std::size_t>(x);
  }
  bool operator==(const Grid&) const = default;

  /// Throws Error unless dims are positive and spacing is positive and finite.
  void validate() const;
  std::string describe() const; // "64x64x20 @ (1, 1, 1) mm"
};

/// 3D scalar field. intensity_kind restricts the value range:
/// normalized volumes live in [0, 1000], probability volumes in [0, 1].
class VoxelVolume {
public:
  VoxelVolume(Grid grid, IntensityKind kind, std::vector<float> data);

  const Grid& grid() const { return grid_; }
  IntensityKind kind() const { return kind_; }
  std::span<const float> values() const { return data_; }
  float at(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return data_[grid_.index(x, y, z)];
  }

private:
  Grid grid_;
  IntensityKind kind_;
  std::vector<float> data_;
};

/// 3D boolean field stored one byte per voxel, values strictly 0 or 1.
class BinaryMask {
public:
  BinaryMask(Grid grid, std::vector<std::uint8_t> data);

  const Grid& grid() const { return grid_; }
  std::span<const std::uint8_t> values() const { return data_; }
  std::uint8_t at(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return data_[grid_.index(x, y, z)];
  }
  std::size_t foreground_count() const;

  bool operator==(const BinaryMask&) const = default;

private:
  Grid grid_;
  std::vector<std::uint8_t> data_;
};

/// One 2D plane cut from a volume. The two in-slice axes keep the parent
/// volume's (x, y, z) order, first axis fastest:
///   axial    -> (x, y), coronal -> (x, z), sagittal -> (y, z).
struct Slice2D {
  std::int64_t n0 = 0;
  std::int64_t n1 = 0;
  std::vector<float> data; // data[i1 * n0 + i0]

  float at(std::int64_t i0, std::int64_t i1) const {
    return data[static_cast<std::size_t>(i1) * static_cast<std::size_t>(n0) +
                static_cast<std::size_t>(i0)];
  }
};

/// Reinterprets a volume under a different intensity kind, re-checking the
/// kind's range invariant. Used to tag freshly loaded files (always raw)
/// as probability or normalized data.
VoxelVolume reinterpret_kind(const VoxelVolume& vol, IntensityKind kind);

/// All slices perpendicular to `axis`, in ascending slice-index order.
std::vector<Slice2D> extract_slices(const VoxelVolume& vol, PlaneAxis axis);

/// Inverse of extract_slices on the same axis. Grid metadata is not carried
/// by slices, so spacing and kind come from the caller.
VoxelVolume reconstruct_slices(const std::vector<Slice2D>& slices, PlaneAxis axis,
                               const std::array<double, 3>& spacing,
                               IntensityKind kind);

}  // namespace silverseg

#endif
