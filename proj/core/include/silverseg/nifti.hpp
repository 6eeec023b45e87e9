#ifndef SILVERSEG_NIFTI_HPP
#define SILVERSEG_NIFTI_HPP

#include <string>

#include "silverseg/volume.hpp"

/*
 * Minimal NIfTI-1 I/O: 3D volumes only, datatypes uint8 / int16 / float32,
 * optional gzip compression selected purely by a ".gz" path suffix.
 * Little- and big-endian headers are both accepted on read (detected via
 * sizeof_hdr == 348); files are always written little-endian with magic
 * "n+1" and data at offset 352. scl_slope / scl_inter are applied on load
 * when scl_slope != 0. Orientation fields are parsed but ignored: the
 * toolkit only ever compares images on identical grids, so spacing from
 * pixdim is all it needs.
 *
 * "ni1" header/data pairs are readable when the header path ends in .hdr
 * (data is then taken from the sibling .img file). Pairs are never written.
 */

namespace silverseg {

/// Loads a 3D volume. The result always has IntensityKind::raw; use
/// reinterpret_kind (or load_mask) to assert a stronger range.
VoxelVolume load_volume(const std::string& path);

/// Loads a volume whose voxels must all be exactly 0 or 1.
BinaryMask load_mask(const std::string& path);

/// Writes 32-bit float data. Gzip iff the path ends in ".gz".
void save_volume(const VoxelVolume& vol, const std::string& path);

/// Writes unsigned 8-bit {0,1} data. Gzip iff the path ends in ".gz".
void save_volume(const BinaryMask& mask, const std::string& path);

}  // namespace silverseg

#endif
