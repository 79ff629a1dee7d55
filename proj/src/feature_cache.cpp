//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>

#include "binary_io.hpp"
#include "gmc/error.hpp"
#include "gmc/featurize.hpp"

namespace gmc {

namespace {
constexpr char kMagic[4] = {'G', 'M', 'C', 'F'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_wcs_cache(const std::string& path, const std::string& fingerprint,
                    const std::vector<WcsCacheRecord>& records) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw CorruptCache("cannot open '" + path + "' for writing");

  os.write(kMagic, 4);
  detail::write_le<std::uint32_t>(os, kVersion);
  detail::write_string(os, fingerprint);
  detail::write_le<std::uint64_t>(os, records.size());
  // On disk each record is the width x atoms matrix, row-major; in memory
  // the API hands out atoms x width.
  for (const WcsCacheRecord& rec : records) {
    detail::write_string(os, rec.id);
    detail::write_le<std::uint32_t>(os,
                                    static_cast<std::uint32_t>(rec.features.cols()));
    detail::write_le<std::uint32_t>(os,
                                    static_cast<std::uint32_t>(rec.features.rows()));
    for (Eigen::Index c = 0; c < rec.features.cols(); ++c)
      for (Eigen::Index r = 0; r < rec.features.rows(); ++r)
        detail::write_le<double>(os, rec.features(r, c));
  }
  if (!os) throw CorruptCache("short write to '" + path + "'");
}

WcsCache load_wcs_cache(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CorruptCache("cannot open '" + path + "'");

  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw CorruptCache("'" + path + "' is not a feature cache");
  std::uint32_t version = 0;
  if (!detail::read_le(is, version)) throw CorruptCache("truncated header");
  if (version != kVersion)
    throw VersionMismatch("feature cache version " + std::to_string(version) +
                          ", expected " + std::to_string(kVersion));

  WcsCache cache;
  if (!detail::read_string(is, cache.fingerprint))
    throw CorruptCache("truncated fingerprint in '" + path + "'");
  std::uint64_t count = 0;
  if (!detail::read_le(is, count))
    throw CorruptCache("truncated record count in '" + path + "'");

  cache.records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    WcsCacheRecord rec;
    std::uint32_t width = 0, atoms = 0;
    if (!detail::read_string(is, rec.id) || !detail::read_le(is, width) ||
        !detail::read_le(is, atoms))
      throw CorruptCache("truncated record header in '" + path + "'");
    rec.features.resize(atoms, width);
    for (std::uint32_t c = 0; c < width; ++c)
      for (std::uint32_t r = 0; r < atoms; ++r)
        if (!detail::read_le(is, rec.features(r, c)))
          throw CorruptCache("truncated record data in '" + path + "'");
    cache.records.push_back(std::move(rec));
  }
  return cache;
}

}  // namespace gmc
