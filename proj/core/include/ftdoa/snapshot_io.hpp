#pragma once

#include <filesystem>
#include <iosfwd>

#include "ftdoa/array_sim.hpp"

namespace ftdoa {

// Snapshot CSV: header `index,re,im`, one row per element, 1-based index,
// 17 significant digits.
void write_snapshot_csv(std::ostream& out, const Snapshot& x);
void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& x);

Snapshot read_snapshot_csv(std::istream& in);
Snapshot read_snapshot_csv(const std::filesystem::path& path);

}  // namespace ftdoa
