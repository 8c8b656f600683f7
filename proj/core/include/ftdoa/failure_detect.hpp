#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ftdoa/array_sim.hpp"

namespace ftdoa {

/// Functioning elements of an M-element array, 0-based and ascending.
struct LocationSet {
    std::vector<std::size_t> working;
    std::size_t total = 0;

    static LocationSet all(std::size_t total);
    static LocationSet without(std::size_t total, const std::vector<std::size_t>& failed);

    bool complete() const { return working.size() == total; }
    std::vector<std::size_t> failed() const;
    void validate() const;

    // Comma-separated 1-based working indices.
    std::string to_csv_line() const;
    static LocationSet from_csv_line(const std::string& line, std::size_t total);
};

inline constexpr double kDefaultDetectEpsilon = 1e-2;

// Flags element i as failed when its output did not change between the two
// snapshots (|prev_i - curr_i| < epsilon) or when it is dead
// (|curr_i| < epsilon^2). The previous snapshot must come from a fully
// working array.
LocationSet detect(const Snapshot& prev, const Snapshot& curr, double epsilon = kDefaultDetectEpsilon);

}  // namespace ftdoa
