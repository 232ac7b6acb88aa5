#pragma once

#include <cstdint>
#include <vector>

namespace late {

/// One observed record (Y, D, Z).
struct SampleRow {
    double y;
    std::uint8_t d;
    std::uint8_t z;
};

/// Observed data: n rows of (y, d, z) with d, z binary and y finite.
struct SampleData {
    std::vector<SampleRow> rows;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
};

}  // namespace late
