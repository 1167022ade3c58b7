#pragma once
#include <memory>
#include <string>

#include "invlab/core/grid.hpp"

namespace invlab {

/// Flat binary field snapshot: an 8-byte magic, a little-endian header with
/// the dimensions, spacings, and time stamp, then the raw float64 samples.
/// A plain-text sidecar (path + ".meta") carries the same metadata.
void save_field(const Field& f, const std::string& path);

struct LoadedField {
    std::shared_ptr<Grid> grid;
    Field field;
};

LoadedField load_field(const std::string& path);

} // namespace invlab
