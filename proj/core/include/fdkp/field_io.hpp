#pragma once

#include <filesystem>
#include <iosfwd>

#include "fdkp/field.hpp"

namespace fdkp {

// FDKP1 layout: one ASCII line "FDKP1 nx ny lx ly rep realTagged\n" with rep in
// {physical, spectral} and realTagged in {0, 1}, followed by nx*ny
// little-endian float64 (re, im) pairs, x fastest.
void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);

void save_field(const std::filesystem::path& path, const Field& f);
Field load_field(const std::filesystem::path& path);

} // namespace fdkp
