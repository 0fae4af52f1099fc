#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "afdsim/types.hpp"

namespace afd {

// Embedded catalog: nine public models plus the accelerators they are
// usually quoted on. Four entries carry cloud prices and feed cost tables;
// L20 and L4 have no public price and are used for capacity sizing only.
Catalog builtin_catalog();

// Loads and validates a catalog file. Unknown keys, duplicate names and
// invariant violations are errors.
Catalog load_catalog(const std::filesystem::path& path);
Catalog parse_catalog(std::string_view text, std::string_view origin);

// Serializes a catalog in the same schema load_catalog reads. Output is
// byte-stable: models then accelerators, each sorted by name, fixed key
// order, round-trippable number formatting.
std::string dump_catalog(const Catalog& catalog);

}  // namespace afd
