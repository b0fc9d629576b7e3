#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bmw/core.hpp"

namespace bmw {

struct CatalogInfo {
  std::string name;
  std::string kind;  // "bmw" or "generic"
  std::string title;
  std::optional<std::pair<int, int>> degree;
  std::string note;
};

/// Directory holding the shipped presentations; BMW_CATALOG overrides it.
std::filesystem::path catalog_dir();

std::vector<CatalogInfo> catalog_index();
CatalogInfo catalog_info(const std::string& name);

using CatalogEntry = std::variant<BmwPresentation, GenericPresentation>;

/// Throws PreconditionError("unknown catalog name ...") for unknown names.
CatalogEntry catalog(const std::string& name);
BmwPresentation catalog_bmw(const std::string& name);
GenericPresentation catalog_generic(const std::string& name);

std::string read_file(const std::filesystem::path& path);

}  // namespace bmw
