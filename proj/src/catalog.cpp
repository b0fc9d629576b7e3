#include "bmw/catalog.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#ifndef BMW_DEFAULT_CATALOG_DIR
#define BMW_DEFAULT_CATALOG_DIR "catalog/v1"
#endif

namespace bmw {

std::filesystem::path catalog_dir() {
  if (const char* env = std::getenv("BMW_CATALOG"); env && *env) return env;
  return BMW_DEFAULT_CATALOG_DIR;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<CatalogInfo> catalog_index() {
  auto doc = nlohmann::json::parse(read_file(catalog_dir() / "index.json"));
  std::vector<CatalogInfo> out;
  for (const auto& e : doc.at("entries")) {
    CatalogInfo info{e.at("name"), e.at("kind"), e.value("title", ""), std::nullopt, e.value("note", "")};
    if (e.contains("degree")) info.degree = std::pair<int, int>{e["degree"][0], e["degree"][1]};
    out.push_back(std::move(info));
  }
  return out;
}

CatalogInfo catalog_info(const std::string& name) {
  for (auto& info : catalog_index())
    if (info.name == name) return info;
  throw PreconditionError("unknown catalog name '" + name + "'");
}

CatalogEntry catalog(const std::string& name) {
  CatalogInfo info = catalog_info(name);
  std::string text = read_file(catalog_dir() / (name + ".json"));
  if (info.kind == "bmw") return parse_bmw(text);
  return parse_generic(text);
}

BmwPresentation catalog_bmw(const std::string& name) {
  auto e = catalog(name);
  if (auto* p = std::get_if<BmwPresentation>(&e)) return *p;
  throw PreconditionError("catalog entry '" + name + "' is not a BMW-presentation");
}

GenericPresentation catalog_generic(const std::string& name) {
  auto e = catalog(name);
  if (auto* p = std::get_if<GenericPresentation>(&e)) return *p;
  return to_generic(std::get<BmwPresentation>(e));
}

}  // namespace bmw
