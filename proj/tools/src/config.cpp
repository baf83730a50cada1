#include "labmech_cli/config.hpp"

#include <algorithm>

#include "labmech/mesh.hpp"
#include "labmech_cli/inputs.hpp"

namespace labmech::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kSections = {"helix", "detent", "screw", "scene", "score"};

void check_keys(const json& object, const std::string& where, const std::vector<std::string>& allowed) {
  if (!object.is_object()) throw Failure(2, "config: " + where + " must be an object");
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Failure(2, "config: unknown key '" + key + "' in " + where);
    }
  }
}

Vec3 vec3_of(const json& object, const std::string& key) {
  const std::vector<double> v = numbers_or(object, key, {});
  if (v.size() != 3) throw Failure(2, "config: '" + key + "' needs three numbers");
  return {v[0], v[1], v[2]};
}

}  // namespace

LoadedConfig parse_config(std::string_view bytes, const std::filesystem::path& origin) {
  LoadedConfig config;
  try {
    config.document = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Failure(2, "config " + origin.string() + ": " + e.what());
  }
  if (!config.document.is_object()) throw Failure(2, "config: top level must be an object");
  const auto version = config.document.find("version");
  if (version == config.document.end() || !version->is_number_integer() ||
      version->get<int>() != kConfigVersion) {
    throw Failure(2, "config: expected \"version\": " + std::to_string(kConfigVersion));
  }
  std::vector<std::string> allowed = kSections;
  allowed.push_back("version");
  check_keys(config.document, "the document", allowed);
  config.base_dir = origin.parent_path();
  return config;
}

json section(const LoadedConfig& config, const std::string& name,
             const std::vector<std::string>& allowed_keys) {
  const auto it = config.document.find(name);
  if (it == config.document.end()) return json::object();
  check_keys(*it, "section '" + name + "'", allowed_keys);
  return *it;
}

double number_or(const json& object, const std::string& key, double fallback) {
  const auto it = object.find(key);
  if (it == object.end()) return fallback;
  if (!it->is_number()) throw Failure(2, "config: '" + key + "' must be a number");
  return it->get<double>();
}

std::vector<double> numbers_or(const json& object, const std::string& key, std::vector<double> fallback) {
  const auto it = object.find(key);
  if (it == object.end()) return fallback;
  if (!it->is_array()) throw Failure(2, "config: '" + key + "' must be an array of numbers");
  std::vector<double> values;
  for (const json& v : *it) {
    if (!v.is_number()) throw Failure(2, "config: '" + key + "' must be an array of numbers");
    values.push_back(v.get<double>());
  }
  return values;
}

TriMesh build_container(const json& spec, const std::filesystem::path& base_dir,
                        std::filesystem::path* mesh_path, std::string* mesh_bytes) {
  if (!spec.is_object() || spec.size() != 1) {
    throw Failure(2, "config: container must name exactly one of mesh, box, cylinder, l_prism, icosphere");
  }
  const auto entry = spec.begin();
  const std::string kind = entry.key();
  const json& body = entry.value();
  if (kind == "mesh") {
    if (!body.is_string()) throw Failure(2, "config: container mesh must be a path");
    std::filesystem::path path = body.get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    std::string bytes = read_file_bytes(path);
    TriMesh mesh = parse_mesh_bytes(bytes);
    if (mesh_path) *mesh_path = path;
    if (mesh_bytes) *mesh_bytes = std::move(bytes);
    return mesh;
  }
  if (kind == "box") {
    check_keys(body, "container box", {"lo", "hi"});
    return make_box(vec3_of(body, "lo"), vec3_of(body, "hi"));
  }
  if (kind == "cylinder") {
    check_keys(body, "container cylinder", {"radius", "height", "segments"});
    return make_cylinder(number_or(body, "radius", 0.5), number_or(body, "height", 1.0),
                         static_cast<int>(number_or(body, "segments", 64)));
  }
  if (kind == "l_prism") {
    check_keys(body, "container l_prism", {"w", "d", "c", "b", "height"});
    return make_l_prism(number_or(body, "w", 1.0), number_or(body, "d", 1.0), number_or(body, "c", 0.5),
                        number_or(body, "b", 0.5), number_or(body, "height", 1.0));
  }
  if (kind == "icosphere") {
    check_keys(body, "container icosphere", {"radius", "subdivisions"});
    return make_icosphere(number_or(body, "radius", 0.5),
                          static_cast<int>(number_or(body, "subdivisions", 3)));
  }
  throw Failure(2, "config: unknown container kind '" + kind + "'");
}

}  // namespace labmech::cli
