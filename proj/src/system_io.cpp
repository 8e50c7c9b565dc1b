#include "covsys/system_io.hpp"

#include <regex>
#include <sstream>

#include "json.hpp"

namespace covsys {

namespace {

using nlohmann::json;

std::uint64_t json_modulus(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 1) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw InputError("modulus must be an integer >= 1, got " + v.dump());
}

ResidueClass json_class(const json& pair) {
  if (!pair.is_array() || pair.size() != 2) throw InputError("each class must be [n, r], got " + pair.dump());
  std::uint64_t n = json_modulus(pair[0]);
  if (n == 0) throw InputError("modulus must be >= 1");
  const json& r = pair[1];
  if (r.is_number_unsigned()) return ResidueClass(n, static_cast<std::int64_t>(r.get<std::uint64_t>() % n));
  if (r.is_number_integer()) return ResidueClass(n, r.get<std::int64_t>());
  throw InputError("residue must be an integer, got " + r.dump());
}

}  // namespace

SystemDocument parse_system_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (doc.is_array()) doc = json{{"classes", doc}};
  if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_array())
    throw InputError("expected an object with a \"classes\" array");
  SystemDocument out;
  for (const auto& pair : doc["classes"]) out.system.add(json_class(pair));
  if (doc.contains("name") && doc["name"].is_string()) out.name = doc["name"].get<std::string>();
  if (doc.contains("source") && doc["source"].is_string()) out.source = doc["source"].get<std::string>();
  return out;
}

SystemDocument parse_system_text(const std::string& text) {
  static const std::regex line_re(R"(^\s*(-?\d+)\s*(?:mod|\(mod)\s*(\d+)\s*\)?\s*$)");
  SystemDocument out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream parts(line);
    std::string item;
    while (std::getline(parts, item, ';')) {
      if (item.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::smatch m;
      if (!std::regex_match(item, m, line_re))
        throw InputError("line " + std::to_string(lineno) + ": expected \"r mod n\", got \"" + item + "\"");
      std::uint64_t n;
      std::int64_t r;
      try {
        n = std::stoull(m[2].str());
        r = std::stoll(m[1].str());
      } catch (const std::out_of_range&) {
        throw InputError("line " + std::to_string(lineno) + ": number out of range");
      }
      if (n == 0) throw InputError("line " + std::to_string(lineno) + ": modulus must be >= 1");
      out.system.add(n, r);
    }
  }
  return out;
}

std::string to_json(const SystemDocument& doc, int indent) {
  json j;
  json classes = json::array();
  for (const auto& c : doc.system) classes.push_back({c.modulus(), c.residue()});
  j["classes"] = std::move(classes);
  if (doc.name) j["name"] = *doc.name;
  if (doc.source) j["source"] = *doc.source;
  return j.dump(indent);
}

}  // namespace covsys
