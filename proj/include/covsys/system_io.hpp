#pragma once

// Reading and writing residue systems.
//
// JSON form: {"classes": [[n, r], ...], "name": "...", "source": "..."}.
// Text form: one class per line, "r mod n"; '#' starts a comment, and ';'
// may separate classes on one line.

#include <optional>
#include <string>

#include "covsys/core.hpp"

namespace covsys {

struct SystemDocument {
  ResidueSystem system;
  std::optional<std::string> name;
  std::optional<std::string> source;
};

SystemDocument parse_system_json(const std::string& text);
SystemDocument parse_system_text(const std::string& text);
std::string to_json(const SystemDocument& doc, int indent = -1);

}  // namespace covsys
