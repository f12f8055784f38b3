#pragma once

// Family manifests: JSON with integers as decimal strings and rationals as
// "p/q", Delta maps keyed by subset strings ("{}", "{1,2}").

#include "bohr/family.hpp"

#include <json.hpp>

#include <string>

namespace bohr {

using Json = nlohmann::ordered_json;

Json family_to_json(const SetFamily& family);
SetFamily family_from_json(const Json& j);

std::string dump_manifest(const SetFamily& family);
void write_family(const SetFamily& family, const std::string& path);
SetFamily read_family(const std::string& path);

/// FNV-1a 64-bit digest of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
/// Digest of the canonical manifest text of a family.
std::string family_digest(const SetFamily& family);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json block_to_json(const BlockSpec& b);
BlockSpec block_from_json(const Json& j);

}  // namespace bohr
