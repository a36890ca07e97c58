#include "wordorder/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wordorder/error.hpp"

namespace wordorder {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw Error("io", "InputParseError", message);
}

std::vector<std::string> string_list(const json& node, const char* what) {
  if (!node.is_array()) fail(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.is_string()) fail(std::string(what) + " must contain only strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

JointModel parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("model document must be a JSON object");
  for (const char* key : {"roles", "entries"}) {
    if (!doc.contains(key)) fail(std::string("missing field '") + key + "'");
  }
  const auto roles = string_list(doc["roles"], "roles");

  std::vector<TableEntry> table;
  if (!doc["entries"].is_array()) fail("entries must be an array");
  for (const auto& e : doc["entries"]) {
    if (!e.is_object() || !e.contains("tuple") || !e.contains("p")) {
      fail("each entry needs 'tuple' and 'p'");
    }
    if (!e["p"].is_number()) fail("entry probability must be a number");
    table.push_back({string_list(e["tuple"], "tuple"), e["p"].get<double>()});
  }

  if (!doc.contains("alphabets")) return make_joint(roles, table);
  if (!doc["alphabets"].is_array()) fail("alphabets must be an array");
  std::vector<Alphabet> alphabets;
  for (const auto& a : doc["alphabets"]) alphabets.emplace_back(string_list(a, "alphabet"));
  return make_joint(roles, alphabets, table);
}

JointModel read_model(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

JointModel read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open model file '" + path + "'");
  return read_model(in);
}

std::string write_model(const JointModel& model) {
  json doc;
  doc["roles"] = model.roles();
  json alphabets = json::array();
  for (const auto& a : model.alphabets()) alphabets.push_back(a.symbols());
  doc["alphabets"] = std::move(alphabets);
  json entries = json::array();
  for (const auto& [outcome, p] : model.entries()) {
    json tuple = json::array();
    for (std::size_t i = 0; i < outcome.size(); ++i) {
      tuple.push_back(model.alphabets()[i].symbol(outcome[i]));
    }
    entries.push_back({{"tuple", std::move(tuple)}, {"p", p}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

}  // namespace wordorder
