// SPDX-License-Identifier: Apache-2.0
#include "hyperq/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hyperq {

namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw Error(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.get<std::string>());
  return out;
}

std::vector<Letter> letters(const json& j, const Alphabet& ap, const char* what) {
  if (!j.is_array()) throw Error(std::string(what) + " must be an array of letters");
  std::vector<Letter> out;
  for (const auto& e : j) out.push_back(make_letter(ap, string_list(e, "letter")));
  return out;
}

json read(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, true);  // allow comments
  } catch (const json::exception& e) {
    throw Error(std::string("bad JSON: ") + e.what());
  }
}

}  // namespace

TraceSet trace_set_from_json_text(const std::string& text) {
  json j = read(text);
  Alphabet ap(string_list(j.at("ap"), "ap"));
  std::vector<LassoTrace> members;
  for (const auto& t : j.at("traces")) {
    std::vector<Letter> stem =
        t.contains("stem") ? letters(t.at("stem"), ap, "stem") : std::vector<Letter>{};
    std::vector<Letter> loop = letters(t.at("loop"), ap, "loop");
    members.emplace_back(ap, std::move(stem), std::move(loop));
  }
  return TraceSet(ap, std::move(members));
}

std::string trace_set_to_json_text(const TraceSet& ts) {
  json j;
  j["ap"] = ts.alphabet().names();
  j["traces"] = json::array();
  for (const auto& t : ts.members()) {
    json jt;
    jt["stem"] = json::array();
    for (Letter l : t.stem()) jt["stem"].push_back(letter_props(ts.alphabet(), l));
    jt["loop"] = json::array();
    for (Letter l : t.loop()) jt["loop"].push_back(letter_props(ts.alphabet(), l));
    j["traces"].push_back(std::move(jt));
  }
  return j.dump(2);
}

TransitionSystem system_from_json_text(const std::string& text) {
  json j = read(text);
  Alphabet ap(string_list(j.at("ap"), "ap"));
  std::vector<std::string> vertices = string_list(j.at("vertices"), "vertices");
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : j.at("edges")) {
    auto pair = string_list(e, "edge");
    if (pair.size() != 2) throw Error("edge must be a [from, to] pair");
    edges.emplace_back(pair[0], pair[1]);
  }
  std::vector<std::string> initial = string_list(j.at("initial"), "initial");
  std::map<std::string, std::vector<std::string>> labels;
  if (j.contains("labels")) {
    for (const auto& [v, props] : j.at("labels").items()) {
      labels[v] = string_list(props, "labels");
    }
  }
  return TransitionSystem(ap, std::move(vertices), std::move(edges), std::move(initial),
                          std::move(labels));
}

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}
}  // namespace

TraceSet load_trace_set(const std::string& path) {
  return trace_set_from_json_text(slurp(path));
}

TransitionSystem load_system(const std::string& path) {
  return system_from_json_text(slurp(path));
}

}  // namespace hyperq
