#pragma once

#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>

#include "crl/errors.hpp"
#include "crl/io.hpp"

namespace crl::cli {

/// Spec files by path. Relative paths that do not exist from the working
/// directory are looked up under $CRL_WORKSPACE. "file.json#name" selects
/// sets["name"] of a bundle file {"interface", "sets": {name: [agents]}}; a set
/// may also be a full {"interface", "agents"} object.
class Workspace {
 public:
  Workspace() {
    if (const char* dir = std::getenv("CRL_WORKSPACE")) root_ = dir;
  }

  std::string resolve(const std::string& path) const {
    namespace fs = std::filesystem;
    if (fs::path(path).is_absolute() || fs::exists(path) || root_.empty()) return path;
    return (fs::path(root_) / path).string();
  }

  const io::Json& json(const std::string& path) {
    std::string full = resolve(path);
    auto it = files_.find(full);
    if (it == files_.end()) it = files_.emplace(full, io::read_file(full)).first;
    return it->second;
  }

  AgentSet agents(const std::string& ref) {
    auto hash = ref.find('#');
    std::string path = ref.substr(0, hash);
    const io::Json& j = json(path);
    AgentSet out;
    if (hash == std::string::npos) {
      out = io::agent_set_from(j);
    } else {
      std::string name = ref.substr(hash + 1);
      if (!j.contains("sets") || !j.at("sets").contains(name)) {
        throw SpecError("'" + path + "' has no agent set named '" + name + "'");
      }
      const io::Json& entry = j.at("sets").at(name);
      if (entry.is_object()) {
        out = io::agent_set_from(entry);
      } else {
        if (!j.contains("interface")) throw SpecError("bundle '" + path + "' needs an \"interface\"");
        out = io::agent_set_from(io::Json{{"interface", j.at("interface")}, {"agents", entry}});
      }
    }
    std::set<std::string> names;
    for (const auto& a : out) {
      if (!a.name().empty() && !names.insert(a.name()).second) {
        throw SpecError("agent name '" + a.name() + "' is not unique in '" + ref + "'");
      }
    }
    if (out.empty()) throw SpecError("agent set '" + ref + "' is empty");
    return out;
  }

  /// One agent of a set, by name or index (the only member when neither is given).
  FsmAgent agent(const std::string& ref, const std::string& name, int index) {
    AgentSet set = agents(ref);
    if (!name.empty()) {
      for (const auto& a : set) {
        if (a.name() == name) return a;
      }
      throw SpecError("no agent named '" + name + "' in '" + ref + "'");
    }
    if (index >= 0) {
      if (static_cast<std::size_t>(index) >= set.size()) throw SpecError("agent index out of range");
      return set[static_cast<std::size_t>(index)];
    }
    if (set.size() != 1) throw SpecError("'" + ref + "' holds several agents; pick one with --name or --index");
    return set[0];
  }

  /// An environment file, or the "environment" of an instance file.
  FsmEnvironment environment(const std::string& path) {
    const io::Json& j = json(path);
    if (j.is_object() && !j.contains("kind") && j.contains("environment")) {
      return io::environment_from(j.at("environment"));
    }
    return io::environment_from(j);
  }
  CrlInstance instance(const std::string& path) { return io::instance_from(json(path)); }

 private:
  std::string root_;
  std::map<std::string, io::Json> files_;
};

}  // namespace crl::cli
