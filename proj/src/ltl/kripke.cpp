#include "caver/ltl/kripke.hpp"

#include <algorithm>
#include <set>

#include "caver/errors.hpp"

namespace caver::ltl {

void KripkeStructure::validate() const {
  std::set<std::string> names;
  for (const auto& a : atoms) {
    if (a.empty()) fail(ErrorKind::InvalidInput, "empty atom name");
    if (!names.insert(a).second) fail(ErrorKind::InvalidInput, "duplicate atom '" + a + "'");
  }
  names.clear();
  if (states.empty()) fail(ErrorKind::InvalidInput, "structure has no states");
  for (const auto& s : states) {
    if (s.empty()) fail(ErrorKind::InvalidInput, "empty state name");
    if (!names.insert(s).second) fail(ErrorKind::InvalidInput, "duplicate state '" + s + "'");
  }
  if (initial.empty()) fail(ErrorKind::InvalidInput, "no initial states");
  int n = static_cast<int>(states.size());
  for (int s : initial)
    if (s < 0 || s >= n) fail(ErrorKind::InvalidInput, "initial state index out of range");
  if (succ.size() != states.size() || labels.size() != states.size())
    fail(ErrorKind::InvalidInput, "state table sizes disagree");
  for (int s = 0; s < n; ++s) {
    if (succ[static_cast<std::size_t>(s)].empty())
      fail(ErrorKind::InvalidModel, "state '" + states[static_cast<std::size_t>(s)] +
                                        "' has no successor; the relation must be left-total");
    for (int t : succ[static_cast<std::size_t>(s)])
      if (t < 0 || t >= n) fail(ErrorKind::InvalidInput, "edge target index out of range");
    if (labels[static_cast<std::size_t>(s)].size() != atoms.size())
      fail(ErrorKind::InvalidInput, "label row size disagrees with the alphabet");
  }
}

int KripkeStructure::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  return -1;
}

int KripkeStructure::atom_index(std::string_view name) const {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i] == name) return static_cast<int>(i);
  return -1;
}

KripkeStructure kripke_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidInput, "structure file must be a JSON object");
  for (const char* key : {"atoms", "states", "initial", "edges", "labels"})
    if (!j.contains(key))
      fail(ErrorKind::InvalidInput, std::string("structure file lacks \"") + key + "\"");

  KripkeStructure k;
  try {
    for (const auto& a : j.at("atoms")) k.atoms.push_back(a.get<std::string>());
    for (const auto& s : j.at("states")) k.states.push_back(s.get<std::string>());
    k.succ.assign(k.states.size(), {});
    k.labels.assign(k.states.size(), std::vector<bool>(k.atoms.size(), false));

    for (const auto& s : j.at("initial")) {
      int idx = k.state_index(s.get<std::string>());
      if (idx < 0)
        fail(ErrorKind::InvalidInput, "unknown initial state '" + s.get<std::string>() + "'");
      k.initial.push_back(idx);
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        fail(ErrorKind::InvalidInput, "each edge must be a [from, to] pair");
      int from = k.state_index(e.at(0).get<std::string>());
      int to = k.state_index(e.at(1).get<std::string>());
      if (from < 0 || to < 0)
        fail(ErrorKind::InvalidInput, "edge " + e.dump() + " names an unknown state");
      auto& row = k.succ[static_cast<std::size_t>(from)];
      if (std::find(row.begin(), row.end(), to) == row.end()) row.push_back(to);
    }
    const json& labels = j.at("labels");
    if (!labels.is_object())
      fail(ErrorKind::InvalidInput, "\"labels\" must map states to atom lists");
    for (const auto& s : k.states)
      if (!labels.contains(s))
        fail(ErrorKind::InvalidInput, "state '" + s + "' has no label entry");
    for (const auto& [name, atom_list] : labels.items()) {
      int s = k.state_index(name);
      if (s < 0) fail(ErrorKind::InvalidInput, "labels name an unknown state '" + name + "'");
      for (const auto& a : atom_list) {
        int idx = k.atom_index(a.get<std::string>());
        if (idx < 0)
          fail(ErrorKind::InvalidInput, "state '" + name + "' is labeled with unknown atom '" +
                                            a.get<std::string>() + "'");
        k.labels[static_cast<std::size_t>(s)][static_cast<std::size_t>(idx)] = true;
      }
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed structure file: ") + e.what());
  }
  k.validate();
  return k;
}

json kripke_to_json(const KripkeStructure& k) {
  k.validate();
  json j;
  j["atoms"] = k.atoms;
  j["states"] = k.states;
  json init = json::array();
  for (int s : k.initial) init.push_back(k.states[static_cast<std::size_t>(s)]);
  j["initial"] = std::move(init);
  json edges = json::array();
  for (std::size_t s = 0; s < k.states.size(); ++s)
    for (int t : k.succ[s])
      edges.push_back(json::array({k.states[s], k.states[static_cast<std::size_t>(t)]}));
  j["edges"] = std::move(edges);
  json labels = json::object();
  for (std::size_t s = 0; s < k.states.size(); ++s) {
    json row = json::array();
    for (std::size_t a = 0; a < k.atoms.size(); ++a)
      if (k.labels[s][a]) row.push_back(k.atoms[a]);
    labels[k.states[s]] = std::move(row);
  }
  j["labels"] = std::move(labels);
  return j;
}

KripkeStructure load_kripke(const std::string& path) {
  return kripke_from_json(causal::read_json_file(path));
}

void save_kripke(const KripkeStructure& k, const std::string& path) {
  causal::write_json_file(kripke_to_json(k), path);
}

}  // namespace caver::ltl
