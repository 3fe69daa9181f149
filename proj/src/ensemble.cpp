#include "sdistill/ensemble.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sdistill {

void EnsembleModel::check_compatible() const {
  if (members.empty()) throw std::runtime_error("ensemble has no members");
  const ClassifierModel& first = members.front();
  for (const ClassifierModel& m : members) {
    if (m.kind != first.kind || m.action_names != first.action_names ||
        m.slot_table != first.slot_table || m.embed_dim != first.embed_dim ||
        m.hidden_dim != first.hidden_dim) {
      throw std::runtime_error("ensemble members disagree on task, action space, or feature layout");
    }
    for (std::size_t t = 0; t < m.tables.size(); ++t) {
      if (m.tables[t].vocab.symbols != first.tables[t].vocab.symbols) {
        throw std::runtime_error("ensemble members disagree on vocabulary");
      }
    }
  }
}

ActionDistribution ensemble_forward(const EnsembleModel& e, const std::vector<int>& slots,
                                    const std::vector<int>& legal) {
  if (e.members.empty()) throw std::runtime_error("ensemble has no members");
  ActionDistribution out;
  out.probs.assign(e.members.front().num_actions(), 0.0);
  out.legal = legal;
  for (const ClassifierModel& m : e.members) {
    ForwardResult fr = forward(m, slots, legal);
    for (int a : legal) out.probs[a] += fr.dist.probs[a];
  }
  double inv = 1.0 / e.size();
  for (int a : legal) out.probs[a] *= inv;
  return out;
}

void save_manifest(const EnsembleManifest& m, const std::string& path) {
  nlohmann::json j;
  j["magic"] = "sdistill-ensemble";
  j["kind"] = m.kind;
  j["members"] = m.member_paths;
  j["seeds"] = m.seeds;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

EnsembleManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (!j.contains("magic") || j["magic"] != "sdistill-ensemble") {
    throw std::runtime_error(path + ": not an ensemble manifest");
  }
  EnsembleManifest m;
  m.kind = j["kind"];
  m.member_paths = j["members"].get<std::vector<std::string>>();
  m.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  return m;
}

EnsembleModel load_ensemble(const std::string& manifest_path) {
  EnsembleManifest mf = load_manifest(manifest_path);
  EnsembleModel e;
  std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  for (const std::string& p : mf.member_paths) {
    std::filesystem::path mp(p);
    if (mp.is_relative()) mp = base / mp;
    e.members.push_back(load_model(mp.string()));
  }
  e.check_compatible();
  return e;
}

}  // namespace sdistill
