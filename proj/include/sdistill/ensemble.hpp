#ifndef SDISTILL_ENSEMBLE_HPP
#define SDISTILL_ENSEMBLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sdistill/model.hpp"

namespace sdistill {

// M differently-seeded classifiers over a shared action space and feature
// layout; the ensemble distribution is the arithmetic mean of the members'.
struct EnsembleModel {
  std::vector<ClassifierModel> members;

  int size() const { return static_cast<int>(members.size()); }
  void check_compatible() const;
};

ActionDistribution ensemble_forward(const EnsembleModel& e, const std::vector<int>& slots,
                                    const std::vector<int>& legal);

struct EnsembleManifest {
  std::string kind;
  std::vector<std::string> member_paths;
  std::vector<std::uint64_t> seeds;
};

void save_manifest(const EnsembleManifest& m, const std::string& path);
EnsembleManifest load_manifest(const std::string& path);
EnsembleModel load_ensemble(const std::string& manifest_path);

}  // namespace sdistill

#endif
