#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "occkit/core.hpp"
#include "occkit/descriptors.hpp"
#include "occkit/preprocessing.hpp"

namespace occkit {

struct DataFingerprint {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t hash = 0;

  static DataFingerprint of(const FeatureMatrix& x);
  std::string hex() const;
};

/// A fitted descriptor plus everything needed to reproduce and apply it:
/// the rescaler fitted alongside it, the seed, and the fingerprint of the
/// training data.
struct ModelFile {
  std::string tool_version;
  DescriptorKind kind = DescriptorKind::kNnd;
  Metric metric = Metric::kManhattan;
  std::uint64_t seed = 0;
  Coefficients coefficients;
  Hyperparameters resolved;
  IqrScaler scaler;
  DataFingerprint train_fingerprint;
  std::unique_ptr<DataDescription> description;
};

// Versioned little-endian binary container ("OCKM", format version 1).
// Loading refuses files with a newer format version.
void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace occkit
