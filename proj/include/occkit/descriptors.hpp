#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "occkit/core.hpp"
#include "occkit/neighbors.hpp"

namespace occkit {

enum class DescriptorKind : std::uint8_t {
  kNnd = 0,
  kLnnd = 1,
  kLof = 2,
  kMd = 3,
  kSvm = 4,
  kIf = 5,
  kEif = 6,
  kAlp = 7,
};

inline constexpr DescriptorKind kAllDescriptorKinds[] = {
    DescriptorKind::kNnd, DescriptorKind::kLnnd, DescriptorKind::kLof,
    DescriptorKind::kMd,  DescriptorKind::kSvm,  DescriptorKind::kIf,
    DescriptorKind::kEif, DescriptorKind::kAlp,
};

DescriptorKind descriptor_from_string(const std::string& name);
const char* to_string(DescriptorKind kind);

/// Tunable coefficients in grid space. Neighbour counts are reparametrised
/// as multiples of ln n; the SVM width as a multiple of the attribute count.
struct Coefficients {
  std::size_t nnd_k = 1;  // literal neighbour rank (NND only)
  double a = 0;           // k = round(a ln n)   (LNND, LOF, ALP)
  double b = 0;           // l = round(b ln n)   (ALP)
  double nu = 0;          // SVM
  double c_coef = 0;      // SVM width = c_coef * m
};

// Shipped default coefficients per descriptor.
Coefficients default_coefficients(DescriptorKind kind);

/// Concrete, resolved hyperparameters for a dataset of n rows and m columns.
struct Hyperparameters {
  std::size_t k = 1;
  std::size_t l = 1;
  double nu = 0.20;
  double width = 0;
};

// Rounds reparametrised neighbour counts to the nearest integer and clamps
// them to [1, n-1]; clamping is silent. Requires n >= 2.
Hyperparameters resolve_hyperparameters(DescriptorKind kind, const Coefficients& coefs,
                                        std::size_t n, std::size_t m);

// Fits the requested descriptor on (already rescaled) training data.
std::unique_ptr<DataDescription> fit_description(DescriptorKind kind,
                                                 const Coefficients& coefs,
                                                 const FeatureMatrix& train, Metric metric,
                                                 std::uint64_t seed);

// Short human-readable rendering of the resolved hyperparameters, for reports.
std::string describe_hyperparameters(DescriptorKind kind, const Hyperparameters& hp);

}  // namespace occkit
