#include "occkit/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "occkit/errors.hpp"
#include "occkit/isolation.hpp"
#include "occkit/mahalanobis.hpp"
#include "occkit/nn_descriptors.hpp"
#include "occkit/svm.hpp"

namespace occkit {

DescriptorKind descriptor_from_string(const std::string& name) {
  if (name == "nnd") return DescriptorKind::kNnd;
  if (name == "lnnd") return DescriptorKind::kLnnd;
  if (name == "lof") return DescriptorKind::kLof;
  if (name == "md") return DescriptorKind::kMd;
  if (name == "svm") return DescriptorKind::kSvm;
  if (name == "if") return DescriptorKind::kIf;
  if (name == "eif") return DescriptorKind::kEif;
  if (name == "alp") return DescriptorKind::kAlp;
  throw ValidationError("unknown descriptor '" + name + "'");
}

const char* to_string(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::kNnd: return "nnd";
    case DescriptorKind::kLnnd: return "lnnd";
    case DescriptorKind::kLof: return "lof";
    case DescriptorKind::kMd: return "md";
    case DescriptorKind::kSvm: return "svm";
    case DescriptorKind::kIf: return "if";
    case DescriptorKind::kEif: return "eif";
    case DescriptorKind::kAlp: return "alp";
  }
  return "?";
}

Coefficients default_coefficients(DescriptorKind kind) {
  Coefficients c;
  switch (kind) {
    case DescriptorKind::kNnd: c.nnd_k = 1; break;
    case DescriptorKind::kLnnd: c.a = 3.4; break;
    case DescriptorKind::kLof: c.a = 2.5; break;
    case DescriptorKind::kSvm: c.nu = 0.20; c.c_coef = 0.25; break;
    case DescriptorKind::kAlp: c.a = 5.5; c.b = 6.0; break;
    case DescriptorKind::kMd:
    case DescriptorKind::kIf:
    case DescriptorKind::kEif:
      break;
  }
  return c;
}

namespace {

std::size_t clamp_round(double value, std::size_t n) {
  const long long rounded = std::llround(value);
  const long long hi = static_cast<long long>(n) - 1;
  return static_cast<std::size_t>(std::clamp<long long>(rounded, 1, hi));
}

}  // namespace

Hyperparameters resolve_hyperparameters(DescriptorKind kind, const Coefficients& coefs,
                                        std::size_t n, std::size_t m) {
  if (n < 2) {
    throw InsufficientDataError("hyperparameter resolution requires n >= 2");
  }
  const double log_n = std::log(static_cast<double>(n));
  Hyperparameters hp;
  switch (kind) {
    case DescriptorKind::kNnd:
      hp.k = std::clamp<std::size_t>(std::max<std::size_t>(coefs.nnd_k, 1), 1, n - 1);
      break;
    case DescriptorKind::kLnnd:
    case DescriptorKind::kLof:
      hp.k = clamp_round(coefs.a * log_n, n);
      break;
    case DescriptorKind::kAlp:
      hp.k = clamp_round(coefs.a * log_n, n);
      hp.l = clamp_round(coefs.b * log_n, n);
      break;
    case DescriptorKind::kSvm:
      hp.nu = coefs.nu;
      hp.width = coefs.c_coef * static_cast<double>(m);
      break;
    case DescriptorKind::kMd:
    case DescriptorKind::kIf:
    case DescriptorKind::kEif:
      break;
  }
  return hp;
}

std::unique_ptr<DataDescription> fit_description(DescriptorKind kind,
                                                 const Coefficients& coefs,
                                                 const FeatureMatrix& train, Metric metric,
                                                 std::uint64_t seed) {
  const Hyperparameters hp = resolve_hyperparameters(kind, coefs, train.rows(), train.cols());
  switch (kind) {
    case DescriptorKind::kNnd:
      return std::make_unique<NndModel>(NndModel::fit(train, metric, hp.k));
    case DescriptorKind::kLnnd:
      return std::make_unique<LnndModel>(LnndModel::fit(train, metric, hp.k));
    case DescriptorKind::kLof:
      return std::make_unique<LofModel>(LofModel::fit(train, metric, hp.k));
    case DescriptorKind::kAlp:
      return std::make_unique<AlpModel>(AlpModel::fit(train, metric, hp.k, hp.l));
    case DescriptorKind::kMd:
      return std::make_unique<MdModel>(MdModel::fit(train));
    case DescriptorKind::kSvm: {
      OcSvmParams params;
      params.nu = hp.nu;
      params.width = hp.width;
      params.seed = seed;
      return std::make_unique<OcSvmModel>(OcSvmModel::fit(train, params));
    }
    case DescriptorKind::kIf:
    case DescriptorKind::kEif: {
      IsolationForestParams params;
      params.mode = kind == DescriptorKind::kIf ? SplitMode::kAxis : SplitMode::kExtended;
      params.seed = seed;
      return std::make_unique<IsolationForestModel>(IsolationForestModel::fit(train, params));
    }
  }
  throw ValidationError("unknown descriptor kind");
}

std::string describe_hyperparameters(DescriptorKind kind, const Hyperparameters& hp) {
  std::ostringstream out;
  switch (kind) {
    case DescriptorKind::kNnd:
    case DescriptorKind::kLnnd:
    case DescriptorKind::kLof:
      out << "k=" << hp.k;
      break;
    case DescriptorKind::kAlp:
      out << "k=" << hp.k << " l=" << hp.l;
      break;
    case DescriptorKind::kSvm:
      out << "nu=" << hp.nu << " c=" << hp.width;
      break;
    case DescriptorKind::kMd:
      out << "none";
      break;
    case DescriptorKind::kIf:
    case DescriptorKind::kEif:
      out << "t=100 psi=min(256,n)";
      break;
  }
  return out.str();
}

}  // namespace occkit
