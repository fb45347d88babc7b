#include "occkit/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "occkit/csv.hpp"
#include "occkit/errors.hpp"
#include "occkit/isolation.hpp"
#include "occkit/mahalanobis.hpp"
#include "occkit/nn_descriptors.hpp"
#include "occkit/svm.hpp"
#include "occkit/version.hpp"

namespace occkit {

namespace {

constexpr char kMagic[4] = {'O', 'C', 'K', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

class LeWriter {
 public:
  void u8(std::uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buffer_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buffer_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    buffer_.append(s);
  }
  void f64_vec(const std::vector<double>& v) {
    u64(v.size());
    for (const double x : v) f64(x);
  }
  void matrix(const FeatureMatrix& m) {
    u64(m.rows());
    u64(m.cols());
    for (const double x : m.values()) f64(x);
  }
  const std::string& data() const { return buffer_; }

 private:
  std::string buffer_;
};

class LeReader {
 public:
  LeReader(std::string data, std::string origin)
      : data_(std::move(data)), origin_(std::move(origin)) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
    }
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
    }
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t len = u64();
    need(len);
    std::string s = data_.substr(pos_, len);
    pos_ += len;
    return s;
  }
  std::vector<double> f64_vec() {
    const std::uint64_t len = u64();
    std::vector<double> v(len);
    for (auto& x : v) x = f64();
    return v;
  }
  FeatureMatrix matrix() {
    const std::uint64_t rows = u64();
    const std::uint64_t cols = u64();
    std::vector<double> values(rows * cols);
    for (auto& x : values) x = f64();
    return FeatureMatrix(rows, cols, std::move(values));
  }
  void raw(char* out, std::size_t len) {
    need(len);
    std::memcpy(out, data_.data() + pos_, len);
    pos_ += len;
  }

 private:
  void need(std::size_t len) {
    if (pos_ + len > data_.size()) {
      throw IoError(origin_ + ": truncated model file");
    }
  }
  std::string data_;
  std::string origin_;
  std::size_t pos_ = 0;
};

void write_payload(LeWriter& w, const ModelFile& model) {
  const DataDescription* desc = model.description.get();
  switch (model.kind) {
    case DescriptorKind::kNnd:
      w.matrix(static_cast<const NndModel*>(desc)->index().data());
      return;
    case DescriptorKind::kLnnd:
      w.matrix(static_cast<const LnndModel*>(desc)->index().data());
      return;
    case DescriptorKind::kLof:
      w.matrix(static_cast<const LofModel*>(desc)->index().data());
      return;
    case DescriptorKind::kAlp:
      w.matrix(static_cast<const AlpModel*>(desc)->index().data());
      return;
    case DescriptorKind::kMd: {
      const auto* md = static_cast<const MdModel*>(desc);
      w.f64_vec(std::vector<double>(md->mean().begin(), md->mean().end()));
      w.f64_vec(std::vector<double>(md->precision().begin(), md->precision().end()));
      return;
    }
    case DescriptorKind::kSvm: {
      const auto* svm = static_cast<const OcSvmModel*>(desc);
      w.f64(svm->rho());
      w.matrix(svm->support_vectors());
      w.f64_vec(svm->support_alphas());
      return;
    }
    case DescriptorKind::kIf:
    case DescriptorKind::kEif: {
      const auto* forest = static_cast<const IsolationForestModel*>(desc);
      w.u64(forest->dim());
      w.u64(forest->subsample_size());
      w.u64(forest->trees().size());
      for (const IsolationTree& tree : forest->trees()) {
        w.u64(tree.nodes().size());
        for (const auto& node : tree.nodes()) {
          w.u32(static_cast<std::uint32_t>(node.left));
          w.u32(static_cast<std::uint32_t>(node.right));
          w.u32(node.leaf_count);
          w.u32(node.axis);
          w.f64(node.threshold);
          w.f64_vec(node.normal);
          w.f64(node.offset);
        }
      }
      return;
    }
  }
  throw ValidationError("unknown descriptor kind");
}

std::unique_ptr<DataDescription> read_payload(LeReader& r, const ModelFile& header) {
  switch (header.kind) {
    case DescriptorKind::kNnd:
      return std::make_unique<NndModel>(
          NndModel::fit(r.matrix(), header.metric, header.resolved.k));
    case DescriptorKind::kLnnd:
      return std::make_unique<LnndModel>(
          LnndModel::fit(r.matrix(), header.metric, header.resolved.k));
    case DescriptorKind::kLof:
      return std::make_unique<LofModel>(
          LofModel::fit(r.matrix(), header.metric, header.resolved.k));
    case DescriptorKind::kAlp:
      return std::make_unique<AlpModel>(
          AlpModel::fit(r.matrix(), header.metric, header.resolved.k, header.resolved.l));
    case DescriptorKind::kMd: {
      std::vector<double> mean = r.f64_vec();
      std::vector<double> precision = r.f64_vec();
      return std::make_unique<MdModel>(
          MdModel::from_parts(std::move(mean), std::move(precision)));
    }
    case DescriptorKind::kSvm: {
      const double rho = r.f64();
      FeatureMatrix support = r.matrix();
      std::vector<double> alphas = r.f64_vec();
      return std::make_unique<OcSvmModel>(
          OcSvmModel::from_parts(support.cols(), header.resolved.nu, header.resolved.width,
                                 rho, std::move(support), std::move(alphas)));
    }
    case DescriptorKind::kIf:
    case DescriptorKind::kEif: {
      const std::uint64_t dim = r.u64();
      const std::uint64_t psi = r.u64();
      const std::uint64_t tree_count = r.u64();
      std::vector<IsolationTree> trees;
      trees.reserve(tree_count);
      for (std::uint64_t t = 0; t < tree_count; ++t) {
        const std::uint64_t node_count = r.u64();
        std::vector<IsolationTree::Node> nodes(node_count);
        for (auto& node : nodes) {
          node.left = static_cast<std::int32_t>(r.u32());
          node.right = static_cast<std::int32_t>(r.u32());
          node.leaf_count = r.u32();
          node.axis = r.u32();
          node.threshold = r.f64();
          node.normal = r.f64_vec();
          node.offset = r.f64();
        }
        trees.emplace_back(std::move(nodes));
      }
      const SplitMode mode =
          header.kind == DescriptorKind::kIf ? SplitMode::kAxis : SplitMode::kExtended;
      return std::make_unique<IsolationForestModel>(IsolationForestModel::from_parts(
          dim, psi, mode, header.seed, std::move(trees)));
    }
  }
  throw IoError("unknown descriptor kind in model file");
}

}  // namespace

DataFingerprint DataFingerprint::of(const FeatureMatrix& x) {
  return DataFingerprint{x.rows(), x.cols(), x.fingerprint()};
}

std::string DataFingerprint::hex() const {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  if (!model.description) {
    throw ValidationError("model file has no fitted description");
  }
  LeWriter w;
  w.u32(kFormatVersion);
  w.str(model.tool_version);
  w.u8(static_cast<std::uint8_t>(model.kind));
  w.u8(model.metric == Metric::kManhattan ? 0 : 1);
  w.u64(model.seed);
  w.u64(model.coefficients.nnd_k);
  w.f64(model.coefficients.a);
  w.f64(model.coefficients.b);
  w.f64(model.coefficients.nu);
  w.f64(model.coefficients.c_coef);
  w.u64(model.resolved.k);
  w.u64(model.resolved.l);
  w.f64(model.resolved.nu);
  w.f64(model.resolved.width);
  w.f64_vec(model.scaler.divisors());
  w.u64(model.train_fingerprint.rows);
  w.u64(model.train_fingerprint.cols);
  w.u64(model.train_fingerprint.hash);
  write_payload(w, model);

  std::string blob(kMagic, sizeof kMagic);
  blob += w.data();
  write_text_file(path, blob);
}

ModelFile load_model(const std::filesystem::path& path) {
  std::string blob = read_text_file(path);
  if (blob.size() < sizeof(kMagic) || std::memcmp(blob.data(), kMagic, sizeof kMagic) != 0) {
    throw IoError("'" + path.string() + "' is not a model file (bad magic)");
  }
  LeReader r(blob.substr(sizeof kMagic), path.string());
  const std::uint32_t version = r.u32();
  if (version > kFormatVersion) {
    throw IoError("'" + path.string() + "' uses format version " + std::to_string(version) +
                  "; this build reads up to " + std::to_string(kFormatVersion));
  }
  ModelFile model;
  model.tool_version = r.str();
  model.kind = static_cast<DescriptorKind>(r.u8());
  model.metric = r.u8() == 0 ? Metric::kManhattan : Metric::kEuclidean;
  model.seed = r.u64();
  model.coefficients.nnd_k = r.u64();
  model.coefficients.a = r.f64();
  model.coefficients.b = r.f64();
  model.coefficients.nu = r.f64();
  model.coefficients.c_coef = r.f64();
  model.resolved.k = r.u64();
  model.resolved.l = r.u64();
  model.resolved.nu = r.f64();
  model.resolved.width = r.f64();
  model.scaler = IqrScaler::from_divisors(r.f64_vec());
  model.train_fingerprint.rows = r.u64();
  model.train_fingerprint.cols = r.u64();
  model.train_fingerprint.hash = r.u64();
  model.description = read_payload(r, model);
  return model;
}

}  // namespace occkit
