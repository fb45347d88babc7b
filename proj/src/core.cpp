#include "occkit/core.hpp"

#include <cmath>
#include <string>

#include "occkit/errors.hpp"

namespace occkit {

double distance_to_score(double z) {
  if (std::isnan(z) || z < 0) {
    throw ValidationError("distance_to_score requires a nonnegative distance");
  }
  if (std::isinf(z)) return 0.0;
  return 1.0 / (1.0 + z);
}

void DataDescription::check_query(std::span<const double> query) const {
  if (query.size() != dim()) {
    throw ShapeError("query has " + std::to_string(query.size()) +
                     " attributes, expected " + std::to_string(dim()));
  }
  for (std::size_t j = 0; j < query.size(); ++j) {
    if (!std::isfinite(query[j])) {
      throw ValidationError("non-finite query value at column " + std::to_string(j));
    }
  }
}

std::vector<double> DataDescription::score_rows(const FeatureMatrix& queries) const {
  std::vector<double> out;
  out.reserve(queries.rows());
  for (std::size_t i = 0; i < queries.rows(); ++i) {
    out.push_back(score(queries.row(i)));
  }
  return out;
}

}  // namespace occkit
