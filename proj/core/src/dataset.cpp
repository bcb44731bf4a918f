#include "sgder/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sgder/csv.hpp"
#include "sgder/rng.hpp"

namespace sgder {

namespace {

void validate(const DatasetSpec& spec) {
  if (spec.classes < 2) throw std::invalid_argument("dataset: need at least 2 classes");
  if (spec.n < spec.classes)
    throw std::invalid_argument("dataset: need at least one sample per class");
  if (spec.d < 1) throw std::invalid_argument("dataset: need at least one feature");
  if (!(spec.separation >= 0.0) || !(spec.noise > 0.0))
    throw std::invalid_argument("dataset: separation must be >= 0 and noise > 0");
  const double total = spec.frac_train + spec.frac_val + spec.frac_test;
  if (spec.frac_train < 0.0 || spec.frac_val < 0.0 || spec.frac_test < 0.0 ||
      std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("dataset: split fractions must be >= 0 and sum to 1");
}

std::vector<double> class_center(const DatasetSpec& spec, int cls) {
  std::vector<double> center(spec.d, 0.0);
  if (spec.d == 1) {
    center[0] = spec.separation * (cls - 0.5 * (spec.classes - 1));
  } else {
    const double angle = 2.0 * 3.14159265358979323846 * cls / spec.classes;
    center[0] = spec.separation * std::cos(angle);
    center[1] = spec.separation * std::sin(angle);
  }
  return center;
}

}  // namespace

SyntheticDataset generate_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  validate(spec);

  SyntheticDataset data;
  data.d = spec.d;
  data.classes = spec.classes;
  data.features.resize(static_cast<std::size_t>(spec.n) * spec.d);
  data.labels.resize(spec.n);
  data.split.resize(spec.n);

  std::vector<std::vector<double>> centers;
  centers.reserve(spec.classes);
  for (int c = 0; c < spec.classes; ++c) centers.push_back(class_center(spec, c));

  // Classes round-robin by index: the full set and every contiguous split
  // stay balanced within one sample.
  Rng rng(seed);
  for (int i = 0; i < spec.n; ++i) {
    const int cls = i % spec.classes;
    data.labels[i] = cls;
    for (int j = 0; j < spec.d; ++j) {
      data.features[static_cast<std::size_t>(i) * spec.d + j] =
          centers[cls][j] + spec.noise * rng.normal();
    }
  }

  const int n_train = static_cast<int>(std::llround(spec.frac_train * spec.n));
  const int n_val = static_cast<int>(std::llround(spec.frac_val * spec.n));
  for (int i = 0; i < spec.n; ++i) {
    Split s = Split::Test;
    if (i < n_train) {
      s = Split::Train;
    } else if (i < n_train + n_val) {
      s = Split::Val;
    }
    data.split[i] = s;
    auto& bucket = s == Split::Train ? data.train_indices
                   : s == Split::Val ? data.val_indices
                                     : data.test_indices;
    bucket.push_back(i);
  }
  return data;
}

const char* to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "unknown";
}

void write_dataset_csv(const SyntheticDataset& data, std::ostream& os) {
  for (int j = 0; j < data.d; ++j) os << 'f' << j << ',';
  os << "label,split\n";
  for (int i = 0; i < data.size(); ++i) {
    const auto row = data.sample(i);
    for (int j = 0; j < data.d; ++j) os << format_double(row[j]) << ',';
    os << data.labels[i] << ',' << to_string(data.split[i]) << '\n';
  }
}

SyntheticDataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("dataset csv: empty input");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[header.size() - 2] != "label" ||
      header.back() != "split")
    throw std::runtime_error("dataset csv: unexpected header");

  SyntheticDataset data;
  data.d = static_cast<int>(header.size()) - 2;
  int max_label = 0;
  int row_index = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::runtime_error("dataset csv: ragged row");
    for (int j = 0; j < data.d; ++j) data.features.push_back(parse_double(fields[j]));
    const int label = static_cast<int>(parse_long(fields[data.d]));
    max_label = std::max(max_label, label);
    data.labels.push_back(label);
    const std::string& split_name = fields[data.d + 1];
    Split s;
    if (split_name == "train") {
      s = Split::Train;
    } else if (split_name == "val") {
      s = Split::Val;
    } else if (split_name == "test") {
      s = Split::Test;
    } else {
      throw std::runtime_error("dataset csv: unknown split '" + split_name + "'");
    }
    data.split.push_back(s);
    auto& bucket = s == Split::Train ? data.train_indices
                   : s == Split::Val ? data.val_indices
                                     : data.test_indices;
    bucket.push_back(row_index++);
  }
  data.classes = max_label + 1;
  return data;
}

}  // namespace sgder
