#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace sgder {

enum class Split { Train, Val, Test };

struct DatasetSpec {
  int n = 600;
  int d = 2;
  int classes = 3;
  double separation = 3.0;  // distance of class centers from the origin
  double noise = 1.0;       // per-feature Gaussian std around the center
  double frac_train = 0.7;
  double frac_val = 0.15;
  double frac_test = 0.15;
};

/// Gaussian-blob classification data with disjoint, exhaustive splits and
/// class counts balanced within one sample. Deterministic for a fixed seed.
struct SyntheticDataset {
  int d = 0;
  int classes = 0;
  std::vector<double> features;  // row-major n x d
  std::vector<int> labels;
  std::vector<Split> split;

  std::vector<int> train_indices;
  std::vector<int> val_indices;
  std::vector<int> test_indices;

  int size() const { return static_cast<int>(labels.size()); }
  std::span<const double> sample(int i) const {
    return {features.data() + static_cast<std::size_t>(i) * d,
            static_cast<std::size_t>(d)};
  }
};

SyntheticDataset generate_dataset(const DatasetSpec& spec, std::uint64_t seed);

/// CSV with header f0..f{d-1},label,split.
void write_dataset_csv(const SyntheticDataset& data, std::ostream& os);
SyntheticDataset read_dataset_csv(std::istream& is);

const char* to_string(Split s);

}  // namespace sgder
