#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace gtbounds {

/// n x p binary test design. Row i is the inclusion vector of test i; row weights m^(i)
/// are cached at construction.
class MeasurementMatrix {
 public:
  MeasurementMatrix(int tests, int items);
  /// `entries` is row-major with tests * items values in {0, 1}.
  MeasurementMatrix(int tests, int items, std::vector<std::uint8_t> entries);

  int tests() const { return tests_; }
  int items() const { return items_; }

  std::uint8_t at(int test, int item) const {
    return entries_[static_cast<std::size_t>(test) * items_ + item];
  }
  std::span<const std::uint8_t> row(int test) const {
    return {entries_.data() + static_cast<std::size_t>(test) * items_, static_cast<std::size_t>(items_)};
  }
  /// Column j as a contiguous vector over tests.
  std::span<const std::uint8_t> column(int item) const {
    return {columns_.data() + static_cast<std::size_t>(item) * tests_, static_cast<std::size_t>(tests_)};
  }
  std::span<const int> row_weights() const { return row_weights_; }

  /// V_s^(i) = sum_{j in s} X_j^(i) for every test i.
  std::vector<int> defective_counts(std::span<const int> set) const;

  friend bool operator==(const MeasurementMatrix& a, const MeasurementMatrix& b) {
    return a.tests_ == b.tests_ && a.items_ == b.items_ && a.entries_ == b.entries_;
  }

 private:
  int tests_;
  int items_;
  std::vector<std::uint8_t> entries_;
  std::vector<std::uint8_t> columns_;
  std::vector<int> row_weights_;
};

/// Plain-text format: header line "p n", then n lines of p characters in {0,1}.
void write_matrix(std::ostream& out, const MeasurementMatrix& matrix);
MeasurementMatrix read_matrix(std::istream& in);
MeasurementMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const MeasurementMatrix& matrix);

/// Visits every size-k subset of {0..p-1} in lexicographic order together with its
/// per-test defective counts. The callback sees views that are only valid during the call.
void for_each_subset_counts(const MeasurementMatrix& matrix, int k,
                            const std::function<void(std::span<const int> set,
                                                     std::span<const int> counts)>& visit);

}  // namespace gtbounds
