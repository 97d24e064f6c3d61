#include "gtbounds/matrix.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gtbounds/errors.hpp"

namespace gtbounds {

MeasurementMatrix::MeasurementMatrix(int tests, int items)
    : MeasurementMatrix(tests, items,
                        std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(tests, 0)) *
                                                  static_cast<std::size_t>(std::max(items, 0)))) {}

MeasurementMatrix::MeasurementMatrix(int tests, int items, std::vector<std::uint8_t> entries)
    : tests_(tests), items_(items), entries_(std::move(entries)) {
  if (tests < 0 || items < 0) throw DomainError("matrix dimensions must be nonnegative");
  if (entries_.size() != static_cast<std::size_t>(tests) * static_cast<std::size_t>(items)) {
    throw DomainError("matrix entry count does not match dimensions");
  }
  columns_.resize(entries_.size());
  row_weights_.assign(static_cast<std::size_t>(tests), 0);
  for (int i = 0; i < tests; ++i) {
    for (int j = 0; j < items; ++j) {
      const auto x = entries_[static_cast<std::size_t>(i) * items + j];
      if (x > 1) throw DomainError("matrix entries must be 0 or 1");
      columns_[static_cast<std::size_t>(j) * tests + i] = x;
      row_weights_[static_cast<std::size_t>(i)] += x;
    }
  }
}

std::vector<int> MeasurementMatrix::defective_counts(std::span<const int> set) const {
  std::vector<int> counts(static_cast<std::size_t>(tests_), 0);
  for (int j : set) {
    if (j < 0 || j >= items_) throw DomainError("item index " + std::to_string(j) + " out of range");
    const auto col = column(j);
    for (int i = 0; i < tests_; ++i) counts[static_cast<std::size_t>(i)] += col[static_cast<std::size_t>(i)];
  }
  return counts;
}

void write_matrix(std::ostream& out, const MeasurementMatrix& matrix) {
  out << matrix.items() << ' ' << matrix.tests() << '\n';
  std::string line(static_cast<std::size_t>(matrix.items()), '0');
  for (int i = 0; i < matrix.tests(); ++i) {
    const auto row = matrix.row(i);
    for (int j = 0; j < matrix.items(); ++j) line[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)] ? '1' : '0';
    out << line << '\n';
  }
}

MeasurementMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty matrix file, expected header \"p n\"", 1);
  std::istringstream header(line);
  long long items = -1, tests = -1;
  std::string trailing;
  if (!(header >> items >> tests) || (header >> trailing) || items < 0 || tests < 0) {
    throw ParseError("malformed header \"" + line + "\", expected \"p n\"", 1);
  }
  std::vector<std::uint8_t> entries;
  entries.reserve(static_cast<std::size_t>(items * tests));
  for (long long i = 0; i < tests; ++i) {
    const std::size_t line_no = static_cast<std::size_t>(i) + 2;
    if (!std::getline(in, line)) {
      throw ParseError("missing row " + std::to_string(i + 1) + " of " + std::to_string(tests), line_no);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<long long>(line.size()) != items) {
      throw ParseError("row " + std::to_string(i + 1) + " has length " + std::to_string(line.size()) +
                           ", expected " + std::to_string(items),
                       line_no);
    }
    for (char c : line) {
      if (c != '0' && c != '1') {
        throw ParseError("row " + std::to_string(i + 1) + " contains '" + std::string(1, c) + "'", line_no);
      }
      entries.push_back(static_cast<std::uint8_t>(c - '0'));
    }
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw ParseError("unexpected content after " + std::to_string(tests) + " rows",
                       static_cast<std::size_t>(tests) + 2);
    }
  }
  return MeasurementMatrix(static_cast<int>(tests), static_cast<int>(items), std::move(entries));
}

MeasurementMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_matrix(in);
}

void save_matrix(const std::filesystem::path& path, const MeasurementMatrix& matrix) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_matrix(out, matrix);
}

void for_each_subset_counts(const MeasurementMatrix& matrix, int k,
                            const std::function<void(std::span<const int>, std::span<const int>)>& visit) {
  const int p = matrix.items();
  const int n = matrix.tests();
  if (k < 0 || k > p) throw DomainError("subset size must lie in 0..p");
  std::vector<int> set(static_cast<std::size_t>(k));
  // counts[d] holds the per-test counts of the first d chosen items.
  std::vector<std::vector<int>> counts(static_cast<std::size_t>(k) + 1,
                                       std::vector<int>(static_cast<std::size_t>(n), 0));

  const std::function<void(int, int)> recurse = [&](int depth, int start) {
    if (depth == k) {
      visit(set, counts[static_cast<std::size_t>(k)]);
      return;
    }
    const auto& prev = counts[static_cast<std::size_t>(depth)];
    auto& next = counts[static_cast<std::size_t>(depth) + 1];
    for (int j = start; j <= p - (k - depth); ++j) {
      set[static_cast<std::size_t>(depth)] = j;
      const auto col = matrix.column(j);
      for (int i = 0; i < n; ++i) {
        next[static_cast<std::size_t>(i)] = prev[static_cast<std::size_t>(i)] + col[static_cast<std::size_t>(i)];
      }
      recurse(depth + 1, j + 1);
    }
  };
  recurse(0, 0);
}

}  // namespace gtbounds
