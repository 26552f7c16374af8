#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "misslink/graph.hpp"

namespace misslink {

using CommunityId = std::uint32_t;

/// Disjoint community assignment over vertices 0..n-1.
///
/// Ids are canonicalized on construction: communities are numbered 0..k-1 in
/// order of their first vertex, so two partitions that group vertices the
/// same way compare equal regardless of the labels they were built from.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::span<const std::uint64_t> raw_labels);
  explicit Partition(const std::vector<CommunityId>& raw_labels);

  static Partition singletons(std::size_t n);
  static Partition single(std::size_t n);

  std::size_t size() const { return assignment_.size(); }
  std::size_t num_communities() const { return num_communities_; }
  CommunityId operator[](Vertex v) const { return assignment_[v]; }
  const std::vector<CommunityId>& assignment() const { return assignment_; }
  std::vector<std::size_t> community_sizes() const;

  /// Restriction to the given vertices, in the given order.
  Partition restrict_to(std::span<const Vertex> vertices) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<CommunityId> assignment_;
  std::size_t num_communities_ = 0;
};

/// "vertex_label community_id" per line, in vertex order.
void write_partition(std::ostream& out, const Graph& g, const Partition& p);
void save_partition(const std::filesystem::path& path, const Graph& g, const Partition& p);

/// Reads a partition file against a graph's labels. Every vertex of `g` must
/// appear exactly once; unknown labels are an error.
Partition read_partition(std::istream& in, const Graph& g);
Partition load_partition(const std::filesystem::path& path, const Graph& g);

/// Reads a partition file on its own, returning labels in file order. Used to
/// compare two partition files that share a label set.
struct LabeledPartition {
  std::vector<std::string> labels;
  std::vector<std::string> communities;
};
LabeledPartition read_labeled_partition(std::istream& in);

}  // namespace misslink
