#include "misslink/partition.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "misslink/error.hpp"

namespace misslink {
namespace {

template <typename T>
std::vector<CommunityId> canonicalize(std::span<const T> raw, std::size_t& k) {
  std::unordered_map<T, CommunityId> remap;
  std::vector<CommunityId> out;
  out.reserve(raw.size());
  for (T label : raw) {
    auto [it, inserted] = remap.emplace(label, static_cast<CommunityId>(remap.size()));
    out.push_back(it->second);
  }
  k = remap.size();
  return out;
}

}  // namespace

Partition::Partition(std::span<const std::uint64_t> raw_labels) {
  assignment_ = canonicalize(raw_labels, num_communities_);
}

Partition::Partition(const std::vector<CommunityId>& raw_labels) {
  assignment_ = canonicalize(std::span<const CommunityId>(raw_labels), num_communities_);
}

Partition Partition::singletons(std::size_t n) {
  std::vector<CommunityId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<CommunityId>(i);
  return Partition(ids);
}

Partition Partition::single(std::size_t n) {
  return Partition(std::vector<CommunityId>(n, 0));
}

std::vector<std::size_t> Partition::community_sizes() const {
  std::vector<std::size_t> sizes(num_communities_, 0);
  for (auto c : assignment_) ++sizes[c];
  return sizes;
}

Partition Partition::restrict_to(std::span<const Vertex> vertices) const {
  std::vector<CommunityId> ids;
  ids.reserve(vertices.size());
  for (Vertex v : vertices) {
    if (v >= assignment_.size()) {
      throw Error(ErrorKind::kInvalidArgument, "vertex missing from partition");
    }
    ids.push_back(assignment_[v]);
  }
  return Partition(ids);
}

void write_partition(std::ostream& out, const Graph& g, const Partition& p) {
  if (p.size() != g.num_vertices()) {
    throw Error(ErrorKind::kInvalidArgument, "partition does not cover the graph");
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) out << g.label(v) << ' ' << p[v] << '\n';
}

void save_partition(const std::filesystem::path& path, const Graph& g, const Partition& p) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  write_partition(out, g, p);
}

LabeledPartition read_labeled_partition(std::istream& in) {
  LabeledPartition result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream tokens(line);
    std::string label, community;
    if (!(tokens >> label >> community)) {
      throw Error(ErrorKind::kParse,
                  "line " + std::to_string(line_no) + ": expected 'vertex community'");
    }
    result.labels.push_back(std::move(label));
    result.communities.push_back(std::move(community));
  }
  return result;
}

Partition read_partition(std::istream& in, const Graph& g) {
  auto labeled = read_labeled_partition(in);
  std::unordered_map<std::string, CommunityId> community_ids;
  std::vector<CommunityId> raw(g.num_vertices(), 0);
  std::vector<bool> seen(g.num_vertices(), false);
  for (std::size_t i = 0; i < labeled.labels.size(); ++i) {
    auto v = g.find_label(labeled.labels[i]);
    if (!v) throw Error(ErrorKind::kParse, "unknown vertex '" + labeled.labels[i] + "'");
    if (seen[*v]) throw Error(ErrorKind::kParse, "vertex '" + labeled.labels[i] + "' listed twice");
    seen[*v] = true;
    auto [it, _] = community_ids.emplace(labeled.communities[i],
                                         static_cast<CommunityId>(community_ids.size()));
    raw[*v] = it->second;
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!seen[v]) throw Error(ErrorKind::kParse, "vertex '" + g.label(v) + "' has no community");
  }
  return Partition(raw);
}

Partition load_partition(const std::filesystem::path& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return read_partition(in, g);
}

}  // namespace misslink
