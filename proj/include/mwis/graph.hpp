#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mwis {

using VertexId = std::uint32_t;
using Weight = std::int64_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable CSR graph. Neighbor lists are sorted and symmetric.
class StaticGraph {
 public:
  StaticGraph() = default;
  // Builds from an undirected edge list; duplicate edges are merged, self-loops rejected.
  StaticGraph(std::vector<Weight> weights,
              const std::vector<std::pair<VertexId, VertexId>>& edges);

  std::size_t num_vertices() const { return weights_.size(); }
  std::size_t num_edges() const { return adjacency_.size() / 2; }
  Weight weight(VertexId v) const { return weights_[v]; }
  const std::vector<Weight>& weights() const { return weights_; }
  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool adjacent(VertexId u, VertexId v) const;
  Weight total_weight() const;

  std::vector<std::pair<VertexId, VertexId>> edge_list() const;
  bool is_independent(std::span<const VertexId> set) const;
  Weight set_weight(std::span<const VertexId> set) const;

  // Throws std::logic_error naming the first violated invariant.
  void validate() const;

  friend bool operator==(const StaticGraph&, const StaticGraph&) = default;

 private:
  std::vector<Weight> weights_;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
};

StaticGraph parse_graph(std::string_view text);
StaticGraph read_graph_file(const std::string& path);
std::string write_graph(const StaticGraph& g);

std::vector<VertexId> parse_solution(std::string_view text, std::size_t n);
std::vector<VertexId> read_solution_file(const std::string& path, std::size_t n);
std::string write_solution(std::vector<VertexId> set);

enum class VertexStatus : std::uint8_t { Active, Included, Excluded, Folded };

// Mutable graph rewritten by the reductions. Every mutation is journaled so a
// caller can roll back to an earlier checkpoint.
class DynamicGraph {
 public:
  DynamicGraph() = default;
  explicit DynamicGraph(const StaticGraph& g);

  std::size_t capacity() const { return weights_.size(); }
  std::size_t original_size() const { return original_n_; }
  std::size_t num_active() const { return num_active_; }
  std::size_t num_edges() const { return num_adjacency_ / 2; }

  bool is_active(VertexId v) const { return v < status_.size() && status_[v] == VertexStatus::Active; }
  VertexStatus status(VertexId v) const { return status_[v]; }
  Weight weight(VertexId v) const { return weights_[v]; }
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_[v]; }
  std::size_t degree(VertexId v) const { return adjacency_[v].size(); }
  bool adjacent(VertexId u, VertexId v) const;
  Weight neighborhood_weight(VertexId v) const;
  std::vector<VertexId> active_vertices() const;
  // Fold products remember the vertices they were created from.
  std::span<const VertexId> parents(VertexId v) const { return parents_[v]; }

  // Removes v from the graph with the given terminal status.
  void remove_vertex(VertexId v, VertexStatus status);
  VertexId add_vertex(Weight w, std::span<const VertexId> neighbors,
                      std::span<const VertexId> parents = {});
  // Both return false when nothing changed.
  bool add_edge(VertexId u, VertexId v);
  bool remove_edge(VertexId u, VertexId v);
  void set_weight(VertexId v, Weight w);

  using Checkpoint = std::size_t;
  Checkpoint checkpoint() const { return journal_.size(); }
  void rollback(Checkpoint mark);
  // Drops the journal; later rollbacks cannot cross this point.
  void commit();

  // Active vertices whose neighborhood, weight, or status changed since the last clear.
  std::vector<VertexId> take_changed();
  void clear_changed();

  StaticGraph snapshot(std::vector<VertexId>* ids = nullptr) const;
  std::uint64_t checksum() const;
  void validate() const;

 private:
  enum class Op : std::uint8_t { Remove, Add, AddEdge, RemoveEdge, SetWeight };
  struct JournalEntry {
    Op op;
    VertexId a;
    VertexId b;
    Weight old_weight;
    VertexStatus old_status;
  };

  void require_active(VertexId v) const;
  void touch(VertexId v);
  void touch_closed(VertexId v);
  static bool insert_sorted(std::vector<VertexId>& list, VertexId v);
  static bool erase_sorted(std::vector<VertexId>& list, VertexId v);

  std::size_t original_n_ = 0;
  std::size_t num_active_ = 0;
  std::size_t num_adjacency_ = 0;
  std::vector<Weight> weights_;
  std::vector<VertexStatus> status_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::vector<std::vector<VertexId>> parents_;
  std::vector<JournalEntry> journal_;
  std::vector<VertexId> changed_;
  std::vector<char> changed_flag_;
};

// Induced subgraph over active vertices; mapping[i] is the id of new vertex i.
StaticGraph induced_subgraph(const DynamicGraph& g, std::span<const VertexId> vertices,
                             std::vector<VertexId>* mapping = nullptr);
StaticGraph induced_subgraph(const StaticGraph& g, std::span<const VertexId> vertices,
                             std::vector<VertexId>* mapping = nullptr);

}  // namespace mwis
