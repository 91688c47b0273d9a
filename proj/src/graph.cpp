#include "mwis/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mwis {

StaticGraph::StaticGraph(std::vector<Weight> weights,
                         const std::vector<std::pair<VertexId, VertexId>>& edges)
    : weights_(std::move(weights)) {
  const std::size_t n = weights_.size();
  std::vector<std::vector<VertexId>> lists(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    lists[u].push_back(v);
    lists[v].push_back(u);
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto& l = lists[v];
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    offsets_[v + 1] = offsets_[v] + l.size();
  }
  adjacency_.reserve(offsets_[n]);
  for (auto& l : lists) adjacency_.insert(adjacency_.end(), l.begin(), l.end());
}

bool StaticGraph::adjacent(VertexId u, VertexId v) const {
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Weight StaticGraph::total_weight() const {
  Weight s = 0;
  for (Weight w : weights_) s += w;
  return s;
}

std::vector<std::pair<VertexId, VertexId>> StaticGraph::edge_list() const {
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(num_edges());
  for (VertexId v = 0; v < num_vertices(); ++v)
    for (VertexId u : neighbors(v))
      if (v < u) edges.emplace_back(v, u);
  return edges;
}

bool StaticGraph::is_independent(std::span<const VertexId> set) const {
  std::vector<char> in(num_vertices(), 0);
  for (VertexId v : set) {
    if (v >= num_vertices() || in[v]) return false;
    in[v] = 1;
  }
  for (VertexId v : set)
    for (VertexId u : neighbors(v))
      if (in[u]) return false;
  return true;
}

Weight StaticGraph::set_weight(std::span<const VertexId> set) const {
  Weight s = 0;
  for (VertexId v : set) s += weights_[v];
  return s;
}

void StaticGraph::validate() const {
  const std::size_t n = num_vertices();
  if (offsets_.size() != n + 1) throw std::logic_error("offset array size mismatch");
  for (VertexId v = 0; v < n; ++v) {
    if (weights_[v] <= 0) throw std::logic_error("non-positive weight at vertex " + std::to_string(v));
    auto nb = neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] >= n) throw std::logic_error("neighbor out of range");
      if (nb[i] == v) throw std::logic_error("self-loop at vertex " + std::to_string(v));
      if (i > 0 && nb[i - 1] >= nb[i]) throw std::logic_error("unsorted adjacency at vertex " + std::to_string(v));
      auto back = neighbors(nb[i]);
      if (!std::binary_search(back.begin(), back.end(), v))
        throw std::logic_error("asymmetric adjacency at vertex " + std::to_string(v));
    }
  }
}

namespace {

struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  // Next non-comment line; false at end of input.
  bool next(std::string_view& line) {
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty() && line.front() == '%') continue;
      return true;
    }
    return false;
  }
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::vector<long long> tokens(std::string_view line, std::size_t line_no) {
  std::vector<long long> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
    if (ec != std::errc()) fail(line_no, "expected integer");
    std::size_t next = static_cast<std::size_t>(ptr - line.data());
    if (next < line.size() && line[next] != ' ' && line[next] != '\t') fail(line_no, "expected integer");
    out.push_back(value);
    i = next;
  }
  return out;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace

StaticGraph parse_graph(std::string_view text) {
  LineReader reader{text};
  std::string_view line;
  do {
    if (!reader.next(line)) throw ParseError("line 1: missing header");
  } while (blank(line));
  auto header = tokens(line, reader.line_no);
  if (header.size() != 3) fail(reader.line_no, "header must be \"n m fmt\"");
  if (header[2] != 10) fail(reader.line_no, "unsupported format " + std::to_string(header[2]) + " (expected 10)");
  if (header[0] < 0 || header[1] < 0) fail(reader.line_no, "negative size in header");
  const auto n = static_cast<std::size_t>(header[0]);
  const auto m = static_cast<std::size_t>(header[1]);

  std::vector<Weight> weights(n);
  std::vector<std::vector<VertexId>> lists(n);
  std::vector<std::size_t> line_of(n);
  for (std::size_t v = 0; v < n; ++v) {
    do {
      if (!reader.next(line)) fail(reader.line_no + 1, "expected " + std::to_string(n) + " vertex lines, got " + std::to_string(v));
    } while (blank(line));
    line_of[v] = reader.line_no;
    auto t = tokens(line, reader.line_no);
    if (t.empty()) fail(reader.line_no, "missing weight");
    if (t[0] <= 0) fail(reader.line_no, "non-positive weight at vertex " + std::to_string(v + 1));
    weights[v] = t[0];
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (t[i] < 1 || static_cast<std::size_t>(t[i]) > n)
        fail(reader.line_no, "neighbor " + std::to_string(t[i]) + " out of range at vertex " + std::to_string(v + 1));
      if (static_cast<std::size_t>(t[i]) == v + 1) fail(reader.line_no, "self-loop at vertex " + std::to_string(v + 1));
      lists[v].push_back(static_cast<VertexId>(t[i] - 1));
    }
    std::sort(lists[v].begin(), lists[v].end());
    if (std::adjacent_find(lists[v].begin(), lists[v].end()) != lists[v].end())
      fail(reader.line_no, "duplicate neighbor at vertex " + std::to_string(v + 1));
  }
  while (reader.next(line))
    if (!blank(line)) fail(reader.line_no, "trailing data after " + std::to_string(n) + " vertex lines");

  std::size_t entries = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v = 0; v < n; ++v) {
    entries += lists[v].size();
    for (VertexId u : lists[v]) {
      if (!std::binary_search(lists[u].begin(), lists[u].end(), v))
        fail(line_of[u], "asymmetric adjacency at vertex " + std::to_string(u + 1));
      if (v < u) edges.emplace_back(v, u);
    }
  }
  if (entries / 2 != m)
    fail(1, "edge count mismatch: header says " + std::to_string(m) + ", found " + std::to_string(entries / 2));
  return StaticGraph(std::move(weights), edges);
}

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

StaticGraph read_graph_file(const std::string& path) {
  try {
    return parse_graph(slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string write_graph(const StaticGraph& g) {
  std::string out = std::to_string(g.num_vertices()) + " " + std::to_string(g.num_edges()) + " 10\n";
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out += std::to_string(g.weight(v));
    for (VertexId u : g.neighbors(v)) {
      out += ' ';
      out += std::to_string(u + 1);
    }
    out += '\n';
  }
  return out;
}

std::vector<VertexId> parse_solution(std::string_view text, std::size_t n) {
  LineReader reader{text};
  std::string_view line;
  std::vector<VertexId> set;
  while (reader.next(line)) {
    for (long long id : tokens(line, reader.line_no)) {
      if (id < 1 || static_cast<std::size_t>(id) > n) fail(reader.line_no, "vertex id " + std::to_string(id) + " out of range");
      set.push_back(static_cast<VertexId>(id - 1));
    }
  }
  std::sort(set.begin(), set.end());
  if (std::adjacent_find(set.begin(), set.end()) != set.end()) throw ParseError("duplicate vertex in solution");
  return set;
}

std::vector<VertexId> read_solution_file(const std::string& path, std::size_t n) {
  try {
    return parse_solution(slurp(path), n);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string write_solution(std::vector<VertexId> set) {
  std::sort(set.begin(), set.end());
  std::string out;
  for (VertexId v : set) {
    out += std::to_string(v + 1);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

DynamicGraph::DynamicGraph(const StaticGraph& g)
    : original_n_(g.num_vertices()),
      num_active_(g.num_vertices()),
      num_adjacency_(2 * g.num_edges()),
      weights_(g.weights()),
      status_(g.num_vertices(), VertexStatus::Active),
      adjacency_(g.num_vertices()),
      parents_(g.num_vertices()),
      changed_flag_(g.num_vertices(), 0) {
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    auto nb = g.neighbors(v);
    adjacency_[v].assign(nb.begin(), nb.end());
  }
}

bool DynamicGraph::adjacent(VertexId u, VertexId v) const {
  const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  VertexId other = &a == &adjacency_[u] ? v : u;
  return std::binary_search(a.begin(), a.end(), other);
}

Weight DynamicGraph::neighborhood_weight(VertexId v) const {
  Weight s = 0;
  for (VertexId u : adjacency_[v]) s += weights_[u];
  return s;
}

std::vector<VertexId> DynamicGraph::active_vertices() const {
  std::vector<VertexId> out;
  out.reserve(num_active_);
  for (VertexId v = 0; v < capacity(); ++v)
    if (status_[v] == VertexStatus::Active) out.push_back(v);
  return out;
}

void DynamicGraph::require_active(VertexId v) const {
  if (!is_active(v)) throw std::logic_error("operation on non-active vertex " + std::to_string(v));
}

void DynamicGraph::touch(VertexId v) {
  if (!changed_flag_[v]) {
    changed_flag_[v] = 1;
    changed_.push_back(v);
  }
}

void DynamicGraph::touch_closed(VertexId v) {
  touch(v);
  for (VertexId u : adjacency_[v]) touch(u);
}

bool DynamicGraph::insert_sorted(std::vector<VertexId>& list, VertexId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it != list.end() && *it == v) return false;
  list.insert(it, v);
  return true;
}

bool DynamicGraph::erase_sorted(std::vector<VertexId>& list, VertexId v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it == list.end() || *it != v) return false;
  list.erase(it);
  return true;
}

void DynamicGraph::remove_vertex(VertexId v, VertexStatus status) {
  require_active(v);
  if (status == VertexStatus::Active) throw std::logic_error("remove_vertex needs a terminal status");
  for (VertexId u : adjacency_[v]) {
    erase_sorted(adjacency_[u], v);
    touch(u);
  }
  num_adjacency_ -= 2 * adjacency_[v].size();
  status_[v] = status;
  --num_active_;
  journal_.push_back({Op::Remove, v, kNoVertex, 0, VertexStatus::Active});
}

VertexId DynamicGraph::add_vertex(Weight w, std::span<const VertexId> neighbors,
                                  std::span<const VertexId> parents) {
  if (w <= 0) throw std::logic_error("fold product needs positive weight");
  const auto v = static_cast<VertexId>(capacity());
  std::vector<VertexId> list(neighbors.begin(), neighbors.end());
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());
  for (VertexId u : list) require_active(u);
  weights_.push_back(w);
  status_.push_back(VertexStatus::Active);
  parents_.emplace_back(parents.begin(), parents.end());
  changed_flag_.push_back(0);
  for (VertexId u : list) {
    adjacency_[u].push_back(v);  // v is the largest id, so order is kept
    touch(u);
  }
  num_adjacency_ += 2 * list.size();
  adjacency_.push_back(std::move(list));
  ++num_active_;
  touch(v);
  journal_.push_back({Op::Add, v, kNoVertex, 0, VertexStatus::Active});
  return v;
}

bool DynamicGraph::add_edge(VertexId u, VertexId v) {
  require_active(u);
  require_active(v);
  if (u == v) throw std::logic_error("self-loop");
  if (!insert_sorted(adjacency_[u], v)) return false;
  insert_sorted(adjacency_[v], u);
  num_adjacency_ += 2;
  touch_closed(u);
  touch_closed(v);
  journal_.push_back({Op::AddEdge, u, v, 0, VertexStatus::Active});
  return true;
}

bool DynamicGraph::remove_edge(VertexId u, VertexId v) {
  require_active(u);
  require_active(v);
  if (!erase_sorted(adjacency_[u], v)) return false;
  erase_sorted(adjacency_[v], u);
  num_adjacency_ -= 2;
  touch_closed(u);
  touch_closed(v);
  journal_.push_back({Op::RemoveEdge, u, v, 0, VertexStatus::Active});
  return true;
}

void DynamicGraph::set_weight(VertexId v, Weight w) {
  require_active(v);
  if (w <= 0) throw std::logic_error("weight must stay positive at vertex " + std::to_string(v));
  if (w == weights_[v]) return;
  journal_.push_back({Op::SetWeight, v, kNoVertex, weights_[v], VertexStatus::Active});
  weights_[v] = w;
  touch_closed(v);
}

void DynamicGraph::rollback(Checkpoint mark) {
  if (mark > journal_.size()) throw std::logic_error("rollback past journal end");
  while (journal_.size() > mark) {
    const JournalEntry e = journal_.back();
    journal_.pop_back();
    switch (e.op) {
      case Op::Remove:
        status_[e.a] = VertexStatus::Active;
        ++num_active_;
        num_adjacency_ += 2 * adjacency_[e.a].size();
        for (VertexId u : adjacency_[e.a]) insert_sorted(adjacency_[u], e.a);
        break;
      case Op::Add:
        for (VertexId u : adjacency_[e.a]) erase_sorted(adjacency_[u], e.a);
        num_adjacency_ -= 2 * adjacency_[e.a].size();
        --num_active_;
        weights_.pop_back();
        status_.pop_back();
        adjacency_.pop_back();
        parents_.pop_back();
        if (changed_flag_.back()) std::erase(changed_, e.a);
        changed_flag_.pop_back();
        break;
      case Op::AddEdge:
        erase_sorted(adjacency_[e.a], e.b);
        erase_sorted(adjacency_[e.b], e.a);
        num_adjacency_ -= 2;
        break;
      case Op::RemoveEdge:
        insert_sorted(adjacency_[e.a], e.b);
        insert_sorted(adjacency_[e.b], e.a);
        num_adjacency_ += 2;
        break;
      case Op::SetWeight:
        weights_[e.a] = e.old_weight;
        break;
    }
  }
}

void DynamicGraph::commit() { journal_.clear(); }

std::vector<VertexId> DynamicGraph::take_changed() {
  std::vector<VertexId> out;
  out.reserve(changed_.size());
  for (VertexId v : changed_) {
    changed_flag_[v] = 0;
    if (status_[v] == VertexStatus::Active) out.push_back(v);
  }
  changed_.clear();
  return out;
}

void DynamicGraph::clear_changed() {
  for (VertexId v : changed_) changed_flag_[v] = 0;
  changed_.clear();
}

StaticGraph DynamicGraph::snapshot(std::vector<VertexId>* ids) const {
  auto active = active_vertices();
  return induced_subgraph(*this, active, ids);
}

std::uint64_t DynamicGraph::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  };
  mix(capacity());
  for (VertexId v = 0; v < capacity(); ++v) {
    mix(static_cast<std::uint64_t>(status_[v]));
    if (status_[v] != VertexStatus::Active) continue;
    mix(static_cast<std::uint64_t>(weights_[v]));
    for (VertexId u : adjacency_[v]) mix(u);
    mix(kNoVertex);
  }
  return h;
}

void DynamicGraph::validate() const {
  std::size_t active = 0;
  std::size_t entries = 0;
  for (VertexId v = 0; v < capacity(); ++v) {
    if (status_[v] != VertexStatus::Active) continue;
    ++active;
    const std::string where = " at vertex " + std::to_string(v);
    if (weights_[v] <= 0) throw std::logic_error("non-positive weight" + where);
    const auto& nb = adjacency_[v];
    entries += nb.size();
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] == v) throw std::logic_error("self-loop" + where);
      if (i > 0 && nb[i - 1] >= nb[i]) throw std::logic_error("unsorted or duplicate adjacency" + where);
      if (!is_active(nb[i])) throw std::logic_error("edge to inactive vertex" + where);
      if (!std::binary_search(adjacency_[nb[i]].begin(), adjacency_[nb[i]].end(), v))
        throw std::logic_error("asymmetric adjacency" + where);
    }
  }
  if (active != num_active_) throw std::logic_error("active counter out of sync");
  if (entries != num_adjacency_) throw std::logic_error("edge counter out of sync");
}

namespace {
template <class G>
StaticGraph induced_impl(const G& g, std::span<const VertexId> vertices, std::vector<VertexId>* mapping) {
  // Sorted (id, local index) table keeps this O(sum of degrees * log k),
  // independent of the size of the host graph.
  std::vector<std::pair<VertexId, VertexId>> table;
  table.reserve(vertices.size());
  std::vector<Weight> weights;
  weights.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    table.emplace_back(vertices[i], static_cast<VertexId>(i));
    weights.push_back(g.weight(vertices[i]));
  }
  std::sort(table.begin(), table.end());
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table[i - 1].first == table[i].first) throw std::invalid_argument("duplicate vertex in induced set");
  auto local = [&table](VertexId v) {
    auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(v, VertexId{0}));
    return it != table.end() && it->first == v ? it->second : kNoVertex;
  };
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (VertexId u : g.neighbors(vertices[i])) {
      VertexId j = local(u);
      if (j != kNoVertex && j > i) edges.emplace_back(static_cast<VertexId>(i), j);
    }
  if (mapping) mapping->assign(vertices.begin(), vertices.end());
  return StaticGraph(std::move(weights), edges);
}
}  // namespace

StaticGraph induced_subgraph(const DynamicGraph& g, std::span<const VertexId> vertices,
                             std::vector<VertexId>* mapping) {
  for (VertexId v : vertices)
    if (!g.is_active(v)) throw std::invalid_argument("induced_subgraph: vertex " + std::to_string(v) + " is not active");
  return induced_impl(g, vertices, mapping);
}

StaticGraph induced_subgraph(const StaticGraph& g, std::span<const VertexId> vertices,
                             std::vector<VertexId>* mapping) {
  for (VertexId v : vertices)
    if (v >= g.num_vertices()) throw std::invalid_argument("induced_subgraph: vertex out of range");
  return induced_impl(g, vertices, mapping);
}

}  // namespace mwis
