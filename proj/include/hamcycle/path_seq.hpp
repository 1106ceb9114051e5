#pragma once

// Paths over a fixed vertex universe, stored as an AVL tree keyed by position
// (subtree sizes give ranks) threaded with a doubly linked list.
//
//   pred / succ / start / end      O(1)
//   rank / half / contains         O(log n)
//   split_before / concat          O(log n)
//   from_sequence / to_list        O(k)
//
// Every vertex owns exactly one node in the PathForest arena, so the
// vertex -> node locator is the identity and a vertex can sit in at most one
// live PathSeq of a forest at a time.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hamcycle/core.hpp"

namespace hamcycle {

class PathSeq;

class PathForest {
 public:
  explicit PathForest(std::size_t universe) : nodes_(universe) {}

  PathForest(const PathForest&) = delete;
  PathForest& operator=(const PathForest&) = delete;

  std::size_t universe() const noexcept { return nodes_.size(); }
  bool in_use(Vertex v) const noexcept { return v < nodes_.size() && nodes_[v].live; }

  // Builds a perfectly balanced tree over `vertices` in the given order.
  // Throws std::invalid_argument on an empty input, a duplicate vertex, or a
  // vertex already held by another sequence; std::out_of_range outside the
  // universe.
  PathSeq from_sequence(std::span<const Vertex> vertices);

 private:
  friend class PathSeq;
  friend std::pair<PathSeq, PathSeq> split_before(PathSeq&& path, Vertex v);
  friend PathSeq concat(PathSeq&& front, PathSeq&& back);

  struct Node {
    Vertex left = kNoVertex;
    Vertex right = kNoVertex;
    Vertex parent = kNoVertex;
    Vertex prev = kNoVertex;
    Vertex next = kNoVertex;
    std::uint32_t size = 0;
    std::int32_t height = 0;
    bool live = false;
  };

  std::uint32_t size(Vertex x) const { return x == kNoVertex ? 0 : nodes_[x].size; }
  std::int32_t height(Vertex x) const { return x == kNoVertex ? 0 : nodes_[x].height; }

  void update(Vertex x) {
    Node& nd = nodes_[x];
    nd.size = 1 + size(nd.left) + size(nd.right);
    nd.height = 1 + std::max(height(nd.left), height(nd.right));
  }

  void set_left(Vertex x, Vertex child) {
    nodes_[x].left = child;
    if (child != kNoVertex) nodes_[child].parent = x;
  }
  void set_right(Vertex x, Vertex child) {
    nodes_[x].right = child;
    if (child != kNoVertex) nodes_[child].parent = x;
  }

  // Rotations return the new subtree root, which inherits the old root's parent
  // pointer; the caller relinks the grandparent.
  Vertex rotate_left(Vertex x) {
    const Vertex y = nodes_[x].right;
    nodes_[y].parent = nodes_[x].parent;
    set_right(x, nodes_[y].left);
    set_left(y, x);
    update(x);
    update(y);
    return y;
  }
  Vertex rotate_right(Vertex x) {
    const Vertex y = nodes_[x].left;
    nodes_[y].parent = nodes_[x].parent;
    set_left(x, nodes_[y].right);
    set_right(y, x);
    update(x);
    update(y);
    return y;
  }

  Vertex rebalance(Vertex x) {
    const std::int32_t balance = height(nodes_[x].left) - height(nodes_[x].right);
    if (balance > 1) {
      const Vertex l = nodes_[x].left;
      if (height(nodes_[l].left) < height(nodes_[l].right)) set_left(x, rotate_left(l));
      return rotate_right(x);
    }
    if (balance < -1) {
      const Vertex r = nodes_[x].right;
      if (height(nodes_[r].right) < height(nodes_[r].left)) set_right(x, rotate_right(r));
      return rotate_left(x);
    }
    return x;
  }

  // height(t) > height(r) + 1: descend the right spine of t.
  Vertex join_right(Vertex t, Vertex m, Vertex r) {
    const Vertex c = nodes_[t].right;
    Vertex sub;
    if (height(c) <= height(r) + 1) {
      set_left(m, c);
      set_right(m, r);
      update(m);
      sub = m;
    } else {
      sub = join_right(c, m, r);
    }
    set_right(t, sub);
    update(t);
    return rebalance(t);
  }

  Vertex join_left(Vertex t, Vertex m, Vertex l) {
    const Vertex c = nodes_[t].left;
    Vertex sub;
    if (height(c) <= height(l) + 1) {
      set_left(m, l);
      set_right(m, c);
      update(m);
      sub = m;
    } else {
      sub = join_left(c, m, l);
    }
    set_left(t, sub);
    update(t);
    return rebalance(t);
  }

  // All of l, then the single node m, then all of r. l and r are roots or empty.
  Vertex join(Vertex l, Vertex m, Vertex r) {
    nodes_[m].left = nodes_[m].right = kNoVertex;
    Vertex root;
    if (height(l) > height(r) + 1) {
      root = join_right(l, m, r);
    } else if (height(r) > height(l) + 1) {
      root = join_left(r, m, l);
    } else {
      set_left(m, l);
      set_right(m, r);
      update(m);
      root = m;
    }
    nodes_[root].parent = kNoVertex;
    return root;
  }

  // First k nodes of t in the left result, the rest in the right.
  std::pair<Vertex, Vertex> split(Vertex t, std::size_t k) {
    if (t == kNoVertex) return {kNoVertex, kNoVertex};
    const Vertex l = nodes_[t].left;
    const Vertex r = nodes_[t].right;
    if (l != kNoVertex) nodes_[l].parent = kNoVertex;
    if (r != kNoVertex) nodes_[r].parent = kNoVertex;
    const std::size_t left_size = size(l);
    if (k <= left_size) {
      auto [ll, lr] = split(l, k);
      return {ll, join(lr, t, r)};
    }
    auto [rl, rr] = split(r, k - left_size - 1);
    return {join(l, t, rl), rr};
  }

  Vertex build(std::span<const Vertex> seq, std::size_t lo, std::size_t hi) {
    if (lo >= hi) return kNoVertex;
    const std::size_t mid = lo + (hi - lo) / 2;
    const Vertex x = seq[mid];
    set_left(x, build(seq, lo, mid));
    set_right(x, build(seq, mid + 1, hi));
    update(x);
    return x;
  }

  Vertex root_of(Vertex v) const {
    while (nodes_[v].parent != kNoVertex) v = nodes_[v].parent;
    return v;
  }

  std::size_t rank(Vertex v) const {
    std::size_t r = size(nodes_[v].left) + 1;
    for (Vertex x = v, p = nodes_[v].parent; p != kNoVertex; x = p, p = nodes_[p].parent) {
      if (nodes_[p].right == x) r += size(nodes_[p].left) + 1;
    }
    return r;
  }

  void release(Vertex head) {
    for (Vertex x = head; x != kNoVertex;) {
      const Vertex next = nodes_[x].next;
      nodes_[x] = Node{};
      x = next;
    }
  }

  std::vector<Node> nodes_;
};

class PathSeq {
 public:
  PathSeq() = default;
  PathSeq(const PathSeq&) = delete;
  PathSeq& operator=(const PathSeq&) = delete;
  PathSeq(PathSeq&& other) noexcept { steal(other); }
  PathSeq& operator=(PathSeq&& other) noexcept {
    if (this != &other) {
      reset();
      steal(other);
    }
    return *this;
  }
  ~PathSeq() { reset(); }

  bool empty() const noexcept { return root_ == kNoVertex; }
  std::size_t length() const noexcept { return empty() ? 0 : forest_->nodes_[root_].size; }
  Vertex start() const noexcept { return head_; }
  Vertex end() const noexcept { return tail_; }

  bool contains(Vertex v) const {
    return forest_ != nullptr && forest_->in_use(v) && forest_->root_of(v) == root_;
  }

  std::optional<Vertex> pred(Vertex v) const {
    require(v);
    const Vertex p = forest_->nodes_[v].prev;
    return p == kNoVertex ? std::nullopt : std::optional<Vertex>(p);
  }
  std::optional<Vertex> succ(Vertex v) const {
    require(v);
    const Vertex s = forest_->nodes_[v].next;
    return s == kNoVertex ? std::nullopt : std::optional<Vertex>(s);
  }

  // 1-based position of v.
  std::size_t rank(Vertex v) const {
    require(v);
    return forest_->rank(v);
  }

  // True iff rank(v) <= ceil(length / 2).
  bool half(Vertex v) const { return 2 * rank(v) <= length() + 1; }

  std::vector<Vertex> to_list() const {
    std::vector<Vertex> out;
    out.reserve(length());
    for (Vertex x = head_; x != kNoVertex; x = forest_->nodes_[x].next) out.push_back(x);
    return out;
  }
  std::vector<Vertex> to_list_reversed() const {
    std::vector<Vertex> out;
    out.reserve(length());
    for (Vertex x = tail_; x != kNoVertex; x = forest_->nodes_[x].prev) out.push_back(x);
    return out;
  }

  std::size_t height() const noexcept {
    return empty() ? 0 : static_cast<std::size_t>(forest_->nodes_[root_].height);
  }

  // Full structural audit, O(length). Throws std::logic_error on a violation
  // of parent links, sizes, heights, AVL balance, the height bound
  // 1.45 * log2(length + 2), or list order != in-order.
  void check_invariants() const;

 private:
  friend class PathForest;
  friend std::pair<PathSeq, PathSeq> split_before(PathSeq&& path, Vertex v);
  friend PathSeq concat(PathSeq&& front, PathSeq&& back);

  PathSeq(PathForest* forest, Vertex root, Vertex head, Vertex tail)
      : forest_(forest), root_(root), head_(head), tail_(tail) {}

  void require(Vertex v) const {
    if (!contains(v)) throw std::out_of_range("vertex " + std::to_string(v) + " not in path");
  }

  void steal(PathSeq& other) noexcept {
    forest_ = other.forest_;
    root_ = other.root_;
    head_ = other.head_;
    tail_ = other.tail_;
    other.root_ = other.head_ = other.tail_ = kNoVertex;
  }

  void reset() noexcept {
    if (forest_ != nullptr && root_ != kNoVertex) forest_->release(head_);
    root_ = head_ = tail_ = kNoVertex;
  }

  PathForest* forest_ = nullptr;
  Vertex root_ = kNoVertex;
  Vertex head_ = kNoVertex;
  Vertex tail_ = kNoVertex;
};

inline PathSeq PathForest::from_sequence(std::span<const Vertex> vertices) {
  if (vertices.empty()) throw std::invalid_argument("from_sequence: empty sequence");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vertex v = vertices[i];
    if (v >= nodes_.size()) {
      for (std::size_t j = 0; j < i; ++j) nodes_[vertices[j]] = Node{};
      throw std::out_of_range("from_sequence: vertex " + std::to_string(v) + " outside universe");
    }
    if (nodes_[v].live) {
      for (std::size_t j = 0; j < i; ++j) nodes_[vertices[j]] = Node{};
      throw std::invalid_argument("from_sequence: vertex " + std::to_string(v) +
                                  " repeated or already in a path");
    }
    Node& nd = nodes_[v];
    nd = Node{};
    nd.live = true;
    nd.prev = i == 0 ? kNoVertex : vertices[i - 1];
    nd.next = i + 1 == vertices.size() ? kNoVertex : vertices[i + 1];
  }
  const Vertex root = build(vertices, 0, vertices.size());
  nodes_[root].parent = kNoVertex;
  return PathSeq(this, root, vertices.front(), vertices.back());
}

// Consumes `path`; returns (prefix ending at pred(v), suffix starting at v).
// Throws std::invalid_argument if v is not in the path or is its start.
inline std::pair<PathSeq, PathSeq> split_before(PathSeq&& path, Vertex v) {
  if (!path.contains(v) || v == path.start()) {
    throw std::invalid_argument("split_before: invalid split at vertex " + std::to_string(v));
  }
  PathForest& f = *path.forest_;
  const Vertex before = f.nodes_[v].prev;
  const std::size_t k = f.rank(v) - 1;
  f.nodes_[before].next = kNoVertex;
  f.nodes_[v].prev = kNoVertex;
  auto [l, r] = f.split(path.root_, k);
  PathSeq left(&f, l, path.head_, before);
  PathSeq right(&f, r, v, path.tail_);
  path.root_ = path.head_ = path.tail_ = kNoVertex;
  return {std::move(left), std::move(right)};
}

// Consumes both arguments; returns front followed by back.
inline PathSeq concat(PathSeq&& front, PathSeq&& back) {
  if (front.empty()) return std::move(back);
  if (back.empty()) return std::move(front);
  if (front.forest_ != back.forest_ || front.root_ == back.root_) {
    throw std::invalid_argument("concat: sequences overlap or belong to different forests");
  }
  PathForest& f = *front.forest_;
  const Vertex m = back.head_;
  auto [single, rest] = f.split(back.root_, 1);
  (void)single;
  const Vertex root = f.join(front.root_, m, rest);
  f.nodes_[front.tail_].next = back.head_;
  f.nodes_[back.head_].prev = front.tail_;
  PathSeq joined(&f, root, front.head_, back.tail_);
  front.root_ = front.head_ = front.tail_ = kNoVertex;
  back.root_ = back.head_ = back.tail_ = kNoVertex;
  return joined;
}

inline void PathSeq::check_invariants() const {
  auto fail = [](const std::string& what) { throw std::logic_error("PathSeq invariant: " + what); };
  if (empty()) {
    if (head_ != kNoVertex || tail_ != kNoVertex) fail("empty sequence with endpoints");
    return;
  }
  const auto& nodes = forest_->nodes_;
  if (nodes[root_].parent != kNoVertex) fail("root has a parent");

  std::vector<Vertex> in_order;
  std::vector<Vertex> stack;
  for (Vertex x = root_; x != kNoVertex || !stack.empty();) {
    while (x != kNoVertex) {
      stack.push_back(x);
      x = nodes[x].left;
    }
    x = stack.back();
    stack.pop_back();
    const auto& nd = nodes[x];
    if (!nd.live) fail("dead node in tree");
    std::uint32_t expect_size = 1;
    std::int32_t hl = 0;
    std::int32_t hr = 0;
    if (nd.left != kNoVertex) {
      if (nodes[nd.left].parent != x) fail("broken parent link");
      expect_size += nodes[nd.left].size;
      hl = nodes[nd.left].height;
    }
    if (nd.right != kNoVertex) {
      if (nodes[nd.right].parent != x) fail("broken parent link");
      expect_size += nodes[nd.right].size;
      hr = nodes[nd.right].height;
    }
    if (nd.size != expect_size) fail("stale subtree size");
    if (nd.height != 1 + std::max(hl, hr)) fail("stale height");
    if (hl - hr > 1 || hr - hl > 1) fail("AVL balance violated");
    in_order.push_back(x);
    x = nd.right;
  }

  if (nodes[head_].prev != kNoVertex || nodes[tail_].next != kNoVertex) fail("list ends");
  if (to_list() != in_order) fail("list order differs from tree order");
  const double bound = 1.45 * std::log2(static_cast<double>(in_order.size()) + 2.0);
  if (static_cast<double>(height()) > bound) fail("tree too tall");
}

}  // namespace hamcycle
