// Copyright 2025-2026 The casc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "casc/grid2d.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace casc {

namespace {

struct Coord {
  int x = 0, y = 0;
};

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

// Offset between a height-h parent and its children; `scale` of 2 leaves a
// free cell on every edge for staging.
int level_offset(int h, int scale) { return scale << ((h + 1) / 2 - 1); }

// Child axis alternates per level; the root splits along x.
bool level_axis_x(int h, int levels) { return ((levels - h) % 2) == 0; }

struct HTree {
  int levels = 0;
  int scale = 1;
  std::vector<std::vector<Coord>> pos;  // [h][i-1]

  void place(int h, int i, Coord at) {
    pos[std::size_t(h)][std::size_t(i - 1)] = at;
    if (h == 0) return;
    const int off = level_offset(h, scale);
    const bool ax = level_axis_x(h, levels);
    Coord left = at, right = at;
    if (ax) {
      left.x -= off;
      right.x += off;
    } else {
      left.y -= off;
      right.y += off;
    }
    place(h - 1, 2 * i - 1, left);
    place(h - 1, 2 * i, right);
  }
};

HTree build_htree(int leaves, int scale) {
  HTree t;
  t.scale = scale;
  const int n = next_pow2(leaves);
  t.levels = 0;
  while ((1 << t.levels) < n) ++t.levels;
  t.pos.resize(std::size_t(t.levels) + 1);
  for (int h = 0; h <= t.levels; ++h)
    t.pos[std::size_t(h)].resize(std::size_t(1) << (t.levels - h));
  t.place(t.levels, 1, {0, 0});
  return t;
}

}  // namespace

TreeEmbedding embed_tree(int leaves) {
  if (leaves < 1) throw ValidationError("embed_tree: need at least one leaf");
  HTree t = build_htree(leaves, 1);
  int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (const auto& lvl : t.pos)
    for (const Coord& c : lvl) {
      min_x = std::min(min_x, c.x);
      max_x = std::max(max_x, c.x);
      min_y = std::min(min_y, c.y);
      max_y = std::max(max_y, c.y);
    }
  TreeEmbedding out;
  out.width = max_x - min_x + 1;
  out.height = max_y - min_y + 1;
  out.leaf_count = int(t.pos[0].size());
  out.levels = t.levels;
  out.node_cell.resize(t.pos.size());
  for (std::size_t h = 0; h < t.pos.size(); ++h) {
    out.node_cell[h].reserve(t.pos[h].size());
    for (const Coord& c : t.pos[h])
      out.node_cell[h].push_back((c.y - min_y) * out.width + (c.x - min_x));
  }
  out.per_level_edge_lengths.assign(std::size_t(t.levels) + 1, 0);
  for (int h = 1; h <= t.levels; ++h) {
    out.per_level_edge_lengths[std::size_t(h)] = level_offset(h, 1);
    out.max_edge_length = std::max(out.max_edge_length, level_offset(h, 1));
  }
  return out;
}

namespace {

// 1-D odd-even transposition network realizing target positions; emits swaps
// through the callback as (position, position+1) pairs.
template <typename F>
void route_line(std::vector<int>& target, F&& emit) {
  const int n = int(target.size());
  for (int round = 0; round < n; ++round) {
    bool moved = false;
    for (int p = round % 2; p + 1 < n; p += 2) {
      if (target[std::size_t(p)] > target[std::size_t(p + 1)]) {
        std::swap(target[std::size_t(p)], target[std::size_t(p + 1)]);
        emit(p, p + 1);
        moved = true;
      }
    }
    if (!moved && std::is_sorted(target.begin(), target.end())) break;
  }
}

// Proper edge coloring of a w-regular bipartite multigraph given as counts.
// Returns per color a perfect matching: color -> row -> target row.
std::vector<std::vector<int>> color_regular_bipartite(std::vector<std::vector<int>> counts,
                                                      int colors) {
  const int n = int(counts.size());
  std::vector<std::vector<int>> result(std::size_t(colors), std::vector<int>(std::size_t(n), -1));
  for (int c = 0; c < colors; ++c) {
    // find a perfect matching by augmenting paths
    std::vector<int> match_right(std::size_t(n), -1);  // right -> left
    std::vector<int> match_left(std::size_t(n), -1);
    for (int u = 0; u < n; ++u) {
      std::vector<char> seen(std::size_t(n), 0);
      std::function<bool(int)> augment = [&](int left) -> bool {
        for (int v = 0; v < n; ++v) {
          if (!counts[std::size_t(left)][std::size_t(v)] || seen[std::size_t(v)]) continue;
          seen[std::size_t(v)] = 1;
          if (match_right[std::size_t(v)] < 0 || augment(match_right[std::size_t(v)])) {
            match_right[std::size_t(v)] = left;
            match_left[std::size_t(left)] = v;
            return true;
          }
        }
        return false;
      };
      if (match_left[std::size_t(u)] < 0 && !augment(u))
        throw Error("route_permutation: matching failed");
    }
    for (int u = 0; u < n; ++u) {
      result[std::size_t(c)][std::size_t(u)] = match_left[std::size_t(u)];
      counts[std::size_t(u)][std::size_t(match_left[std::size_t(u)])] -= 1;
    }
  }
  return result;
}

}  // namespace

Circuit route_permutation(const Connectivity& grid, const std::vector<int>& dest) {
  if (grid.type != Connectivity::Grid2D)
    throw ValidationError("route_permutation: grid connectivity required");
  const int w = grid.width, h = grid.height;
  if (int(dest.size()) != w * h)
    throw ValidationError("route_permutation: need one target per cell");
  {
    std::vector<char> hit(dest.size(), 0);
    for (int d : dest) {
      if (d < 0 || d >= w * h || hit[std::size_t(d)])
        throw ValidationError("route_permutation: not a bijection");
      hit[std::size_t(d)] = 1;
    }
  }
  std::vector<int> wire_of_cell(std::size_t(w) * std::size_t(h), -1);
  for (int wr = 0; wr < int(grid.placement.size()); ++wr)
    wire_of_cell[std::size_t(grid.placement[std::size_t(wr)])] = wr;
  for (int v : wire_of_cell)
    if (v < 0) throw ValidationError("route_permutation: grid cells must all carry wires");

  Circuit out;
  out.num_data_qubits = int(grid.placement.size());
  out.connectivity = grid;

  // item -> current cell; start at identity
  std::vector<int> where(dest.size());
  std::iota(where.begin(), where.end(), 0);
  std::vector<int> item_at(dest.size());
  std::iota(item_at.begin(), item_at.end(), 0);
  auto swap_cells = [&](int ca, int cb) {
    out.gates.push_back(Gate::swap(wire_of_cell[std::size_t(ca)], wire_of_cell[std::size_t(cb)]));
    std::swap(item_at[std::size_t(ca)], item_at[std::size_t(cb)]);
    where[std::size_t(item_at[std::size_t(ca)])] = ca;
    where[std::size_t(item_at[std::size_t(cb)])] = cb;
  };

  // phase 1: within rows, move every item to the column of its color class
  std::vector<std::vector<int>> counts(std::size_t(h), std::vector<int>(std::size_t(h), 0));
  for (std::size_t cell = 0; cell < dest.size(); ++cell)
    counts[cell / std::size_t(w)][std::size_t(dest[cell] / w)] += 1;
  const std::vector<std::vector<int>> coloring = color_regular_bipartite(counts, w);
  // color assignment per item: row r gets for each color one target row
  std::vector<int> item_color(dest.size(), -1);
  {
    std::vector<std::vector<int>> pool(std::size_t(h));  // per row: remaining colors per tr
    for (int r = 0; r < h; ++r) {
      std::vector<std::vector<int>> by_target(static_cast<std::size_t>(h));
      for (int c = 0; c < w; ++c)
        by_target[std::size_t(coloring[std::size_t(c)][std::size_t(r)])].push_back(c);
      // keep items in their current column when the coloring allows it
      for (int c = 0; c < w; ++c) {
        const int cell = r * w + c;
        const int tr = dest[std::size_t(cell)] / w;
        auto& pool = by_target[std::size_t(tr)];
        const auto it = std::find(pool.begin(), pool.end(), c);
        if (it != pool.end()) {
          item_color[std::size_t(cell)] = c;
          pool.erase(it);
        }
      }
      for (int c = 0; c < w; ++c) {
        const int cell = r * w + c;
        if (item_color[std::size_t(cell)] >= 0) continue;
        const int tr = dest[std::size_t(cell)] / w;
        item_color[std::size_t(cell)] = by_target[std::size_t(tr)].back();
        by_target[std::size_t(tr)].pop_back();
      }
    }
  }
  for (int r = 0; r < h; ++r) {
    std::vector<int> target(static_cast<std::size_t>(w));
    for (int c = 0; c < w; ++c)
      target[std::size_t(c)] = item_color[std::size_t(item_at[std::size_t(r * w + c)])];
    route_line(target, [&](int a, int b) { swap_cells(r * w + a, r * w + b); });
  }
  // phase 2: within columns, move every item to its target row
  for (int c = 0; c < w; ++c) {
    std::vector<int> target(static_cast<std::size_t>(h));
    for (int r = 0; r < h; ++r)
      target[std::size_t(r)] = dest[std::size_t(item_at[std::size_t(r * w + c)])] / w;
    route_line(target, [&](int a, int b) { swap_cells(a * w + c, b * w + c); });
  }
  // phase 3: within rows, move to the target column
  for (int r = 0; r < h; ++r) {
    std::vector<int> target(static_cast<std::size_t>(w));
    for (int c = 0; c < w; ++c)
      target[std::size_t(c)] = dest[std::size_t(item_at[std::size_t(r * w + c)])] % w;
    route_line(target, [&](int a, int b) { swap_cells(r * w + a, r * w + b); });
  }
  for (std::size_t cell = 0; cell < dest.size(); ++cell)
    if (where[cell] != dest[cell]) throw Error("route_permutation: routing failed");
  return out;
}

long long lightcone_lower_bound(const Connectivity& grid, int wire_a, int wire_b) {
  return grid.grid_distance(wire_a, wire_b) / 2;
}

namespace {

class Grid2DBuilder {
 public:
  Grid2DBuilder(const MNCascade& input) : input_(input) {
    const int m = input.num_gates();
    padded_ = next_pow2(std::max(2, m));
    gates_ = input.gates;
    gates_.resize(std::size_t(padded_), Matrix::Identity(2, 2));
    tree_ = build_htree(padded_, 2);
    levels_ = tree_.levels;
    // bounding box with a one-cell margin for staging room
    int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    for (const auto& lvl : tree_.pos)
      for (const Coord& c : lvl) {
        min_x = std::min(min_x, c.x);
        max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y);
        max_y = std::max(max_y, c.y);
      }
    origin_ = {min_x - 1, min_y - 1};
    width_ = max_x - min_x + 3;
    height_ = max_y - min_y + 3;
  }

  CompiledCircuit run() {
    assign_wires();
    Circuit staged;
    staged.num_data_qubits = input_.num_qubits();
    staged.num_ancilla = width_ * height_ - staged.num_data_qubits;
    staged.connectivity = Connectivity::grid(width_, height_, placement_);
    build(staged);
    CompiledCircuit out;
    out.staged = std::move(staged);
    out.circuit = lower_to_basis(out.staged);
    out.report.depth_basis = depth(out.circuit);
    out.report.gate_count = basis_gate_count(out.circuit);
    out.report.ancilla_count = out.circuit.num_ancilla;
    if (!grid_adjacency_violations(out.circuit).empty())
      throw Error("compile_mn_2d: adjacency violation");
    const long long bound =
        lightcone_lower_bound(out.circuit.connectivity, 0, input_.num_qubits() - 1);
    if (out.report.depth_basis < bound) throw Error("compile_mn_2d: below the lightcone bound");
    return out;
  }

 private:
  int cell_at(Coord c) const { return (c.y - origin_.y) * width_ + (c.x - origin_.x); }
  Coord node(int h, int i) const { return tree_.pos[std::size_t(h)][std::size_t(i - 1)]; }
  Coord axis_unit(int h) const {
    return level_axis_x(h, levels_) ? Coord{1, 0} : Coord{0, 1};
  }
  static Coord add(Coord a, Coord b, int k = 1) { return {a.x + k * b.x, a.y + k * b.y}; }
  Coord perp_unit(int h) const { return level_axis_x(h, levels_) ? Coord{0, 1} : Coord{1, 0}; }

  // toward-parent staging cell of node (h, i)
  Coord pp(int h, int i) const {
    if (h == levels_) return add(node(h, i), perp_unit(h));
    const Coord par = node(h + 1, (i + 1) / 2);
    const Coord me = node(h, i);
    const int dx = (par.x > me.x) - (par.x < me.x);
    const int dy = (par.y > me.y) - (par.y < me.y);
    return {me.x + dx, me.y + dy};
  }

  void assign_wires() {
    // the data register is a contiguous block along the bottom rows; the
    // opening and closing permutations carry it to and from the tree
    const int total = width_ * height_;
    placement_.clear();
    std::vector<char> taken(std::size_t(total), 0);
    auto claim = [&](int cell) {
      if (taken[std::size_t(cell)]) throw Error("compile_mn_2d: home collision");
      taken[std::size_t(cell)] = 1;
      placement_.push_back(cell);
    };
    int cursor = (height_ - 1) * width_;
    for (int j = 0; j <= padded_; ++j) {
      claim(cursor);
      cursor += 1;
      if (cursor % width_ == 0) cursor -= 2 * width_;
    }
    for (int cell = 0; cell < total; ++cell)
      if (!taken[std::size_t(cell)]) placement_.push_back(cell);
    wire_of_cell_.assign(std::size_t(total), -1);
    for (int wr = 0; wr < total; ++wr) wire_of_cell_[std::size_t(placement_[std::size_t(wr)])] = wr;
    occupant_.assign(std::size_t(total), -1);
    value_cell_.assign(std::size_t(padded_) + 1, -1);
    for (int v = 0; v <= padded_; ++v) {
      const int cell = placement_[std::size_t(v)];
      occupant_[std::size_t(cell)] = v;
      value_cell_[std::size_t(v)] = cell;
    }
  }

  int wire_at(Coord c) const { return wire_of_cell_[std::size_t(cell_at(c))]; }

  void move_value(Circuit& circ, int value, Coord to) {
    Coord cur = coord_of_cell(value_cell_[std::size_t(value)]);
    while (cur.x != to.x || cur.y != to.y) {
      Coord next = cur;
      if (cur.x != to.x)
        next.x += (to.x > cur.x) ? 1 : -1;
      else
        next.y += (to.y > cur.y) ? 1 : -1;
      const int cn = cell_at(next), cc = cell_at(cur);
      if (occupant_[std::size_t(cn)] >= 0) throw Error("compile_mn_2d: routing through a value");
      circ.add(Gate::swap(wire_of_cell_[std::size_t(cc)], wire_of_cell_[std::size_t(cn)]));
      occupant_[std::size_t(cn)] = occupant_[std::size_t(cc)];
      occupant_[std::size_t(cc)] = -1;
      value_cell_[std::size_t(occupant_[std::size_t(cn)])] = cn;
      cur = next;
    }
  }

  Coord coord_of_cell(int cell) const {
    return {cell % width_ + origin_.x, cell / width_ + origin_.y};
  }

  int fresh_copy_value() {
    value_cell_.push_back(-1);
    return int(value_cell_.size()) - 1;
  }

  void place_copy(int value, Coord at) {
    const int cell = cell_at(at);
    if (occupant_[std::size_t(cell)] >= 0) throw Error("compile_mn_2d: copy cell occupied");
    occupant_[std::size_t(cell)] = value;
    value_cell_[std::size_t(value)] = cell;
  }

  void build(Circuit& circ) {
    // opening permutation: data block to the tree leaves, control to the
    // root staging cell
    {
      const int total = width_ * height_;
      std::vector<int> dest(static_cast<std::size_t>(total), -1);
      std::vector<char> taken(std::size_t(total), 0);
      auto claim = [&](int from_cell, int to_cell) {
        if (taken[std::size_t(to_cell)]) throw Error("compile_mn_2d: opening clash");
        taken[std::size_t(to_cell)] = 1;
        dest[std::size_t(from_cell)] = to_cell;
      };
      claim(value_cell_[0], cell_at(pp(levels_, 1)));
      for (int j = 1; j <= padded_; ++j) claim(value_cell_[std::size_t(j)], cell_at(node(0, j)));
      for (int cell = 0; cell < total; ++cell)
        if (dest[std::size_t(cell)] < 0 && !taken[std::size_t(cell)]) claim(cell, cell);
      int next = 0;
      for (int cell = 0; cell < total; ++cell) {
        if (dest[std::size_t(cell)] >= 0) continue;
        while (taken[std::size_t(next)]) ++next;
        claim(cell, next);
      }
      apply_permutation(circ, dest);
    }
    // upward combine: left reps park one step short of the parent, right
    // reps continue; one preprocessing gate per node
    memo_.assign(std::size_t(levels_) + 1, {});
    for (int h = 1; h <= levels_; ++h) {
      const int nodes = 1 << (levels_ - h);
      memo_[std::size_t(h)].resize(std::size_t(nodes));
      for (int i = 1; i <= nodes; ++i) {
        const Coord n = node(h, i);
        const Coord la = add(n, axis_unit(h), -1);
        const int left_rep = (2 * i - 1) << (h - 1);
        const int right_rep = (2 * i) << (h - 1);
        move_value(circ, left_rep, la);
        move_value(circ, right_rep, n);
        // group gates: level h combines the q-rotations of level h-1
        const std::vector<Matrix> run = level_gates(h, i);
        memo_[std::size_t(h)][std::size_t(i - 1)] = mn_precompute(run);
        const Matrix& p = memo_[std::size_t(h)][std::size_t(i - 1)].p;
        if ((p - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() > policy().identity_skip)
          circ.add(Gate::controlled({}, p, {wire_at(la), wire_at(n)}));
      }
    }
    // base gate: control value q0 sits at the root staging cell
    {
      const Matrix q = *memo_[std::size_t(levels_)][0].q;
      circ.add(Gate::controlled({{wire_at(pp(levels_, 1)), true}}, q, {wire_at(node(levels_, 1))}));
    }
    // downward: postprocessing multiplexers, fresh control copies, descent
    for (int h = levels_; h >= 1; --h) {
      const int nodes = 1 << (levels_ - h);
      for (int i = 1; i <= nodes; ++i) {
        const Coord n = node(h, i);
        const Coord u = axis_unit(h);
        const Coord la = add(n, u, -1);
        const Coord ra = add(n, u, 1);
        const Coord cp = pp(h, i);
        const int b_val = (2 * i) << (h - 1);
        const int t_val = (2 * i - 1) << (h - 1);
        move_value(circ, b_val, ra);
        move_value(circ, t_val, n);
        const PrecomputeParts& pr = memo_[std::size_t(h)][std::size_t(i - 1)];
        emit_r(circ, pr, cell_at(cp), cell_at(n), cell_at(ra));
        if (h == 1) continue;
        // fresh copy of t for the right child, written on the free side
        const Coord np = add(n, perp_unit(h), on_parent_side(h, i) ? -1 : 1);
        const int cpy = fresh_copy_value();
        copy_origin_[cpy] = t_val;
        if (occupant_[std::size_t(cell_at(np))] >= 0)
          throw Error("compile_mn_2d: staging cell occupied");
        circ.add(Gate::controlled({{wire_at(n), true}}, x_matrix(), {wire_at(np)}));
        place_copy(cpy, np);
        // descend: left edge carries t and the inherited control, right edge
        // carries b and the fresh copy
        const Coord cl = node(h - 1, 2 * i - 1), cr = node(h - 1, 2 * i);
        const int c_val = occupant_[std::size_t(cell_at(cp))];
        move_value(circ, t_val, cl);
        move_value(circ, c_val, n);
        move_value(circ, c_val, pp(h - 1, 2 * i - 1));
        move_value(circ, b_val, cr);
        move_value(circ, cpy, n);
        move_value(circ, cpy, pp(h - 1, 2 * i));
      }
    }
    // bring every copy next to its original while the register is still
    // spread over the tree, clear the copies with one cnot layer, then close
    // with the permutation that packs the data block back together
    const int total = width_ * height_;
    {
      std::vector<char> used(std::size_t(total), 0);
      for (int v = 0; v < int(value_cell_.size()); ++v)
        if (value_cell_[std::size_t(v)] >= 0) used[std::size_t(value_cell_[std::size_t(v)])] = 1;
      std::map<int, int> uncopy_pair;  // copy value -> neighbor cell
      for (auto [cpy, orig] : copy_origin_) {
        const Coord oc = coord_of_cell(value_cell_[std::size_t(orig)]);
        int pick = -1;
        for (Coord cand : {add(oc, {1, 0}), add(oc, {-1, 0}), add(oc, {0, 1}), add(oc, {0, -1})}) {
          if (cand.x < origin_.x || cand.y < origin_.y || cand.x >= origin_.x + width_ ||
              cand.y >= origin_.y + height_)
            continue;
          const int cell = cell_at(cand);
          if (!used[std::size_t(cell)]) {
            pick = cell;
            break;
          }
        }
        if (pick < 0) {
          throw Error("compile_mn_2d: no uncopy cell for copy of value " +
                      std::to_string(orig) + " at (" + std::to_string(oc.x) + "," +
                      std::to_string(oc.y) + ")");
        }
        used[std::size_t(pick)] = 1;
        uncopy_pair[cpy] = pick;
      }
      std::vector<int> dest(static_cast<std::size_t>(total), -1);
      std::vector<char> taken(std::size_t(total), 0);
      auto claim = [&](int from_cell, int to_cell) {
        if (taken[std::size_t(to_cell)]) throw Error("compile_mn_2d: uncopy clash");
        taken[std::size_t(to_cell)] = 1;
        dest[std::size_t(from_cell)] = to_cell;
      };
      for (int v = 0; v <= padded_; ++v) claim(value_cell_[std::size_t(v)], value_cell_[std::size_t(v)]);
      for (auto [cpy, cell] : uncopy_pair) claim(value_cell_[std::size_t(cpy)], cell);
      for (int cell = 0; cell < total; ++cell)
        if (dest[std::size_t(cell)] < 0 && !taken[std::size_t(cell)]) claim(cell, cell);
      int next = 0;
      for (int cell = 0; cell < total; ++cell) {
        if (dest[std::size_t(cell)] >= 0) continue;
        while (taken[std::size_t(next)]) ++next;
        claim(cell, next);
      }
      apply_permutation(circ, dest);
      for (auto [cpy, cell] : uncopy_pair) {
        const int orig = copy_origin_[cpy];
        circ.add(Gate::controlled(
            {{wire_of_cell_[std::size_t(value_cell_[std::size_t(orig)])], true}}, x_matrix(),
            {wire_of_cell_[std::size_t(cell)]}));
        occupant_[std::size_t(value_cell_[std::size_t(cpy)])] = -1;
        value_cell_[std::size_t(cpy)] = -1;
      }
    }
    {
      std::map<int, int> empty_pairs;
      apply_permutation(circ, planned_dest(empty_pairs));
    }
    for (int v = 0; v <= padded_; ++v)
      if (value_cell_[std::size_t(v)] != placement_[std::size_t(v)])
        throw Error("compile_mn_2d: homing failed");
  }

  bool on_parent_side(int h, int i) const {
    const Coord par = pp(h, i);
    const Coord me = node(h, i);
    const Coord pu = perp_unit(h);
    return (par.x - me.x) == pu.x && (par.y - me.y) == pu.y;
  }

  // destination map sending data home and copies to their uncopy cells
  std::vector<int> planned_dest(const std::map<int, int>& uncopy_pair) {
    const int total = width_ * height_;
    std::vector<int> dest(std::size_t(total), -1);
    std::vector<char> taken(std::size_t(total), 0);
    auto claim = [&](int from_cell, int to_cell) {
      if (taken[std::size_t(to_cell)]) throw Error("compile_mn_2d: destination clash");
      taken[std::size_t(to_cell)] = 1;
      dest[std::size_t(from_cell)] = to_cell;
    };
    for (int v = 0; v <= padded_; ++v)
      claim(value_cell_[std::size_t(v)], placement_[std::size_t(v)]);
    (void)uncopy_pair;
    // untracked zeros stay put when they can
    for (int cell = 0; cell < total; ++cell)
      if (dest[std::size_t(cell)] < 0 && !taken[std::size_t(cell)]) claim(cell, cell);
    int next = 0;
    for (int cell = 0; cell < total; ++cell) {
      if (dest[std::size_t(cell)] >= 0) continue;
      while (taken[std::size_t(next)]) ++next;
      claim(cell, next);
    }
    return dest;
  }

  void apply_permutation(Circuit& circ, const std::vector<int>& dest) {
    Circuit swaps = route_permutation(circ.connectivity, dest);
    // track every value through the network
    std::map<int, int> occ_items;  // cell -> value
    for (int v = 0; v < int(value_cell_.size()); ++v)
      if (value_cell_[std::size_t(v)] >= 0) occ_items[value_cell_[std::size_t(v)]] = v;
    for (const Gate& g : swaps.gates) {
      const int ca = placement_[std::size_t(g.targets[0])];
      const int cb = placement_[std::size_t(g.targets[1])];
      const bool ha = occ_items.count(ca), hb = occ_items.count(cb);
      int va = ha ? occ_items[ca] : -1, vb = hb ? occ_items[cb] : -1;
      occ_items.erase(ca);
      occ_items.erase(cb);
      if (vb >= 0) occ_items[ca] = vb;
      if (va >= 0) occ_items[cb] = va;
      circ.add(g);
    }
    occupant_.assign(occupant_.size(), -1);
    for (auto [cell, v] : occ_items) {
      occupant_[std::size_t(cell)] = v;
      value_cell_[std::size_t(v)] = cell;
    }
  }

  // q-rotation run that the height-h node combines
  std::vector<Matrix> level_gates(int h, int i) {
    if (h == 1) return {gates_[std::size_t(2 * i - 2)], gates_[std::size_t(2 * i - 1)]};
    return {*memo_[std::size_t(h - 1)][std::size_t(2 * i - 2)].q,
            *memo_[std::size_t(h - 1)][std::size_t(2 * i - 1)].q};
  }

 private:
  // node-level precompute parts memo filled during the upward pass
  std::vector<std::vector<PrecomputeParts>> memo_;

  static Matrix x_matrix() {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1;
    return x;
  }

  void emit_r(Circuit& circ, const PrecomputeParts& pr, int c_cell, int t_cell, int b_cell) {
    const int cw = wire_of_cell_[std::size_t(c_cell)];
    const int tw = wire_of_cell_[std::size_t(t_cell)];
    const int bw = wire_of_cell_[std::size_t(b_cell)];
    bool trivial = true;
    for (const Matrix& m : pr.r_cases)
      if ((m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() >
          policy().identity_skip)
        trivial = false;
    if (trivial) return;
    if (pr.body_qubits == 1) {
      CVector ph(4);
      for (int cb = 0; cb < 4; ++cb) ph(cb) = pr.r_cases[std::size_t(cb)](0, 0);
      circ.add(Gate::diagonal({cw, bw}, ph));
    } else {
      circ.add(Gate::multiplexer({cw, bw}, pr.r_cases, {tw}));
    }
  }

  const MNCascade& input_;
  int padded_ = 0;
  std::vector<Matrix> gates_;
  HTree tree_;
  int levels_ = 0;
  Coord origin_;
  int width_ = 0, height_ = 0;
  std::vector<int> placement_;     // wire -> cell
  std::vector<int> wire_of_cell_;  // cell -> wire
  std::vector<int> occupant_;      // cell -> tracked value or -1
  std::vector<int> value_cell_;    // value -> cell
  std::map<int, int> copy_origin_;
};

}  // namespace

CompiledCircuit compile_mn_2d(const MNCascade& c) {
  c.validate();
  Grid2DBuilder builder(c);
  return builder.run();
}

}  // namespace casc
