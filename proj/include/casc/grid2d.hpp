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

#pragma once

#include "casc/parallelize.hpp"

namespace casc {

/**
 * H-tree style embedding of a complete binary tree in a grid. Level h runs
 * from 0 (leaves) to `levels` (root); parent-child edges are straight
 * segments whose lengths halve every other level, so the root-to-leaf sum is
 * O(sqrt(leaves)).
 */
struct TreeEmbedding {
  int width = 0, height = 0;
  int leaf_count = 0;  // rounded up to a power of two
  int levels = 0;
  std::vector<std::vector<int>> node_cell;    // [height][index-1] -> cell
  std::vector<int> per_level_edge_lengths;    // [height of the parent]
  int max_edge_length = 0;

  int cell(int h, int i) const { return node_cell[std::size_t(h)][std::size_t(i - 1)]; }
};

TreeEmbedding embed_tree(int leaves);

/**
 * Swap network realizing `dest` (cell -> destination cell) on a full grid,
 * via row, column, row phases of odd-even transposition; depth is at most
 * 3 * (width + height).
 */
Circuit route_permutation(const Connectivity& grid, const std::vector<int>& dest);

/** Minimum depth forced by information travel between wires a and b. */
long long lightcone_lower_bound(const Connectivity& grid, int wire_a, int wire_b);

/** Sqrt-depth compilation of a staircase onto a 2D grid. */
CompiledCircuit compile_mn_2d(const MNCascade& c);

}  // namespace casc
