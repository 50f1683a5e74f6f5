use crate::Grid2dError;

/// Grid cell `(column, row)`.
pub type Cell = (usize, usize);

/// Grid path of a tree edge, parent cell first.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgePath {
    pub parent: usize,
    pub child: usize,
    pub cells: Vec<Cell>,
}

impl EdgePath {
    pub fn length(&self) -> usize {
        self.cells.len() - 1
    }
}

/// H-tree embedding of a complete binary tree. Vertices are numbered in heap
/// order: the root is 0 and vertex `v` has children `2v + 1` and `2v + 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeEmbedding {
    pub width: usize,
    pub height: usize,
    /// The tree has `2^depth` leaves.
    pub depth: usize,
    /// Cell of every vertex.
    pub cells: Vec<Cell>,
    pub edges: Vec<EdgePath>,
    pub max_edge_length: usize,
    /// Longest edge leaving each depth, root first.
    pub per_level_edge_lengths: Vec<usize>,
}

impl TreeEmbedding {
    pub fn leaf_count(&self) -> usize {
        1 << self.depth
    }

    /// Cell of leaf `i`, counted left to right.
    pub fn leaf(&self, i: usize) -> Cell {
        self.cells[(1 << self.depth) - 1 + i]
    }

    pub fn cell_count(&self) -> usize {
        self.width * self.height
    }
}

fn layout(depth: usize) -> (usize, usize, Vec<Cell>) {
    if depth == 0 {
        return (1, 1, vec![(0, 0)]);
    }
    let (w, h, sub) = layout(depth - 1);
    let root = sub[0];
    // Alternate the split direction so each edge enters its child along the
    // child's empty middle line.
    let (width, height, shift, top) = if depth % 2 == 1 {
        (2 * w + 1, h, (w + 1, 0), (w, root.1))
    } else {
        (w, 2 * h + 1, (0, h + 1), (root.0, h))
    };
    let mut cells = vec![top];
    for d in 0..depth {
        let level = &sub[(1 << d) - 1..(1 << (d + 1)) - 1];
        cells.extend_from_slice(level);
        cells.extend(level.iter().map(|&(x, y)| (x + shift.0, y + shift.1)));
    }
    (width, height, cells)
}

fn straight(a: Cell, b: Cell) -> Vec<Cell> {
    if a.1 == b.1 {
        let step: Vec<usize> = if a.0 <= b.0 { (a.0..=b.0).collect() } else { (b.0..=a.0).rev().collect() };
        step.into_iter().map(|x| (x, a.1)).collect()
    } else {
        let step: Vec<usize> = if a.1 <= b.1 { (a.1..=b.1).collect() } else { (b.1..=a.1).rev().collect() };
        step.into_iter().map(|y| (a.0, y)).collect()
    }
}

/// Embeds the complete binary tree with `leaves` leaves (rounded up to a power
/// of two) on a grid of about `4 * leaves` cells. Edges are straight, disjoint
/// grid paths and edge lengths halve every two levels.
pub fn embed_tree(leaves: usize) -> Result<TreeEmbedding, Grid2dError> {
    if leaves == 0 {
        return Err(Grid2dError::NoLeaves);
    }
    let depth = leaves.next_power_of_two().trailing_zeros() as usize;
    let (width, height, cells) = layout(depth);
    let mut per_level_edge_lengths = vec![0; depth];
    let edges: Vec<EdgePath> = (1..cells.len())
        .map(|child| {
            let parent = (child - 1) / 2;
            let path = EdgePath { parent, child, cells: straight(cells[parent], cells[child]) };
            let level = ((parent + 1).ilog2()) as usize;
            per_level_edge_lengths[level] = per_level_edge_lengths[level].max(path.length());
            path
        })
        .collect();
    let max_edge_length = per_level_edge_lengths.iter().copied().max().unwrap_or(0);
    Ok(TreeEmbedding { width, height, depth, cells, edges, max_edge_length, per_level_edge_lengths })
}
