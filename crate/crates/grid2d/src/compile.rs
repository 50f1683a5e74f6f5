use std::collections::VecDeque;

use qcasc_cascade::MnCascade;
use qcasc_ir::lower::lower_gate;
use qcasc_ir::{Circuit, Connectivity, Gate};
use qcasc_parallel::{mn_log_depth_stages, Compilation};

use crate::embed::{embed_tree, Cell, TreeEmbedding};
use crate::route::route_swaps;
use crate::Grid2dError;

/// Placement of a staircase on the H-tree grid. Qubit `w <= m` is wire `w`;
/// the remaining qubits are routing ancillae, one per free cell.
#[derive(Clone, Debug, PartialEq)]
pub struct GridLayout {
    pub embedding: TreeEmbedding,
    /// Cell of every qubit, data wires first.
    pub placement: Vec<Cell>,
}

impl GridLayout {
    /// Wire `w >= 1` sits on leaf `w - 1`, so the pairs combined at each
    /// recursion level are the rightmost leaves of sibling subtrees. Wire 0
    /// sits on the parent of leaf 0.
    pub fn for_staircase(m: usize) -> Result<Self, Grid2dError> {
        if m == 0 {
            return Err(Grid2dError::Empty);
        }
        let embedding = embed_tree(m.max(2))?;
        let first_leaf = embedding.leaf_count() - 1;
        let mut placement = vec![embedding.cells[(first_leaf - 1) / 2]];
        placement.extend((0..m).map(|i| embedding.leaf(i)));
        let taken: std::collections::HashSet<Cell> = placement.iter().copied().collect();
        for y in 0..embedding.height {
            for x in 0..embedding.width {
                if !taken.contains(&(x, y)) {
                    placement.push((x, y));
                }
            }
        }
        Ok(GridLayout { embedding, placement })
    }

    pub fn connectivity(&self) -> Connectivity {
        Connectivity::Grid2D {
            width: self.embedding.width,
            height: self.embedding.height,
            placement: self.placement.clone(),
        }
    }
}

/// Tracks which logical qubit currently occupies each cell.
struct Router {
    width: usize,
    height: usize,
    qubit_at: Vec<usize>,
    occ: Vec<usize>,
    pos: Vec<usize>,
    out: Vec<Gate>,
}

impl Router {
    fn new(layout: &GridLayout) -> Self {
        let (width, height) = (layout.embedding.width, layout.embedding.height);
        let mut qubit_at = vec![0; width * height];
        for (q, &(x, y)) in layout.placement.iter().enumerate() {
            qubit_at[y * width + x] = q;
        }
        let pos: Vec<usize> = layout.placement.iter().map(|&(x, y)| y * width + x).collect();
        Router { width, height, occ: qubit_at.clone(), qubit_at, pos, out: Vec::new() }
    }

    fn neighbours(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        let (x, y) = (cell % self.width, cell / self.width);
        let mut v = Vec::with_capacity(4);
        if x > 0 {
            v.push(cell - 1);
        }
        if x + 1 < self.width {
            v.push(cell + 1);
        }
        if y > 0 {
            v.push(cell - self.width);
        }
        if y + 1 < self.height {
            v.push(cell + self.width);
        }
        v.into_iter()
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        let (ax, ay, bx, by) = (a % self.width, a / self.width, b % self.width, b / self.width);
        ax.abs_diff(bx) + ay.abs_diff(by) == 1
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.out.push(Gate::Swap { a: self.qubit_at[a], b: self.qubit_at[b] });
        self.occ.swap(a, b);
        self.pos[self.occ[a]] = a;
        self.pos[self.occ[b]] = b;
    }

    /// Shortest path from `from` to a free neighbour of `anchor`, avoiding
    /// `reserved`.
    fn path_to(&self, from: usize, anchor: usize, reserved: &[usize]) -> Result<Vec<usize>, Grid2dError> {
        let mut prev = vec![usize::MAX; self.occ.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(c) = queue.pop_front() {
            if self.adjacent(c, anchor) {
                let mut path = vec![c];
                let mut at = c;
                while at != from {
                    at = prev[at];
                    path.push(at);
                }
                path.reverse();
                return Ok(path);
            }
            for n in self.neighbours(c) {
                if prev[n] == usize::MAX && !reserved.contains(&n) {
                    prev[n] = c;
                    queue.push_back(n);
                }
            }
        }
        Err(Grid2dError::Unroutable(anchor % self.width, anchor / self.width))
    }

    /// Moves every qubit of `qs` next to the cell of `anchor`; returns the
    /// swaps made.
    fn gather(&mut self, qs: &[usize], anchor: usize) -> Result<Vec<(usize, usize)>, Grid2dError> {
        let mut reserved = vec![self.pos[anchor]];
        let mut log = Vec::new();
        for &q in qs {
            let path = self.path_to(self.pos[q], self.pos[anchor], &reserved)?;
            for w in path.windows(2) {
                self.swap(w[0], w[1]);
                log.push((w[0], w[1]));
            }
            reserved.push(self.pos[q]);
        }
        Ok(log)
    }

    fn undo(&mut self, log: &[(usize, usize)]) {
        for &(a, b) in log.iter().rev() {
            self.swap(a, b);
        }
    }

    /// Emits the basis expansion of `g` with all interactions between
    /// neighbouring cells; the placement is restored afterwards.
    fn emit(&mut self, g: &Gate) -> Result<(), Grid2dError> {
        let qs = g.qubits();
        let mut lowered = Vec::new();
        lower_gate(g, &mut lowered)?;
        let Some((&anchor, rest)) = qs.split_last() else {
            self.out.extend(lowered);
            return Ok(());
        };
        let log = self.gather(rest, anchor)?;
        for h in lowered {
            let hq = h.qubits();
            if hq.len() == 2 && !self.adjacent(self.pos[hq[0]], self.pos[hq[1]]) {
                // Both sit next to the anchor: borrow its cell.
                let (a, b) = (self.pos[hq[1]], self.pos[anchor]);
                self.swap(a, b);
                self.out.push(h.remap(|q| self.qubit_at[self.pos[q]]));
                self.swap(a, b);
            } else {
                self.out.push(h.remap(|q| self.qubit_at[self.pos[q]]));
            }
        }
        self.undo(&log);
        Ok(())
    }

    fn distance(&self, a: usize, b: usize) -> usize {
        (a % self.width).abs_diff(b % self.width) + (a / self.width).abs_diff(b / self.width)
    }

    /// Extends `path` by neighbouring cells, one per remaining wire, each as
    /// close as possible to that wire's current cell.
    fn extend_path(&self, path: &mut Vec<usize>, wires: &[usize]) -> bool {
        let Some((&w, rest)) = wires.split_first() else { return true };
        let last = *path.last().expect("nonempty");
        let mut options: Vec<usize> = self.neighbours(last).filter(|c| !path.contains(c)).collect();
        options.sort_by_key(|&c| self.distance(c, self.pos[w]));
        for c in options {
            path.push(c);
            if self.extend_path(path, rest) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// Routes the qubits of `wires` onto a path of neighbouring cells near the
    /// first one; returns the swaps made.
    fn line_up(&mut self, wires: &[usize]) -> Result<Vec<(usize, usize)>, Grid2dError> {
        let n = self.occ.len();
        let home = self.pos[wires[0]];
        let mut starts: Vec<usize> = (0..n).collect();
        starts.sort_by_key(|&c| self.distance(c, home));
        let targets = starts
            .into_iter()
            .find_map(|s| {
                let mut path = vec![s];
                self.extend_path(&mut path, &wires[1..]).then_some(path)
            })
            .ok_or(Grid2dError::Unroutable(home % self.width, home / self.width))?;
        let mut perm = vec![usize::MAX; n];
        for (&w, &t) in wires.iter().zip(&targets) {
            perm[self.pos[w]] = t;
        }
        let vacated: Vec<usize> = wires.iter().map(|&w| self.pos[w]).filter(|c| !targets.contains(c)).collect();
        let displaced: Vec<usize> = targets.iter().copied().filter(|&c| perm[c] == usize::MAX).collect();
        for (d, v) in displaced.into_iter().zip(vacated) {
            perm[d] = v;
        }
        for (c, p) in perm.iter_mut().enumerate() {
            if *p == usize::MAX {
                *p = c;
            }
        }
        let swaps = route_swaps(&perm, self.width, self.height)?;
        for &(a, b) in &swaps {
            self.swap(a, b);
        }
        Ok(swaps)
    }
}

/// Nearest-neighbour circuit for `c` on the H-tree grid of
/// [`GridLayout::for_staircase`].
pub fn compile_mn_2d(c: &MnCascade) -> Result<Compilation, Grid2dError> {
    if c.m() == 0 {
        return Err(Grid2dError::Empty);
    }
    let layout = GridLayout::for_staircase(c.m())?;
    let wires: Vec<usize> = (0..=c.m()).collect();
    let stages = mn_log_depth_stages(&c.gates, &wires, 2)?;
    let mut router = Router::new(&layout);
    for g in stages.pre.iter().flatten() {
        router.emit(g)?;
    }
    let mut middle_wires: Vec<usize> = Vec::new();
    for g in &stages.middle {
        for q in g.qubits() {
            if !middle_wires.contains(&q) {
                middle_wires.push(q);
            }
        }
    }
    let routed = router.line_up(&middle_wires)?;
    for g in &stages.middle {
        router.emit(g)?;
    }
    router.undo(&routed);
    for g in stages.post.iter().flatten() {
        router.emit(g)?;
    }
    let mut structured = Circuit::with_ancilla(c.m() + 1, layout.placement.len() - c.m() - 1);
    structured.connectivity = layout.connectivity();
    structured.gates = router.out;
    Ok(Compilation::finish(structured, 0.0)?)
}

/// Half the grid distance between qubits `a` and `b`: no circuit of smaller
/// depth on nearest-neighbour gates can correlate them.
pub fn lightcone_bound(c: &Circuit, a: usize, b: usize) -> usize {
    match &c.connectivity {
        Connectivity::Grid2D { placement, .. } => {
            let (pa, pb) = (placement[a], placement[b]);
            (pa.0.abs_diff(pb.0) + pa.1.abs_diff(pb.1)) / 2
        }
        Connectivity::AllToAll => 0,
    }
}
