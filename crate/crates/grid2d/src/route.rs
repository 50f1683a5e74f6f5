use qcasc_ir::{Circuit, Connectivity, Gate};

use crate::Grid2dError;

/// Proper edge colouring of a bipartite multigraph whose vertices all have
/// degree `colors`, keeping each edge's preferred colour where possible.
fn colour_edges(ends: &[(usize, usize)], pref: &[usize], side: usize, colors: usize) -> Vec<usize> {
    let mut left = vec![vec![None::<usize>; colors]; side];
    let mut right = vec![vec![None::<usize>; colors]; side];
    let mut colour = vec![usize::MAX; ends.len()];
    for (e, &(u, v)) in ends.iter().enumerate() {
        let p = pref[e];
        let a = if left[u][p].is_none() { p } else { (0..colors).find(|&c| left[u][c].is_none()).expect("free colour") };
        if right[v][a].is_some() {
            let b = if right[v][p].is_none() { p } else { (0..colors).find(|&c| right[v][c].is_none()).expect("free colour") };
            // Alternating a/b path from v; it cannot reach u, which lacks an a-edge.
            let mut path = Vec::new();
            let (mut at, mut on_right, mut want) = (v, true, a);
            loop {
                let next = if on_right { right[at][want] } else { left[at][want] };
                let Some(f) = next else { break };
                path.push(f);
                at = if on_right { ends[f].0 } else { ends[f].1 };
                on_right = !on_right;
                want = if want == a { b } else { a };
            }
            for &f in &path {
                let (fu, fv) = ends[f];
                left[fu][colour[f]] = None;
                right[fv][colour[f]] = None;
            }
            for &f in &path {
                let (fu, fv) = ends[f];
                colour[f] = if colour[f] == a { b } else { a };
                left[fu][colour[f]] = Some(f);
                right[fv][colour[f]] = Some(f);
            }
        }
        colour[e] = a;
        left[u][a] = Some(e);
        right[v][a] = Some(e);
    }
    colour
}

/// Odd-even transposition sort of the tokens on `line` by `key`.
fn sort_line(line: &[usize], key: &dyn Fn(usize) -> usize, at: &mut [usize], out: &mut Vec<(usize, usize)>) {
    for round in 0..line.len() {
        for i in (round % 2..line.len().saturating_sub(1)).step_by(2) {
            let (a, b) = (line[i], line[i + 1]);
            if key(at[a]) > key(at[b]) {
                at.swap(a, b);
                out.push((a, b));
            }
        }
    }
}

/// Adjacent transpositions moving the token on cell `i` to cell `perm[i]` on a
/// `width x height` grid with row-major cell indices. Three phases: within
/// rows, spread tokens so each column holds distinct destination rows; within
/// columns, move to the destination row; within rows, move to the destination
/// column. Depth is at most `2 * width + height`.
pub fn route_swaps(perm: &[usize], width: usize, height: usize) -> Result<Vec<(usize, usize)>, Grid2dError> {
    let n = width * height;
    let bad = |detail: String| Grid2dError::NotABijection { cells: n, detail };
    if perm.len() != n {
        return Err(bad(format!("permutation has {} entries", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(bad(format!("destination {p} repeated or out of range")));
        }
    }
    let ends: Vec<(usize, usize)> = (0..n).map(|i| (i / width, perm[i] / width)).collect();
    let pref: Vec<usize> = (0..n).map(|i| i % width).collect();
    let column = colour_edges(&ends, &pref, height, width);

    let mut at: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    let rows: Vec<Vec<usize>> = (0..height).map(|y| (0..width).map(|x| y * width + x).collect()).collect();
    let cols: Vec<Vec<usize>> = (0..width).map(|x| (0..height).map(|y| y * width + x).collect()).collect();
    for row in &rows {
        sort_line(row, &|t| column[t], &mut at, &mut out);
    }
    for col in &cols {
        sort_line(col, &|t| perm[t] / width, &mut at, &mut out);
    }
    for row in &rows {
        sort_line(row, &|t| perm[t] % width, &mut at, &mut out);
    }
    debug_assert!((0..n).all(|c| perm[at[c]] == c));
    Ok(out)
}

/// [`route_swaps`] as a circuit on one qubit per cell.
pub fn route_permutation(perm: &[usize], width: usize, height: usize) -> Result<Circuit, Grid2dError> {
    let swaps = route_swaps(perm, width, height)?;
    let mut c = Circuit::new(width * height);
    c.connectivity = Connectivity::Grid2D {
        width,
        height,
        placement: (0..width * height).map(|i| (i % width, i / width)).collect(),
    };
    c.extend(swaps.into_iter().map(|(a, b)| Gate::Swap { a, b }));
    Ok(c)
}
