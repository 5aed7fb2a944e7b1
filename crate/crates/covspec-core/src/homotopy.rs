//! Grid-certified homotopies at scale delta: an independent geometric
//! oracle cross-validating the algebraic closure engine.
//!
//! A homotopy certificate is a rectangular grid of vertices of the
//! graph.  Row 0 traces the loop under test, the last row and the two
//! side columns sit at the loop's start, consecutive entries within a
//! row are equal or joined by a recorded edge, and consecutive rows are
//! joined columnwise by recorded connector paths.  Each unit square of
//! the grid carries a certificate: a center vertex whose open
//! delta-ball contains the square's whole image (its four corners, its
//! two horizontal edges, and both connector paths).  Every square
//! boundary is then a genuine loop inside an open delta-ball, and the
//! standard telescoping argument writes the row-0 loop as a product of
//! conjugates of such loops: a valid grid soundly certifies membership
//! in the subgroup generated by ball loops, whether or not those loops
//! contract inside their balls.
//!
//! The searcher is honest about incompleteness: grids use graph
//! vertices only, so absence within the caps is evidence, not proof —
//! callers pair a NotFound with the algebraic engine's refusal
//! certificate.

use std::collections::{HashMap, HashSet};

use num::Zero;

use crate::graph::{EdgePath, MetricGraph, Step, VertexId};
use crate::member::{Budget, MembershipEngine, Verdict};
use crate::rat::{fmt_rat, Rat};
use crate::word::Word;

/// One row of the grid: `verts[y]` with `steps[y]` joining `verts[y]`
/// to `verts[y+1]` (`None` is a stutter and requires equal vertices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRow {
    pub verts: Vec<usize>,
    pub steps: Vec<Option<Step>>,
}

/// A grid homotopy certificate.  `rows` has N+1 rows of width M+1;
/// `verticals[x][y]` is the connector path from `rows[x].verts[y]` down
/// to `rows[x+1].verts[y]` (empty means the vertices coincide);
/// `centers[x][y]` is the certificate center of square (x, y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridHomotopy {
    pub rows: Vec<GridRow>,
    pub verticals: Vec<Vec<Vec<Step>>>,
    pub centers: Vec<Vec<usize>>,
}

impl GridHomotopy {
    pub fn height(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.verts.len().saturating_sub(1))
    }

    /// Does row 0 trace exactly this based loop (up to stutters)?
    pub fn first_row_matches(&self, p: &EdgePath) -> bool {
        let row = &self.rows[0];
        let mut steps = Vec::new();
        for s in row.steps.iter().flatten() {
            steps.push(*s);
        }
        steps == p.steps && row.verts[0] == p.start
    }
}

/// Everything a square maps into: vertices and whole edges.
#[derive(Default)]
struct SquareImage {
    verts: Vec<usize>,
    edges: Vec<usize>,
}

/// Farthest point of edge `e` from `c`, measured inside the length
/// space: the interior point where the two endpoint routes meet.
fn edge_far(g: &MetricGraph, c: usize, e: usize) -> Rat {
    let edge = g.edge(e);
    (g.dist(c, edge.u) + g.dist(c, edge.v) + edge.len) / Rat::from_integer(2)
}

fn image_radius(g: &MetricGraph, c: usize, img: &SquareImage) -> Rat {
    let mut r = Rat::zero();
    for &v in &img.verts {
        r = r.max(g.dist(c, v));
    }
    for &e in &img.edges {
        r = r.max(edge_far(g, c, e));
    }
    r
}

/// Smallest enclosing-ball radius over all vertex centers.
fn best_center(g: &MetricGraph, img: &SquareImage) -> (usize, Rat) {
    let mut best = (0usize, image_radius(g, 0, img));
    for c in 1..g.n_vertices() {
        let r = image_radius(g, c, img);
        if r < best.1 {
            best = (c, r);
        }
    }
    best
}

fn square_image(h: &GridHomotopy, g: &MetricGraph, x: usize, y: usize) -> SquareImage {
    let mut img = SquareImage::default();
    img.verts.push(h.rows[x].verts[y]);
    img.verts.push(h.rows[x].verts[y + 1]);
    img.verts.push(h.rows[x + 1].verts[y]);
    img.verts.push(h.rows[x + 1].verts[y + 1]);
    for s in [h.rows[x].steps[y], h.rows[x + 1].steps[y]].into_iter().flatten() {
        img.edges.push(s.edge);
    }
    for conn in [&h.verticals[x][y], &h.verticals[x][y + 1]] {
        for s in conn {
            img.edges.push(s.edge);
            let (a, b) = g.step_ends(*s);
            img.verts.push(a);
            img.verts.push(b);
        }
    }
    img
}

/// Structural soundness of a row: step endpoints track the vertex
/// sequence, stutters join equal vertices.
fn check_row(g: &MetricGraph, row: &GridRow) -> Result<(), String> {
    if row.verts.len() < 2 || row.steps.len() + 1 != row.verts.len() {
        return Err("row shape: need steps.len() + 1 == verts.len() >= 2".into());
    }
    for (y, s) in row.steps.iter().enumerate() {
        match s {
            None => {
                if row.verts[y] != row.verts[y + 1] {
                    return Err(format!("stutter at column {y} joins distinct vertices"));
                }
            }
            Some(s) => {
                let (a, b) = g.step_ends(*s);
                if a != row.verts[y] || b != row.verts[y + 1] {
                    return Err(format!("step at column {y} does not match its endpoints"));
                }
            }
        }
    }
    Ok(())
}

/// Checks shape, boundary conditions, connector consistency, and every
/// square certificate.  `Err` is a malformed grid; `Ok(false)` means
/// well-formed but some certificate fails at this delta.
pub fn validate_grid(g: &MetricGraph, h: &GridHomotopy, delta: Rat) -> Result<bool, String> {
    let n = h.rows.len();
    if n < 2 {
        return Err("grid needs at least two rows".into());
    }
    let width = h.rows[0].verts.len();
    for row in &h.rows {
        if row.verts.len() != width {
            return Err("rows have unequal widths".into());
        }
        check_row(g, row)?;
    }
    if h.verticals.len() != n - 1 || h.centers.len() != n - 1 {
        return Err("verticals/centers must have one entry per square row".into());
    }
    let start = h.rows[0].verts[0];
    for (x, row) in h.rows.iter().enumerate() {
        if row.verts[0] != start || *row.verts.last().unwrap() != start {
            return Err(format!("row {x} does not start and end at the loop start"));
        }
    }
    if h.rows[n - 1].verts.iter().any(|&v| v != start) {
        return Err("last row must be constant at the loop start".into());
    }
    for (x, vert_row) in h.verticals.iter().enumerate() {
        if vert_row.len() != width {
            return Err(format!("vertical row {x} has the wrong width"));
        }
        for (y, conn) in vert_row.iter().enumerate() {
            let mut at = h.rows[x].verts[y];
            for s in conn {
                let (a, b) = g.step_ends(*s);
                if a != at {
                    return Err(format!("connector ({x},{y}) breaks at an endpoint"));
                }
                at = b;
            }
            if at != h.rows[x + 1].verts[y] {
                return Err(format!("connector ({x},{y}) does not reach the next row"));
            }
        }
        if !vert_row[0].is_empty() || !vert_row[width - 1].is_empty() {
            return Err(format!("boundary connectors of row {x} must be trivial"));
        }
        if h.centers[x].len() != width - 1 {
            return Err(format!("center row {x} has the wrong width"));
        }
    }
    for x in 0..n - 1 {
        for y in 0..width - 1 {
            let img = square_image(h, g, x, y);
            if image_radius(g, h.centers[x][y], &img) >= delta {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Effort caps for the grid search.
#[derive(Clone, Copy, Debug)]
pub struct SearchCaps {
    /// Maximum number of grid rows (homotopy stages).
    pub max_rows: usize,
    /// Maximum row width (loop length plus slack).
    pub max_width: usize,
    /// Maximum number of candidate rows explored by the search.
    pub max_states: usize,
}

impl Default for SearchCaps {
    fn default() -> SearchCaps {
        SearchCaps { max_rows: 128, max_width: 128, max_states: 50_000 }
    }
}

/// Outcome of the bounded search: absence is a value, not a proof.
#[derive(Debug)]
pub enum SearchOutcome {
    Found(Box<GridHomotopy>),
    NotFoundWithinCaps,
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&GridHomotopy> {
        match self {
            SearchOutcome::Found(h) => Some(h),
            SearchOutcome::NotFoundWithinCaps => None,
        }
    }
}

/// Shortest-path step sequence from `a` to `b` (deterministic: prefers
/// the least edge index among shortest-path predecessors).
fn shortest_steps(g: &MetricGraph, a: usize, b: usize) -> Vec<Step> {
    let mut rev = Vec::new();
    let mut at = b;
    while at != a {
        let mut chosen: Option<Step> = None;
        for (e, edge) in g.edges().iter().enumerate() {
            for fwd in [true, false] {
                let (u, v) = if fwd { (edge.u, edge.v) } else { (edge.v, edge.u) };
                if v == at && g.dist(a, u) + edge.len == g.dist(a, at) && chosen.is_none() {
                    chosen = Some(Step { edge: e, forward: fwd });
                }
            }
        }
        let s = chosen.expect("graph is connected");
        let (u, _) = g.step_ends(s);
        rev.push(s);
        at = u;
    }
    rev.reverse();
    rev
}

/// Searches for a grid certificate that `loop_path` is trivial at scale
/// `delta`.  Strategies, in order: a constant grid for stuttering
/// loops; a two-row contraction through a single enclosing ball;
/// spur peeling for loops that backtrack away; a bounded breadth-first
/// search over single-vertex row moves.  A found grid always passes
/// `validate_grid`.
pub fn find_grid_homotopy(
    g: &MetricGraph,
    loop_path: &EdgePath,
    delta: Rat,
    caps: SearchCaps,
) -> SearchOutcome {
    assert!(g.is_loop(loop_path), "input must be a based loop");
    if delta <= Rat::zero() {
        return SearchOutcome::NotFoundWithinCaps;
    }
    if loop_path.steps.len() + 3 > caps.max_width {
        return SearchOutcome::NotFoundWithinCaps;
    }
    if let Some(h) = try_trivial(g, loop_path, delta) {
        return SearchOutcome::Found(Box::new(h));
    }
    if let Some(h) = try_single_ball(g, loop_path, delta) {
        return SearchOutcome::Found(Box::new(h));
    }
    if let Some(h) = try_spur_peel(g, loop_path, delta, caps) {
        return SearchOutcome::Found(Box::new(h));
    }
    if let Some(h) = try_row_search(g, loop_path, delta, caps) {
        return SearchOutcome::Found(Box::new(h));
    }
    SearchOutcome::NotFoundWithinCaps
}

/// Pads a row with trailing stutters at the start vertex to `width`.
fn pad_row(mut row: GridRow, width: usize) -> GridRow {
    let last = *row.verts.last().unwrap();
    while row.verts.len() < width {
        row.verts.push(last);
        row.steps.push(None);
    }
    row
}

fn constant_row(start: usize, width: usize) -> GridRow {
    GridRow { verts: vec![start; width], steps: vec![None; width - 1] }
}

/// A loop that never leaves its start contracts by a single constant
/// square row; any positive scale certifies it.
fn try_trivial(g: &MetricGraph, loop_path: &EdgePath, delta: Rat) -> Option<GridHomotopy> {
    if !loop_path.steps.is_empty() {
        return None;
    }
    let start = loop_path.start;
    let width = 2;
    let rows = vec![constant_row(start, width), constant_row(start, width)];
    let verticals = vec![vec![Vec::new(); width]];
    let centers = vec![vec![start]];
    let h = GridHomotopy { rows, verticals, centers };
    debug_assert_eq!(validate_grid(g, &h, delta), Ok(true));
    Some(h)
}

/// When one open delta-ball holds the whole loop, contract in two rows:
/// connectors run through the ball's center, so every square image
/// stays inside.
fn try_single_ball(g: &MetricGraph, loop_path: &EdgePath, delta: Rat) -> Option<GridHomotopy> {
    let row0 = row_of_path(g, loop_path);
    let mut img = SquareImage::default();
    img.verts.extend(row0.verts.iter().copied());
    for s in row0.steps.iter().flatten() {
        img.edges.push(s.edge);
    }
    let mut center = None;
    for c in 0..g.n_vertices() {
        if image_radius(g, c, &img) < delta {
            center = Some(c);
            break;
        }
    }
    let c = center?;
    let start = loop_path.start;
    let width = row0.verts.len();
    let mut verticals = vec![Vec::new(); width];
    for (y, conn) in verticals.iter_mut().enumerate() {
        if y == 0 || y == width - 1 {
            continue;
        }
        let v = row0.verts[y];
        if v == start {
            continue;
        }
        let mut steps = shortest_steps(g, v, c);
        steps.extend(shortest_steps(g, c, start));
        *conn = steps;
    }
    let centers = vec![vec![c; width - 1]];
    let h = GridHomotopy {
        rows: vec![row0, constant_row(start, width)],
        verticals: vec![verticals],
        centers,
    };
    match validate_grid(g, &h, delta) {
        Ok(true) => Some(h),
        _ => None,
    }
}

fn row_of_path(g: &MetricGraph, p: &EdgePath) -> GridRow {
    let mut verts = vec![p.start];
    let mut steps = Vec::new();
    let mut at = p.start;
    for s in &p.steps {
        let (a, b) = g.step_ends(*s);
        debug_assert_eq!(a, at);
        steps.push(Some(*s));
        at = b;
        verts.push(b);
    }
    GridRow { verts, steps }
}

/// Peels backtracks one at a time: each stage flattens one spur — a
/// step and its reverse separated only by stutters — onto its base
/// vertex.  This is free reduction of the edge word, so the constant
/// row is reached exactly when the word reduces to nothing.  Works
/// whenever every loop edge is shorter than delta.
fn try_spur_peel(
    g: &MetricGraph,
    loop_path: &EdgePath,
    delta: Rat,
    caps: SearchCaps,
) -> Option<GridHomotopy> {
    let row0 = row_of_path(g, loop_path);
    if row0.steps.iter().flatten().any(|s| g.edge(s.edge).len >= delta) {
        return None;
    }
    let start = loop_path.start;
    let mut rows = vec![row0];
    loop {
        let prev = rows.last().unwrap();
        if prev.verts.iter().all(|&v| v == start) {
            break;
        }
        let Some((i, j)) = find_spur(prev) else {
            return None; // irreducible residue: not contractible this way
        };
        let mut next = prev.clone();
        let base = next.verts[i];
        for v in next.verts[i + 1..=j].iter_mut() {
            *v = base;
        }
        next.steps[i] = None;
        next.steps[j] = None;
        if rows.len() + 1 > caps.max_rows {
            return None;
        }
        rows.push(next);
    }
    assemble_stacked(g, rows, delta)
}

/// A spur: positions `i < j` with `steps[j]` the reverse of `steps[i]`
/// and only stutters between them.
fn find_spur(row: &GridRow) -> Option<(usize, usize)> {
    for i in 0..row.steps.len() {
        let Some(s) = row.steps[i] else { continue };
        let mut j = i + 1;
        while j < row.steps.len() && row.steps[j].is_none() {
            j += 1;
        }
        if j < row.steps.len() && row.steps[j] == Some(s.reversed()) {
            return Some((i, j));
        }
    }
    None
}

/// Builds connectors and best centers for a stack of rows whose
/// vertical neighbors are equal or adjacent, then validates.
fn assemble_stacked(g: &MetricGraph, rows: Vec<GridRow>, delta: Rat) -> Option<GridHomotopy> {
    let width = rows[0].verts.len();
    let mut verticals = Vec::new();
    let mut centers = Vec::new();
    for x in 0..rows.len() - 1 {
        let mut vrow = Vec::new();
        for y in 0..width {
            let a = rows[x].verts[y];
            let b = rows[x + 1].verts[y];
            if a == b {
                vrow.push(Vec::new());
            } else {
                vrow.push(vec![find_step(g, a, b)?]);
            }
        }
        verticals.push(vrow);
    }
    let mut h = GridHomotopy { rows, verticals, centers: Vec::new() };
    for x in 0..h.rows.len() - 1 {
        let mut crow = Vec::new();
        for y in 0..width - 1 {
            let img = square_image(&h, g, x, y);
            crow.push(best_center(g, &img).0);
        }
        centers.push(crow);
    }
    h.centers = centers;
    match validate_grid(g, &h, delta) {
        Ok(true) => Some(h),
        _ => None,
    }
}

/// The cheapest edge joining two adjacent vertices, as a step a -> b.
fn find_step(g: &MetricGraph, a: usize, b: usize) -> Option<Step> {
    let mut best: Option<Step> = None;
    for (e, edge) in g.edges().iter().enumerate() {
        let fwd = if edge.u == a && edge.v == b {
            Some(true)
        } else if edge.v == a && edge.u == b {
            Some(false)
        } else {
            None
        };
        if let Some(f) = fwd {
            let better = match best {
                None => true,
                Some(s) => edge.len < g.edge(s.edge).len,
            };
            if better {
                best = Some(Step { edge: e, forward: f });
            }
        }
    }
    best
}

/// Bounded best-first search over rows: one interior entry moves to an
/// equal-or-adjacent vertex per stage, horizontal adjacency must
/// survive, and both touched squares must certify.  Rows closer to the
/// constant row (by total distance to the start vertex) are explored
/// first, so contractions that descend the distance landscape are found
/// quickly; the cap bounds total exploration either way.  Requires
/// every current-row edge shorter than delta (unchanged squares repeat
/// their horizontal edge).
fn try_row_search(
    g: &MetricGraph,
    loop_path: &EdgePath,
    delta: Rat,
    caps: SearchCaps,
) -> Option<GridHomotopy> {
    let row0 = pad_row(row_of_path(g, loop_path), loop_path.steps.len() + 3);
    if row0.steps.iter().flatten().any(|s| g.edge(s.edge).len >= delta) {
        return None;
    }
    let start = loop_path.start;
    let width = row0.verts.len();
    let target: Vec<usize> = vec![start; width];
    let potential = |row: &[usize]| -> Rat {
        row.iter().map(|&v| g.dist(v, start)).fold(Rat::zero(), |a, b| a + b)
    };
    let key0 = row0.verts.clone();
    let mut seen: HashMap<Vec<usize>, Option<Vec<usize>>> = HashMap::new();
    seen.insert(key0.clone(), None);
    let mut heap = std::collections::BinaryHeap::new();
    let mut ticket = 0usize;
    heap.push(std::cmp::Reverse((potential(&key0), ticket, key0.clone())));
    let mut explored = 0usize;
    let mut reached = key0 == target;
    'search: while let Some(std::cmp::Reverse((_, _, cur))) = heap.pop() {
        if reached || explored >= caps.max_states {
            break;
        }
        for y in 1..width - 1 {
            let here = cur[y];
            let mut cands: Vec<usize> = g
                .edges()
                .iter()
                .filter_map(|e| {
                    if e.u == here {
                        Some(e.v)
                    } else if e.v == here {
                        Some(e.u)
                    } else {
                        None
                    }
                })
                .collect();
            cands.sort_unstable();
            cands.dedup();
            for w in cands {
                explored += 1;
                if w == here {
                    continue;
                }
                if !joined(g, cur[y - 1], w) || !joined(g, w, cur[y + 1]) {
                    continue;
                }
                let mut next = cur.clone();
                next[y] = w;
                if seen.contains_key(&next) {
                    continue;
                }
                if !transition_certifies(g, &cur, &next, y, delta) {
                    continue;
                }
                seen.insert(next.clone(), Some(cur.clone()));
                if next == target {
                    reached = true;
                    break 'search;
                }
                ticket += 1;
                heap.push(std::cmp::Reverse((potential(&next), ticket, next)));
            }
        }
    }
    if !reached {
        return None;
    }
    // Reconstruct the chain of vertex rows, then rebuild full rows.
    let mut chain = vec![target.clone()];
    while let Some(Some(prev)) = seen.get(chain.last().unwrap()) {
        chain.push(prev.clone());
    }
    chain.reverse();
    if chain.len() + 1 > caps.max_rows {
        return None;
    }
    let mut rows = vec![row0];
    for vrow in chain.into_iter().skip(1) {
        rows.push(verts_to_row(g, vrow));
    }
    assemble_stacked(g, rows, delta)
}

fn joined(g: &MetricGraph, a: usize, b: usize) -> bool {
    a == b || find_step(g, a, b).is_some()
}

fn verts_to_row(g: &MetricGraph, verts: Vec<usize>) -> GridRow {
    let mut steps = Vec::new();
    for y in 0..verts.len() - 1 {
        if verts[y] == verts[y + 1] {
            steps.push(None);
        } else {
            steps.push(Some(find_step(g, verts[y], verts[y + 1]).expect("adjacent rows")));
        }
    }
    GridRow { verts, steps }
}

/// Do the two squares touched by changing column `y` certify at delta?
fn transition_certifies(
    g: &MetricGraph,
    cur: &[usize],
    next: &[usize],
    y: usize,
    delta: Rat,
) -> bool {
    for sq in [y - 1, y] {
        let mut img = SquareImage::default();
        for v in [cur[sq], cur[sq + 1], next[sq], next[sq + 1]] {
            img.verts.push(v);
        }
        for (a, b) in [
            (cur[sq], cur[sq + 1]),
            (next[sq], next[sq + 1]),
            (cur[sq], next[sq]),
            (cur[sq + 1], next[sq + 1]),
        ] {
            if a != b {
                match find_step(g, a, b) {
                    Some(s) => img.edges.push(s.edge),
                    None => return false,
                }
            }
        }
        if best_center(g, &img).1 >= delta {
            return false;
        }
    }
    true
}

/// The scale this grid actually achieves: the maximum over squares of
/// the minimal enclosing-ball radius.  Centers are rewritten to the
/// minimizers, so the grid then validates at any scale above the
/// returned value — in particular at (epsilon + delta) / 2.
pub fn tighten(g: &MetricGraph, h: &mut GridHomotopy, delta: Rat) -> Result<Rat, String> {
    match validate_grid(g, h, delta)? {
        true => {}
        false => return Err("grid is not valid at the given scale".into()),
    }
    let mut eps = Rat::zero();
    for x in 0..h.rows.len() - 1 {
        for y in 0..h.rows[0].verts.len() - 1 {
            let img = square_image(h, g, x, y);
            let (c, r) = best_center(g, &img);
            h.centers[x][y] = c;
            eps = eps.max(r);
        }
    }
    debug_assert!(eps < delta);
    Ok(eps)
}

/// Result of chopping a homotopy to a subset `B`.
#[derive(Debug)]
pub struct ChopReport {
    /// Clockwise boundary loops of each removed grid component, as free
    /// loops in the graph.  Empty when the homotopy never leaves `B`.
    pub loops: Vec<EdgePath>,
    /// Grid squares removed (their image touches a vertex outside B).
    pub removed: Vec<(usize, usize)>,
    /// Number of connected components among the removed squares.
    pub components: usize,
}

/// Restricts a valid homotopy to the vertex set `B` (`in_b[v]`): all
/// squares whose image touches a vertex outside `B` are removed, and
/// the boundary loops of the removed components are returned.  The
/// input loop (row 0) must stay inside `B`.  Every returned loop lies
/// in `B` and within the open 2-delta tube of the complement of `B` —
/// both facts are checked vertex by vertex, not just inherited.
pub fn chop(
    g: &MetricGraph,
    h: &GridHomotopy,
    delta: Rat,
    in_b: &[bool],
) -> Result<ChopReport, String> {
    if in_b.len() != g.n_vertices() {
        return Err("membership mask must cover every vertex".into());
    }
    match validate_grid(g, h, delta)? {
        true => {}
        false => return Err("homotopy is not valid at the given scale".into()),
    }
    let row0 = &h.rows[0];
    if row0.verts.iter().any(|&v| !in_b[v]) {
        return Err("input loop leaves the subset".into());
    }
    let n = h.rows.len() - 1;
    let m = h.rows[0].verts.len() - 1;
    let mut removed = vec![vec![false; m]; n];
    for x in 0..n {
        for y in 0..m {
            let img = square_image(h, g, x, y);
            if img.verts.iter().any(|&v| !in_b[v]) {
                removed[x][y] = true;
            }
        }
    }
    // Components of removed squares under edge adjacency.
    let mut comp = vec![vec![usize::MAX; m]; n];
    let mut ncomp = 0usize;
    for x in 0..n {
        for y in 0..m {
            if !removed[x][y] || comp[x][y] != usize::MAX {
                continue;
            }
            let mut stack = vec![(x, y)];
            comp[x][y] = ncomp;
            while let Some((a, b)) = stack.pop() {
                let mut push = |p: usize, q: usize| {
                    if removed[p][q] && comp[p][q] == usize::MAX {
                        comp[p][q] = ncomp;
                        stack.push((p, q));
                    }
                };
                if a > 0 {
                    push(a - 1, b);
                }
                if a + 1 < n {
                    push(a + 1, b);
                }
                if b > 0 {
                    push(a, b - 1);
                }
                if b + 1 < m {
                    push(a, b + 1);
                }
            }
            ncomp += 1;
        }
    }

    let loops = trace_boundaries(g, h, &removed, n, m)?;

    // Verified claims, not inherited ones.
    for lp in &loops {
        let mut at = lp.start;
        let mut seen_verts = vec![at];
        for s in &lp.steps {
            let (a, b) = g.step_ends(*s);
            if a != at {
                return Err("boundary loop is not a path".into());
            }
            at = b;
            seen_verts.push(b);
        }
        if at != lp.start {
            return Err("boundary loop does not close".into());
        }
        let two_delta = delta + delta;
        for &q in &seen_verts {
            if !in_b[q] {
                return Err("boundary loop leaves the subset".into());
            }
            let near_outside = (0..g.n_vertices())
                .any(|z| !in_b[z] && g.dist(q, z) < two_delta);
            if !near_outside {
                return Err(format!(
                    "boundary vertex {q} is not within 2*delta of the complement"
                ));
            }
        }
    }

    let mut removed_list = Vec::new();
    for x in 0..n {
        for y in 0..m {
            if removed[x][y] {
                removed_list.push((x, y));
            }
        }
    }
    Ok(ChopReport { loops, removed: removed_list, components: ncomp })
}

/// Walks the boundary of the removed region.  Directed grid sides keep
/// the removed region on the left; at crossing corners the sharpest
/// left turn is taken, which splits the boundary into simple cycles.
fn trace_boundaries(
    g: &MetricGraph,
    h: &GridHomotopy,
    removed: &[Vec<bool>],
    n: usize,
    m: usize,
) -> Result<Vec<EdgePath>, String> {
    // Directed boundary edges between grid corners (x, y).
    type Corner = (usize, usize);
    let is_removed = |x: isize, y: isize| -> bool {
        x >= 0 && y >= 0 && (x as usize) < n && (y as usize) < m && removed[x as usize][y as usize]
    };
    let mut arrows: HashSet<(Corner, Corner)> = HashSet::new();
    for x in 0..n {
        for y in 0..m {
            if !removed[x][y] {
                continue;
            }
            let (xi, yi) = (x as isize, y as isize);
            // Side is boundary when the neighbor across it is kept.
            if !is_removed(xi - 1, yi) {
                arrows.insert(((x, y + 1), (x, y))); // top, removed below: walk west
            }
            if !is_removed(xi + 1, yi) {
                arrows.insert(((x + 1, y), (x + 1, y + 1))); // bottom: walk east
            }
            if !is_removed(xi, yi - 1) {
                arrows.insert(((x, y), (x + 1, y))); // left: walk south
            }
            if !is_removed(xi, yi + 1) {
                arrows.insert(((x + 1, y + 1), (x, y + 1))); // right: walk north
            }
        }
    }
    let mut by_tail: HashMap<Corner, Vec<Corner>> = HashMap::new();
    for (a, b) in &arrows {
        by_tail.entry(*a).or_default().push(*b);
    }
    for v in by_tail.values_mut() {
        v.sort_unstable();
    }

    let mut loops = Vec::new();
    let mut used: HashSet<(Corner, Corner)> = HashSet::new();
    let mut all: Vec<(Corner, Corner)> = arrows.iter().copied().collect();
    all.sort_unstable();
    for &startarrow in &all {
        if used.contains(&startarrow) {
            continue;
        }
        let mut cycle = vec![startarrow];
        used.insert(startarrow);
        loop {
            let (tail_prev, head) = *cycle.last().unwrap();
            let din = direction(tail_prev, head);
            let outs = by_tail.get(&head).cloned().unwrap_or_default();
            // Sharpest left turn relative to the incoming direction.
            let mut chosen: Option<Corner> = None;
            for pref in turn_preference(din) {
                if let Some(next) =
                    outs.iter().find(|&&c| direction(head, c) == pref && !used_or_start(&used, (head, c), startarrow))
                {
                    chosen = Some(*next);
                    break;
                }
            }
            let Some(nxt) = chosen else {
                return Err("boundary tracing got stuck".into());
            };
            if (head, nxt) == startarrow {
                break;
            }
            used.insert((head, nxt));
            cycle.push((head, nxt));
        }
        loops.push(arrows_to_path(g, h, &cycle)?);
    }
    Ok(loops)
}

fn used_or_start(
    used: &HashSet<((usize, usize), (usize, usize))>,
    arrow: ((usize, usize), (usize, usize)),
    start: ((usize, usize), (usize, usize)),
) -> bool {
    arrow != start && used.contains(&arrow)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dir {
    North,
    East,
    South,
    West,
}

fn direction(a: (usize, usize), b: (usize, usize)) -> Dir {
    if b.0 + 1 == a.0 {
        Dir::North
    } else if a.0 + 1 == b.0 {
        Dir::South
    } else if a.1 + 1 == b.1 {
        Dir::East
    } else {
        Dir::West
    }
}

/// Left, straight, right — never straight back.
fn turn_preference(d: Dir) -> [Dir; 3] {
    match d {
        Dir::North => [Dir::West, Dir::North, Dir::East],
        Dir::West => [Dir::South, Dir::West, Dir::North],
        Dir::South => [Dir::East, Dir::South, Dir::West],
        Dir::East => [Dir::North, Dir::East, Dir::South],
    }
}

/// Maps a cycle of directed grid sides to the image path in the graph.
fn arrows_to_path(
    g: &MetricGraph,
    h: &GridHomotopy,
    cycle: &[((usize, usize), (usize, usize))],
) -> Result<EdgePath, String> {
    let corner_vertex = |c: (usize, usize)| h.rows[c.0].verts[c.1];
    let mut steps = Vec::new();
    for &(a, b) in cycle {
        match direction(a, b) {
            Dir::East => {
                if let Some(s) = h.rows[a.0].steps[a.1] {
                    steps.push(s);
                }
            }
            Dir::West => {
                if let Some(s) = h.rows[a.0].steps[b.1] {
                    steps.push(s.reversed());
                }
            }
            Dir::South => {
                for s in &h.verticals[a.0][a.1] {
                    steps.push(*s);
                }
            }
            Dir::North => {
                for s in h.verticals[b.0][b.1].iter().rev() {
                    steps.push(s.reversed());
                }
            }
        }
    }
    let start = corner_vertex(cycle[0].0);
    let p = EdgePath { start, steps };
    g.validate_path(&p).map_err(|e| format!("boundary image is broken: {e:?}"))?;
    Ok(p)
}

/// Small-scale confirmation that the chop's claim holds: assembles the
/// comparison loop
/// `row0^{-1} . prod_j (alpha_j gamma_j alpha_j^{-1})`
/// inside the subgraph induced on `B` and searches for a grid at the
/// same scale.  `Some(true)` on success; `None` when the bounded search
/// is inconclusive.
pub fn verify_chop(
    g: &MetricGraph,
    h: &GridHomotopy,
    delta: Rat,
    in_b: &[bool],
    report: &ChopReport,
    caps: SearchCaps,
) -> Option<bool> {
    let keep: Vec<usize> = (0..g.n_vertices()).filter(|&v| in_b[v]).collect();
    let base = h.rows[0].verts[0];
    let sub = induce_region(g, &keep, base).ok()?;
    let map = |v: usize| sub.idx(g.id(v));
    // Induced edges keep their ambient order, so ambient edge indices
    // translate exactly (parallel edges stay distinct).
    let mut edge_map = vec![usize::MAX; g.n_edges()];
    let mut next = 0usize;
    for (e, edge) in g.edges().iter().enumerate() {
        if in_b[edge.u] && in_b[edge.v] {
            edge_map[e] = next;
            next += 1;
        }
    }
    let convert = |p: &EdgePath| -> Option<EdgePath> {
        let start = map(p.start)?;
        let mut steps = Vec::new();
        for s in &p.steps {
            let se = edge_map[s.edge];
            if se == usize::MAX {
                return None;
            }
            steps.push(Step { edge: se, forward: s.forward });
        }
        Some(EdgePath { start, steps })
    };
    let row0 = EdgePath {
        start: h.rows[0].verts[0],
        steps: h.rows[0].steps.iter().flatten().copied().collect(),
    };
    let mut total = convert(&row0)?;
    // Reverse row0: the comparison loop starts from its inverse.
    total.steps.reverse();
    for s in &mut total.steps {
        *s = s.reversed();
    }
    let mut assembled = total.steps;
    let sub_base = map(base)?;
    for lp in &report.loops {
        let sub_lp = convert(lp)?;
        let alpha = shortest_steps(&sub, sub_base, sub_lp.start);
        assembled.extend(alpha.iter().copied());
        assembled.extend(sub_lp.steps.iter().copied());
        assembled.extend(alpha.iter().rev().map(|s| s.reversed()));
    }
    let comparison = EdgePath { start: sub_base, steps: assembled };
    if sub.validate_path(&comparison).is_err() {
        return Some(false);
    }
    match find_grid_homotopy(&sub, &comparison, delta, caps) {
        SearchOutcome::Found(_) => Some(true),
        SearchOutcome::NotFoundWithinCaps => None,
    }
}

/// The subgraph induced on a vertex subset, keeping external ids, with
/// the induced length metric and `base` as basepoint.
pub fn induce_region(
    g: &MetricGraph,
    region: &[usize],
    base: usize,
) -> Result<MetricGraph, String> {
    let set: HashSet<usize> = region.iter().copied().collect();
    if !set.contains(&base) {
        return Err("basepoint must belong to the region".into());
    }
    let ids: Vec<VertexId> = region.iter().map(|&v| g.id(v)).collect();
    let mut edges = Vec::new();
    for e in g.edges() {
        if set.contains(&e.u) && set.contains(&e.v) {
            edges.push((g.id(e.u), g.id(e.v), e.len));
        }
    }
    MetricGraph::new(ids, edges, Some(g.id(base))).map_err(|e| format!("induced region: {e}"))
}

/// A point along a walk: a vertex, or an interior point of a step.
#[derive(Clone, Copy, Debug)]
enum WalkPoint {
    At(usize),
    Inside(Step, Rat),
}

fn point_dist(g: &MetricGraph, p: WalkPoint, v: usize) -> Rat {
    match p {
        WalkPoint::At(u) => g.dist(u, v),
        WalkPoint::Inside(s, t) => {
            let (a, b) = g.step_ends(s);
            let len = g.edge(s.edge).len;
            (g.dist(a, v) + t).min(g.dist(b, v) + (len - t))
        }
    }
}

/// Output of the short-representative search.
#[derive(Debug)]
pub struct ShortLoopReport {
    /// Size of the greedy disjoint-ball packing used for the bound.
    pub packing_count: usize,
    /// The guaranteed ceiling `5 * N * rho`.
    pub bound: Rat,
    /// The produced loop, in the region graph.
    pub output: EdgePath,
    /// Its based class.
    pub word: Word,
    /// Its measured length (at most `bound`).
    pub length: Rat,
    /// Step-by-step account of the construction and verification.
    pub transcript: Vec<String>,
}

fn path_len(g: &MetricGraph, p: &EdgePath) -> Rat {
    p.steps.iter().map(|s| g.edge(s.edge).len).fold(Rat::zero(), |a, b| a + b)
}

/// From a witness loop in the region `z` that avoids scale-`5*rho`
/// homotopy into the forbidden collection, produces a loop with the
/// same property of length at most `5 * N * rho`, where `N` counts a
/// greedy maximal family of disjoint `rho`-balls in `z`.
///
/// The construction follows the coarse-shortening argument: snap
/// arclength-`rho` samples of the witness to their nearest packing
/// centers, join consecutive centers by shortest paths, and split the
/// resulting center loop at repeated centers until every piece is short
/// enough; at least one piece must keep the non-membership property,
/// and the algebraic engine re-verifies the returned piece on the
/// region's graph (membership decided in the normal closure of the
/// forbidden classes, their inverses, and every class shorter than
/// `2 * delta = 10 * rho`).  Verification failure is an error carrying
/// the transcript, never a silent downgrade.
pub fn short_nonmember_representative(
    z: &MetricGraph,
    rho: Rat,
    witness: &EdgePath,
    forbidden: &[Word],
    budget: Budget,
) -> Result<ShortLoopReport, String> {
    let mut transcript = Vec::new();
    let fail = |transcript: &[String], msg: &str| -> String {
        let mut out = String::from(msg);
        for line in transcript {
            out.push_str("\n  | ");
            out.push_str(line);
        }
        out
    };
    if rho <= Rat::zero() {
        return Err("rho must be positive".into());
    }
    z.validate_path(witness).map_err(|e| format!("witness is not a path: {e:?}"))?;
    if !z.is_loop(witness) {
        return Err("witness must be a closed loop".into());
    }
    let delta = Rat::from_integer(5) * rho;
    let two_delta = delta + delta;

    // Closure generators: forbidden classes, their inverses, and the
    // short classes that are invisible at this scale.
    let mut gens: Vec<Word> = Vec::new();
    for w in forbidden {
        gens.push(w.clone());
        gens.push(w.inverse());
    }
    let classes = z
        .enumerate_classes_bounded(two_delta, 200_000)
        .map_err(|e| format!("class enumeration overflowed beyond {} classes", e.bound))?;
    let mut short_count = 0usize;
    for c in classes {
        if c.length < two_delta {
            gens.push(c.word);
            short_count += 1;
        }
    }
    transcript.push(format!(
        "closure generated by {} forbidden classes (with inverses) and {} short classes below {}",
        forbidden.len(),
        short_count,
        fmt_rat(two_delta)
    ));
    let engine = MembershipEngine::new(z.rank(), &gens, budget);

    // Precondition: the witness itself must avoid the closure.
    let witness_word = based_word(z, witness);
    match engine.member(&witness_word) {
        Verdict::NotMember(_) => transcript.push("witness verified outside the closure".into()),
        Verdict::Member(_) => {
            transcript.push("witness lies inside the closure".into());
            return Err(fail(
                &transcript,
                "precondition unsatisfiable: the witness is homotopic at this scale to a \
                 forbidden collection",
            ));
        }
        Verdict::Unknown => {
            transcript.push("witness membership undecided; continuing on trust".into())
        }
    }

    // Greedy maximal packing of disjoint rho-balls: centers pairwise
    // farther apart than 2*rho.
    let two_rho = rho + rho;
    let mut centers: Vec<usize> = Vec::new();
    for v in 0..z.n_vertices() {
        if centers.iter().all(|&c| z.dist(c, v) > two_rho) {
            centers.push(v);
        }
    }
    let n_balls = centers.len();
    transcript.push(format!("greedy packing found {n_balls} disjoint balls of radius {}", fmt_rat(rho)));

    // The packing must cover the whole region at scale 2*rho,
    // including edge interiors.
    let psi = covering_radius(z, &centers);
    transcript.push(format!("covering radius of the packing centers: {}", fmt_rat(psi)));
    if psi > two_rho {
        return Err(fail(
            &transcript,
            "packing centers do not cover the region within 2*rho; the length bound \
             cannot be certified at this rho",
        ));
    }

    // Arclength-rho samples of the witness, snapped to nearest centers.
    let samples = sample_walk(z, witness, rho);
    let mut snapped: Vec<usize> = Vec::new();
    for p in &samples {
        let mut best = (centers[0], point_dist(z, *p, centers[0]));
        for &c in &centers[1..] {
            let d = point_dist(z, *p, c);
            if d < best.1 {
                best = (c, d);
            }
        }
        snapped.push(best.0);
    }
    if let (Some(first), Some(last)) = (snapped.first(), snapped.last()) {
        if first != last {
            snapped.push(*first);
        }
    }
    snapped.dedup();
    transcript.push(format!(
        "{} samples snapped to a center loop through {} stations",
        samples.len(),
        snapped.len()
    ));

    // Split the center loop at repeated centers until all pieces have
    // at most N segments; each segment is a shortest path below 5*rho.
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![snapped];
    while let Some(seq) = stack.pop() {
        let k = seq.len() - 1; // segments
        if k == 0 {
            continue;
        }
        if k <= n_balls {
            pieces.push(seq);
            continue;
        }
        let mut split = None;
        'outer: for i in 0..seq.len() {
            for j in i + 1..(i + n_balls + 1).min(seq.len()) {
                if seq[i] == seq[j] {
                    split = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = split else {
            return Err(fail(
                &transcript,
                "pigeonhole split failed: repeated station not found within the window",
            ));
        };
        let inner: Vec<usize> = seq[i..=j].to_vec();
        let mut outer: Vec<usize> = seq[..=i].to_vec();
        outer.extend_from_slice(&seq[j + 1..]);
        stack.push(inner);
        stack.push(outer);
    }
    pieces.sort_by_key(|p| p.len());
    transcript.push(format!("center loop split into {} candidate pieces", pieces.len()));

    // Verify pieces shortest-first; return the first certified one.
    let bound = Rat::from_integer(5) * Rat::from_integer(n_balls as i128) * rho;
    for (i, piece) in pieces.iter().enumerate() {
        let mut steps = Vec::new();
        for w in piece.windows(2) {
            if w[0] != w[1] {
                steps.extend(shortest_steps(z, w[0], w[1]));
            }
        }
        let lp = EdgePath { start: piece[0], steps };
        let lp = reduce_backtracks(&lp);
        let length = path_len(z, &lp);
        if length > bound {
            transcript.push(format!(
                "piece {i}: length {} exceeds the bound {} (skipped)",
                fmt_rat(length),
                fmt_rat(bound)
            ));
            continue;
        }
        let word = based_word(z, &lp);
        match engine.member(&word) {
            Verdict::NotMember(_) => {
                transcript.push(format!(
                    "piece {i}: length {} <= {}, certified outside the closure",
                    fmt_rat(length),
                    fmt_rat(bound)
                ));
                return Ok(ShortLoopReport {
                    packing_count: n_balls,
                    bound,
                    output: lp,
                    word,
                    length,
                    transcript,
                });
            }
            Verdict::Member(_) => {
                transcript.push(format!("piece {i}: inside the closure"));
            }
            Verdict::Unknown => {
                transcript.push(format!("piece {i}: membership undecided"));
            }
        }
    }
    Err(fail(
        &transcript,
        "no piece of the shortened loop could be certified outside the closure",
    ))
}

/// Word of a free loop conjugated to the basepoint through the tree.
fn based_word(g: &MetricGraph, p: &EdgePath) -> Word {
    let mut full = g.tree_path(g.basepoint(), p.start);
    full.steps.extend(p.steps.iter().copied());
    let back = g.tree_path(p.start, g.basepoint());
    full.steps.extend(back.steps);
    g.loop_to_word(&full)
}

/// Removes immediate backtracks; keeps the original start, so the
/// based class is unchanged and the length never grows.
fn reduce_backtracks(p: &EdgePath) -> EdgePath {
    let mut steps: Vec<Step> = Vec::new();
    for s in &p.steps {
        if steps.last().is_some_and(|t| *t == s.reversed()) {
            steps.pop();
        } else {
            steps.push(*s);
        }
    }
    EdgePath { start: p.start, steps }
}

/// Covering radius of a center set over the whole length space: the
/// farthest any point (edge interiors included) sits from every center.
fn covering_radius(g: &MetricGraph, centers: &[usize]) -> Rat {
    let mut worst = Rat::zero();
    for v in 0..g.n_vertices() {
        let mut best: Option<Rat> = None;
        for &c in centers {
            let d = g.dist(c, v);
            best = Some(best.map_or(d, |b: Rat| b.min(d)));
        }
        worst = worst.max(best.unwrap());
    }
    for (e, edge) in g.edges().iter().enumerate() {
        // f(t) = min over centers of min(d(c,u) + t, d(c,v) + len - t);
        // maximize over t in [0, len] by checking tent peaks and
        // pairwise crossings.
        let len = edge.len;
        let mut ts: Vec<Rat> = vec![Rat::zero(), len];
        for &c in centers {
            let peak = (g.dist(c, edge.v) + len - g.dist(c, edge.u)) / Rat::from_integer(2);
            if peak > Rat::zero() && peak < len {
                ts.push(peak);
            }
        }
        for &c1 in centers {
            for &c2 in centers {
                let t = (g.dist(c2, edge.v) + len - g.dist(c1, edge.u)) / Rat::from_integer(2);
                if t > Rat::zero() && t < len {
                    ts.push(t);
                }
            }
        }
        for t in ts {
            let p = WalkPoint::Inside(Step { edge: e, forward: true }, t);
            let mut best: Option<Rat> = None;
            for &c in centers {
                let d = point_dist(g, p, c);
                best = Some(best.map_or(d, |b: Rat| b.min(d)));
            }
            worst = worst.max(best.unwrap());
        }
    }
    worst
}

/// Points at arclength multiples of `step` along the walk, endpoints
/// included.
fn sample_walk(g: &MetricGraph, p: &EdgePath, step: Rat) -> Vec<WalkPoint> {
    let mut out = vec![WalkPoint::At(p.start)];
    let total = path_len(g, p);
    if total == Rat::zero() {
        return out;
    }
    let mut next_mark = step;
    let mut walked = Rat::zero();
    for s in &p.steps {
        let len = g.edge(s.edge).len;
        let end = walked + len;
        while next_mark < end {
            out.push(WalkPoint::Inside(*s, next_mark - walked));
            next_mark = next_mark + step;
        }
        if next_mark == end {
            let (_, b) = g.step_ends(*s);
            out.push(WalkPoint::At(b));
            next_mark = next_mark + step;
        }
        walked = end;
    }
    // Ensure the closing point is present.
    match out.last() {
        Some(WalkPoint::At(v)) if *v == p.start && out.len() > 1 => {}
        _ => out.push(WalkPoint::At(p.start)),
    }
    out
}
