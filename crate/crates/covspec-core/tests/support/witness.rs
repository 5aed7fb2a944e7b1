//! Explicit membership witnesses checked by raw path algebra.
//!
//! A claim "loop ∈ normal closure of {faces, far ring}" is certified by an
//! explicit product of conjugated pieces that reduces, step by step, to the
//! loop itself.  Reduction here is its own five-line stack, so the check
//! shares nothing with the library's path handling.

use covspec_core::{EdgePath, MetricGraph, Step};
use super::spaces::step_between;

pub fn reduce_steps(steps: &[Step]) -> Vec<Step> {
    let mut stack: Vec<Step> = Vec::new();
    for &s in steps {
        match stack.last() {
            Some(&t) if t.edge == s.edge && t.forward != s.forward => {
                stack.pop();
            }
            _ => stack.push(s),
        }
    }
    stack
}

pub fn invert_steps(steps: &[Step]) -> Vec<Step> {
    steps.iter().rev().map(|s| s.reversed()).collect()
}

/// One factor `conj · core · conj⁻¹` of a product.
#[derive(Clone)]
pub struct Piece {
    pub conj: Vec<Step>,
    pub core: Vec<Step>,
}

pub fn assemble(pieces: &[Piece]) -> Vec<Step> {
    let mut all = Vec::new();
    for p in pieces {
        all.extend_from_slice(&p.conj);
        all.extend_from_slice(&p.core);
        all.extend(invert_steps(&p.conj));
    }
    reduce_steps(&all)
}

/// Witness that ring 0 of a cylinder equals a product of conjugated square
/// faces and a conjugate of ring `l`:
///
///   Ring_0 = Π_{j<l} Π_{k<c} D_j B_{j,k} F_{j,k} B_{j,k}⁻¹ D_j⁻¹
///            · D_l Ring_l D_l⁻¹
///
/// where D_j descends the rung column 0 to level j and B_{j,k} runs
/// `u_{j,0} · ρ_0..ρ_{k-1} · u_{j,k}⁻¹` inside the strip.  Returns
/// (ring-0 loop, the product's pieces); their reduced steps must agree.
pub fn cylinder_ring_witness(g: &MetricGraph, c: i64, l: i64) -> (Vec<Step>, Vec<Piece>) {
    let id = |j: i64, k: i64| -> i64 { j * c + k.rem_euclid(c) };
    let ring_step = |j: i64, k: i64| step_between(g, id(j, k), id(j, k + 1));
    let rung_step = |j: i64, k: i64| step_between(g, id(j, k), id(j + 1, k));
    let descend = |j: i64| -> Vec<Step> { (0..j).map(|t| rung_step(t, 0)).collect() };

    let ring_loop = |j: i64| -> Vec<Step> { (0..c).map(|k| ring_step(j, k)).collect() };
    let mut pieces = Vec::new();
    for j in 0..l {
        for k in 0..c {
            let mut conj = descend(j);
            conj.push(rung_step(j, 0));
            for t in 0..k {
                conj.push(ring_step(j + 1, t));
            }
            conj.push(rung_step(j, k).reversed());
            let face = vec![
                ring_step(j, k),
                rung_step(j, k + 1),
                ring_step(j + 1, k).reversed(),
                rung_step(j, k).reversed(),
            ];
            pieces.push(Piece { conj, core: face });
        }
    }
    pieces.push(Piece { conj: descend(l), core: ring_loop(l) });
    (ring_loop(0), pieces)
}

/// Checks a witness product against a target loop.
pub fn witness_matches(target: &[Step], pieces: &[Piece]) -> bool {
    assemble(pieces) == reduce_steps(target)
}

/// Converts raw steps into a based path (caller supplies the start).
pub fn path_from(start: usize, steps: Vec<Step>) -> EdgePath {
    EdgePath { start, steps }
}
