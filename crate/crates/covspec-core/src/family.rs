//! Families of nested truncations modeling one unbounded space.
//!
//! A family is a list of growing finite graphs with scope radii: level j
//! represents the modeled space faithfully out to distance `scope_j` from
//! the shared basepoint.  Vertex ids are stable across levels, scopes
//! strictly increase, and the metric on each scope ball agrees with every
//! later level, so computations at radius R can be run on any level whose
//! scope reaches R and compared across levels.

use num::Zero;

use crate::complex::collapse_faces;
use crate::cover::component_cycle_words;
use crate::graph::{EnumerationOverflow, MetricGraph, VertexId};
use crate::member::Budget;
use crate::rat::Rat;
use crate::spectrum::{
    apply_lower_semiclosure, r_cutoff_spectrum, DecreasingChain, SpectrumKind, SpectrumReport,
    SpectrumValue, ValueStatus,
};
use crate::stallings::FoldedGraph;
use crate::word::Word;

/// One truncation: a graph faithful out to `scope` from its basepoint.
/// `faces` lists the boundary cycles of the mesh cells that the modeled
/// space fills in (empty for genuinely one-dimensional models).
pub struct FamilyLevel {
    pub graph: MetricGraph,
    pub scope: Rat,
    pub faces: Vec<Vec<VertexId>>,
}

/// A growing chain of truncations plus declared decreasing value chains
/// (used by lower semiclosure on the family spectrum).
pub struct TruncationFamily {
    pub label: String,
    pub levels: Vec<FamilyLevel>,
    pub chains: Vec<DecreasingChain>,
}

impl TruncationFamily {
    pub fn new(label: impl Into<String>, levels: Vec<FamilyLevel>) -> TruncationFamily {
        TruncationFamily { label: label.into(), levels, chains: Vec::new() }
    }

    pub fn last(&self) -> &FamilyLevel {
        self.levels.last().expect("a family has at least one level")
    }

    /// Checks the family contract: at least one level, positive strictly
    /// increasing scopes, a shared basepoint id, every scope-ball vertex
    /// carried into the next level, and the metric on each scope ball
    /// preserved there.
    pub fn validate(&self) -> Result<(), String> {
        if self.levels.is_empty() {
            return Err(format!("family {}: no levels", self.label));
        }
        for (j, lv) in self.levels.iter().enumerate() {
            if lv.scope <= Rat::zero() {
                return Err(format!("family {}: level {} has non-positive scope", self.label, j));
            }
        }
        for j in 1..self.levels.len() {
            if self.levels[j].scope <= self.levels[j - 1].scope {
                return Err(format!(
                    "family {}: scopes must strictly increase at level {}",
                    self.label, j
                ));
            }
        }
        for j in 1..self.levels.len() {
            let small = &self.levels[j - 1];
            let big = &self.levels[j].graph;
            let g = &small.graph;
            let base_id = g.id(g.basepoint());
            if big.id(big.basepoint()) != base_id {
                return Err(format!(
                    "family {}: basepoint id changes between levels {} and {}",
                    self.label,
                    j - 1,
                    j
                ));
            }
            let ball = g.ball(g.basepoint(), small.scope, true);
            let mut carried = Vec::new();
            for &v in &ball.vertices {
                match big.idx(g.id(v)) {
                    Some(w) => carried.push((v, w)),
                    None => {
                        return Err(format!(
                            "family {}: vertex {} inside the scope of level {} is missing from level {}",
                            self.label,
                            g.id(v),
                            j - 1,
                            j
                        ));
                    }
                }
            }
            for (i, &(u_small, u_big)) in carried.iter().enumerate() {
                for &(v_small, v_big) in &carried[i + 1..] {
                    if g.dist(u_small, v_small) != big.dist(u_big, v_big) {
                        return Err(format!(
                            "family {}: distance between {} and {} changes from level {} to {}",
                            self.label,
                            g.id(u_small),
                            g.id(v_small),
                            j - 1,
                            j
                        ));
                    }
                }
            }
        }
        for chain in &self.chains {
            chain.validate()?;
        }
        Ok(())
    }

    /// The scope radii, ascending: the R-ladder of the family.
    pub fn ladder(&self) -> Vec<Rat> {
        self.levels.iter().map(|l| l.scope).collect()
    }
}

/// The cut-off spectrum at one ladder radius, across every level whose
/// scope reaches it.
pub struct LadderRow {
    pub radius: Rat,
    /// (level index, present values there) for each qualifying level.
    pub per_level: Vec<(usize, Vec<Rat>)>,
    /// Least level index from which every later present set agrees; None
    /// when fewer than two levels qualify, since one sample cannot attest
    /// stabilization.
    pub stable_from: Option<usize>,
    /// Present values on the last (most faithful) level.
    pub final_present: Vec<Rat>,
    /// True when the radius equals the last level's own scope, where the
    /// complement is clipped by the truncation horizon.
    pub at_horizon: bool,
    /// Full last-level report (witnesses refer to the last level's graph).
    pub last_report: SpectrumReport,
}

/// Family cut-off spectrum: the union over the R-ladder plus declared
/// semiclosure, with the per-radius stabilization evidence.
pub struct CutoffFamilyReport {
    pub rows: Vec<LadderRow>,
    /// Union spectrum (kind Cutoff); witnesses refer to the last level.
    pub union: SpectrumReport,
}

/// Runs the R-cutoff spectrum at every ladder radius on every qualifying
/// level, unions the last-level answers, and applies the family's
/// declared semiclosure chains.
pub fn cutoff_spectrum(
    fam: &TruncationFamily,
    cap: Rat,
    class_bound: usize,
    budget: Budget,
) -> Result<CutoffFamilyReport, EnumerationOverflow> {
    let last_scope = fam.last().scope;
    let mut rows = Vec::new();
    for (i, radius) in fam.ladder().into_iter().enumerate() {
        let mut per_level = Vec::new();
        let mut last_report = None;
        for (j, lv) in fam.levels.iter().enumerate().skip(i) {
            debug_assert!(lv.scope >= radius);
            let g = &lv.graph;
            let rep = r_cutoff_spectrum(g, g.basepoint(), radius, cap, class_bound, budget)?;
            per_level.push((j, rep.present()));
            if j + 1 == fam.levels.len() {
                last_report = Some(rep);
            }
        }
        let final_present = per_level.last().expect("at least the last level ran").1.clone();
        let stable_from = if per_level.len() < 2 {
            None
        } else {
            let mut from = None;
            for k in (0..per_level.len()).rev() {
                if per_level[k].1 == final_present {
                    from = Some(per_level[k].0);
                } else {
                    break;
                }
            }
            // A stabilization claim needs at least two agreeing levels.
            match from {
                Some(j0) if fam.levels.len() - j0 >= 2 => Some(j0),
                _ => None,
            }
        };
        rows.push(LadderRow {
            radius,
            per_level,
            stable_from,
            final_present,
            at_horizon: radius == last_scope,
            last_report: last_report.expect("last level qualifies for every ladder radius"),
        });
    }

    // Union of the last-level answers, keeping each value's first row
    // entry.  Rows at the truncation horizon are excluded: there the
    // complement is clipped into boundary arcs and loops that would slide
    // out in the modeled space stay behind.  (A single-level family has
    // only its horizon row, which is then kept, flagged.)
    let include_horizon = rows.iter().all(|r| r.at_horizon);
    let mut values: Vec<SpectrumValue> = Vec::new();
    for row in &rows {
        if row.at_horizon && !include_horizon {
            continue;
        }
        for v in &row.last_report.values {
            if v.status == ValueStatus::Absent {
                continue;
            }
            match values.iter_mut().find(|u| u.value == v.value) {
                None => values.push(v.clone()),
                Some(u) => {
                    // Present beats undecided; keep the first certificate
                    // otherwise.
                    if u.status == ValueStatus::Undecided && v.status == ValueStatus::Present {
                        *u = v.clone();
                    }
                }
            }
        }
    }
    values.sort_by(|a, b| a.value.cmp(&b.value));
    let mut union = SpectrumReport { kind: SpectrumKind::Cutoff, cap, values };
    apply_lower_semiclosure(&mut union, &fam.chains)
        .expect("family chains must validate; run TruncationFamily::validate first");
    Ok(CutoffFamilyReport { rows, union })
}

/// Whether a class keeps living arbitrarily far out, as far as the family
/// can see.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfinityVerdict {
    /// Conjugate into some complement-component subgroup at every ladder
    /// radius: the class slides past every tested horizon.
    EscapesAllTested { horizon: Rat },
    /// At this radius no single component beyond the ball carries the
    /// class (on the last level, which is faithful out to its scope).
    Blocked { radius: Rat },
    /// The class bounds in the filled complex: the modeled space
    /// contracts it, so the escape question does not arise.
    ModelTrivial,
}

/// Tests, ladder radius by ladder radius on the last level, whether the
/// class of `w` is freely realized beyond the closed ball: conjugate into
/// the subgroup carried by some single complement component.  Declared
/// faces are filled first — the test runs on the collapse of the level's
/// complex, where mesh cells no longer pin loops in place — and every
/// step is then exact: component subgroups are free, and folded-graph
/// conjugacy decides conjugate-into.
///
/// The component-by-component test matters: a class can lie in the normal
/// closure of everything outside the ball (and so die in cut-off covers)
/// while no single far region realizes it, as on two-ended spaces.
///
/// The last level's own scope is skipped whenever an earlier radius
/// exists: right at the horizon the truncation clips the complement into
/// boundary arcs, and even a class that slides out in the modeled space
/// would look blocked there.
///
/// Errors when the declared faces cannot be filled by free collapses
/// (e.g. a closed surface mesh), where no free core is available.
pub fn loops_to_infinity(fam: &TruncationFamily, w: &Word) -> Result<InfinityVerdict, String> {
    let lv = fam.last();
    let g = &lv.graph;
    let retract = collapse_faces(g, &lv.faces)?;
    let wc = retract.map_class(g, w);
    if wc.is_empty() {
        return Ok(InfinityVerdict::ModelTrivial);
    }
    let mut ladder = fam.ladder();
    if ladder.len() > 1 {
        ladder.pop();
    }
    let mut horizon = Rat::zero();
    for radius in ladder {
        let comps = g.complement_components(g.basepoint(), radius);
        let escapes = comps.iter().any(|comp| {
            let gens = retract.map_classes(g, &component_cycle_words(g, comp));
            !gens.is_empty() && FoldedGraph::fold(&gens).conjugate_into(&wc)
        });
        if !escapes {
            return Ok(InfinityVerdict::Blocked { radius });
        }
        horizon = radius;
    }
    Ok(InfinityVerdict::EscapesAllTested { horizon })
}

/// Shortest class length represented beyond each ladder radius: the
/// slipping profile.  None means no loops at all survive out there.
pub fn slipping_length_profile(fam: &TruncationFamily) -> Vec<(Rat, Option<Rat>)> {
    let g = &fam.last().graph;
    fam.ladder()
        .into_iter()
        .map(|radius| {
            let comps = g.complement_components(g.basepoint(), radius);
            let min = comps
                .iter()
                .flat_map(|comp| component_cycle_words(g, comp))
                .map(|w| g.class_length(&w))
                .min();
            (radius, min)
        })
        .collect()
}
