//! Spectrum extraction: which half-lengths mark a real change of cover.
//!
//! A value delta belongs to the covering spectrum exactly when the normal
//! closure of the classes shorter than 2*delta differs from the closure of
//! those of length up to 2*delta; the cut-off variant adds the cycle
//! groups of the components beyond a radius to both sides.  Candidates
//! are half class-lengths, so one class enumeration up to the length cap
//! drives every decision.

use std::collections::BTreeMap;

use num::Zero;

use crate::closure::collapse_components;
use crate::graph::{EnumerationOverflow, MetricGraph};
use crate::member::{Budget, MembershipEngine, Method, Verdict};
use crate::rat::{rat, Rat};
use crate::word::Word;

/// Which spectrum a report describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Set of class lengths (values are lengths, not half-lengths).
    Length,
    /// Covering spectrum (values are half-lengths).
    Covering,
    /// Cut-off covering spectrum at one radius around one vertex
    /// (external id recorded).
    RCutoff { center: i64, radius: Rat },
    /// Union of R-cutoff spectra over a radius ladder, with semiclosure.
    Cutoff,
}

/// How a value's status was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Settled by an exact layer (trivial, letter rule, explicit product,
    /// or complete coset enumeration).
    Certified,
    /// Settled by the abelianized-invariant layer: a sound refusal, so the
    /// conclusion is exact, but no constructive witness product exists.
    Homology,
    /// Not settled within budget.
    Unknown,
    /// Added as the declared infimum of a decreasing value chain.
    Semiclosure,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Certified => "certified",
            Certificate::Homology => "homology",
            Certificate::Unknown => "unknown",
            Certificate::Semiclosure => "semiclosure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueStatus {
    Present,
    Absent,
    Undecided,
}

/// One candidate value with its decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumValue {
    pub value: Rat,
    pub status: ValueStatus,
    pub certificate: Certificate,
    /// For a present spectrum value: a class of length 2*value outside
    /// the closure of the shorter ones (the cover change witness).  For a
    /// length value: a shortest class of that length.
    pub witness: Option<Word>,
    /// Some(true): vanishes on the refined mesh, so it is an artifact of
    /// the graph approximation.  None: not checked.
    pub mesh_artifact: Option<bool>,
    /// True when the value came from semiclosure, not a candidate test.
    pub semiclosure: bool,
}

/// A computed spectrum: every candidate with its status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub kind: SpectrumKind,
    /// Class-length cap of the enumeration behind the report.
    pub cap: Rat,
    pub values: Vec<SpectrumValue>,
}

impl SpectrumReport {
    /// Values certified to be in the spectrum, ascending.
    pub fn present(&self) -> Vec<Rat> {
        self.values
            .iter()
            .filter(|v| v.status == ValueStatus::Present)
            .map(|v| v.value)
            .collect()
    }

    /// Present values that are not flagged as mesh artifacts.
    pub fn present_geometric(&self) -> Vec<Rat> {
        self.values
            .iter()
            .filter(|v| v.status == ValueStatus::Present && v.mesh_artifact != Some(true))
            .map(|v| v.value)
            .collect()
    }

    pub fn undecided(&self) -> Vec<Rat> {
        self.values
            .iter()
            .filter(|v| v.status == ValueStatus::Undecided)
            .map(|v| v.value)
            .collect()
    }

    pub fn value_entry(&self, value: Rat) -> Option<&SpectrumValue> {
        self.values.iter().find(|v| v.value == value)
    }

    /// Multiplies every value (and the cap) by a positive factor; statuses
    /// and witnesses carry over unchanged, matching a metric rescale.
    pub fn rescaled(&self, factor: Rat) -> SpectrumReport {
        assert!(factor > Rat::zero(), "scale factor must be positive");
        let mut out = self.clone();
        out.cap = self.cap * factor;
        if let SpectrumKind::RCutoff { center, radius } = &mut out.kind {
            let _ = center;
            *radius = *radius * factor;
        }
        for v in &mut out.values {
            v.value = v.value * factor;
        }
        out
    }
}

/// The set of class lengths up to the cap, with one shortest witness each.
pub fn length_spectrum(
    g: &MetricGraph,
    cap: Rat,
    class_bound: usize,
) -> Result<SpectrumReport, EnumerationOverflow> {
    let classes = g.enumerate_classes_bounded(cap, class_bound)?;
    let mut by_len: BTreeMap<Rat, Word> = BTreeMap::new();
    for c in classes {
        by_len.entry(c.length).or_insert(c.word);
    }
    let values = by_len
        .into_iter()
        .map(|(length, word)| SpectrumValue {
            value: length,
            status: ValueStatus::Present,
            certificate: Certificate::Certified,
            witness: Some(word),
            mesh_artifact: None,
            semiclosure: false,
        })
        .collect();
    Ok(SpectrumReport { kind: SpectrumKind::Length, cap, values })
}

/// Closure membership with any sound layer mapped to a certificate.
fn presence_certificate(m: Method) -> Certificate {
    match m {
        Method::Homology => Certificate::Homology,
        _ => Certificate::Certified,
    }
}

/// Decides one candidate: is some class of length exactly `2*delta`
/// outside the closure of `small` (in the ambient or collapsed group)?
fn decide_candidate(
    rank: usize,
    small: &[Word],
    extras: &[(Word, Word)],
    budget: Budget,
) -> (ValueStatus, Certificate, Option<Word>) {
    let engine = MembershipEngine::new(rank, small, budget);
    // Cheap sound refusals first: any hit settles presence immediately.
    for (original, mapped) in extras {
        if engine.quick_nonmember(mapped) {
            return (ValueStatus::Present, Certificate::Homology, Some(original.clone()));
        }
    }
    let mut undecided = false;
    for (original, mapped) in extras {
        match engine.member(mapped) {
            Verdict::NotMember(m) => {
                return (ValueStatus::Present, presence_certificate(m), Some(original.clone()));
            }
            Verdict::Unknown => undecided = true,
            Verdict::Member(_) => {}
        }
    }
    if undecided {
        (ValueStatus::Undecided, Certificate::Unknown, None)
    } else {
        (ValueStatus::Absent, Certificate::Certified, None)
    }
}

/// Shared engine room of the covering and R-cutoff spectra: classes are
/// grouped by length; each distinct length 2*delta is a candidate, tested
/// through `map` (identity for the plain spectrum, the component collapse
/// for the cut-off one).
fn spectrum_by_lengths(
    g: &MetricGraph,
    cap: Rat,
    class_bound: usize,
    budget: Budget,
    kind: SpectrumKind,
    rank: usize,
    map: impl Fn(&Word) -> Word,
) -> Result<SpectrumReport, EnumerationOverflow> {
    let classes = g.enumerate_classes_bounded(cap, class_bound)?;
    let mut by_len: BTreeMap<Rat, Vec<(Word, Word)>> = BTreeMap::new();
    for c in classes {
        let mapped = map(&c.word);
        by_len.entry(c.length).or_default().push((c.word, mapped));
    }
    let mut small: Vec<Word> = Vec::new();
    let mut values = Vec::new();
    for (len, group) in &by_len {
        let delta = *len / rat(2, 1);
        let (status, certificate, witness) = decide_candidate(rank, &small, group, budget);
        values.push(SpectrumValue {
            value: delta,
            status,
            certificate,
            witness,
            mesh_artifact: None,
            semiclosure: false,
        });
        small.extend(group.iter().map(|(_, mapped)| mapped.clone()));
    }
    Ok(SpectrumReport { kind, cap, values })
}

/// The covering spectrum up to half the length cap: delta is present when
/// the closure of classes shorter than 2*delta misses one of length
/// exactly 2*delta.
pub fn covering_spectrum(
    g: &MetricGraph,
    cap: Rat,
    class_bound: usize,
    budget: Budget,
) -> Result<SpectrumReport, EnumerationOverflow> {
    spectrum_by_lengths(g, cap, class_bound, budget, SpectrumKind::Covering, g.rank(), |w| {
        w.clone()
    })
}

/// The cut-off variant at one radius: loops surviving only beyond the
/// closed ball around `center` are quotiented into both closures, which
/// the component collapse realizes exactly.
pub fn r_cutoff_spectrum(
    g: &MetricGraph,
    center: usize,
    radius: Rat,
    cap: Rat,
    class_bound: usize,
    budget: Budget,
) -> Result<SpectrumReport, EnumerationOverflow> {
    let comps = g.complement_components(center, radius);
    let collapse = collapse_components(g, &comps);
    let kind = SpectrumKind::RCutoff { center: g.id(center), radius };
    let rank = collapse.graph.rank();
    spectrum_by_lengths(g, cap, class_bound, budget, kind, rank, |w| collapse.apply(w))
}

/// A family-level declared decreasing value chain with a known infimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecreasingChain {
    pub label: String,
    /// Strictly decreasing values, all present in the union spectrum.
    pub values: Vec<Rat>,
    /// Declared infimum; added by semiclosure when positive and not
    /// already attained.
    pub infimum: Rat,
}

impl DecreasingChain {
    pub fn validate(&self) -> Result<(), String> {
        if self.values.is_empty() {
            return Err(format!("chain {}: no values", self.label));
        }
        for w in self.values.windows(2) {
            if w[1] >= w[0] {
                return Err(format!("chain {}: values must strictly decrease", self.label));
            }
        }
        if let Some(last) = self.values.last() {
            if *last < self.infimum {
                return Err(format!("chain {}: values fall below the declared infimum", self.label));
            }
        }
        Ok(())
    }
}

/// Adds declared-chain infima to a spectrum (lower semiclosure).  Only
/// decreasing chains can contribute: increasing value sequences have no
/// accumulation point in the spectrum from below.  Infima must be
/// positive to name a cover change; a chain whose infimum is already a
/// value adds nothing.
pub fn apply_lower_semiclosure(
    report: &mut SpectrumReport,
    chains: &[DecreasingChain],
) -> Result<(), String> {
    for chain in chains {
        chain.validate()?;
        if chain.infimum <= Rat::zero() {
            continue;
        }
        if report.values.iter().any(|v| v.value == chain.infimum) {
            continue;
        }
        report.values.push(SpectrumValue {
            value: chain.infimum,
            status: ValueStatus::Present,
            certificate: Certificate::Semiclosure,
            witness: None,
            mesh_artifact: None,
            semiclosure: true,
        });
    }
    report.values.sort_by(|a, b| a.value.cmp(&b.value));
    Ok(())
}

/// Marks mesh artifacts: a present value that is absent from the refined
/// run (same space, doubled mesh, same cap) came from the discretization,
/// not the geometry.  Undecided refined values leave the flag unset.
pub fn flag_mesh_artifacts(report: &mut SpectrumReport, refined: &SpectrumReport) {
    assert_eq!(report.cap, refined.cap, "artifact check needs matching caps");
    for v in &mut report.values {
        if v.status != ValueStatus::Present || v.semiclosure {
            continue;
        }
        v.mesh_artifact = match refined.value_entry(v.value).map(|e| e.status) {
            Some(ValueStatus::Present) => Some(false),
            Some(ValueStatus::Undecided) => None,
            Some(ValueStatus::Absent) | None => Some(true),
        };
    }
}

/// Checks the radius chain: every certified value of the spectrum at a
/// smaller radius must appear (possibly undecided) at each larger radius
/// and in the plain covering spectrum.  Returns the first violation.
pub fn check_radius_monotonicity(
    ascending_radii: &[&SpectrumReport],
    covering: &SpectrumReport,
) -> Result<(), (Rat, String)> {
    let covered = |r: &SpectrumReport, v: Rat| {
        r.value_entry(v)
            .map(|e| e.status != ValueStatus::Absent)
            .unwrap_or(false)
    };
    for (i, small) in ascending_radii.iter().enumerate() {
        for v in small.present() {
            for big in &ascending_radii[i + 1..] {
                if !covered(big, v) {
                    return Err((v, "present at a smaller radius but absent at a larger".into()));
                }
            }
            if !covered(covering, v) {
                return Err((v, "present with cut-off but absent from the covering spectrum".into()));
            }
        }
    }
    Ok(())
}
