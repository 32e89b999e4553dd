//! Predicates on 1-cells decided by exhaustive enumeration over the ambient
//! finite bicategory: fully faithful, pseudomonic, conservative, equivalence.

use super::core::{Bicat, CellIx, ObjIx};
use super::hom::TwoCell;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OneCellPredicate {
    FullyFaithful,
    Pseudomonic,
    Conservative,
    Equivalence,
}

/// A 1-cell with its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Loc1 {
    pub src: ObjIx,
    pub tgt: ObjIx,
    pub cell: CellIx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PredicateWitness {
    /// Exhaustive scan succeeded; the transcript records how many instances
    /// were checked so the witness can be re-derived.
    Transcript {
        predicate: OneCellPredicate,
        instances_checked: u64,
    },
    /// Equivalence data: quasi-inverse with invertible unit and counit.
    Equivalence {
        quasi_inverse: Loc1,
        /// Id_{src} ⇒ g∘f
        unit: TwoCell,
        /// f∘g ⇒ Id_{tgt}
        counit: TwoCell,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateFailure {
    pub predicate: OneCellPredicate,
    pub counterexample: String,
}

pub type PredicateResult = Result<PredicateWitness, PredicateFailure>;

fn fail(p: OneCellPredicate, s: String) -> PredicateResult {
    Err(PredicateFailure {
        predicate: p,
        counterexample: s,
    })
}

/// Decide the predicate for `f : x0 → x1`.
pub fn one_cell_predicate(b: &Bicat, f: Loc1, which: OneCellPredicate) -> PredicateResult {
    match which {
        OneCellPredicate::FullyFaithful => fully_faithful(b, f),
        OneCellPredicate::Pseudomonic => pseudomonic(b, f),
        OneCellPredicate::Conservative => conservative(b, f),
        OneCellPredicate::Equivalence => equivalence(b, f),
    }
}

/// Post-composition by f is full and faithful on every
/// hom(W, x0) → hom(W, x1): the representable sense in which inverter legs
/// are fully faithful and 2-cells are solved uniquely through them.
fn fully_faithful(b: &Bicat, f: Loc1) -> PredicateResult {
    let p = OneCellPredicate::FullyFaithful;
    let mut count = 0u64;
    for w in 0..b.n_objects() {
        let h0 = b.hom(w, f.src);
        let h1 = b.hom(w, f.tgt);
        for g in 0..h0.n_cells() {
            for h in 0..h0.n_cells() {
                let fg = b.c1(w, f.src, f.tgt, f.cell, g);
                let fh = b.c1(w, f.src, f.tgt, f.cell, h);
                // fullness: every ξ : f∘g ⇒ f∘h is f ∗ θ for some θ : g ⇒ h
                for xi in h1.two_cells_between(fg, fh) {
                    count += 1;
                    let mut hit = 0u32;
                    for theta in h0.two_cells_between(g, h) {
                        if b.whisk_l(w, f.src, f.tgt, f.cell, theta) == xi {
                            hit += 1;
                        }
                    }
                    if hit == 0 {
                        return fail(
                            p,
                            format!(
                                "no preimage of {} under post-composition at ({}, {}, W={})",
                                h1.two_label(xi),
                                h0.cell_id(g),
                                h0.cell_id(h),
                                b.objects[w as usize]
                            ),
                        );
                    }
                }
                // faithfulness: θ ↦ f ∗ θ injective
                let thetas = h0.two_cells_between(g, h);
                for i in 0..thetas.len() {
                    for j in (i + 1)..thetas.len() {
                        count += 1;
                        let wi = b.whisk_l(w, f.src, f.tgt, f.cell, thetas[i]);
                        let wj = b.whisk_l(w, f.src, f.tgt, f.cell, thetas[j]);
                        if wi == wj {
                            return fail(
                                p,
                                format!(
                                    "{} and {} identified by post-composition",
                                    h0.two_label(thetas[i]),
                                    h0.two_label(thetas[j])
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(PredicateWitness::Transcript {
        predicate: p,
        instances_checked: count,
    })
}

/// Post-composition by f is faithful and full on invertible 2-cells.
fn pseudomonic(b: &Bicat, f: Loc1) -> PredicateResult {
    let p = OneCellPredicate::Pseudomonic;
    let mut count = 0u64;
    for w in 0..b.n_objects() {
        let h0 = b.hom(w, f.src);
        let h1 = b.hom(w, f.tgt);
        for g in 0..h0.n_cells() {
            for h in 0..h0.n_cells() {
                let fg = b.c1(w, f.src, f.tgt, f.cell, g);
                let fh = b.c1(w, f.src, f.tgt, f.cell, h);
                for xi in h1.two_cells_between(fg, fh) {
                    if !h1.is_invertible(xi) {
                        continue;
                    }
                    count += 1;
                    let hit = h0
                        .two_cells_between(g, h)
                        .into_iter()
                        .filter(|t| h0.is_invertible(*t))
                        .any(|theta| b.whisk_l(w, f.src, f.tgt, f.cell, theta) == xi);
                    if !hit {
                        return fail(
                            p,
                            format!(
                                "invertible {} has no invertible preimage at ({}, {}, W={})",
                                h1.two_label(xi),
                                h0.cell_id(g),
                                h0.cell_id(h),
                                b.objects[w as usize]
                            ),
                        );
                    }
                }
                let thetas = h0.two_cells_between(g, h);
                for i in 0..thetas.len() {
                    for j in (i + 1)..thetas.len() {
                        count += 1;
                        if b.whisk_l(w, f.src, f.tgt, f.cell, thetas[i])
                            == b.whisk_l(w, f.src, f.tgt, f.cell, thetas[j])
                        {
                            return fail(
                                p,
                                format!(
                                    "{} and {} identified by post-composition",
                                    h0.two_label(thetas[i]),
                                    h0.two_label(thetas[j])
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(PredicateWitness::Transcript {
        predicate: p,
        instances_checked: count,
    })
}

/// Post-whiskering by f reflects invertibility of 2-cells.
fn conservative(b: &Bicat, f: Loc1) -> PredicateResult {
    let p = OneCellPredicate::Conservative;
    let mut count = 0u64;
    for w in 0..b.n_objects() {
        let h0 = b.hom(w, f.src);
        let h1 = b.hom(w, f.tgt);
        for theta in h0.two_cells() {
            count += 1;
            let whiskered = b.whisk_l(w, f.src, f.tgt, f.cell, theta);
            if h1.is_invertible(whiskered) && !h0.is_invertible(theta) {
                return fail(
                    p,
                    format!(
                        "{} is not invertible but f ∗ {} is (W={})",
                        h0.two_label(theta),
                        h0.two_label(theta),
                        b.objects[w as usize]
                    ),
                );
            }
        }
    }
    Ok(PredicateWitness::Transcript {
        predicate: p,
        instances_checked: count,
    })
}

/// Exhaustive quasi-inverse search with invertible unit/counit 2-cells.
fn equivalence(b: &Bicat, f: Loc1) -> PredicateResult {
    let p = OneCellPredicate::Equivalence;
    let hom_back = b.hom(f.tgt, f.src);
    let h_src = b.hom(f.src, f.src);
    let h_tgt = b.hom(f.tgt, f.tgt);
    let id_src = b.id1[f.src as usize];
    let id_tgt = b.id1[f.tgt as usize];
    for g in 0..hom_back.n_cells() {
        let gf = b.c1(f.src, f.tgt, f.src, g, f.cell);
        let fg = b.c1(f.tgt, f.src, f.tgt, f.cell, g);
        let unit = h_src
            .two_cells_between(id_src, gf)
            .into_iter()
            .find(|t| h_src.is_invertible(*t));
        let counit = h_tgt
            .two_cells_between(fg, id_tgt)
            .into_iter()
            .find(|t| h_tgt.is_invertible(*t));
        if let (Some(u), Some(c)) = (unit, counit) {
            return Ok(PredicateWitness::Equivalence {
                quasi_inverse: Loc1 {
                    src: f.tgt,
                    tgt: f.src,
                    cell: g,
                },
                unit: u,
                counit: c,
            });
        }
    }
    fail(
        p,
        format!("no quasi-inverse 1-cell in hom({}, {})", b.objects[f.tgt as usize], b.objects[f.src as usize]),
    )
}

/// Re-check a witness against the bicategory.
pub fn verify_witness(b: &Bicat, f: Loc1, w: &PredicateWitness) -> bool {
    match w {
        PredicateWitness::Transcript { predicate, .. } => {
            one_cell_predicate(b, f, *predicate).is_ok()
        }
        PredicateWitness::Equivalence {
            quasi_inverse,
            unit,
            counit,
        } => {
            let g = *quasi_inverse;
            if g.src != f.tgt || g.tgt != f.src {
                return false;
            }
            let gf = b.c1(f.src, f.tgt, f.src, g.cell, f.cell);
            let fg = b.c1(f.tgt, f.src, f.tgt, f.cell, g.cell);
            let h_src = b.hom(f.src, f.src);
            let h_tgt = b.hom(f.tgt, f.tgt);
            unit.src == b.id1[f.src as usize]
                && unit.tgt == gf
                && counit.src == fg
                && counit.tgt == b.id1[f.tgt as usize]
                && h_src.is_invertible(*unit)
                && h_tgt.is_invertible(*counit)
                && h_src.two_exists(*unit)
                && h_tgt.two_exists(*counit)
        }
    }
}
