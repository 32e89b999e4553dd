//! Hom-categories of a finite bicategory.
//!
//! Two representations share one 2-cell interface: a general tabulated
//! category, and a locally-posetal form where at most one 2-cell exists
//! between parallel 1-cells, so all 2-cell structure is determined by an
//! order relation. The posetal form is what makes poset/relation universes
//! tractable: vertical and horizontal composition tables stay implicit.

use crate::fincat::{self, FiniteCategory, Morphism};
use crate::report::{CheckReport, TableError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Bit matrix used for order relations (square) and relations (rectangular).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitMat {
    pub n: usize,
    pub cols: usize,
    words: Vec<u64>,
}

impl BitMat {
    /// Square matrix.
    pub fn new(n: usize) -> Self {
        BitMat {
            n,
            cols: n,
            words: vec![0; (n * n + 63) / 64],
        }
    }

    pub fn new_rect(rows: usize, cols: usize) -> Self {
        BitMat {
            n: rows,
            cols,
            words: vec![0; (rows * cols + 63) / 64],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        let k = i * self.cols + j;
        self.words[k >> 6] & (1u64 << (k & 63)) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let k = i * self.cols + j;
        if v {
            self.words[k >> 6] |= 1u64 << (k & 63);
        } else {
            self.words[k >> 6] &= !(1u64 << (k & 63));
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.cols)
                .filter_map(move |j| if self.get(i, j) { Some((i as u32, j as u32)) } else { None })
        })
    }
}

/// A 2-cell location: source and target 1-cell indices within one hom, plus
/// a position `k` inside the parallel class (always 0 in posetal homs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoCell {
    pub src: u32,
    pub tgt: u32,
    pub k: u32,
}

impl TwoCell {
    pub fn new(src: u32, tgt: u32, k: u32) -> Self {
        TwoCell { src, tgt, k }
    }
}

/// Hom-category between two objects of a bicategory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HomCat {
    /// At most one 2-cell between parallel 1-cells; `leq` is the order.
    Poset(PosetHom),
    /// Arbitrary finite category of 1-cells and 2-cells.
    Table(TableHom),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosetHom {
    /// Sorted 1-cell identifiers.
    pub cells: Vec<String>,
    pub leq: BitMat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableHom {
    /// The 2-cell level as a finite category: objects are the 1-cells.
    pub cat: FiniteCategory,
    /// (src cell, tgt cell) -> morphism indices of the parallel class, in
    /// morphism-id order.
    #[serde(skip)]
    par: HashMap<(u32, u32), Vec<u32>>,
    /// Morphism index -> its (src, tgt, k) location.
    #[serde(skip)]
    loc: Vec<TwoCell>,
}

impl TableHom {
    pub fn new(cat: FiniteCategory) -> Self {
        let mut th = TableHom {
            cat,
            par: HashMap::new(),
            loc: Vec::new(),
        };
        th.rebuild_index();
        th
    }

    pub fn rebuild_index(&mut self) {
        self.par.clear();
        self.loc = vec![TwoCell::new(0, 0, 0); self.cat.morphisms.len()];
        for (i, m) in self.cat.morphisms.iter().enumerate() {
            let class = self.par.entry((m.src, m.tgt)).or_default();
            self.loc[i] = TwoCell::new(m.src, m.tgt, class.len() as u32);
            class.push(i as u32);
        }
    }

    pub fn mor_of(&self, t: TwoCell) -> Option<u32> {
        self.par
            .get(&(t.src, t.tgt))
            .and_then(|v| v.get(t.k as usize))
            .copied()
    }

    pub fn loc_of(&self, mor: u32) -> TwoCell {
        self.loc[mor as usize]
    }
}

impl HomCat {
    pub fn n_cells(&self) -> u32 {
        match self {
            HomCat::Poset(p) => p.cells.len() as u32,
            HomCat::Table(t) => t.cat.objects.len() as u32,
        }
    }

    pub fn cell_id(&self, i: u32) -> &str {
        match self {
            HomCat::Poset(p) => &p.cells[i as usize],
            HomCat::Table(t) => &t.cat.objects[i as usize],
        }
    }

    pub fn cell_index(&self, id: &str) -> Option<u32> {
        match self {
            HomCat::Poset(p) => p.cells.binary_search_by(|c| c.as_str().cmp(id)).ok().map(|i| i as u32),
            HomCat::Table(t) => t.cat.object_index(id),
        }
    }

    pub fn is_poset(&self) -> bool {
        matches!(self, HomCat::Poset(_))
    }

    /// Does a 2-cell with this location exist?
    pub fn two_exists(&self, t: TwoCell) -> bool {
        match self {
            HomCat::Poset(p) => t.k == 0 && p.leq.get(t.src as usize, t.tgt as usize),
            HomCat::Table(tb) => tb.mor_of(t).is_some(),
        }
    }

    /// Number of parallel 2-cells from `s` to `t`.
    pub fn parallel(&self, s: u32, t: u32) -> u32 {
        match self {
            HomCat::Poset(p) => p.leq.get(s as usize, t as usize) as u32,
            HomCat::Table(tb) => tb.par.get(&(s, t)).map_or(0, |v| v.len() as u32),
        }
    }

    /// Identity 2-cell on the 1-cell `f`.
    pub fn id2(&self, f: u32) -> TwoCell {
        match self {
            HomCat::Poset(_) => TwoCell::new(f, f, 0),
            HomCat::Table(tb) => tb.loc_of(tb.cat.id_of(f)),
        }
    }

    pub fn is_id2(&self, t: TwoCell) -> bool {
        self.id2(t.src) == t
    }

    /// Vertical composite `b ∘ a` for `a : s ⇒ t`, `b : t ⇒ u`.
    pub fn vcomp(&self, b: TwoCell, a: TwoCell) -> Option<TwoCell> {
        if a.tgt != b.src {
            return None;
        }
        match self {
            HomCat::Poset(p) => {
                if p.leq.get(a.src as usize, b.tgt as usize) {
                    Some(TwoCell::new(a.src, b.tgt, 0))
                } else {
                    None
                }
            }
            HomCat::Table(tb) => {
                let bm = tb.mor_of(b)?;
                let am = tb.mor_of(a)?;
                tb.cat.comp(bm, am).map(|c| tb.loc_of(c))
            }
        }
    }

    pub fn is_invertible(&self, t: TwoCell) -> bool {
        self.inverse(t).is_some()
    }

    pub fn inverse(&self, t: TwoCell) -> Option<TwoCell> {
        match self {
            HomCat::Poset(_) => (t.src == t.tgt).then_some(t),
            HomCat::Table(tb) => {
                let m = tb.mor_of(t)?;
                tb.cat.inverse(m).map(|w| tb.loc_of(w))
            }
        }
    }

    /// All 2-cells in canonical order.
    pub fn two_cells(&self) -> Vec<TwoCell> {
        match self {
            HomCat::Poset(p) => {
                let mut out = Vec::new();
                for s in 0..p.cells.len() {
                    for t in 0..p.cells.len() {
                        if p.leq.get(s, t) {
                            out.push(TwoCell::new(s as u32, t as u32, 0));
                        }
                    }
                }
                out
            }
            HomCat::Table(tb) => (0..tb.cat.n_morphisms()).map(|m| tb.loc_of(m)).collect(),
        }
    }

    /// 2-cells from `s` to `t`, canonical order.
    pub fn two_cells_between(&self, s: u32, t: u32) -> Vec<TwoCell> {
        (0..self.parallel(s, t)).map(|k| TwoCell::new(s, t, k)).collect()
    }

    /// Canonical enumeration index of a 2-cell (used by explicit tables).
    pub fn two_index(&self, t: TwoCell) -> usize {
        match self {
            HomCat::Poset(_) => {
                // Slow path, only for small posetal homs with explicit tables.
                self.two_cells().iter().position(|&u| u == t).expect("2-cell exists")
            }
            HomCat::Table(tb) => tb.mor_of(t).expect("2-cell exists") as usize,
        }
    }

    pub fn n_two_cells(&self) -> usize {
        match self {
            HomCat::Poset(p) => p.leq.pairs().count(),
            HomCat::Table(tb) => tb.cat.morphisms.len(),
        }
    }

    /// Printable label for reports.
    pub fn two_label(&self, t: TwoCell) -> String {
        match self {
            HomCat::Poset(p) => format!("{}<={}", p.cells[t.src as usize], p.cells[t.tgt as usize]),
            HomCat::Table(tb) => match tb.mor_of(t) {
                Some(m) => tb.cat.morphisms[m as usize].id.clone(),
                None => format!("<missing {}->{}#{}>", t.src, t.tgt, t.k),
            },
        }
    }

    /// Morphism identifier this 2-cell gets in [`HomCat::to_fincat`].
    pub fn two_mor_id(&self, t: TwoCell) -> String {
        match self {
            HomCat::Poset(p) => {
                format!("le[{}=>{}]", p.cells[t.src as usize], p.cells[t.tgt as usize])
            }
            HomCat::Table(tb) => tb.cat.morphisms[tb.mor_of(t).expect("2-cell exists") as usize]
                .id
                .clone(),
        }
    }

    /// Structural validity of the hom as a category.
    pub fn check(&self) -> Result<CheckReport, TableError> {
        match self {
            HomCat::Poset(p) => {
                let n = p.cells.len();
                if p.leq.n != n {
                    return Err(TableError::new("posetal hom", "order matrix size mismatch"));
                }
                let mut report = CheckReport::new(format!("posetal hom with {n} cells"));
                for i in 0..n {
                    if !p.leq.get(i, i) {
                        report.push("order-reflexive", p.cells[i].clone(), "missing identity 2-cell");
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        if i != j && p.leq.get(i, j) && p.leq.get(j, i) {
                            report.push(
                                "order-antisymmetric",
                                format!("({}, {})", p.cells[i], p.cells[j]),
                                "distinct parallel-isomorphic 1-cells need a table hom",
                            );
                        }
                        if p.leq.get(i, j) {
                            for k in 0..n {
                                if p.leq.get(j, k) && !p.leq.get(i, k) {
                                    report.push(
                                        "order-transitive",
                                        format!("({}, {}, {})", p.cells[i], p.cells[j], p.cells[k]),
                                        "vertical composite missing",
                                    );
                                }
                            }
                        }
                    }
                }
                Ok(report)
            }
            HomCat::Table(tb) => fincat::check_category(&tb.cat),
        }
    }

    /// Materialize as a plain finite category (objects = 1-cells).
    pub fn to_fincat(&self) -> FiniteCategory {
        match self {
            HomCat::Table(tb) => tb.cat.clone(),
            HomCat::Poset(p) => {
                let n = p.cells.len();
                let mut morphisms = Vec::new();
                for s in 0..n {
                    for t in 0..n {
                        if p.leq.get(s, t) {
                            morphisms.push(Morphism {
                                id: format!("le[{}=>{}]", p.cells[s], p.cells[t]),
                                src: s as u32,
                                tgt: t as u32,
                            });
                        }
                    }
                }
                let mut order: Vec<usize> = (0..morphisms.len()).collect();
                order.sort_by(|&i, &j| morphisms[i].id.cmp(&morphisms[j].id));
                let mut index_of = HashMap::new();
                let sorted: Vec<Morphism> = order.iter().map(|&i| morphisms[i].clone()).collect();
                for (i, m) in sorted.iter().enumerate() {
                    index_of.insert((m.src, m.tgt), i as u32);
                }
                let identity = (0..n).map(|o| index_of[&(o as u32, o as u32)]).collect();
                let mut composition = HashMap::new();
                for m1 in &sorted {
                    for (i2, m2) in sorted.iter().enumerate() {
                        if m2.src == m1.tgt {
                            composition.insert(
                                (index_of[&(m2.src, m2.tgt)], index_of[&(m1.src, m1.tgt)]),
                                index_of[&(m1.src, m2.tgt)],
                            );
                            let _ = i2;
                        }
                    }
                }
                FiniteCategory {
                    objects: p.cells.clone(),
                    morphisms: sorted,
                    identity,
                    composition,
                }
            }
        }
    }
}

/// Rebuild skipped indexes after deserialization.
pub fn rehydrate(h: &mut HomCat) {
    if let HomCat::Table(tb) = h {
        tb.rebuild_index();
    }
}
