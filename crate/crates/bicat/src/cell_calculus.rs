//! Pseudofunctors, pseudonatural transformations, modifications, their law
//! checkers, and the whiskering calculus (exchange cells, compositors between
//! pseudofunctor composites, pentagonator, unitors).
//!
//! Pseudofunctors may be partial: each carries the sorted list of source
//! objects where it is defined, and every law check quantifies over that
//! domain. Finite materializations of growing constructions (completion
//! monads) force this; reports always state their quantification domain.
//!
//! Because composites are tabulated, composition of pseudofunctors is
//! strictly associative and unital on the nose. The compositor equivalences
//! between bracketings are therefore identity transformations here, and the
//! pentagonator and compositor-naturality cells degenerate to unitor
//! composites; they are still produced as checkable data.

use crate::bicat_core::{Bicat, CellIx, HomCat, ObjIx, TwoCell};
use crate::report::{CheckReport, TableError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Pseudofunctors
// ---------------------------------------------------------------------------

/// 2-cell action of a pseudofunctor on one hom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TwoMap {
    /// Determined by the 1-cell map; valid when the target hom is posetal.
    Implicit,
    /// Indexed by the canonical 2-cell enumeration of the source hom.
    Table(Vec<TwoCell>),
}

/// Unit cells F⁰.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum UnitCells {
    /// F(Id_X) = Id_{F X} strictly and F⁰ is the identity 2-cell.
    Strict,
    Cells(HashMap<ObjIx, TwoCell>),
}

/// Compositor cells F².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CompositorCells {
    /// F(g∘f) = F(g)∘F(f) strictly and F² is the identity 2-cell.
    Strict,
    /// Per domain triple (x,y,z): flat table `g * |hom(x,y)| + f`.
    Cells(HashMap<(ObjIx, ObjIx, ObjIx), Vec<TwoCell>>),
}

/// A (possibly partial) pseudofunctor between finite bicategories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsFun {
    #[serde(skip, default = "default_handle")]
    pub src: Arc<Bicat>,
    #[serde(skip, default = "default_handle")]
    pub tgt: Arc<Bicat>,
    /// Sorted source objects where the functor is defined.
    pub dom: Vec<ObjIx>,
    pub obj: HashMap<ObjIx, ObjIx>,
    /// Per (x,y) in dom²: 1-cell map table.
    pub cell1: HashMap<(ObjIx, ObjIx), Vec<CellIx>>,
    pub two: HashMap<(ObjIx, ObjIx), TwoMap>,
    pub unit: UnitCells,
    pub compositor: CompositorCells,
}

impl Default for PsFun {
    fn default() -> Self {
        PsFun {
            src: Arc::new(empty_bicat()),
            tgt: Arc::new(empty_bicat()),
            dom: vec![],
            obj: HashMap::new(),
            cell1: HashMap::new(),
            two: HashMap::new(),
            unit: UnitCells::Strict,
            compositor: CompositorCells::Strict,
        }
    }
}

fn default_handle() -> Arc<Bicat> {
    Arc::new(empty_bicat())
}

fn empty_bicat() -> Bicat {
    Bicat {
        objects: vec![],
        homs: vec![],
        id1: vec![],
        comp1: vec![],
        comp2: vec![],
        coherence: crate::bicat_core::Coherence::Strict,
        carrier: None,
    }
}

pub fn same_bicat(a: &Arc<Bicat>, b: &Arc<Bicat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PsFun {
    /// The identity pseudofunctor, total on `b`.
    pub fn identity(b: &Arc<Bicat>) -> PsFun {
        let n = b.n_objects();
        let mut cell1 = HashMap::new();
        let mut two = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                cell1.insert((x, y), (0..b.hom(x, y).n_cells()).collect());
                two.insert(
                    (x, y),
                    if b.hom(x, y).is_poset() {
                        TwoMap::Implicit
                    } else {
                        TwoMap::Table(b.hom(x, y).two_cells())
                    },
                );
            }
        }
        PsFun {
            src: Arc::clone(b),
            tgt: Arc::clone(b),
            dom: (0..n).collect(),
            obj: (0..n).map(|x| (x, x)).collect(),
            cell1,
            two,
            unit: UnitCells::Strict,
            compositor: CompositorCells::Strict,
        }
    }

    pub fn defined_at(&self, x: ObjIx) -> bool {
        self.obj.contains_key(&x)
    }

    pub fn o(&self, x: ObjIx) -> ObjIx {
        self.obj[&x]
    }

    pub fn c(&self, x: ObjIx, y: ObjIx, f: CellIx) -> CellIx {
        self.cell1[&(x, y)][f as usize]
    }

    /// Image of a 2-cell of hom(x,y).
    pub fn t2(&self, x: ObjIx, y: ObjIx, t: TwoCell) -> TwoCell {
        match &self.two[&(x, y)] {
            TwoMap::Implicit => TwoCell::new(self.c(x, y, t.src), self.c(x, y, t.tgt), 0),
            TwoMap::Table(tab) => tab[self.src.hom(x, y).two_index(t)],
        }
    }

    /// F⁰_X : Id_{F X} ⇒ F(Id_X).
    pub fn f0(&self, x: ObjIx) -> TwoCell {
        match &self.unit {
            UnitCells::Strict => {
                let fx = self.o(x);
                self.tgt.hom(fx, fx).id2(self.tgt.id1[fx as usize])
            }
            UnitCells::Cells(m) => m[&x],
        }
    }

    /// F²_{g,f} : F(g)∘F(f) ⇒ F(g∘f) for g : y→z, f : x→y.
    pub fn f2(&self, x: ObjIx, y: ObjIx, z: ObjIx, g: CellIx, f: CellIx) -> TwoCell {
        match &self.compositor {
            CompositorCells::Strict => {
                let gf = self.src.c1(x, y, z, g, f);
                let (fx, fz) = (self.o(x), self.o(z));
                self.tgt.hom(fx, fz).id2(self.c(x, z, gf))
            }
            CompositorCells::Cells(m) => {
                let nf = self.src.hom(x, y).n_cells() as usize;
                m[&(x, y, z)][g as usize * nf + f as usize]
            }
        }
    }

    pub fn f2_inv(&self, x: ObjIx, y: ObjIx, z: ObjIx, g: CellIx, f: CellIx) -> TwoCell {
        let c = self.f2(x, y, z, g, f);
        let (fx, fz) = (self.o(x), self.o(z));
        self.tgt.hom(fx, fz).inverse(c).expect("compositor invertible")
    }

    pub fn f0_inv(&self, x: ObjIx) -> TwoCell {
        let c = self.f0(x);
        let fx = self.o(x);
        self.tgt.hom(fx, fx).inverse(c).expect("unit cell invertible")
    }

    /// Is this (on its domain) the identity pseudofunctor, strictly?
    pub fn is_identity_like(&self) -> bool {
        same_bicat(&self.src, &self.tgt)
            && matches!(self.unit, UnitCells::Strict)
            && matches!(self.compositor, CompositorCells::Strict)
            && self.dom.iter().all(|&x| self.o(x) == x)
            && self.dom.iter().all(|&x| {
                self.dom.iter().all(|&y| {
                    let t = &self.cell1[&(x, y)];
                    t.iter().enumerate().all(|(i, &c)| c as usize == i)
                })
            })
    }

    /// Composite `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &PsFun) -> PsFun {
        assert!(
            same_bicat(&inner.tgt, &self.src),
            "pseudofunctor composition endpoint clash"
        );
        let dom: Vec<ObjIx> = inner
            .dom
            .iter()
            .copied()
            .filter(|&x| self.defined_at(inner.o(x)))
            .collect();
        let mut obj = HashMap::new();
        let mut cell1 = HashMap::new();
        let mut two = HashMap::new();
        for &x in &dom {
            obj.insert(x, self.o(inner.o(x)));
        }
        for &x in &dom {
            for &y in &dom {
                let (ix, iy) = (inner.o(x), inner.o(y));
                let table: Vec<CellIx> = inner.cell1[&(x, y)]
                    .iter()
                    .map(|&c| self.c(ix, iy, c))
                    .collect();
                let tm = match (&inner.two[&(x, y)], &self.two[&(ix, iy)]) {
                    _ if self.tgt.hom(self.o(ix), self.o(iy)).is_poset() => TwoMap::Implicit,
                    _ => {
                        let src_hom = inner.src.hom(x, y);
                        TwoMap::Table(
                            src_hom
                                .two_cells()
                                .into_iter()
                                .map(|t| self.t2(ix, iy, inner.t2(x, y, t)))
                                .collect(),
                        )
                    }
                };
                cell1.insert((x, y), table);
                two.insert((x, y), tm);
            }
        }
        let unit = match (&inner.unit, &self.unit) {
            (UnitCells::Strict, UnitCells::Strict) => UnitCells::Strict,
            _ => {
                let mut m = HashMap::new();
                for &x in &dom {
                    let ix = inner.o(x);
                    let gix = self.o(ix);
                    // (GF)⁰ = G(F⁰) ∘ G⁰ at F X
                    let g0 = self.f0(ix);
                    let gf0 = self.t2(ix, ix, inner.f0(x));
                    let cell = self
                        .tgt
                        .hom(gix, gix)
                        .vcomp(gf0, g0)
                        .expect("unit composite");
                    m.insert(x, cell);
                }
                UnitCells::Cells(m)
            }
        };
        let compositor = match (&inner.compositor, &self.compositor) {
            (CompositorCells::Strict, CompositorCells::Strict) => CompositorCells::Strict,
            _ => {
                let mut m = HashMap::new();
                for &x in &dom {
                    for &y in &dom {
                        for &z in &dom {
                            let (ix, iy, iz) = (inner.o(x), inner.o(y), inner.o(z));
                            let ng = inner.src.hom(y, z).n_cells();
                            let nf = inner.src.hom(x, y).n_cells();
                            let mut tab = Vec::with_capacity((ng * nf) as usize);
                            for g in 0..ng {
                                for f in 0..nf {
                                    let fg = inner.c(y, z, g);
                                    let ff = inner.c(x, y, f);
                                    // (GF)² = G(F²) ∘ G²_{F g, F f}
                                    let g2 = self.f2(ix, iy, iz, fg, ff);
                                    let gf2 = self.t2(ix, iz, inner.f2(x, y, z, g, f));
                                    let cell = self
                                        .tgt
                                        .hom(self.o(ix), self.o(iz))
                                        .vcomp(gf2, g2)
                                        .expect("compositor composite");
                                    tab.push(cell);
                                }
                            }
                            m.insert((x, y, z), tab);
                        }
                    }
                }
                CompositorCells::Cells(m)
            }
        };
        PsFun {
            src: Arc::clone(&inner.src),
            tgt: Arc::clone(&self.tgt),
            dom,
            obj,
            cell1,
            two,
            unit,
            compositor,
        }
    }

    /// Restrict the domain to the given sorted object list.
    pub fn restrict(&self, keep: &[ObjIx]) -> PsFun {
        let dom: Vec<ObjIx> = self.dom.iter().copied().filter(|x| keep.contains(x)).collect();
        let mut out = self.clone();
        out.obj.retain(|x, _| dom.contains(x));
        out.cell1.retain(|(x, y), _| dom.contains(x) && dom.contains(y));
        out.two.retain(|(x, y), _| dom.contains(x) && dom.contains(y));
        if let UnitCells::Cells(m) = &mut out.unit {
            m.retain(|x, _| dom.contains(x));
        }
        if let CompositorCells::Cells(m) = &mut out.compositor {
            m.retain(|(x, y, z), _| dom.contains(x) && dom.contains(y) && dom.contains(z));
        }
        out.dom = dom;
        out
    }
}

/// Strict equality of two pseudofunctors on the intersection of their data.
pub fn psfun_eq(a: &PsFun, b: &PsFun) -> bool {
    same_bicat(&a.src, &b.src)
        && same_bicat(&a.tgt, &b.tgt)
        && a.dom == b.dom
        && a.obj == b.obj
        && a.cell1 == b.cell1
}

/// Exhaustive pseudofunctor law check over the declared domain.
pub fn check_pseudofunctor(f: &PsFun) -> Result<CheckReport, TableError> {
    let ctx = "pseudofunctor";
    let mut report = CheckReport::new(format!(
        "pseudofunctor on {} objects of {}",
        f.dom.len(),
        f.src.objects.len()
    ));
    for &x in &f.dom {
        if !f.obj.contains_key(&x) {
            return Err(TableError::new(ctx, "object map missing on domain"));
        }
        if f.o(x) >= f.tgt.n_objects() {
            return Err(TableError::new(ctx, "object image out of range"));
        }
    }
    for &x in &f.dom {
        for &y in &f.dom {
            let t = f
                .cell1
                .get(&(x, y))
                .ok_or_else(|| TableError::new(ctx, "1-cell table missing"))?;
            if t.len() != f.src.hom(x, y).n_cells() as usize {
                return Err(TableError::new(ctx, "1-cell table has wrong length"));
            }
            let nt = f.tgt.hom(f.o(x), f.o(y)).n_cells();
            if t.iter().any(|&c| c >= nt) {
                return Err(TableError::new(ctx, "1-cell image out of range"));
            }
            match f.two.get(&(x, y)) {
                None => return Err(TableError::new(ctx, "2-cell table missing")),
                Some(TwoMap::Implicit) => {
                    if !f.tgt.hom(f.o(x), f.o(y)).is_poset() {
                        return Err(TableError::new(
                            ctx,
                            "implicit 2-cell action into a tabular hom",
                        ));
                    }
                }
                Some(TwoMap::Table(tab)) => {
                    if tab.len() != f.src.hom(x, y).n_two_cells() {
                        return Err(TableError::new(ctx, "2-cell table has wrong length"));
                    }
                }
            }
        }
    }

    // Local functors: typing, identities, vertical composition.
    for &x in &f.dom {
        for &y in &f.dom {
            let hs = f.src.hom(x, y);
            let ht = f.tgt.hom(f.o(x), f.o(y));
            for t in hs.two_cells() {
                let img = f.t2(x, y, t);
                if img.src != f.c(x, y, t.src) || img.tgt != f.c(x, y, t.tgt) || !ht.two_exists(img)
                {
                    report.push(
                        "local-functor-typing",
                        format!("hom({x},{y}) 2-cell {}", hs.two_label(t)),
                        "image 2-cell has wrong endpoints",
                    );
                }
            }
            if !report.passed() {
                return Ok(report);
            }
            for c in 0..hs.n_cells() {
                if f.t2(x, y, hs.id2(c)) != ht.id2(f.c(x, y, c)) {
                    report.push(
                        "local-functor-identity",
                        format!("hom({x},{y}) cell {}", hs.cell_id(c)),
                        "identity 2-cell not preserved",
                    );
                }
            }
            if !ht.is_poset() {
                let twos = hs.two_cells();
                for &b2 in &twos {
                    for &a2 in &twos {
                        if a2.tgt != b2.src {
                            continue;
                        }
                        let v = hs.vcomp(b2, a2).expect("checked hom");
                        let lhs = f.t2(x, y, v);
                        let rhs = ht.vcomp(f.t2(x, y, b2), f.t2(x, y, a2));
                        if rhs != Some(lhs) {
                            report.push(
                                "local-functor-composition",
                                format!("hom({x},{y}) ({}, {})", hs.two_label(b2), hs.two_label(a2)),
                                "vertical composition not preserved",
                            );
                        }
                    }
                }
            }
        }
    }

    // Unit and compositor cells: typing and invertibility.
    for &x in &f.dom {
        let fx = f.o(x);
        let c = f.f0(x);
        let want_src = f.tgt.id1[fx as usize];
        let want_tgt = f.c(x, x, f.src.id1[x as usize]);
        if c.src != want_src || c.tgt != want_tgt || !f.tgt.hom(fx, fx).two_exists(c) {
            report.push("unit-cell-typing", format!("object {x}"), "F⁰ has wrong endpoints");
        } else if !f.tgt.hom(fx, fx).is_invertible(c) {
            report.push(
                "non-invertible-coherence-cell",
                format!("F⁰ at object {x}"),
                "unit cell not invertible",
            );
        }
    }
    for &x in &f.dom {
        for &y in &f.dom {
            for &z in &f.dom {
                for g in 0..f.src.hom(y, z).n_cells() {
                    for q in 0..f.src.hom(x, y).n_cells() {
                        let c = f.f2(x, y, z, g, q);
                        let lhs = f.tgt.c1(f.o(x), f.o(y), f.o(z), f.c(y, z, g), f.c(x, y, q));
                        let rhs = f.c(x, z, f.src.c1(x, y, z, g, q));
                        if c.src != lhs || c.tgt != rhs || !f.tgt.hom(f.o(x), f.o(z)).two_exists(c)
                        {
                            report.push(
                                "compositor-typing",
                                format!("({x},{y},{z}) cells ({g},{q})"),
                                "F² has wrong endpoints",
                            );
                        } else if !f.tgt.hom(f.o(x), f.o(z)).is_invertible(c) {
                            report.push(
                                "non-invertible-coherence-cell",
                                format!("F² at ({x},{y},{z}) cells ({g},{q})"),
                                "compositor not invertible",
                            );
                        }
                    }
                }
            }
        }
    }
    if !report.passed() {
        return Ok(report);
    }

    let strict_everything = matches!(f.unit, UnitCells::Strict)
        && matches!(f.compositor, CompositorCells::Strict)
        && matches!(f.src.coherence, crate::bicat_core::Coherence::Strict)
        && matches!(f.tgt.coherence, crate::bicat_core::Coherence::Strict);
    if strict_everything {
        // With identity coherence on both sides and identity F⁰/F², the
        // unitor-compatibility and hexagon axioms are identities between
        // identical cells; strict preservation was verified by the typing
        // scans above (Strict accessors recompute from the 1-cell tables).
        return Ok(report);
    }

    // Unitor compatibility.
    for &x in &f.dom {
        for &y in &f.dom {
            for c in 0..f.src.hom(x, y).n_cells() {
                let (fx, fy) = (f.o(x), f.o(y));
                let fc = f.c(x, y, c);
                let lhs = f.tgt.lunitor(fx, fy, fc);
                let step1 = f
                    .tgt
                    .c2(fx, fy, fy, f.f0(y), f.tgt.hom(fx, fy).id2(fc));
                let step2 = f.f2(x, y, y, f.src.id1[y as usize], c);
                let step3 = f.t2(x, y, f.src.lunitor(x, y, c));
                let rhs = f
                    .tgt
                    .hom(fx, fy)
                    .vcomp(step3, f.tgt.hom(fx, fy).vcomp(step2, step1).expect("typed"))
                    .expect("typed");
                if lhs != rhs {
                    report.push(
                        "unitor-compatibility",
                        format!("λ at hom({x},{y}) cell {c}"),
                        "λ_{F f} ≠ F(λ_f)∘F²∘(F⁰∗id)",
                    );
                }
                let lhs_r = f.tgt.runitor(fx, fy, fc);
                let step1r = f
                    .tgt
                    .c2(fx, fx, fy, f.tgt.hom(fx, fy).id2(fc), f.f0(x));
                let step2r = f.f2(x, x, y, c, f.src.id1[x as usize]);
                let step3r = f.t2(x, y, f.src.runitor(x, y, c));
                let rhs_r = f
                    .tgt
                    .hom(fx, fy)
                    .vcomp(step3r, f.tgt.hom(fx, fy).vcomp(step2r, step1r).expect("typed"))
                    .expect("typed");
                if lhs_r != rhs_r {
                    report.push(
                        "unitor-compatibility",
                        format!("ρ at hom({x},{y}) cell {c}"),
                        "ρ_{F f} ≠ F(ρ_f)∘F²∘(id∗F⁰)",
                    );
                }
            }
        }
    }
    // Hexagon.
    for &w in &f.dom {
        for &x in &f.dom {
            for &y in &f.dom {
                for &z in &f.dom {
                    for h in 0..f.src.hom(y, z).n_cells() {
                        for g in 0..f.src.hom(x, y).n_cells() {
                            for q in 0..f.src.hom(w, x).n_cells() {
                                let (fw, fx, fy, fz) = (f.o(w), f.o(x), f.o(y), f.o(z));
                                let (fh, fg, fq) =
                                    (f.c(y, z, h), f.c(x, y, g), f.c(w, x, q));
                                let alpha_t = f.tgt.assoc(fw, fx, fy, fz, fh, fg, fq);
                                let s1 = f
                                    .tgt
                                    .whisk_l(fw, fx, fz, fh, f.f2(w, x, y, g, q));
                                let gq = f.src.c1(w, x, y, g, q);
                                let s2 = f.f2(w, y, z, h, gq);
                                let lhs = f
                                    .tgt
                                    .hom(fw, fz)
                                    .vcomp(s2, f.tgt.hom(fw, fz).vcomp(s1, alpha_t).expect("typed"))
                                    .expect("typed");
                                let t1 = f
                                    .tgt
                                    .whisk_r(fw, fy, fz, f.f2(x, y, z, h, g), fq);
                                let hg = f.src.c1(x, y, z, h, g);
                                let t2 = f.f2(w, x, z, hg, q);
                                let t3 = f.t2(w, z, f.src.assoc(w, x, y, z, h, g, q));
                                let rhs = f
                                    .tgt
                                    .hom(fw, fz)
                                    .vcomp(t3, f.tgt.hom(fw, fz).vcomp(t2, t1).expect("typed"))
                                    .expect("typed");
                                if lhs != rhs {
                                    report.push(
                                        "hexagon",
                                        format!("({w},{x},{y},{z}) cells ({h},{g},{q})"),
                                        "compositor hexagon fails",
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Pseudonatural transformations
// ---------------------------------------------------------------------------

/// A pseudonatural transformation, tabulated componentwise over its domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsTrans {
    pub f: PsFun,
    pub g: PsFun,
    pub dom: Vec<ObjIx>,
    /// Component 1-cells Φ_X ∈ hom(F X, G X).
    pub comp: HashMap<ObjIx, CellIx>,
    /// Naturality cells Φ_k : G(k)∘Φ_X ⇒ Φ_Y∘F(k), keyed by (x, y, k).
    pub nat: HashMap<(ObjIx, ObjIx, CellIx), TwoCell>,
}

impl PsTrans {
    pub fn at(&self, x: ObjIx) -> CellIx {
        self.comp[&x]
    }

    pub fn nat_at(&self, x: ObjIx, y: ObjIx, k: CellIx) -> TwoCell {
        self.nat[&(x, y, k)]
    }

    pub fn tgt_bicat(&self) -> &Arc<Bicat> {
        &self.f.tgt
    }

    /// Hom of the component at X.
    pub fn comp_hom(&self, x: ObjIx) -> (&HomCat, ObjIx, ObjIx) {
        let a = self.f.o(x);
        let b = self.g.o(x);
        (self.f.tgt.hom(a, b), a, b)
    }

    pub fn restrict(&self, keep: &[ObjIx]) -> PsTrans {
        let dom: Vec<ObjIx> = self.dom.iter().copied().filter(|x| keep.contains(x)).collect();
        let mut out = self.clone();
        out.comp.retain(|x, _| dom.contains(x));
        out.nat.retain(|(x, y, _), _| dom.contains(x) && dom.contains(y));
        out.dom = dom;
        out
    }
}

/// Componentwise equality of transformations (shared domain required).
pub fn pstrans_eq(a: &PsTrans, b: &PsTrans) -> bool {
    a.dom == b.dom && a.comp == b.comp && a.nat == b.nat
}

/// The identity transformation of `f`, with unitor naturality cells.
pub fn id_trans(f: &PsFun) -> PsTrans {
    let b = &f.tgt;
    let mut comp = HashMap::new();
    for &x in &f.dom {
        comp.insert(x, b.id1[f.o(x) as usize]);
    }
    let mut nat = HashMap::new();
    for &x in &f.dom {
        for &y in &f.dom {
            for k in 0..f.src.hom(x, y).n_cells() {
                let (fx, fy) = (f.o(x), f.o(y));
                let fk = f.c(x, y, k);
                // F k ∘ Id ⇒ F k ⇒ Id ∘ F k
                let rho = b.runitor(fx, fy, fk);
                let lam_inv = b.lunitor_inv(fx, fy, fk);
                nat.insert(
                    (x, y, k),
                    b.hom(fx, fy).vcomp(lam_inv, rho).expect("unitor typing"),
                );
            }
        }
    }
    PsTrans {
        f: f.clone(),
        g: f.clone(),
        dom: f.dom.clone(),
        comp,
        nat,
    }
}

/// Vertical composite Ψ∘Φ of transformations F ⇒ G ⇒ H.
pub fn vcomp_trans(psi: &PsTrans, phi: &PsTrans) -> PsTrans {
    assert!(psfun_eq(&phi.g, &psi.f), "vcomp_trans endpoint clash");
    let b = &phi.f.tgt;
    let dom: Vec<ObjIx> = phi
        .dom
        .iter()
        .copied()
        .filter(|x| psi.dom.contains(x))
        .collect();
    let mut comp = HashMap::new();
    for &x in &dom {
        let (fx, gx, hx) = (phi.f.o(x), phi.g.o(x), psi.g.o(x));
        comp.insert(x, b.c1(fx, gx, hx, psi.at(x), phi.at(x)));
    }
    let mut nat = HashMap::new();
    for &x in &dom {
        for &y in &dom {
            for k in 0..phi.f.src.hom(x, y).n_cells() {
                let (fx, gx, hx) = (phi.f.o(x), phi.g.o(x), psi.g.o(x));
                let (fy, gy, hy) = (phi.f.o(y), phi.g.o(y), psi.g.o(y));
                let fk = phi.f.c(x, y, k);
                let gk = phi.g.c(x, y, k);
                let hk = psi.g.c(x, y, k);
                let hom = b.hom(fx, hy);
                // H k ∘ (Ψ_X∘Φ_X) ⇒ (H k∘Ψ_X)∘Φ_X ⇒ (Ψ_Y∘G k)∘Φ_X
                //   ⇒ Ψ_Y∘(G k∘Φ_X) ⇒ Ψ_Y∘(Φ_Y∘F k) ⇒ (Ψ_Y∘Φ_Y)∘F k
                let a1 = b.assoc_inv(fx, gx, hx, hy, hk, psi.at(x), phi.at(x));
                let s1 = b.whisk_r(fx, gx, hy, psi.nat_at(x, y, k), phi.at(x));
                let a2 = b.assoc(fx, gx, gy, hy, psi.at(y), gk, phi.at(x));
                let s2 = b.whisk_l(fx, gy, hy, psi.at(y), phi.nat_at(x, y, k));
                let a3 = b.assoc_inv(fx, fy, gy, hy, psi.at(y), phi.at(y), fk);
                let cell = [a1, s1, a2, s2, a3]
                    .into_iter()
                    .reduce(|acc, step| hom.vcomp(step, acc).expect("vcomp_trans typing"))
                    .unwrap();
                nat.insert((x, y, k), cell);
            }
        }
    }
    PsTrans {
        f: phi.f.clone(),
        g: psi.g.clone(),
        dom,
        comp,
        nat,
    }
}

/// Left-normalized composite of several transformations (first acting first).
pub fn vcomp_many(list: &[&PsTrans]) -> PsTrans {
    assert!(!list.is_empty());
    let mut acc = list[0].clone();
    for t in &list[1..] {
        acc = vcomp_trans(t, &acc);
    }
    acc
}

/// Pre-whiskering Ψ_F: components Ψ_{F X}, naturality cells Ψ_{F k}.
///
/// When Ψ's codomain is the identity pseudofunctor, this is also the
/// normalized pre-whiskering: tabulated composition is strictly unital, so
/// the left-unitor correction is the identity.
pub fn pre_whisker(psi: &PsTrans, f: &PsFun) -> PsTrans {
    assert!(same_bicat(&f.tgt, &psi.f.src), "pre_whisker endpoint clash");
    let dom: Vec<ObjIx> = f
        .dom
        .iter()
        .copied()
        .filter(|&x| psi.dom.contains(&f.o(x)))
        .collect();
    let mut comp = HashMap::new();
    let mut nat = HashMap::new();
    for &x in &dom {
        comp.insert(x, psi.at(f.o(x)));
    }
    for &x in &dom {
        for &y in &dom {
            for k in 0..f.src.hom(x, y).n_cells() {
                nat.insert((x, y, k), psi.nat_at(f.o(x), f.o(y), f.c(x, y, k)));
            }
        }
    }
    PsTrans {
        f: psi.f.compose(f),
        g: psi.g.compose(f),
        dom,
        comp,
        nat,
    }
}

/// Post-whiskering GΦ: components G(Φ_X), naturality via G² and G(Φ_k).
///
/// Doubles as the normalized post-whiskering when Φ starts at the identity
/// pseudofunctor, for the same strictness reason as [`pre_whisker`].
pub fn post_whisker(g: &PsFun, phi: &PsTrans) -> PsTrans {
    assert!(same_bicat(&phi.f.tgt, &g.src), "post_whisker endpoint clash");
    let dom: Vec<ObjIx> = phi
        .dom
        .iter()
        .copied()
        .filter(|&x| g.defined_at(phi.f.o(x)) && g.defined_at(phi.g.o(x)))
        .collect();
    let b = &g.tgt;
    let mut comp = HashMap::new();
    let mut nat = HashMap::new();
    for &x in &dom {
        let (fx, gx) = (phi.f.o(x), phi.g.o(x));
        comp.insert(x, g.c(fx, gx, phi.at(x)));
    }
    for &x in &dom {
        for &y in &dom {
            for k in 0..phi.f.src.hom(x, y).n_cells() {
                let (fx, gx) = (phi.f.o(x), phi.g.o(x));
                let (fy, gy) = (phi.f.o(y), phi.g.o(y));
                let f2k = phi.f.c(x, y, k);
                let g2k = phi.g.c(x, y, k);
                let hom = b.hom(g.o(fx), g.o(gy));
                // G F₂(k)∘G(Φ_X) ⇒ G(F₂k∘Φ_X) ⇒ G(Φ_Y∘F₁k) ⇒ G(Φ_Y)∘G F₁(k)
                let s1 = g.f2(fx, gx, gy, g2k, phi.at(x));
                let s2 = g.t2(fx, gy, phi.nat_at(x, y, k));
                let s3 = g.f2_inv(fx, fy, gy, phi.at(y), f2k);
                let cell = hom
                    .vcomp(s3, hom.vcomp(s2, s1).expect("post_whisker typing"))
                    .expect("post_whisker typing");
                nat.insert((x, y, k), cell);
            }
        }
    }
    PsTrans {
        f: g.compose(&phi.f),
        g: g.compose(&phi.g),
        dom,
        comp,
        nat,
    }
}

/// Check the three pseudonatural-transformation axioms over the domain.
pub fn check_transformation(phi: &PsTrans) -> Result<CheckReport, TableError> {
    let ctx = "transformation";
    let b = &phi.f.tgt;
    let mut report = CheckReport::new(format!("transformation on {} objects", phi.dom.len()));
    for &x in &phi.dom {
        if !phi.comp.contains_key(&x) {
            return Err(TableError::new(ctx, "component missing on domain"));
        }
        let (hom, _, _) = phi.comp_hom(x);
        if phi.at(x) >= hom.n_cells() {
            return Err(TableError::new(ctx, "component out of range"));
        }
    }
    for &x in &phi.dom {
        for &y in &phi.dom {
            for k in 0..phi.f.src.hom(x, y).n_cells() {
                let t = phi
                    .nat
                    .get(&(x, y, k))
                    .ok_or_else(|| TableError::new(ctx, "naturality cell missing"))?;
                let (fx, gx) = (phi.f.o(x), phi.g.o(x));
                let (fy, gy) = (phi.f.o(y), phi.g.o(y));
                let want_src = b.c1(fx, gx, gy, phi.g.c(x, y, k), phi.at(x));
                let want_tgt = b.c1(fx, fy, gy, phi.at(y), phi.f.c(x, y, k));
                let hom = b.hom(fx, gy);
                if t.src != want_src || t.tgt != want_tgt || !hom.two_exists(*t) {
                    report.push(
                        "naturality-cell-typing",
                        format!("1-cell ({x},{y},{k})"),
                        "Φ_f has wrong endpoints",
                    );
                } else if !hom.is_invertible(*t) {
                    report.push(
                        "non-invertible-coherence-cell",
                        format!("Φ_f at ({x},{y},{k})"),
                        "naturality cell not invertible",
                    );
                }
            }
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    // Unit axiom.
    for &x in &phi.dom {
        let (fx, gx) = (phi.f.o(x), phi.g.o(x));
        let hom = b.hom(fx, gx);
        let lam_inv = b.lunitor_inv(fx, gx, phi.at(x));
        let g0w = b.c2(fx, gx, gx, phi.g.f0(x), hom.id2(phi.at(x)));
        let nat_id = phi.nat_at(x, x, phi.f.src.id1[x as usize]);
        let lhs = hom
            .vcomp(nat_id, hom.vcomp(g0w, lam_inv).expect("typed"))
            .expect("typed");
        let rho_inv = b.runitor_inv(fx, gx, phi.at(x));
        let f0w = b.c2(fx, fx, gx, hom.id2(phi.at(x)), phi.f.f0(x));
        let rhs = hom.vcomp(f0w, rho_inv).expect("typed");
        if lhs != rhs {
            report.push("transformation-unit", format!("object {x}"), "unit axiom fails");
        }
    }
    // Composition axiom.
    for &x in &phi.dom {
        for &y in &phi.dom {
            for &z in &phi.dom {
                for g in 0..phi.f.src.hom(y, z).n_cells() {
                    for k in 0..phi.f.src.hom(x, y).n_cells() {
                        let gk = phi.f.src.c1(x, y, z, g, k);
                        let (fx, gx) = (phi.f.o(x), phi.g.o(x));
                        let (fy, gy) = (phi.f.o(y), phi.g.o(y));
                        let (fz, gz) = (phi.f.o(z), phi.g.o(z));
                        let hom = b.hom(fx, gz);
                        let g2 = b.c2(
                            fx,
                            gx,
                            gz,
                            phi.g.f2(x, y, z, g, k),
                            b.hom(fx, gx).id2(phi.at(x)),
                        );
                        let lhs = hom.vcomp(phi.nat_at(x, z, gk), g2).expect("typed");
                        let a1 = b.assoc(fx, gx, gy, gz, phi.g.c(y, z, g), phi.g.c(x, y, k), phi.at(x));
                        let s1 = b.whisk_l(fx, gy, gz, phi.g.c(y, z, g), phi.nat_at(x, y, k));
                        let a2 = b.assoc_inv(fx, fy, gy, gz, phi.g.c(y, z, g), phi.at(y), phi.f.c(x, y, k));
                        let s2 = b.whisk_r(fx, fy, gz, phi.nat_at(y, z, g), phi.f.c(x, y, k));
                        let a3 = b.assoc(fx, fy, fz, gz, phi.at(z), phi.f.c(y, z, g), phi.f.c(x, y, k));
                        let s3 = b.c2(
                            fx,
                            fz,
                            gz,
                            b.hom(fz, gz).id2(phi.at(z)),
                            phi.f.f2(x, y, z, g, k),
                        );
                        let rhs = [a1, s1, a2, s2, a3, s3]
                            .into_iter()
                            .reduce(|acc, step| hom.vcomp(step, acc).expect("typed"))
                            .unwrap();
                        if lhs != rhs {
                            report.push(
                                "transformation-composition",
                                format!("cells ({x},{y},{z}) ({g},{k})"),
                                "composition axiom fails",
                            );
                        }
                    }
                }
            }
        }
    }
    // 2-cell naturality.
    for &x in &phi.dom {
        for &y in &phi.dom {
            let hs = phi.f.src.hom(x, y);
            for t in hs.two_cells() {
                let (fx, gx) = (phi.f.o(x), phi.g.o(x));
                let (fy, gy) = (phi.f.o(y), phi.g.o(y));
                let hom = b.hom(fx, gy);
                let gtheta = b.c2(
                    fx,
                    gx,
                    gy,
                    phi.g.t2(x, y, t),
                    b.hom(fx, gx).id2(phi.at(x)),
                );
                let lhs = hom.vcomp(phi.nat_at(x, y, t.tgt), gtheta);
                let ftheta = b.c2(
                    fx,
                    fy,
                    gy,
                    b.hom(fy, gy).id2(phi.at(y)),
                    phi.f.t2(x, y, t),
                );
                let rhs = hom.vcomp(ftheta, phi.nat_at(x, y, t.src));
                if lhs != rhs || lhs.is_none() {
                    report.push(
                        "transformation-2cell-naturality",
                        format!("2-cell {} in hom({x},{y})", hs.two_label(t)),
                        "2-cell naturality fails",
                    );
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Modifications
// ---------------------------------------------------------------------------

/// A modification between parallel transformations, tabulated componentwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Modif {
    pub s: PsTrans,
    pub t: PsTrans,
    pub dom: Vec<ObjIx>,
    pub comp: HashMap<ObjIx, TwoCell>,
}

impl Modif {
    pub fn at(&self, x: ObjIx) -> TwoCell {
        self.comp[&x]
    }

    pub fn is_invertible(&self) -> bool {
        self.dom.iter().all(|&x| {
            let (hom, _, _) = self.s.comp_hom(x);
            hom.is_invertible(self.at(x))
        })
    }

    pub fn restrict(&self, keep: &[ObjIx]) -> Modif {
        let dom: Vec<ObjIx> = self.dom.iter().copied().filter(|x| keep.contains(x)).collect();
        let mut out = self.clone();
        out.comp.retain(|x, _| dom.contains(x));
        out.dom = dom;
        out
    }
}

/// Componentwise equality (exact table equality on the shared domain).
pub fn modif_eq(a: &Modif, b: &Modif) -> bool {
    a.dom == b.dom && a.comp == b.comp
}

pub fn identity_modif(s: &PsTrans) -> Modif {
    let comp = s
        .dom
        .iter()
        .map(|&x| {
            let (hom, _, _) = s.comp_hom(x);
            (x, hom.id2(s.at(x)))
        })
        .collect();
    Modif {
        s: s.clone(),
        t: s.clone(),
        dom: s.dom.clone(),
        comp,
    }
}

pub fn vcomp_modif(n: &Modif, m: &Modif) -> Modif {
    let dom: Vec<ObjIx> = m.dom.iter().copied().filter(|x| n.dom.contains(x)).collect();
    let comp = dom
        .iter()
        .map(|&x| {
            let (hom, _, _) = m.s.comp_hom(x);
            (x, hom.vcomp(n.at(x), m.at(x)).expect("vcomp_modif typing"))
        })
        .collect();
    Modif {
        s: m.s.clone(),
        t: n.t.clone(),
        dom,
        comp,
    }
}

pub fn vcomp_modif_many(list: &[&Modif]) -> Modif {
    assert!(!list.is_empty());
    let mut acc = list[0].clone();
    for m in &list[1..] {
        acc = vcomp_modif(m, &acc);
    }
    acc
}

pub fn inverse_modif(m: &Modif) -> Modif {
    let comp = m
        .dom
        .iter()
        .map(|&x| {
            let (hom, _, _) = m.s.comp_hom(x);
            (x, hom.inverse(m.at(x)).expect("invertible modification"))
        })
        .collect();
    Modif {
        s: m.t.clone(),
        t: m.s.clone(),
        dom: m.dom.clone(),
        comp,
    }
}

/// Horizontal composite of modifications (components composed with ∗).
pub fn hcomp_modif(n: &Modif, m: &Modif) -> Modif {
    let b = m.s.tgt_bicat().clone();
    let dom: Vec<ObjIx> = m.dom.iter().copied().filter(|x| n.dom.contains(x)).collect();
    let comp = dom
        .iter()
        .map(|&x| {
            let (_, fx, gx) = m.s.comp_hom(x);
            let (_, _, hx) = n.s.comp_hom(x);
            (x, b.c2(fx, gx, hx, n.at(x), m.at(x)))
        })
        .collect();
    Modif {
        s: vcomp_trans(&n.s, &m.s),
        t: vcomp_trans(&n.t, &m.t),
        dom,
        comp,
    }
}

/// R ∗ m for a transformation R composed after the endpoints of m.
pub fn whisker_l_modif(r: &PsTrans, m: &Modif) -> Modif {
    hcomp_modif(&identity_modif(r), m)
}

/// m ∗ S for a transformation S composed before the endpoints of m.
pub fn whisker_r_modif(m: &Modif, s: &PsTrans) -> Modif {
    hcomp_modif(m, &identity_modif(s))
}

/// Pre-whiskering of a modification by a pseudofunctor: (ν_F)_X = ν_{F X}.
pub fn pre_whisker_modif(m: &Modif, f: &PsFun) -> Modif {
    let s = pre_whisker(&m.s, f);
    let t = pre_whisker(&m.t, f);
    let comp = s.dom.iter().map(|&x| (x, m.at(f.o(x)))).collect();
    Modif {
        dom: s.dom.clone(),
        s,
        t,
        comp,
    }
}

/// Post-whiskering: (Gμ)_X = G(μ_X).
pub fn post_whisker_modif(g: &PsFun, m: &Modif) -> Modif {
    let s = post_whisker(g, &m.s);
    let t = post_whisker(g, &m.t);
    let comp = s
        .dom
        .iter()
        .map(|&x| {
            let (fx, gx) = (m.s.f.o(x), m.s.g.o(x));
            (x, g.t2(fx, gx, m.at(x)))
        })
        .collect();
    Modif {
        dom: s.dom.clone(),
        s,
        t,
        comp,
    }
}

/// Check the modification law over the domain.
pub fn check_modification(m: &Modif) -> Result<CheckReport, TableError> {
    let ctx = "modification";
    let b = m.s.tgt_bicat().clone();
    let mut report = CheckReport::new(format!("modification on {} objects", m.dom.len()));
    for &x in &m.dom {
        let c = m
            .comp
            .get(&x)
            .ok_or_else(|| TableError::new(ctx, "component missing on domain"))?;
        let (hom, _, _) = m.s.comp_hom(x);
        if c.src != m.s.at(x) || c.tgt != m.t.at(x) || !hom.two_exists(*c) {
            report.push(
                "modification-component-typing",
                format!("object {x}"),
                "component has wrong endpoints",
            );
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    for &x in &m.dom {
        for &y in &m.dom {
            for k in 0..m.s.f.src.hom(x, y).n_cells() {
                let (fx, gx) = (m.s.f.o(x), m.s.g.o(x));
                let (fy, gy) = (m.s.f.o(y), m.s.g.o(y));
                let hom = b.hom(fx, gy);
                let gk = m.s.g.c(x, y, k);
                let fk = m.s.f.c(x, y, k);
                let lhs = hom.vcomp(
                    m.t.nat_at(x, y, k),
                    b.c2(fx, gx, gy, b.hom(gx, gy).id2(gk), m.at(x)),
                );
                let rhs = hom.vcomp(
                    b.c2(fx, fy, gy, m.at(y), b.hom(fx, fy).id2(fk)),
                    m.s.nat_at(x, y, k),
                );
                if lhs != rhs || lhs.is_none() {
                    report.push(
                        "modification-law",
                        format!("1-cell ({x},{y},{k})"),
                        "modification law fails",
                    );
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Structural modifications of the hom-bicategory B^A
// ---------------------------------------------------------------------------

/// α_{Ω,Ψ,Φ} : (Ω∘Ψ)∘Φ ⇛ Ω∘(Ψ∘Φ), componentwise the target associator.
pub fn assoc_modification(omega: &PsTrans, psi: &PsTrans, phi: &PsTrans) -> Modif {
    let b = phi.f.tgt.clone();
    let s = vcomp_trans(&vcomp_trans(omega, psi), phi);
    let t = vcomp_trans(omega, &vcomp_trans(psi, phi));
    let dom = s.dom.iter().copied().filter(|x| t.dom.contains(x)).collect::<Vec<_>>();
    let comp = dom
        .iter()
        .map(|&x| {
            let fx = phi.f.o(x);
            let gx = phi.g.o(x);
            let hx = psi.g.o(x);
            let kx = omega.g.o(x);
            (
                x,
                b.assoc(fx, gx, hx, kx, omega.at(x), psi.at(x), phi.at(x)),
            )
        })
        .collect();
    Modif { s, t, dom, comp }
}

/// λ_Φ : Id_G ∘ Φ ⇛ Φ.
pub fn lunitor_modification(phi: &PsTrans) -> Modif {
    let b = phi.f.tgt.clone();
    let s = vcomp_trans(&id_trans(&phi.g), phi);
    let comp = s
        .dom
        .iter()
        .map(|&x| {
            let (_, fx, gx) = phi.comp_hom(x);
            (x, b.lunitor(fx, gx, phi.at(x)))
        })
        .collect();
    Modif {
        dom: s.dom.clone(),
        s,
        t: phi.clone(),
        comp,
    }
}

/// ρ_Φ : Φ ∘ Id_F ⇛ Φ.
pub fn runitor_modification(phi: &PsTrans) -> Modif {
    let b = phi.f.tgt.clone();
    let s = vcomp_trans(phi, &id_trans(&phi.f));
    let comp = s
        .dom
        .iter()
        .map(|&x| {
            let (_, fx, gx) = phi.comp_hom(x);
            (x, b.runitor(fx, gx, phi.at(x)))
        })
        .collect();
    Modif {
        dom: s.dom.clone(),
        s,
        t: phi.clone(),
        comp,
    }
}

/// Exchange Ψ_Φ : G₂(Φ) ∘ Ψ_{F₁} ⇛ Ψ_{F₂} ∘ G₁(Φ) for Ψ : G₁ ⇒ G₂ (B→C)
/// and Φ : F₁ ⇒ F₂ (A→B); component at X is Ψ's naturality cell at Φ_X.
pub fn exchange(psi: &PsTrans, phi: &PsTrans) -> Modif {
    assert!(
        same_bicat(&phi.f.tgt, &psi.f.src),
        "exchange endpoint clash"
    );
    let s = vcomp_trans(&post_whisker(&psi.g, phi), &pre_whisker(psi, &phi.f));
    let t = vcomp_trans(&pre_whisker(psi, &phi.g), &post_whisker(&psi.f, phi));
    let dom: Vec<ObjIx> = s.dom.iter().copied().filter(|x| t.dom.contains(x)).collect();
    let comp = dom
        .iter()
        .map(|&x| {
            let (fx, gx) = (phi.f.o(x), phi.g.o(x));
            (x, psi.nat_at(fx, gx, phi.at(x)))
        })
        .collect();
    Modif { s, t, dom, comp }
}

/// δ-compatibility of pre-whiskering with vertical composition:
/// (Ψ₂∘Ψ₁)_F ⇛ Ψ₂_F ∘ Ψ₁_F. Componentwise an identity.
pub fn pre_whisker_compat(psi2: &PsTrans, psi1: &PsTrans, f: &PsFun) -> Modif {
    let s = pre_whisker(&vcomp_trans(psi2, psi1), f);
    let t = vcomp_trans(&pre_whisker(psi2, f), &pre_whisker(psi1, f));
    let dom: Vec<ObjIx> = s.dom.iter().copied().filter(|x| t.dom.contains(x)).collect();
    let comp = dom
        .iter()
        .map(|&x| {
            let (hom, _, _) = s.comp_hom(x);
            (x, hom.id2(s.at(x)))
        })
        .collect();
    Modif { s, t, dom, comp }
}

/// G-compatibility of post-whiskering with vertical composition:
/// G(Ψ₂∘Ψ₁) ⇛ G(Ψ₂) ∘ G(Ψ₁). Componentwise G²⁻¹.
pub fn post_whisker_compat(g: &PsFun, psi2: &PsTrans, psi1: &PsTrans) -> Modif {
    let s = post_whisker(g, &vcomp_trans(psi2, psi1));
    let t = vcomp_trans(&post_whisker(g, psi2), &post_whisker(g, psi1));
    let dom: Vec<ObjIx> = s.dom.iter().copied().filter(|x| t.dom.contains(x)).collect();
    let comp = dom
        .iter()
        .map(|&x| {
            let fx = psi1.f.o(x);
            let gx = psi1.g.o(x);
            let hx = psi2.g.o(x);
            (x, g.f2_inv(fx, gx, hx, psi2.at(x), psi1.at(x)))
        })
        .collect();
    Modif { s, t, dom, comp }
}

/// The compositor equivalence (H G) F ⇒ H (G F). Tabulated composition is
/// strictly associative, so this is the identity transformation of the
/// composite; quasi-inverse is itself, unit/counit are unitor cells.
pub fn compositor_a(h: &PsFun, g: &PsFun, f: &PsFun) -> PsTrans {
    let hg_f = h.compose(g).compose(f);
    debug_assert!(psfun_eq(&hg_f, &h.compose(&g.compose(f))));
    id_trans(&hg_f)
}

/// Invertible modifications Id ⇛ A⁻¹∘A and A∘A⁻¹ ⇛ Id for [`compositor_a`].
pub fn compositor_a_units(h: &PsFun, g: &PsFun, f: &PsFun) -> (Modif, Modif) {
    let a = compositor_a(h, g, f);
    let unit = inverse_modif(&lunitor_modification(&a));
    let counit = lunitor_modification(&a);
    (unit, counit)
}

/// Naturality of the compositor in the inner argument:
/// A ∘ (H G)(Φ) ⇛ H(G(Φ)) ∘ A.
pub fn compositor_naturality(h: &PsFun, g: &PsFun, phi: &PsTrans) -> Modif {
    let b = h.tgt.clone();
    let hg = h.compose(g);
    let lhs = vcomp_trans(
        &compositor_a(h, g, &phi.g),
        &post_whisker(&hg, phi),
    );
    let rhs = vcomp_trans(
        &post_whisker(h, &post_whisker(g, phi)),
        &compositor_a(h, g, &phi.f),
    );
    let dom: Vec<ObjIx> = lhs.dom.iter().copied().filter(|x| rhs.dom.contains(x)).collect();
    let comp = dom
        .iter()
        .map(|&x| {
            // Id ∘ HGΦ_X ⇒ HGΦ_X ⇒ HGΦ_X ∘ Id
            let (hom, fx, gy) = lhs.comp_hom(x);
            let c = hg.c(phi.f.o(x), phi.g.o(x), phi.at(x));
            let lam = b.lunitor(fx, gy, c);
            let rho_inv = b.runitor_inv(fx, gy, c);
            (x, hom.vcomp(rho_inv, lam).expect("unitor typing"))
        })
        .collect();
    Modif {
        s: lhs,
        t: rhs,
        dom,
        comp,
    }
}

/// Collapse a left-nested composite of identity-like endo-1-cells on `x` to
/// the bare identity. Atoms are given in composition order (innermost first),
/// each with an invertible 2-cell `atom ⇒ Id_x`.
fn collapse_to_id(b: &Bicat, x: ObjIx, atoms: &[(CellIx, TwoCell)]) -> TwoCell {
    let hom = b.hom(x, x);
    let idc = b.id1[x as usize];
    assert!(!atoms.is_empty());
    let (mut cell, mut acc) = atoms[0];
    for &(a_cell, a_iso) in &atoms[1..] {
        // composite so far: a_cell ∘ cell ⇒ Id ∘ Id ⇒ Id
        let step = b.c2(x, x, x, a_iso, acc);
        let lam = b.lunitor(x, x, idc);
        acc = hom.vcomp(lam, step).expect("collapse typing");
        cell = b.c1(x, x, x, a_cell, cell);
    }
    acc
}

/// The pentagonator: the canonical invertible modification between the two
/// compositor composites for four composable pseudofunctors i∘h∘g∘f.
pub fn pentagonator(i: &PsFun, h: &PsFun, g: &PsFun, f: &PsFun) -> Modif {
    let b = i.tgt.clone();
    // side 1: A_{i,h,gf} ∘ A_{ih,g,f}
    let gf = g.compose(f);
    let ih = i.compose(h);
    let side1 = vcomp_trans(&compositor_a(i, h, &gf), &compositor_a(&ih, g, f));
    // side 2: i(A_{h,g,f}) ∘ A_{i,hg,f} ∘ (A_{i,h,g} pre-whiskered by f)
    let hg = h.compose(g);
    let side2 = vcomp_many(&[
        &pre_whisker(&compositor_a(i, h, g), f),
        &compositor_a(i, &hg, f),
        &post_whisker(i, &compositor_a(h, g, f)),
    ]);
    let dom: Vec<ObjIx> = side1
        .dom
        .iter()
        .copied()
        .filter(|x| side2.dom.contains(x))
        .collect();
    let comp = dom
        .iter()
        .map(|&x| {
            let top = side1.f.o(x); // all composites are endo-identities here
            let hom = b.hom(top, top);
            let idc = b.id1[top as usize];
            let id_iso = hom.id2(idc);
            let c1 = collapse_to_id(&b, top, &[(idc, id_iso), (idc, id_iso)]);
            let hgf_x = h.o(g.o(f.o(x)));
            let i_id = i.c(hgf_x, hgf_x, i.src.id1[hgf_x as usize]);
            let c2 = collapse_to_id(
                &b,
                top,
                &[(idc, id_iso), (idc, id_iso), (i_id, i.f0_inv(hgf_x))],
            );
            let cell = hom
                .vcomp(hom.inverse(c2).expect("invertible"), c1)
                .expect("typed");
            (x, cell)
        })
        .collect();
    Modif {
        s: side1,
        t: side2,
        dom,
        comp,
    }
}

/// Reinterpret a modification between componentwise-identical endpoint
/// transformations (different bracketings of the same composites). Asserts
/// exact component equality on the shared domain.
pub fn rebracket(m: &Modif, s: &PsTrans, t: &PsTrans) -> Modif {
    let dom: Vec<ObjIx> = m
        .dom
        .iter()
        .copied()
        .filter(|x| s.dom.contains(x) && t.dom.contains(x))
        .collect();
    for &x in &dom {
        assert_eq!(m.s.at(x), s.at(x), "rebracket source component mismatch");
        assert_eq!(m.t.at(x), t.at(x), "rebracket target component mismatch");
    }
    let comp = dom.iter().map(|&x| (x, m.at(x))).collect();
    Modif {
        s: s.clone(),
        t: t.clone(),
        dom,
        comp,
    }
}

/// The canonical invertible modification F(Id_G) ⇛ Id_{F∘G} collapsing the
/// image of an identity transformation, componentwise F⁰ inverted.
pub fn post_id_collapse(f: &PsFun, g: &PsFun) -> Modif {
    let s = post_whisker(f, &id_trans(g));
    let t = id_trans(&f.compose(g));
    let dom: Vec<ObjIx> = s.dom.iter().copied().filter(|x| t.dom.contains(x)).collect();
    let comp = dom.iter().map(|&x| (x, f.f0_inv(g.o(x)))).collect();
    Modif { s, t, dom, comp }
}

/// Left unitor Λ_F : Id_B ∘ F ⇒ F of pseudofunctor composition; the
/// composite is strict here, so this is the identity transformation.
pub fn unitor_lambda(f: &PsFun) -> PsTrans {
    let idb = PsFun::identity(&f.tgt);
    let comp = idb.compose(f);
    debug_assert!(psfun_eq(&comp, f));
    id_trans(&comp)
}

/// Right unitor P_F : F ∘ Id_A ⇒ F.
pub fn unitor_p(f: &PsFun) -> PsTrans {
    let ida = PsFun::identity(&f.src);
    let comp = f.compose(&ida);
    debug_assert!(psfun_eq(&comp, f));
    id_trans(&comp)
}
