//! Finite bicategories with fully tabulated coherence data and the axiom
//! checker.
//!
//! Composition tables are dense and index based. Two coherence regimes exist:
//! `Strict` (1-cell composition strictly associative and unital, all
//! coherence 2-cells identities — the case for poset, relation and promoted
//! instances) and `Cells` (explicit associator/unitor tables, e.g. cocycle
//! deloopings). An optional carrier attaches concrete semantics (poset maps
//! or relations) that the checker verifies and then exploits: once every
//! composition entry is checked against actual map/relation composition,
//! associativity and unity follow instead of demanding a cubic scan.

use super::hom::{BitMat, HomCat, TwoCell};
use crate::report::{CheckReport, TableError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub type ObjIx = u32;
pub type CellIx = u32;

/// 2-cell action of a horizontal composition functor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Comp2 {
    /// Determined by the 1-cell table; valid when the target hom is posetal.
    Implicit,
    /// Explicit table indexed by `g2 * n2(x,y) + f2` over canonical 2-cell
    /// enumerations of hom(y,z) and hom(x,y).
    Table(Vec<TwoCell>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Coherence {
    /// All associators and unitors are identity 2-cells.
    Strict,
    Cells {
        /// (x,y,z,w) -> flat table over (h, g, f): α_{h,g,f} : (h∘g)∘f ⇒ h∘(g∘f).
        #[serde(with = "assoc_serde")]
        assoc: HashMap<(ObjIx, ObjIx, ObjIx, ObjIx), Vec<TwoCell>>,
        /// Per hom (x*n+y), per 1-cell f: λ_f : Id_y ∘ f ⇒ f.
        lunit: Vec<Vec<TwoCell>>,
        /// Per hom, per 1-cell f: ρ_f : f ∘ Id_x ⇒ f.
        runit: Vec<Vec<TwoCell>>,
    },
}

mod assoc_serde {
    use super::TwoCell;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::HashMap;
    type Key = (u32, u32, u32, u32);

    pub fn serialize<S: Serializer>(
        map: &HashMap<Key, Vec<TwoCell>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let mut rows: Vec<(&Key, &Vec<TwoCell>)> = map.iter().collect();
        rows.sort_by_key(|(k, _)| **k);
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<HashMap<Key, Vec<TwoCell>>, D::Error> {
        let rows: Vec<(Key, Vec<TwoCell>)> = Vec::deserialize(d)?;
        Ok(rows.into_iter().collect())
    }
}

/// Concrete semantics backing a locally posetal instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Carrier {
    Posets {
        /// Per object: element names (order positions) and order relation.
        elems: Vec<Vec<String>>,
        leq: Vec<BitMat>,
        /// Per hom (x*n+y), per 1-cell: image vector into elems of y.
        maps: Vec<Vec<Vec<u32>>>,
    },
    Relations {
        elems: Vec<Vec<String>>,
        /// Per hom, per 1-cell: |x| rows of |y|-bit columns.
        rels: Vec<Vec<BitMat>>,
    },
}

/// A finite bicategory, fully tabulated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bicat {
    pub objects: Vec<String>,
    /// n*n hom-categories, index x*n + y for hom(x → y).
    pub homs: Vec<HomCat>,
    /// Per object: identity 1-cell index in hom(x,x).
    pub id1: Vec<CellIx>,
    /// n^3 composition tables, index (x*n + y)*n + z, entry g*|hom(x,y)|+f.
    pub comp1: Vec<Vec<CellIx>>,
    /// 2-cell action of each composition functor, same indexing.
    pub comp2: Vec<Comp2>,
    pub coherence: Coherence,
    pub carrier: Option<Carrier>,
}

impl Bicat {
    pub fn n_objects(&self) -> ObjIx {
        self.objects.len() as ObjIx
    }

    pub fn object_index(&self, id: &str) -> Option<ObjIx> {
        self.objects.binary_search_by(|o| o.as_str().cmp(id)).ok().map(|i| i as ObjIx)
    }

    #[inline]
    pub fn hix(&self, x: ObjIx, y: ObjIx) -> usize {
        (x as usize) * self.objects.len() + y as usize
    }

    #[inline]
    pub fn hom(&self, x: ObjIx, y: ObjIx) -> &HomCat {
        &self.homs[self.hix(x, y)]
    }

    #[inline]
    pub fn tix(&self, x: ObjIx, y: ObjIx, z: ObjIx) -> usize {
        (self.hix(x, y)) * self.objects.len() + z as usize
    }

    /// 1-cell composite g∘f for g : y→z, f : x→y.
    #[inline]
    pub fn c1(&self, x: ObjIx, y: ObjIx, z: ObjIx, g: CellIx, f: CellIx) -> CellIx {
        let nf = self.hom(x, y).n_cells() as usize;
        self.comp1[self.tix(x, y, z)][g as usize * nf + f as usize]
    }

    /// Horizontal composite ψ ∗ φ for ψ in hom(y,z), φ in hom(x,y).
    pub fn c2(&self, x: ObjIx, y: ObjIx, z: ObjIx, psi: TwoCell, phi: TwoCell) -> TwoCell {
        match &self.comp2[self.tix(x, y, z)] {
            Comp2::Implicit => TwoCell::new(
                self.c1(x, y, z, psi.src, phi.src),
                self.c1(x, y, z, psi.tgt, phi.tgt),
                0,
            ),
            Comp2::Table(t) => {
                let n2f = self.hom(x, y).n_two_cells();
                let gi = self.hom(y, z).two_index(psi);
                let fi = self.hom(x, y).two_index(phi);
                t[gi * n2f + fi]
            }
        }
    }

    /// Left whiskering g ∗ φ = id_g ∗ φ.
    pub fn whisk_l(&self, x: ObjIx, y: ObjIx, z: ObjIx, g: CellIx, phi: TwoCell) -> TwoCell {
        self.c2(x, y, z, self.hom(y, z).id2(g), phi)
    }

    /// Right whiskering ψ ∗ f = ψ ∗ id_f.
    pub fn whisk_r(&self, x: ObjIx, y: ObjIx, z: ObjIx, psi: TwoCell, f: CellIx) -> TwoCell {
        self.c2(x, y, z, psi, self.hom(x, y).id2(f))
    }

    /// α_{h,g,f} : (h∘g)∘f ⇒ h∘(g∘f) for h : z→w, g : y→z, f : x→y.
    pub fn assoc(
        &self,
        x: ObjIx,
        y: ObjIx,
        z: ObjIx,
        w: ObjIx,
        h: CellIx,
        g: CellIx,
        f: CellIx,
    ) -> TwoCell {
        match &self.coherence {
            Coherence::Strict => {
                let hg = self.c1(y, z, w, h, g);
                let left = self.c1(x, y, w, hg, f);
                self.hom(x, w).id2(left)
            }
            Coherence::Cells { assoc, .. } => {
                let ng = self.hom(y, z).n_cells() as usize;
                let nf = self.hom(x, y).n_cells() as usize;
                assoc[&(x, y, z, w)][(h as usize * ng + g as usize) * nf + f as usize]
            }
        }
    }

    pub fn assoc_inv(
        &self,
        x: ObjIx,
        y: ObjIx,
        z: ObjIx,
        w: ObjIx,
        h: CellIx,
        g: CellIx,
        f: CellIx,
    ) -> TwoCell {
        let a = self.assoc(x, y, z, w, h, g, f);
        self.hom(x, w).inverse(a).expect("associator invertible")
    }

    /// λ_f : Id_y ∘ f ⇒ f.
    pub fn lunitor(&self, x: ObjIx, y: ObjIx, f: CellIx) -> TwoCell {
        match &self.coherence {
            Coherence::Strict => self.hom(x, y).id2(f),
            Coherence::Cells { lunit, .. } => lunit[self.hix(x, y)][f as usize],
        }
    }

    pub fn lunitor_inv(&self, x: ObjIx, y: ObjIx, f: CellIx) -> TwoCell {
        let l = self.lunitor(x, y, f);
        self.hom(x, y).inverse(l).expect("unitor invertible")
    }

    /// ρ_f : f ∘ Id_x ⇒ f.
    pub fn runitor(&self, x: ObjIx, y: ObjIx, f: CellIx) -> TwoCell {
        match &self.coherence {
            Coherence::Strict => self.hom(x, y).id2(f),
            Coherence::Cells { runit, .. } => runit[self.hix(x, y)][f as usize],
        }
    }

    pub fn runitor_inv(&self, x: ObjIx, y: ObjIx, f: CellIx) -> TwoCell {
        let r = self.runitor(x, y, f);
        self.hom(x, y).inverse(r).expect("unitor invertible")
    }

    /// All 1-cells of hom(x,y), by index.
    pub fn cells(&self, x: ObjIx, y: ObjIx) -> std::ops::Range<CellIx> {
        0..self.hom(x, y).n_cells()
    }

    pub fn cell_label(&self, x: ObjIx, y: ObjIx, f: CellIx) -> String {
        format!(
            "{}→{}:{}",
            self.objects[x as usize],
            self.objects[y as usize],
            self.hom(x, y).cell_id(f)
        )
    }
}

/// Sequential vertical pasting of 2-cells inside one hom, with endpoint
/// tracking. Every `step` must start where the previous one ended.
pub struct Paste<'a> {
    b: &'a Bicat,
    x: ObjIx,
    y: ObjIx,
    cur: CellIx,
    acc: Option<TwoCell>,
}

impl<'a> Paste<'a> {
    pub fn start(b: &'a Bicat, x: ObjIx, y: ObjIx, cell: CellIx) -> Self {
        Paste {
            b,
            x,
            y,
            cur: cell,
            acc: None,
        }
    }

    pub fn cell(&self) -> CellIx {
        self.cur
    }

    pub fn step(mut self, t: TwoCell) -> Self {
        assert_eq!(t.src, self.cur, "pasting step does not start at the current cell");
        let hom = self.b.hom(self.x, self.y);
        self.acc = Some(match self.acc {
            None => t,
            Some(a) => hom.vcomp(t, a).expect("pasting typing"),
        });
        self.cur = t.tgt;
        self
    }

    pub fn finish(self) -> TwoCell {
        match self.acc {
            Some(a) => a,
            None => self.b.hom(self.x, self.y).id2(self.cur),
        }
    }
}

/// Structural validation shared by the checker and the parser.
fn validate_shape(b: &Bicat) -> Result<(), TableError> {
    let n = b.objects.len();
    let ctx = "bicategory";
    if b.homs.len() != n * n {
        return Err(TableError::new(ctx, "hom table has wrong length"));
    }
    if b.id1.len() != n {
        return Err(TableError::new(ctx, "identity table has wrong length"));
    }
    for x in 0..n {
        if b.id1[x] >= b.homs[x * n + x].n_cells() {
            return Err(TableError::new(ctx, format!("id1[{}] out of range", b.objects[x])));
        }
    }
    if b.comp1.len() != n * n * n || b.comp2.len() != n * n * n {
        return Err(TableError::new(ctx, "composition tables have wrong length"));
    }
    for x in 0..n as ObjIx {
        for y in 0..n as ObjIx {
            for z in 0..n as ObjIx {
                let t = b.tix(x, y, z);
                let ng = b.hom(y, z).n_cells() as usize;
                let nf = b.hom(x, y).n_cells() as usize;
                if b.comp1[t].len() != ng * nf {
                    return Err(TableError::new(
                        ctx,
                        format!("comp1 table ({x},{y},{z}) has wrong length"),
                    ));
                }
                let nz = b.hom(x, z).n_cells();
                if b.comp1[t].iter().any(|&c| c >= nz) {
                    return Err(TableError::new(
                        ctx,
                        format!("comp1 table ({x},{y},{z}) has out-of-range cell"),
                    ));
                }
                match &b.comp2[t] {
                    Comp2::Implicit => {
                        if !b.hom(x, z).is_poset() {
                            return Err(TableError::new(
                                ctx,
                                format!("comp2 ({x},{y},{z}) implicit but target hom is tabular"),
                            ));
                        }
                    }
                    Comp2::Table(tab) => {
                        let want = b.hom(y, z).n_two_cells() * b.hom(x, y).n_two_cells();
                        if tab.len() != want {
                            return Err(TableError::new(
                                ctx,
                                format!("comp2 table ({x},{y},{z}) has wrong length"),
                            ));
                        }
                    }
                }
            }
        }
    }
    if let Coherence::Cells { assoc, lunit, runit } = &b.coherence {
        if lunit.len() != n * n || runit.len() != n * n {
            return Err(TableError::new(ctx, "unitor tables have wrong length"));
        }
        for x in 0..n as ObjIx {
            for y in 0..n as ObjIx {
                let m = b.hom(x, y).n_cells() as usize;
                if lunit[b.hix(x, y)].len() != m || runit[b.hix(x, y)].len() != m {
                    return Err(TableError::new(ctx, "unitor table has wrong length"));
                }
            }
        }
        for x in 0..n as ObjIx {
            for y in 0..n as ObjIx {
                for z in 0..n as ObjIx {
                    for w in 0..n as ObjIx {
                        let want = b.hom(z, w).n_cells() as usize
                            * b.hom(y, z).n_cells() as usize
                            * b.hom(x, y).n_cells() as usize;
                        let got = assoc.get(&(x, y, z, w)).map_or(0, |v| v.len());
                        if got != want {
                            return Err(TableError::new(
                                ctx,
                                format!("associator table ({x},{y},{z},{w}) has wrong length"),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_carrier(b: &Bicat, report: &mut CheckReport) {
    let n = b.n_objects();
    match b.carrier.as_ref().expect("caller ensures presence") {
        Carrier::Posets { elems, leq, maps } => {
            for x in 0..n {
                let k = elems[x as usize].len();
                if leq[x as usize].n != k {
                    report.push("carrier-shape", b.objects[x as usize].clone(), "order size mismatch");
                    return;
                }
            }
            // 1-cells are exactly the monotone maps recorded, order pointwise.
            for x in 0..n {
                for y in 0..n {
                    let h = b.hom(x, y);
                    let ms = &maps[b.hix(x, y)];
                    if ms.len() != h.n_cells() as usize {
                        report.push(
                            "carrier-shape",
                            format!("hom({},{})", b.objects[x as usize], b.objects[y as usize]),
                            "map table length mismatch",
                        );
                        return;
                    }
                    let lx = &leq[x as usize];
                    let ly = &leq[y as usize];
                    for (i, m) in ms.iter().enumerate() {
                        if m.len() != elems[x as usize].len()
                            || m.iter().any(|&v| v as usize >= elems[y as usize].len())
                        {
                            report.push("carrier-shape", h.cell_id(i as u32).to_string(), "bad image vector");
                            return;
                        }
                        for a in 0..m.len() {
                            for c in 0..m.len() {
                                if lx.get(a, c) && !ly.get(m[a] as usize, m[c] as usize) {
                                    report.push(
                                        "carrier-monotone",
                                        b.cell_label(x, y, i as u32),
                                        "image vector is not monotone",
                                    );
                                }
                            }
                        }
                    }
                    // leq of the hom = pointwise order of image vectors
                    match h {
                        HomCat::Poset(p) => {
                            for i in 0..ms.len() {
                                for j in 0..ms.len() {
                                    let pointwise = (0..ms[i].len())
                                        .all(|a| ly.get(ms[i][a] as usize, ms[j][a] as usize));
                                    if p.leq.get(i, j) != pointwise {
                                        report.push(
                                            "carrier-order",
                                            format!(
                                                "hom({},{}) cells {} vs {}",
                                                b.objects[x as usize],
                                                b.objects[y as usize],
                                                h.cell_id(i as u32),
                                                h.cell_id(j as u32)
                                            ),
                                            "stored order disagrees with pointwise order",
                                        );
                                    }
                                }
                            }
                        }
                        HomCat::Table(_) => {
                            report.push(
                                "carrier-shape",
                                format!("hom({},{})", b.objects[x as usize], b.objects[y as usize]),
                                "poset carrier over tabular hom",
                            );
                        }
                    }
                }
            }
            // identities and composition agree with actual map composition;
            // associativity and unity then follow from function composition.
            for x in 0..n {
                let idm = &maps[b.hix(x, x)][b.id1[x as usize] as usize];
                if idm.iter().enumerate().any(|(a, &v)| v as usize != a) {
                    report.push(
                        "carrier-identity",
                        b.objects[x as usize].clone(),
                        "identity 1-cell is not the identity map",
                    );
                }
            }
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let mf = &maps[b.hix(x, y)];
                        let mg = &maps[b.hix(y, z)];
                        let mc = &maps[b.hix(x, z)];
                        for g in b.cells(y, z) {
                            for f in b.cells(x, y) {
                                let c = b.c1(x, y, z, g, f);
                                let gf = &mg[g as usize];
                                let ff = &mf[f as usize];
                                let cc = &mc[c as usize];
                                if (0..ff.len()).any(|a| gf[ff[a] as usize] != cc[a]) {
                                    report.push(
                                        "carrier-composition",
                                        format!(
                                            "({}, {})",
                                            b.cell_label(y, z, g),
                                            b.cell_label(x, y, f)
                                        ),
                                        "composition table disagrees with map composition",
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        Carrier::Relations { elems, rels } => {
            for x in 0..n {
                for y in 0..n {
                    let h = b.hom(x, y);
                    let rs = &rels[b.hix(x, y)];
                    if rs.len() != h.n_cells() as usize || !h.is_poset() {
                        report.push(
                            "carrier-shape",
                            format!("hom({},{})", b.objects[x as usize], b.objects[y as usize]),
                            "relation table mismatch",
                        );
                        return;
                    }
                    if let HomCat::Poset(p) = h {
                        for i in 0..rs.len() {
                            for j in 0..rs.len() {
                                let subset = (0..elems[x as usize].len()).all(|a| {
                                    (0..elems[y as usize].len())
                                        .all(|c| !rs[i].get(a, c) || rs[j].get(a, c))
                                });
                                if p.leq.get(i, j) != subset {
                                    report.push(
                                        "carrier-order",
                                        format!(
                                            "hom({},{}) cells {} vs {}",
                                            b.objects[x as usize],
                                            b.objects[y as usize],
                                            h.cell_id(i as u32),
                                            h.cell_id(j as u32)
                                        ),
                                        "stored order disagrees with inclusion",
                                    );
                                }
                            }
                        }
                    }
                }
            }
            for x in 0..n {
                let idr = &rels[b.hix(x, x)][b.id1[x as usize] as usize];
                let k = elems[x as usize].len();
                let diagonal = (0..k).all(|a| (0..k).all(|c| idr.get(a, c) == (a == c)));
                if !diagonal {
                    report.push(
                        "carrier-identity",
                        b.objects[x as usize].clone(),
                        "identity 1-cell is not the diagonal relation",
                    );
                }
            }
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let rf = &rels[b.hix(x, y)];
                        let rg = &rels[b.hix(y, z)];
                        let rc = &rels[b.hix(x, z)];
                        let (kx, ky, kz) = (
                            elems[x as usize].len(),
                            elems[y as usize].len(),
                            elems[z as usize].len(),
                        );
                        for g in b.cells(y, z) {
                            for f in b.cells(x, y) {
                                let c = b.c1(x, y, z, g, f);
                                let ok = (0..kx).all(|a| {
                                    (0..kz).all(|w| {
                                        let composed = (0..ky).any(|v| {
                                            rf[f as usize].get(a, v) && rg[g as usize].get(v, w)
                                        });
                                        composed == rc[c as usize].get(a, w)
                                    })
                                });
                                if !ok {
                                    report.push(
                                        "carrier-composition",
                                        format!(
                                            "({}, {})",
                                            b.cell_label(y, z, g),
                                            b.cell_label(x, y, f)
                                        ),
                                        "composition table disagrees with relational composition",
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Full bicategory axiom check.
///
/// The report lists violations in canonical order. When a verified carrier is
/// present, associativity/unity of 1-cell composition are certified through
/// it; otherwise they are brute-forced over all composable tuples.
pub fn check_bicategory(b: &Bicat) -> Result<CheckReport, TableError> {
    validate_shape(b)?;
    let n = b.n_objects();
    let mut report = CheckReport::new(format!("bicategory with {} objects", n));
    for x in 0..n {
        for y in 0..n {
            let sub = b.hom(x, y).check()?;
            for v in sub.violations {
                report.push(
                    &v.law,
                    format!(
                        "hom({},{}) {}",
                        b.objects[x as usize], b.objects[y as usize], v.at
                    ),
                    v.detail,
                );
            }
        }
    }
    if !report.passed() {
        return Ok(report);
    }

    // Functoriality of horizontal composition on 2-cells.
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                check_hcomp_functor(b, x, y, z, &mut report);
            }
        }
    }

    // Strictness or explicit coherence.
    let carrier_ok = if b.carrier.is_some() {
        let before = report.violations.len();
        check_carrier(b, &mut report);
        report.violations.len() == before
    } else {
        false
    };
    match &b.coherence {
        Coherence::Strict => {
            for x in 0..n {
                for y in 0..n {
                    for f in b.cells(x, y) {
                        if b.c1(x, y, y, b.id1[y as usize], f) != f {
                            report.push("strict-unit-left", b.cell_label(x, y, f), "Id∘f ≠ f");
                        }
                        if b.c1(x, x, y, f, b.id1[x as usize]) != f {
                            report.push("strict-unit-right", b.cell_label(x, y, f), "f∘Id ≠ f");
                        }
                    }
                }
            }
            if !carrier_ok {
                // No verified carrier: brute-force associativity of comp1.
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            for w in 0..n {
                                for h in b.cells(z, w) {
                                    for g in b.cells(y, z) {
                                        let hg = b.c1(y, z, w, h, g);
                                        for f in b.cells(x, y) {
                                            let l = b.c1(x, y, w, hg, f);
                                            let gf = b.c1(x, y, z, g, f);
                                            let r = b.c1(x, z, w, h, gf);
                                            if l != r {
                                                report.push(
                                                    "strict-associativity",
                                                    format!(
                                                        "({}, {}, {})",
                                                        b.cell_label(z, w, h),
                                                        b.cell_label(y, z, g),
                                                        b.cell_label(x, y, f)
                                                    ),
                                                    "(h∘g)∘f ≠ h∘(g∘f)",
                                                );
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Coherence::Cells { .. } => {
            check_coherence_cells(b, &mut report);
        }
    }
    Ok(report)
}

fn check_hcomp_functor(b: &Bicat, x: ObjIx, y: ObjIx, z: ObjIx, report: &mut CheckReport) {
    let hf = b.hom(x, y);
    let hg = b.hom(y, z);
    let ht = b.hom(x, z);
    match &b.comp2[b.tix(x, y, z)] {
        Comp2::Implicit => {
            // Separate monotonicity in each argument suffices by transitivity.
            for psi in hg.two_cells() {
                if psi.src == psi.tgt {
                    continue;
                }
                for f in 0..hf.n_cells() {
                    let a = b.c1(x, y, z, psi.src, f);
                    let c = b.c1(x, y, z, psi.tgt, f);
                    if !ht.two_exists(TwoCell::new(a, c, 0)) {
                        report.push(
                            "hcomp-monotone",
                            format!("({} ∗ {})", hg.two_label(psi), b.cell_label(x, y, f)),
                            "whiskering does not preserve the 2-cell order",
                        );
                    }
                }
            }
            for phi in hf.two_cells() {
                if phi.src == phi.tgt {
                    continue;
                }
                for g in 0..hg.n_cells() {
                    let a = b.c1(x, y, z, g, phi.src);
                    let c = b.c1(x, y, z, g, phi.tgt);
                    if !ht.two_exists(TwoCell::new(a, c, 0)) {
                        report.push(
                            "hcomp-monotone",
                            format!("({} ∗ {})", b.cell_label(y, z, g), hf.two_label(phi)),
                            "whiskering does not preserve the 2-cell order",
                        );
                    }
                }
            }
        }
        Comp2::Table(_) => {
            let two_g = hg.two_cells();
            let two_f = hf.two_cells();
            // typing + identity preservation
            for &psi in &two_g {
                for &phi in &two_f {
                    let r = b.c2(x, y, z, psi, phi);
                    let want_src = b.c1(x, y, z, psi.src, phi.src);
                    let want_tgt = b.c1(x, y, z, psi.tgt, phi.tgt);
                    if r.src != want_src || r.tgt != want_tgt || !ht.two_exists(r) {
                        report.push(
                            "hcomp-typing",
                            format!("({} ∗ {})", hg.two_label(psi), hf.two_label(phi)),
                            "horizontal composite has wrong endpoints",
                        );
                    }
                }
            }
            for g in 0..hg.n_cells() {
                for f in 0..hf.n_cells() {
                    let r = b.c2(x, y, z, hg.id2(g), hf.id2(f));
                    if !ht.is_id2(r) {
                        report.push(
                            "hcomp-identity",
                            format!("({}, {})", b.cell_label(y, z, g), b.cell_label(x, y, f)),
                            "id ∗ id is not an identity 2-cell",
                        );
                    }
                }
            }
            // interchange with vertical composition
            for &p2 in &two_g {
                for &p1 in &two_g {
                    if p1.tgt != p2.src {
                        continue;
                    }
                    let pv = hg.vcomp(p2, p1).expect("checked hom");
                    for &q2 in &two_f {
                        for &q1 in &two_f {
                            if q1.tgt != q2.src {
                                continue;
                            }
                            let qv = hf.vcomp(q2, q1).expect("checked hom");
                            let lhs = b.c2(x, y, z, pv, qv);
                            let first = b.c2(x, y, z, p1, q1);
                            let second = b.c2(x, y, z, p2, q2);
                            let rhs = ht.vcomp(second, first);
                            if rhs != Some(lhs) {
                                report.push(
                                    "hcomp-interchange",
                                    format!(
                                        "(({}, {}), ({}, {}))",
                                        hg.two_label(p2),
                                        hg.two_label(p1),
                                        hf.two_label(q2),
                                        hf.two_label(q1)
                                    ),
                                    "functoriality of ∗ fails",
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

fn check_coherence_cells(b: &Bicat, report: &mut CheckReport) {
    let n = b.n_objects();
    // Invertibility first, reported separately from axiom failures.
    for x in 0..n {
        for y in 0..n {
            for f in b.cells(x, y) {
                let l = b.lunitor(x, y, f);
                let idy = b.id1[y as usize];
                if l.src != b.c1(x, y, y, idy, f) || l.tgt != f {
                    report.push("unitor-typing", b.cell_label(x, y, f), "λ has wrong endpoints");
                } else if !b.hom(x, y).is_invertible(l) {
                    report.push(
                        "non-invertible-coherence-cell",
                        format!("λ at {}", b.cell_label(x, y, f)),
                        "left unitor not invertible",
                    );
                }
                let r = b.runitor(x, y, f);
                let idx = b.id1[x as usize];
                if r.src != b.c1(x, x, y, f, idx) || r.tgt != f {
                    report.push("unitor-typing", b.cell_label(x, y, f), "ρ has wrong endpoints");
                } else if !b.hom(x, y).is_invertible(r) {
                    report.push(
                        "non-invertible-coherence-cell",
                        format!("ρ at {}", b.cell_label(x, y, f)),
                        "right unitor not invertible",
                    );
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    for h in b.cells(z, w) {
                        for g in b.cells(y, z) {
                            for f in b.cells(x, y) {
                                let a = b.assoc(x, y, z, w, h, g, f);
                                let hg = b.c1(y, z, w, h, g);
                                let gf = b.c1(x, y, z, g, f);
                                let lsrc = b.c1(x, y, w, hg, f);
                                let ltgt = b.c1(x, z, w, h, gf);
                                if a.src != lsrc || a.tgt != ltgt {
                                    report.push(
                                        "associator-typing",
                                        format!(
                                            "({}, {}, {})",
                                            b.cell_label(z, w, h),
                                            b.cell_label(y, z, g),
                                            b.cell_label(x, y, f)
                                        ),
                                        "α has wrong endpoints",
                                    );
                                } else if !b.hom(x, w).is_invertible(a) {
                                    report.push(
                                        "non-invertible-coherence-cell",
                                        format!(
                                            "α at ({}, {}, {})",
                                            b.cell_label(z, w, h),
                                            b.cell_label(y, z, g),
                                            b.cell_label(x, y, f)
                                        ),
                                        "associator not invertible",
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if !report.passed() {
        return;
    }
    // Naturality of α in each argument and of the unitors.
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let t_h = b.hom(z, w).two_cells();
                    let t_g = b.hom(y, z).two_cells();
                    let t_f = b.hom(x, y).two_cells();
                    for &th in &t_h {
                        for &tg in &t_g {
                            for &tf in &t_f {
                                let a_src = b.assoc(x, y, z, w, th.src, tg.src, tf.src);
                                let a_tgt = b.assoc(x, y, z, w, th.tgt, tg.tgt, tf.tgt);
                                let left = b.c2(x, y, w, b.c2(y, z, w, th, tg), tf);
                                let right = b.c2(x, z, w, th, b.c2(x, y, z, tg, tf));
                                let lhs = b.hom(x, w).vcomp(a_tgt, left);
                                let rhs = b.hom(x, w).vcomp(right, a_src);
                                if lhs != rhs || lhs.is_none() {
                                    report.push(
                                        "associator-naturality",
                                        format!(
                                            "({}, {}, {})",
                                            b.hom(z, w).two_label(th),
                                            b.hom(y, z).two_label(tg),
                                            b.hom(x, y).two_label(tf)
                                        ),
                                        "α is not natural",
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for t in b.hom(x, y).two_cells() {
                let idy = b.hom(y, y).id2(b.id1[y as usize]);
                let lifted = b.c2(x, y, y, idy, t);
                let lhs = b.hom(x, y).vcomp(b.lunitor(x, y, t.tgt), lifted);
                let rhs = b.hom(x, y).vcomp(t, b.lunitor(x, y, t.src));
                if lhs != rhs || lhs.is_none() {
                    report.push(
                        "unitor-naturality",
                        format!("λ at {}", b.hom(x, y).two_label(t)),
                        "λ is not natural",
                    );
                }
                let idx = b.hom(x, x).id2(b.id1[x as usize]);
                let lifted_r = b.c2(x, x, y, t, idx);
                let lhs_r = b.hom(x, y).vcomp(b.runitor(x, y, t.tgt), lifted_r);
                let rhs_r = b.hom(x, y).vcomp(t, b.runitor(x, y, t.src));
                if lhs_r != rhs_r || lhs_r.is_none() {
                    report.push(
                        "unitor-naturality",
                        format!("ρ at {}", b.hom(x, y).two_label(t)),
                        "ρ is not natural",
                    );
                }
            }
        }
    }
    if !report.passed() {
        return;
    }
    // Unity axiom: (g ∗ λ_f) ∘ α_{g,Id,f} = ρ_g ∗ f for every composable pair.
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for g in b.cells(y, z) {
                    for f in b.cells(x, y) {
                        let a = b.assoc(x, y, y, z, g, b.id1[y as usize], f);
                        let lam = b.whisk_l(x, y, z, g, b.lunitor(x, y, f));
                        let rho = b.whisk_r(x, y, z, b.runitor(y, z, g), f);
                        let lhs = b.hom(x, z).vcomp(lam, a);
                        if lhs != Some(rho) {
                            report.push(
                                "unity",
                                format!("({}, {})", b.cell_label(y, z, g), b.cell_label(x, y, f)),
                                "triangle (g∗λ)∘α ≠ ρ∗f fails",
                            );
                        }
                    }
                }
            }
        }
    }
    // Pentagon axiom for every composable quadruple.
    for v in 0..n {
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for i in b.cells(y, z) {
                            for h in b.cells(x, y) {
                                for g in b.cells(w, x) {
                                    for f in b.cells(v, w) {
                                        let ih = b.c1(x, y, z, i, h);
                                        let hg = b.c1(w, x, y, h, g);
                                        let gf = b.c1(v, w, x, g, f);
                                        let top1 = b.assoc(v, w, x, z, ih, g, f);
                                        let top2 = b.assoc(v, x, y, z, i, h, gf);
                                        let lhs = b.hom(v, z).vcomp(top2, top1);
                                        let bot1 = b.whisk_r(
                                            v,
                                            w,
                                            z,
                                            b.assoc(w, x, y, z, i, h, g),
                                            f,
                                        );
                                        let bot2 = b.assoc(v, w, y, z, i, hg, f);
                                        let bot3 = b.whisk_l(
                                            v,
                                            y,
                                            z,
                                            i,
                                            b.assoc(v, w, x, y, h, g, f),
                                        );
                                        let rhs = b
                                            .hom(v, z)
                                            .vcomp(bot2, bot1)
                                            .and_then(|m| b.hom(v, z).vcomp(bot3, m));
                                        if lhs != rhs || lhs.is_none() {
                                            report.push(
                                                "pentagon",
                                                format!(
                                                    "({}, {}, {}, {})",
                                                    b.cell_label(y, z, i),
                                                    b.cell_label(x, y, h),
                                                    b.cell_label(w, x, g),
                                                    b.cell_label(v, w, f)
                                                ),
                                                "pentagon fails",
                                            );
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
