//! Deterministic builders for the test instances: cocycle deloopings,
//! finite-relation universes, and finite-poset universes with their
//! completion monads.
//!
//! Generation is deterministic: objects carry canonical names (sorted), so
//! the same parameters always serialize to identical bytes.

use crate::bicat_core::{
    Bicat, BitMat, Carrier, CellIx, Coherence, Comp2, HomCat, ObjIx, PosetHom, TableHom, TwoCell,
};
use crate::cell_calculus::{
    post_whisker, pre_whisker, vcomp_trans, CompositorCells, Modif, PsFun, PsTrans, TwoMap,
    UnitCells,
};
use crate::fincat::FiniteCategory;
use crate::monad_biadj::{KZMonad, Pseudomonad};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum InstanceError {
    #[error("not a 3-cocycle: pentagon fails at {0}")]
    NotACocycle(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

// ---------------------------------------------------------------------------
// Cocycle deloopings
// ---------------------------------------------------------------------------

/// Parameters for a one-object bicategory with 1-cells a finite monoid and
/// endo-2-cells a torsor over an abelian scalar group, associator given by a
/// normalized 3-cochain ω.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeloopSpec {
    pub monoid: Vec<String>,
    /// mult[i][j] = index of product (i acts after j under composition).
    pub mult: Vec<Vec<u32>>,
    pub monoid_unit: u32,
    pub scalars: Vec<String>,
    pub smult: Vec<Vec<u32>>,
    pub scalar_unit: u32,
    /// omega[h][g][f] = scalar index of α_{h,g,f}.
    pub omega: Vec<Vec<Vec<u32>>>,
}

impl DeloopSpec {
    /// The Z/2 delooping with scalar group Z/2 and ω(g,g,g) = −1 (the
    /// nontrivial normalized 3-cocycle), all other entries trivial.
    pub fn z2_nontrivial() -> DeloopSpec {
        let mut omega = vec![vec![vec![0u32; 2]; 2]; 2];
        omega[1][1][1] = 1;
        DeloopSpec {
            monoid: vec!["e".into(), "g".into()],
            mult: vec![vec![0, 1], vec![1, 0]],
            monoid_unit: 0,
            scalars: vec!["s+1".into(), "s-1".into()],
            smult: vec![vec![0, 1], vec![1, 0]],
            scalar_unit: 0,
            omega,
        }
    }

    /// Same delooping with the trivial cocycle.
    pub fn z2_trivial() -> DeloopSpec {
        let mut d = DeloopSpec::z2_nontrivial();
        d.omega[1][1][1] = 0;
        d
    }
}

/// Build the delooping without the cocycle gate (used by mutation tests).
pub fn deloop_raw(spec: &DeloopSpec) -> Result<Arc<Bicat>, InstanceError> {
    let n = spec.monoid.len();
    let s = spec.scalars.len();
    if spec.mult.len() != n
        || spec.mult.iter().any(|r| r.len() != n || r.iter().any(|&v| v as usize >= n))
    {
        return Err(InstanceError::InvalidParameters("monoid table malformed".into()));
    }
    if spec.smult.len() != s
        || spec.smult.iter().any(|r| r.len() != s || r.iter().any(|&v| v as usize >= s))
    {
        return Err(InstanceError::InvalidParameters("scalar table malformed".into()));
    }
    for i in 0..s {
        for j in 0..s {
            if spec.smult[i][j] != spec.smult[j][i] {
                return Err(InstanceError::InvalidParameters("scalar group not abelian".into()));
            }
        }
    }
    let e = spec.monoid_unit as usize;
    // Cell names must sort like their indices for table stability.
    let mut cells: Vec<(String, u32)> = spec
        .monoid
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i as u32))
        .collect();
    cells.sort();
    let cell_of: Vec<u32> = {
        // original monoid index -> sorted cell index
        let mut v = vec![0u32; n];
        for (pos, (_, orig)) in cells.iter().enumerate() {
            v[*orig as usize] = pos as u32;
        }
        v
    };
    let orig_of: Vec<u32> = cells.iter().map(|(_, o)| *o).collect();
    let mut sorted_scalars: Vec<(String, u32)> = spec
        .scalars
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i as u32))
        .collect();
    sorted_scalars.sort();
    // 2-cell morphism ids: 2[cell|scalar]
    let mor_id = |cell: u32, scal_orig: u32| {
        format!("2[{}|{}]", cells[cell as usize].0, spec.scalars[scal_orig as usize])
    };
    let mut morphisms: Vec<(String, String, String)> = Vec::new();
    for (cname, _) in &cells {
        for (sname, sorig) in &sorted_scalars {
            let _ = sorig;
            morphisms.push((format!("2[{cname}|{sname}]"), cname.clone(), cname.clone()));
        }
    }
    let morphisms_ref: Vec<(&str, &str, &str)> = morphisms
        .iter()
        .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
        .collect();
    let identity: Vec<(String, String)> = cells
        .iter()
        .map(|(cname, corig)| {
            let _ = corig;
            (cname.clone(), format!("2[{cname}|{}]", spec.scalars[spec.scalar_unit as usize]))
        })
        .collect();
    let identity_ref: Vec<(&str, &str)> =
        identity.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut comp: Vec<(String, String, String)> = Vec::new();
    for (cname, _) in &cells {
        for s2 in 0..s as u32 {
            for s1 in 0..s as u32 {
                comp.push((
                    mor_id(
                        cells.iter().position(|(c, _)| c == cname).unwrap() as u32,
                        s2,
                    ),
                    mor_id(
                        cells.iter().position(|(c, _)| c == cname).unwrap() as u32,
                        s1,
                    ),
                    mor_id(
                        cells.iter().position(|(c, _)| c == cname).unwrap() as u32,
                        spec.smult[s2 as usize][s1 as usize],
                    ),
                ));
            }
        }
    }
    let comp_ref: Vec<(&str, &str, &str)> = comp
        .iter()
        .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
        .collect();
    let objects: Vec<&str> = cells.iter().map(|(c, _)| c.as_str()).collect();
    let cat = FiniteCategory::from_tables(&objects, &morphisms_ref, &identity_ref, &comp_ref)
        .map_err(|e| InstanceError::InvalidParameters(e.to_string()))?;
    let hom = HomCat::Table(TableHom::new(cat));
    // 1-cell composition: monoid multiplication through the index remaps.
    let mut comp1_table = Vec::with_capacity(n * n);
    for g in 0..n {
        for f in 0..n {
            let prod = spec.mult[orig_of[g] as usize][orig_of[f] as usize];
            comp1_table.push(cell_of[prod as usize]);
        }
    }
    // 2-cell horizontal composition: multiply cells and scalars.
    let two_at = |i: usize| -> (u32, u32) {
        // canonical 2-cell enumeration = morphism order = (cell, scalar name)
        let per = s;
        ((i / per) as u32, (i % per) as u32) // (cell index, sorted-scalar rank)
    };
    let scal_orig_of: Vec<u32> = sorted_scalars.iter().map(|(_, o)| *o).collect();
    let scal_rank: Vec<u32> = {
        let mut v = vec![0u32; s];
        for (rank, (_, orig)) in sorted_scalars.iter().enumerate() {
            v[*orig as usize] = rank as u32;
        }
        v
    };
    let n2 = n * s;
    let mut comp2_table = Vec::with_capacity(n2 * n2);
    for gi in 0..n2 {
        let (gc, gs) = two_at(gi);
        for fi in 0..n2 {
            let (fc, fs) = two_at(fi);
            let prod = spec.mult[orig_of[gc as usize] as usize][orig_of[fc as usize] as usize];
            let sc = spec.smult[scal_orig_of[gs as usize] as usize]
                [scal_orig_of[fs as usize] as usize];
            comp2_table.push(TwoCell::new(
                cell_of[prod as usize],
                cell_of[prod as usize],
                scal_rank[sc as usize],
            ));
        }
    }
    let mut assoc_tab = Vec::with_capacity(n * n * n);
    for h in 0..n {
        for g in 0..n {
            for f in 0..n {
                let hg = spec.mult[orig_of[h] as usize][orig_of[g] as usize];
                let hgf = spec.mult[hg as usize][orig_of[f] as usize];
                let w = spec.omega[orig_of[h] as usize][orig_of[g] as usize][orig_of[f] as usize];
                assoc_tab.push(TwoCell::new(
                    cell_of[hgf as usize],
                    cell_of[hgf as usize],
                    scal_rank[w as usize],
                ));
            }
        }
    }
    let unit_cells: Vec<TwoCell> = (0..n)
        .map(|f| TwoCell::new(f as u32, f as u32, scal_rank[spec.scalar_unit as usize]))
        .collect();
    let mut assoc = HashMap::new();
    assoc.insert((0u32, 0u32, 0u32, 0u32), assoc_tab);
    let b = Bicat {
        objects: vec!["pt".to_string()],
        homs: vec![hom],
        id1: vec![cell_of[e]],
        comp1: vec![comp1_table],
        comp2: vec![Comp2::Table(comp2_table)],
        coherence: Coherence::Cells {
            assoc,
            lunit: vec![unit_cells.clone()],
            runit: vec![unit_cells],
        },
        carrier: None,
    };
    Ok(Arc::new(b))
}

/// Build a cocycle delooping, rejecting non-normalized tables and tables
/// whose ω is not a 3-cocycle.
pub fn deloop_cocycle(spec: &DeloopSpec) -> Result<Arc<Bicat>, InstanceError> {
    let e = spec.monoid_unit as usize;
    for h in 0..spec.monoid.len() {
        for g in 0..spec.monoid.len() {
            for f in 0..spec.monoid.len() {
                if (h == e || g == e || f == e) && spec.omega[h][g][f] != spec.scalar_unit {
                    return Err(InstanceError::InvalidParameters(
                        "ω not normalized at the unit".into(),
                    ));
                }
            }
        }
    }
    let b = deloop_raw(spec)?;
    let report = crate::bicat_core::check_bicategory(&b)
        .map_err(|e| InstanceError::InvalidParameters(e.to_string()))?;
    if let Some(v) = report.first_of("pentagon") {
        return Err(InstanceError::NotACocycle(v.at.clone()));
    }
    if !report.passed() {
        return Err(InstanceError::InvalidParameters(format!(
            "delooping fails {}",
            report.violations[0].law
        )));
    }
    Ok(b)
}

// ---------------------------------------------------------------------------
// Finite relations
// ---------------------------------------------------------------------------

/// The bicategory of relations over the given finite sets: 1-cells are all
/// relations, 2-cells the inclusion order, composition relational.
pub fn finrel(sizes: &[usize]) -> Arc<Bicat> {
    let n = sizes.len();
    let mut objects: Vec<String> = sizes.iter().map(|&k| format!("S{k}")).collect();
    // disambiguate duplicates deterministically
    let mut seen: HashMap<String, usize> = HashMap::new();
    for o in objects.iter_mut() {
        let c = seen.entry(o.clone()).or_insert(0);
        if *c > 0 {
            *o = format!("{o}#{c}");
        }
        *c += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| objects[i].cmp(&objects[j]));
    let objects_sorted: Vec<String> = order.iter().map(|&i| objects[i].clone()).collect();
    let sizes_sorted: Vec<usize> = order.iter().map(|&i| sizes[i]).collect();

    let rel_name = |bits: &[bool]| -> String {
        let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        format!("r[{s}]")
    };
    // relations of hom(x,y), in bit-string order (lexicographic by name)
    let rels_of = |kx: usize, ky: usize| -> Vec<Vec<bool>> {
        let bits = kx * ky;
        (0..(1usize << bits))
            .map(|mask| (0..bits).map(|i| mask & (1 << (bits - 1 - i)) != 0).collect())
            .collect()
    };
    let mut homs = Vec::with_capacity(n * n);
    let mut rel_store: Vec<Vec<Vec<bool>>> = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let rels = rels_of(sizes_sorted[x], sizes_sorted[y]);
            let cells: Vec<String> = rels.iter().map(|r| rel_name(r)).collect();
            let m = cells.len();
            let mut leq = BitMat::new(m);
            for i in 0..m {
                for j in 0..m {
                    if rels[i].iter().zip(&rels[j]).all(|(&a, &b)| !a || b) {
                        leq.set(i, j, true);
                    }
                }
            }
            homs.push(HomCat::Poset(PosetHom { cells, leq }));
            rel_store.push(rels);
        }
    }
    let compose = |kx: usize, ky: usize, kz: usize, g: &[bool], f: &[bool]| -> Vec<bool> {
        let mut out = vec![false; kx * kz];
        for a in 0..kx {
            for w in 0..kz {
                out[a * kz + w] =
                    (0..ky).any(|v| f[a * ky + v] && g[v * kz + w]);
            }
        }
        out
    };
    let mut comp1 = Vec::with_capacity(n * n * n);
    let mut comp2 = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let rf = &rel_store[x * n + y];
                let rg = &rel_store[y * n + z];
                let idx: HashMap<Vec<bool>, u32> = rel_store[x * n + z]
                    .iter()
                    .enumerate()
                    .map(|(i, r)| (r.clone(), i as u32))
                    .collect();
                let mut table = Vec::with_capacity(rg.len() * rf.len());
                for g in rg {
                    for f in rf {
                        table.push(idx[&compose(sizes_sorted[x], sizes_sorted[y], sizes_sorted[z], g, f)]);
                    }
                }
                comp1.push(table);
                comp2.push(Comp2::Implicit);
            }
        }
    }
    let mut id1 = Vec::with_capacity(n);
    for x in 0..n {
        let k = sizes_sorted[x];
        let mut diag = vec![false; k * k];
        for a in 0..k {
            diag[a * k + a] = true;
        }
        let pos = rel_store[x * n + x].iter().position(|r| *r == diag).unwrap();
        id1.push(pos as u32);
    }
    let elems: Vec<Vec<String>> = sizes_sorted
        .iter()
        .map(|&k| (0..k).map(|i| format!("a{i}")).collect())
        .collect();
    let mut rels_bits = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let (kx, ky) = (sizes_sorted[x], sizes_sorted[y]);
            let mats: Vec<BitMat> = rel_store[x * n + y]
                .iter()
                .map(|r| {
                    let mut m = BitMat::new_rect(kx.max(1), ky.max(1));
                    for a in 0..kx {
                        for b in 0..ky {
                            m.set(a, b, r[a * ky + b]);
                        }
                    }
                    m
                })
                .collect();
            rels_bits.push(mats);
        }
    }
    Arc::new(Bicat {
        objects: objects_sorted,
        homs,
        id1,
        comp1,
        comp2,
        coherence: Coherence::Strict,
        carrier: Some(Carrier::Relations {
            elems,
            rels: rels_bits,
        }),
    })
}

// ---------------------------------------------------------------------------
// Finite posets and completion monads
// ---------------------------------------------------------------------------

/// A finite poset with named elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset {
    pub elems: Vec<String>,
    pub leq: BitMat,
}

impl Poset {
    pub fn chain(k: usize) -> Poset {
        let mut leq = BitMat::new(k);
        for i in 0..k {
            for j in i..k {
                leq.set(i, j, true);
            }
        }
        Poset {
            elems: (0..k).map(|i| format!("c{i}")).collect(),
            leq,
        }
    }

    pub fn antichain(k: usize) -> Poset {
        let mut leq = BitMat::new(k);
        for i in 0..k {
            leq.set(i, i, true);
        }
        Poset {
            elems: (0..k).map(|i| format!("a{i}")).collect(),
            leq,
        }
    }

    /// Two incomparable elements below a chain of `k` tops.
    pub fn vee(k: usize) -> Poset {
        let n = 2 + k;
        let mut leq = BitMat::new(n);
        for i in 0..n {
            leq.set(i, i, true);
        }
        for t in 2..n {
            leq.set(0, t, true);
            leq.set(1, t, true);
            for u in t..n {
                leq.set(t, u, true);
            }
        }
        Poset {
            elems: (0..n).map(|i| format!("v{i}")).collect(),
            leq,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn has_top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|i| self.leq.get(i, t)))
    }

    /// Adjoin a new greatest element (always, even if a top exists).
    pub fn adjoin_top(&self) -> Poset {
        let k = self.len();
        let mut leq = BitMat::new(k + 1);
        for i in 0..k {
            for j in 0..k {
                if self.leq.get(i, j) {
                    leq.set(i, j, true);
                }
            }
        }
        for i in 0..=k {
            leq.set(i, k, true);
        }
        leq.set(k, k, true);
        let mut elems = self.elems.clone();
        elems.push(format!("t{k}"));
        Poset { elems, leq }
    }

    /// Canonical key: minimal relation bit string over all relabelings.
    pub fn canonical_key(&self) -> String {
        let k = self.len();
        let mut best: Option<Vec<bool>> = None;
        let mut perm: Vec<usize> = (0..k).collect();
        loop {
            let mut bits = Vec::with_capacity(k * k);
            for i in 0..k {
                for j in 0..k {
                    bits.push(self.leq.get(perm[i], perm[j]));
                }
            }
            if best.as_ref().map_or(true, |b| bits < *b) {
                best = Some(bits);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let bits = best.unwrap_or_default();
        let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        format!("P{k:02}.{s}")
    }

    /// Relabel to the canonical form; returns the new poset plus the map
    /// original index -> canonical index.
    pub fn canonicalize(&self) -> (Poset, Vec<u32>) {
        let k = self.len();
        let mut best: Option<(Vec<bool>, Vec<usize>)> = None;
        let mut perm: Vec<usize> = (0..k).collect();
        loop {
            let mut bits = Vec::with_capacity(k * k);
            for i in 0..k {
                for j in 0..k {
                    bits.push(self.leq.get(perm[i], perm[j]));
                }
            }
            if best.as_ref().map_or(true, |(b, _)| bits < *b) {
                best = Some((bits, perm.clone()));
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let (bits, perm) = best.unwrap_or((vec![], vec![]));
        let mut leq = BitMat::new(k);
        for i in 0..k {
            for j in 0..k {
                if bits[i * k + j] {
                    leq.set(i, j, true);
                }
            }
        }
        // perm[i] = original index placed at canonical position i
        let mut to_canonical = vec![0u32; k];
        for (i, &orig) in perm.iter().enumerate() {
            to_canonical[orig] = i as u32;
        }
        (
            Poset {
                elems: (0..k).map(|i| format!("e{i}")).collect(),
                leq,
            },
            to_canonical,
        )
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Which completion a poset universe carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompletionKind {
    /// Always adjoin a new greatest element.
    Top,
    /// Adjoin a greatest element only when none exists (idempotent; total on
    /// a closed universe).
    TopIdempotent,
    /// The identity monad.
    Identity,
}

/// A materialized poset universe with the data needed to present the
/// completion monad over it.
#[derive(Debug, Clone)]
pub struct PosUniverse {
    pub bicat: Arc<Bicat>,
    pub posets: Vec<Poset>,
    pub kind: CompletionKind,
    /// X -> T X where the image is materialized.
    pub t_obj: HashMap<ObjIx, ObjIx>,
    /// Elementwise unit X → T X.
    pub psi_elem: HashMap<ObjIx, Vec<u32>>,
    /// The greatest element of T X.
    pub top_elem: HashMap<ObjIx, u32>,
    /// Per hom: image vectors of the monotone-map 1-cells.
    pub maps: Vec<Vec<Vec<u32>>>,
}

fn monotone_maps(p: &Poset, q: &Poset) -> Vec<Vec<u32>> {
    let np = p.len();
    let nq = q.len();
    if np == 0 {
        return vec![vec![]];
    }
    if nq == 0 {
        return vec![];
    }
    // linear extension of p
    let mut indeg = vec![0usize; np];
    for i in 0..np {
        for j in 0..np {
            if i != j && p.leq.get(i, j) {
                indeg[j] += 1;
            }
        }
    }
    let mut order = Vec::with_capacity(np);
    let mut avail: Vec<usize> = (0..np).filter(|&i| indeg[i] == 0).collect();
    let mut indeg2 = indeg.clone();
    while let Some(v) = avail.pop() {
        order.push(v);
        for j in 0..np {
            if j != v && p.leq.get(v, j) {
                indeg2[j] -= 1;
                if indeg2[j] == 0 {
                    avail.push(j);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut img = vec![u32::MAX; np];
    fn dfs(
        k: usize,
        order: &[usize],
        p: &Poset,
        q: &Poset,
        img: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if k == order.len() {
            out.push(img.clone());
            return;
        }
        let v = order[k];
        'cand: for c in 0..q.len() as u32 {
            for &w in &order[..k] {
                if p.leq.get(w, v) && !q.leq.get(img[w] as usize, c as usize) {
                    continue 'cand;
                }
                if p.leq.get(v, w) && !q.leq.get(c as usize, img[w] as usize) {
                    continue 'cand;
                }
            }
            img[v] = c;
            dfs(k + 1, order, p, q, img, out);
            img[v] = u32::MAX;
        }
    }
    dfs(0, &order, p, q, &mut img, &mut out);
    out.sort();
    out
}

fn map_name(img: &[u32]) -> String {
    let parts: Vec<String> = img.iter().map(|v| format!("{v:02}")).collect();
    format!("m[{}]", parts.join(","))
}

/// Materialize the universe generated by the seeds under the chosen
/// completion, to the given depth, as a locally posetal bicategory with a
/// verified poset carrier.
pub fn finpos_universe(seeds: &[Poset], kind: CompletionKind, depth: usize) -> PosUniverse {
    // Collect canonical posets and the completion relation at the name level.
    let mut by_key: BTreeMap<String, Poset> = BTreeMap::new();
    let mut t_name: HashMap<String, String> = HashMap::new();
    let mut psi_name: HashMap<String, Vec<u32>> = HashMap::new();
    let mut top_name: HashMap<String, u32> = HashMap::new();
    let mut frontier: Vec<String> = Vec::new();
    for s in seeds {
        let (c, _) = s.canonicalize();
        let key = c.canonical_key();
        by_key.entry(key.clone()).or_insert(c);
        frontier.push(key);
    }
    frontier.sort();
    frontier.dedup();
    for _lvl in 0..depth {
        let mut next = Vec::new();
        for key in &frontier {
            if t_name.contains_key(key) {
                continue;
            }
            let p = by_key[key].clone();
            let (completed, psi, top) = match kind {
                CompletionKind::Top => {
                    let t = p.adjoin_top();
                    let (c, relabel) = t.canonicalize();
                    let psi: Vec<u32> = (0..p.len()).map(|i| relabel[i]).collect();
                    let top = relabel[p.len()];
                    (c, psi, top)
                }
                CompletionKind::TopIdempotent => match p.has_top() {
                    Some(t) => {
                        let psi: Vec<u32> = (0..p.len() as u32).collect();
                        (p.clone(), psi, t as u32)
                    }
                    None => {
                        let t = p.adjoin_top();
                        let (c, relabel) = t.canonicalize();
                        let psi: Vec<u32> = (0..p.len()).map(|i| relabel[i]).collect();
                        let top = relabel[p.len()];
                        (c, psi, top)
                    }
                },
                CompletionKind::Identity => {
                    let psi: Vec<u32> = (0..p.len() as u32).collect();
                    let top = 0u32; // unused marker; identity monad has no adjoined top
                    (p.clone(), psi, top)
                }
            };
            let ckey = completed.canonical_key();
            by_key.entry(ckey.clone()).or_insert(completed);
            t_name.insert(key.clone(), ckey.clone());
            psi_name.insert(key.clone(), psi);
            top_name.insert(key.clone(), top);
            next.push(ckey);
        }
        next.sort();
        next.dedup();
        frontier = next;
    }
    // Assemble the bicategory over the sorted object list.
    let names: Vec<String> = by_key.keys().cloned().collect();
    let posets: Vec<Poset> = names.iter().map(|k| by_key[k].clone()).collect();
    let n = names.len();
    let index: HashMap<String, ObjIx> = names
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i as ObjIx))
        .collect();
    let mut homs = Vec::with_capacity(n * n);
    let mut maps_store: Vec<Vec<Vec<u32>>> = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let maps = monotone_maps(&posets[x], &posets[y]);
            let cells: Vec<String> = maps.iter().map(|m| map_name(m)).collect();
            let m = cells.len();
            let mut leq = BitMat::new(m);
            let qy = &posets[y];
            for i in 0..m {
                'outer: for j in 0..m {
                    for a in 0..maps[i].len() {
                        if !qy.leq.get(maps[i][a] as usize, maps[j][a] as usize) {
                            continue 'outer;
                        }
                    }
                    leq.set(i, j, true);
                }
            }
            homs.push(HomCat::Poset(PosetHom { cells, leq }));
            maps_store.push(maps);
        }
    }
    let mut comp1 = Vec::with_capacity(n * n * n);
    let mut comp2 = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            let lookup: Vec<HashMap<&[u32], u32>> = Vec::new();
            let _ = lookup;
            for z in 0..n {
                let mf = &maps_store[x * n + y];
                let mg = &maps_store[y * n + z];
                let idx: HashMap<&[u32], u32> = maps_store[x * n + z]
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.as_slice(), i as u32))
                    .collect();
                let mut table = Vec::with_capacity(mg.len() * mf.len());
                for g in mg {
                    for f in mf {
                        let composed: Vec<u32> = f.iter().map(|&a| g[a as usize]).collect();
                        table.push(idx[composed.as_slice()]);
                    }
                }
                comp1.push(table);
                comp2.push(Comp2::Implicit);
            }
        }
    }
    let mut id1 = Vec::with_capacity(n);
    for x in 0..n {
        let ident: Vec<u32> = (0..posets[x].len() as u32).collect();
        let pos = maps_store[x * n + x]
            .iter()
            .position(|m| *m == ident)
            .expect("identity map present");
        id1.push(pos as u32);
    }
    let carrier = Carrier::Posets {
        elems: posets.iter().map(|p| p.elems.clone()).collect(),
        leq: posets.iter().map(|p| p.leq.clone()).collect(),
        maps: maps_store.clone(),
    };
    let bicat = Arc::new(Bicat {
        objects: names.clone(),
        homs,
        id1,
        comp1,
        comp2,
        coherence: Coherence::Strict,
        carrier: Some(carrier),
    });
    let mut t_obj = HashMap::new();
    let mut psi_elem = HashMap::new();
    let mut top_elem = HashMap::new();
    for (k, tk) in &t_name {
        if let (Some(&xi), Some(&ti)) = (index.get(k), index.get(tk)) {
            t_obj.insert(xi, ti);
            psi_elem.insert(xi, psi_name[k].clone());
            top_elem.insert(xi, top_name[k]);
        }
    }
    PosUniverse {
        bicat,
        posets,
        kind,
        t_obj,
        psi_elem,
        top_elem,
        maps: maps_store,
    }
}

impl PosUniverse {
    /// Object index of a poset, up to isomorphism.
    pub fn find(&self, p: &Poset) -> Option<ObjIx> {
        let key = p.canonical_key();
        self.bicat.object_index(&key)
    }

    /// Cell index of the monotone map with the given image vector.
    pub fn map_cell(&self, x: ObjIx, y: ObjIx, img: &[u32]) -> Option<CellIx> {
        let n = self.bicat.n_objects() as usize;
        self.maps[x as usize * n + y as usize]
            .iter()
            .position(|m| m == img)
            .map(|i| i as u32)
    }

    /// The completion's action on a 1-cell of hom(x, y).
    fn t_cell(&self, x: ObjIx, y: ObjIx, f: CellIx) -> CellIx {
        let n = self.bicat.n_objects() as usize;
        let img = &self.maps[x as usize * n + y as usize][f as usize];
        let tx = self.t_obj[&x];
        let ty = self.t_obj[&y];
        let psix = &self.psi_elem[&x];
        let psiy = &self.psi_elem[&y];
        let mut out = vec![u32::MAX; self.posets[tx as usize].len()];
        for (a, &pa) in psix.iter().enumerate() {
            out[pa as usize] = psiy[img[a] as usize];
        }
        let topx = self.top_elem[&x];
        if self.kind != CompletionKind::Identity {
            if out[topx as usize] == u32::MAX {
                out[topx as usize] = self.top_elem[&y];
            }
        }
        // idempotent case: the adjoined top may coincide with an existing
        // element, in which case every slot is already filled.
        for v in out.iter_mut() {
            if *v == u32::MAX {
                *v = self.top_elem[&y];
            }
        }
        self.map_cell(tx, ty, &out).expect("completion map exists")
    }
}

/// The completion pseudomonad of a universe (its pseudofunctor is partial at
/// the depth boundary when the completion strictly grows).
pub fn completion_monad(u: &PosUniverse) -> Pseudomonad {
    let b = &u.bicat;
    let mut dom: Vec<ObjIx> = u.t_obj.keys().copied().collect();
    dom.sort();
    let mut obj = HashMap::new();
    let mut cell1 = HashMap::new();
    let mut two = HashMap::new();
    for &x in &dom {
        obj.insert(x, u.t_obj[&x]);
    }
    for &x in &dom {
        for &y in &dom {
            let table: Vec<CellIx> = (0..b.hom(x, y).n_cells())
                .map(|f| u.t_cell(x, y, f))
                .collect();
            cell1.insert((x, y), table);
            two.insert((x, y), TwoMap::Implicit);
        }
    }
    let t = PsFun {
        src: b.clone(),
        tgt: b.clone(),
        dom: dom.clone(),
        obj,
        cell1,
        two,
        unit: UnitCells::Strict,
        compositor: CompositorCells::Strict,
    };
    // unit Ψ : Id ⇒ T
    let idb = PsFun::identity(b).restrict(&dom);
    let mut unit_comp = HashMap::new();
    for &x in &dom {
        let cell = u
            .map_cell(x, u.t_obj[&x], &u.psi_elem[&x])
            .expect("unit map exists");
        unit_comp.insert(x, cell);
    }
    let unit = mk_posetal_trans(idb, t.clone(), &dom, unit_comp);
    // mult Π : T² ⇒ T
    let mult_dom: Vec<ObjIx> = dom
        .iter()
        .copied()
        .filter(|x| dom.contains(&u.t_obj[x]))
        .collect();
    let t2 = t.compose(&t);
    let mut mult_comp = HashMap::new();
    for &x in &mult_dom {
        let tx = u.t_obj[&x];
        let t2x = u.t_obj[&tx];
        let psitx = &u.psi_elem[&tx];
        let mut img = vec![u32::MAX; u.posets[t2x as usize].len()];
        for (a, &pa) in psitx.iter().enumerate() {
            img[pa as usize] = a as u32;
        }
        for v in img.iter_mut() {
            if *v == u32::MAX {
                *v = u.top_elem[&x];
            }
        }
        let cell = u.map_cell(t2x, tx, &img).expect("multiplication map exists");
        mult_comp.insert(x, cell);
    }
    let mult = mk_posetal_trans(t2.restrict(&mult_dom), t.restrict(&mult_dom), &mult_dom, mult_comp);
    // β, η, π: posetal modifications with determined components.
    let beta_src = vcomp_trans(&mult, &pre_whisker(&unit, &t));
    let eta_src = vcomp_trans(&mult, &post_whisker(&t, &unit));
    let id_t = crate::cell_calculus::id_trans(&t);
    let beta = mk_posetal_modif(&beta_src, &id_t);
    let eta = mk_posetal_modif(&eta_src, &id_t);
    let pi_src = vcomp_trans(&mult, &post_whisker(&t, &mult));
    let pi_tgt = vcomp_trans(&mult, &pre_whisker(&mult, &t));
    let pi = mk_posetal_modif(&pi_src, &pi_tgt);
    Pseudomonad {
        t,
        mult,
        unit,
        beta,
        eta,
        pi,
    }
}

/// The completion monad as a KZ-monad: adds μ : Ψ_T ⇛ T(Ψ) and the
/// adjunction units for Π ⊣ T(Ψ).
pub fn top_completion(u: &PosUniverse) -> KZMonad {
    let monad = completion_monad(u);
    let b = monad.bicat().clone();
    let mu_src = pre_whisker(&monad.unit, &monad.t);
    let mu_tgt = post_whisker(&monad.t, &monad.unit);
    let mu = mk_posetal_modif(&mu_src, &mu_tgt);
    let mut adj_unit = HashMap::new();
    for &x in &monad.mult.dom {
        let tx = monad.t.o(x);
        let t2x = monad.t.o(tx);
        let r = monad.t.c(x, tx, monad.unit.at(x)); // T(Ψ_X)
        let l = monad.mult.at(x);
        let rl = b.c1(t2x, tx, t2x, r, l);
        adj_unit.insert(x, TwoCell::new(b.id1[t2x as usize], rl, 0));
    }
    KZMonad {
        monad,
        mu,
        adj_unit,
    }
}

/// A transformation over a locally posetal target: naturality cells are the
/// determined order cells.
pub fn mk_posetal_trans(
    f: PsFun,
    g: PsFun,
    dom: &[ObjIx],
    comp: HashMap<ObjIx, CellIx>,
) -> PsTrans {
    let b = f.tgt.clone();
    let mut nat = HashMap::new();
    for &x in dom {
        for &y in dom {
            for k in 0..f.src.hom(x, y).n_cells() {
                let src = b.c1(f.o(x), g.o(x), g.o(y), g.c(x, y, k), comp[&x]);
                let tgt = b.c1(f.o(x), f.o(y), g.o(y), comp[&y], f.c(x, y, k));
                nat.insert((x, y, k), TwoCell::new(src, tgt, 0));
            }
        }
    }
    PsTrans {
        f,
        g,
        dom: dom.to_vec(),
        comp,
        nat,
    }
}

/// A modification between transformations into a locally posetal bicategory:
/// components are the determined order cells.
pub fn mk_posetal_modif(s: &PsTrans, t: &PsTrans) -> Modif {
    let dom: Vec<ObjIx> = s.dom.iter().copied().filter(|x| t.dom.contains(x)).collect();
    let comp = dom
        .iter()
        .map(|&x| (x, TwoCell::new(s.at(x), t.at(x), 0)))
        .collect();
    Modif {
        s: s.restrict(&dom),
        t: t.restrict(&dom),
        dom,
        comp,
    }
}

/// Promote a finite category to a locally discrete bicategory (only identity
/// 2-cells).
pub fn locally_discrete(cat: &FiniteCategory) -> Arc<Bicat> {
    let n = cat.objects.len();
    let mut homs = Vec::with_capacity(n * n);
    let mut cell_ix: Vec<Vec<u32>> = vec![Vec::new(); n * n];
    for x in 0..n as u32 {
        for y in 0..n as u32 {
            let cells_m = cat.hom(x, y);
            let cells: Vec<String> = cells_m
                .iter()
                .map(|&m| cat.morphisms[m as usize].id.clone())
                .collect();
            let mut leq = BitMat::new(cells.len());
            for i in 0..cells.len() {
                leq.set(i, i, true);
            }
            cell_ix[(x as usize) * n + y as usize] = cells_m;
            homs.push(HomCat::Poset(PosetHom { cells, leq }));
        }
    }
    let mut comp1 = Vec::with_capacity(n * n * n);
    let mut comp2 = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let fs = &cell_ix[x * n + y];
                let gs = &cell_ix[y * n + z];
                let hs = &cell_ix[x * n + z];
                let mut table = Vec::with_capacity(gs.len() * fs.len());
                for &g in gs {
                    for &f in fs {
                        let gf = cat.comp(g, f).expect("checked category");
                        table.push(hs.iter().position(|&m| m == gf).unwrap() as u32);
                    }
                }
                comp1.push(table);
                comp2.push(Comp2::Implicit);
            }
        }
    }
    let id1 = (0..n)
        .map(|x| {
            cell_ix[x * n + x]
                .iter()
                .position(|&m| m == cat.id_of(x as u32))
                .unwrap() as u32
        })
        .collect();
    Arc::new(Bicat {
        objects: cat.objects.clone(),
        homs,
        id1,
        comp1,
        comp2,
        coherence: Coherence::Strict,
        carrier: None,
    })
}
