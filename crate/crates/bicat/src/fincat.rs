//! Finite categories, functors and natural transformations given by explicit
//! tables, with decidable equivalence.
//!
//! Objects and morphisms are identified by opaque strings; both lists are kept
//! sorted lexicographically and every "first counterexample" report follows
//! that order. Equality of morphisms is identifier equality: these are fully
//! tabulated presentations, no quotienting.

use crate::report::{CheckReport, TableError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// A category with finitely many objects and morphisms, all tables explicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCategory {
    /// Sorted object identifiers.
    pub objects: Vec<String>,
    /// Sorted morphism identifiers with source/target object indices.
    pub morphisms: Vec<Morphism>,
    /// Object index -> identity morphism index.
    pub identity: Vec<u32>,
    /// (g, f) -> g∘f, keyed by morphism indices; meant to be defined exactly
    /// on composable pairs (checked by [`check_category`]).
    #[serde(with = "comp_serde")]
    pub composition: HashMap<(u32, u32), u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub id: String,
    pub src: u32,
    pub tgt: u32,
}

mod comp_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::HashMap;

    pub fn serialize<S: Serializer>(
        map: &HashMap<(u32, u32), u32>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let mut rows: Vec<(u32, u32, u32)> = map.iter().map(|(&(g, f), &v)| (g, f, v)).collect();
        rows.sort_unstable();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<HashMap<(u32, u32), u32>, D::Error> {
        let rows: Vec<(u32, u32, u32)> = Vec::deserialize(d)?;
        Ok(rows.into_iter().map(|(g, f, v)| ((g, f), v)).collect())
    }
}

impl FiniteCategory {
    /// Build from identifier-level tables, resolving and sorting everything.
    ///
    /// `morphisms` rows are `(id, src_object, tgt_object)`, `identity` rows
    /// `(object, morphism)`, `composition` rows `(g, f, g_after_f)`.
    pub fn from_tables(
        objects: &[&str],
        morphisms: &[(&str, &str, &str)],
        identity: &[(&str, &str)],
        composition: &[(&str, &str, &str)],
    ) -> Result<Self, TableError> {
        let ctx = "finite category";
        let mut objs: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        objs.sort();
        objs.dedup();
        if objs.len() != objects.len() {
            return Err(TableError::new(ctx, "duplicate object identifier"));
        }
        let oix: BTreeMap<&str, u32> = objs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u32))
            .collect();
        let mut mors: Vec<(String, String, String)> = morphisms
            .iter()
            .map(|(m, s, t)| (m.to_string(), s.to_string(), t.to_string()))
            .collect();
        mors.sort();
        let mut resolved = Vec::with_capacity(mors.len());
        for (id, s, t) in &mors {
            let src = *oix
                .get(s.as_str())
                .ok_or_else(|| TableError::new(ctx, format!("morphism {id}: unknown source {s}")))?;
            let tgt = *oix
                .get(t.as_str())
                .ok_or_else(|| TableError::new(ctx, format!("morphism {id}: unknown target {t}")))?;
            resolved.push(Morphism {
                id: id.clone(),
                src,
                tgt,
            });
        }
        for w in resolved.windows(2) {
            if w[0].id == w[1].id {
                return Err(TableError::new(
                    ctx,
                    format!("duplicate morphism identifier {}", w[0].id),
                ));
            }
        }
        let mix: BTreeMap<&str, u32> = resolved
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.as_str(), i as u32))
            .collect();
        let mut ident = vec![u32::MAX; objs.len()];
        for (o, m) in identity {
            let o_i = *oix
                .get(o)
                .ok_or_else(|| TableError::new(ctx, format!("identity: unknown object {o}")))?;
            let m_i = *mix
                .get(m)
                .ok_or_else(|| TableError::new(ctx, format!("identity: unknown morphism {m}")))?;
            ident[o_i as usize] = m_i;
        }
        if let Some(o) = ident.iter().position(|&m| m == u32::MAX) {
            return Err(TableError::new(
                ctx,
                format!("identity missing for object {}", objs[o]),
            ));
        }
        let mut comp = HashMap::new();
        for (g, f, gf) in composition {
            let g_i = *mix
                .get(g)
                .ok_or_else(|| TableError::new(ctx, format!("composition: unknown morphism {g}")))?;
            let f_i = *mix
                .get(f)
                .ok_or_else(|| TableError::new(ctx, format!("composition: unknown morphism {f}")))?;
            let gf_i = *mix.get(gf).ok_or_else(|| {
                TableError::new(ctx, format!("composition: unknown morphism {gf}"))
            })?;
            if comp.insert((g_i, f_i), gf_i).is_some() {
                return Err(TableError::new(
                    ctx,
                    format!("composition defined twice at ({g}, {f})"),
                ));
            }
        }
        Ok(FiniteCategory {
            objects: objs,
            morphisms: resolved,
            identity: ident,
            composition: comp,
        })
    }

    pub fn object_index(&self, id: &str) -> Option<u32> {
        self.objects.binary_search_by(|o| o.as_str().cmp(id)).ok().map(|i| i as u32)
    }

    pub fn morphism_index(&self, id: &str) -> Option<u32> {
        self.morphisms
            .binary_search_by(|m| m.id.as_str().cmp(id))
            .ok()
            .map(|i| i as u32)
    }

    pub fn n_objects(&self) -> u32 {
        self.objects.len() as u32
    }

    pub fn n_morphisms(&self) -> u32 {
        self.morphisms.len() as u32
    }

    pub fn src(&self, m: u32) -> u32 {
        self.morphisms[m as usize].src
    }

    pub fn tgt(&self, m: u32) -> u32 {
        self.morphisms[m as usize].tgt
    }

    pub fn id_of(&self, o: u32) -> u32 {
        self.identity[o as usize]
    }

    /// Composite g∘f when the table defines it.
    pub fn comp(&self, g: u32, f: u32) -> Option<u32> {
        self.composition.get(&(g, f)).copied()
    }

    /// Morphisms from `a` to `b`, in index order.
    pub fn hom(&self, a: u32, b: u32) -> Vec<u32> {
        (0..self.n_morphisms())
            .filter(|&m| self.src(m) == a && self.tgt(m) == b)
            .collect()
    }

    /// Does `m` have a two-sided inverse?
    pub fn is_iso(&self, m: u32) -> bool {
        self.inverse(m).is_some()
    }

    /// Two-sided inverse of `m`, lowest index first.
    pub fn inverse(&self, m: u32) -> Option<u32> {
        let (a, b) = (self.src(m), self.tgt(m));
        (0..self.n_morphisms()).find(|&w| {
            self.src(w) == b
                && self.tgt(w) == a
                && self.comp(w, m) == Some(self.id_of(a))
                && self.comp(m, w) == Some(self.id_of(b))
        })
    }

    /// Are `a` and `b` isomorphic objects?
    pub fn isomorphic(&self, a: u32, b: u32) -> bool {
        if a == b {
            return true;
        }
        self.hom(a, b).into_iter().any(|m| self.is_iso(m))
    }
}

/// Check category laws exhaustively; structural defects surface as
/// [`TableError`] before any law is evaluated.
pub fn check_category(c: &FiniteCategory) -> Result<CheckReport, TableError> {
    let ctx = "category";
    let n_m = c.n_morphisms();
    if c.identity.len() != c.objects.len() {
        return Err(TableError::new(ctx, "identity table has wrong length"));
    }
    for (o, &m) in c.identity.iter().enumerate() {
        if m >= n_m {
            return Err(TableError::new(ctx, format!("identity[{o}] out of range")));
        }
    }
    for (&(g, f), &gf) in &c.composition {
        if g >= n_m || f >= n_m || gf >= n_m {
            return Err(TableError::new(ctx, "composition index out of range"));
        }
    }
    let mut report = CheckReport::new(format!(
        "category with {} objects, {} morphisms",
        c.objects.len(),
        c.morphisms.len()
    ));
    // Totality on composable pairs, absence elsewhere, typing of composites.
    for g in 0..n_m {
        for f in 0..n_m {
            let composable = c.tgt(f) == c.src(g);
            match c.comp(g, f) {
                Some(gf) if !composable => report.push(
                    "composition-domain",
                    format!("({}, {})", c.morphisms[g as usize].id, c.morphisms[f as usize].id),
                    format!("defined on a non-composable pair (= {})", c.morphisms[gf as usize].id),
                ),
                Some(gf) => {
                    if c.src(gf) != c.src(f) || c.tgt(gf) != c.tgt(g) {
                        report.push(
                            "composition-typing",
                            format!(
                                "({}, {})",
                                c.morphisms[g as usize].id, c.morphisms[f as usize].id
                            ),
                            format!("composite {} has wrong endpoints", c.morphisms[gf as usize].id),
                        );
                    }
                }
                None if composable => report.push(
                    "composition-domain",
                    format!("({}, {})", c.morphisms[g as usize].id, c.morphisms[f as usize].id),
                    "undefined on a composable pair",
                ),
                None => {}
            }
        }
    }
    if !report.passed() {
        // Law checks below assume a well-shaped composition table.
        return Ok(report);
    }
    for (o, &i) in c.identity.iter().enumerate() {
        let o = o as u32;
        if c.src(i) != o || c.tgt(i) != o {
            report.push(
                "identity-typing",
                c.objects[o as usize].clone(),
                format!("identity {} is not an endomorphism", c.morphisms[i as usize].id),
            );
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    for f in 0..n_m {
        let idt = c.id_of(c.tgt(f));
        if c.comp(idt, f) != Some(f) {
            report.push(
                "identity-left",
                c.morphisms[f as usize].id.clone(),
                "id∘f ≠ f",
            );
        }
        let ids = c.id_of(c.src(f));
        if c.comp(f, ids) != Some(f) {
            report.push(
                "identity-right",
                c.morphisms[f as usize].id.clone(),
                "f∘id ≠ f",
            );
        }
    }
    for h in 0..n_m {
        for g in 0..n_m {
            if c.src(h) != c.tgt(g) {
                continue;
            }
            for f in 0..n_m {
                if c.src(g) != c.tgt(f) {
                    continue;
                }
                let left = c.comp(h, g).and_then(|hg| c.comp(hg, f));
                let right = c.comp(g, f).and_then(|gf| c.comp(h, gf));
                if left != right {
                    report.push(
                        "associativity",
                        format!(
                            "({}, {}, {})",
                            c.morphisms[h as usize].id,
                            c.morphisms[g as usize].id,
                            c.morphisms[f as usize].id
                        ),
                        "(h∘g)∘f ≠ h∘(g∘f)",
                    );
                }
            }
        }
    }
    Ok(report)
}

/// A functor presented by total object and morphism tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Functor {
    /// Source object index -> target object index.
    pub obj: Vec<u32>,
    /// Source morphism index -> target morphism index.
    pub mor: Vec<u32>,
}

impl Functor {
    pub fn identity(c: &FiniteCategory) -> Self {
        Functor {
            obj: (0..c.n_objects()).collect(),
            mor: (0..c.n_morphisms()).collect(),
        }
    }

    pub fn from_tables(
        src: &FiniteCategory,
        tgt: &FiniteCategory,
        obj: &[(&str, &str)],
        mor: &[(&str, &str)],
    ) -> Result<Self, TableError> {
        let ctx = "functor";
        let mut o = vec![u32::MAX; src.objects.len()];
        for (a, b) in obj {
            let a_i = src
                .object_index(a)
                .ok_or_else(|| TableError::new(ctx, format!("unknown source object {a}")))?;
            let b_i = tgt
                .object_index(b)
                .ok_or_else(|| TableError::new(ctx, format!("unknown target object {b}")))?;
            o[a_i as usize] = b_i;
        }
        let mut m = vec![u32::MAX; src.morphisms.len()];
        for (a, b) in mor {
            let a_i = src
                .morphism_index(a)
                .ok_or_else(|| TableError::new(ctx, format!("unknown source morphism {a}")))?;
            let b_i = tgt
                .morphism_index(b)
                .ok_or_else(|| TableError::new(ctx, format!("unknown target morphism {b}")))?;
            m[a_i as usize] = b_i;
        }
        if let Some(i) = o.iter().position(|&x| x == u32::MAX) {
            return Err(TableError::new(
                ctx,
                format!("object map missing at {}", src.objects[i]),
            ));
        }
        if let Some(i) = m.iter().position(|&x| x == u32::MAX) {
            return Err(TableError::new(
                ctx,
                format!("morphism map missing at {}", src.morphisms[i].id),
            ));
        }
        Ok(Functor { obj: o, mor: m })
    }

    pub fn compose(&self, inner: &Functor) -> Functor {
        // self ∘ inner
        Functor {
            obj: inner.obj.iter().map(|&o| self.obj[o as usize]).collect(),
            mor: inner.mor.iter().map(|&m| self.mor[m as usize]).collect(),
        }
    }
}

/// Check functoriality exhaustively.
pub fn check_functor(
    f: &Functor,
    src: &FiniteCategory,
    tgt: &FiniteCategory,
) -> Result<CheckReport, TableError> {
    let ctx = "functor";
    if f.obj.len() != src.objects.len() || f.mor.len() != src.morphisms.len() {
        return Err(TableError::new(ctx, "table length mismatch"));
    }
    if f.obj.iter().any(|&o| o >= tgt.n_objects()) || f.mor.iter().any(|&m| m >= tgt.n_morphisms())
    {
        return Err(TableError::new(ctx, "index out of range"));
    }
    let mut report = CheckReport::new("functor");
    for m in 0..src.n_morphisms() {
        let fm = f.mor[m as usize];
        if tgt.src(fm) != f.obj[src.src(m) as usize] || tgt.tgt(fm) != f.obj[src.tgt(m) as usize] {
            report.push(
                "functor-typing",
                src.morphisms[m as usize].id.clone(),
                "image has wrong endpoints",
            );
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    for o in 0..src.n_objects() {
        let want = tgt.id_of(f.obj[o as usize]);
        let got = f.mor[src.id_of(o) as usize];
        if want != got {
            report.push(
                "functor-identity",
                src.objects[o as usize].clone(),
                format!(
                    "F(id) = {} but id at image is {}",
                    tgt.morphisms[got as usize].id, tgt.morphisms[want as usize].id
                ),
            );
        }
    }
    for g in 0..src.n_morphisms() {
        for q in 0..src.n_morphisms() {
            if src.src(g) != src.tgt(q) {
                continue;
            }
            let lhs = src.comp(g, q).map(|gq| f.mor[gq as usize]);
            let rhs = tgt.comp(f.mor[g as usize], f.mor[q as usize]);
            if lhs != rhs {
                report.push(
                    "functor-composition",
                    format!(
                        "({}, {})",
                        src.morphisms[g as usize].id, src.morphisms[q as usize].id
                    ),
                    "F(g∘f) ≠ F(g)∘F(f)",
                );
            }
        }
    }
    Ok(report)
}

/// A natural transformation presented by its component table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NatTransformation {
    /// Source object index -> component morphism index in the target category.
    pub components: Vec<u32>,
}

/// Check naturality of `t : f ⇒ g` exhaustively.
pub fn check_nat(
    t: &NatTransformation,
    f: &Functor,
    g: &Functor,
    src: &FiniteCategory,
    tgt: &FiniteCategory,
) -> Result<CheckReport, TableError> {
    if t.components.len() != src.objects.len() {
        return Err(TableError::new("natural transformation", "component table length mismatch"));
    }
    let mut report = CheckReport::new("natural transformation");
    for o in 0..src.n_objects() {
        let c = t.components[o as usize];
        if c >= tgt.n_morphisms() {
            return Err(TableError::new("natural transformation", "component index out of range"));
        }
        if tgt.src(c) != f.obj[o as usize] || tgt.tgt(c) != g.obj[o as usize] {
            report.push(
                "component-typing",
                src.objects[o as usize].clone(),
                "component has wrong endpoints",
            );
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    for m in 0..src.n_morphisms() {
        let (a, b) = (src.src(m), src.tgt(m));
        let lhs = tgt.comp(t.components[b as usize], f.mor[m as usize]);
        let rhs = tgt.comp(g.mor[m as usize], t.components[a as usize]);
        if lhs != rhs || lhs.is_none() {
            report.push(
                "naturality",
                src.morphisms[m as usize].id.clone(),
                "square does not commute",
            );
        }
    }
    Ok(report)
}

/// Is every component an isomorphism (on top of naturality)?
pub fn nat_is_iso(t: &NatTransformation, tgt: &FiniteCategory) -> bool {
    t.components.iter().all(|&c| tgt.is_iso(c))
}

/// Positive answer of [`is_equivalence`]: a quasi-inverse with invertible
/// unit and counit transformations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub quasi_inverse: Functor,
    /// Id_src ⇒ quasi_inverse ∘ f
    pub unit: NatTransformation,
    /// f ∘ quasi_inverse ⇒ Id_tgt
    pub counit: NatTransformation,
}

/// Negative answer with the first counterexample in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NotEquivalence {
    /// Two distinct parallel morphisms with the same image.
    NotFaithful { first: String, second: String },
    /// A target morphism between image objects with no preimage.
    NotFull { src_a: String, src_b: String, missing: String },
    /// A target object isomorphic to no image object.
    NotEssentiallySurjective { object: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquivalenceResult {
    Equivalence(EquivalenceWitness),
    Not(NotEquivalence),
}

impl EquivalenceResult {
    pub fn is_equivalence(&self) -> bool {
        matches!(self, EquivalenceResult::Equivalence(_))
    }
}

/// Decide whether `f` is an equivalence by exhaustive fullness, faithfulness
/// and essential-surjectivity scans, returning a re-checkable witness.
pub fn is_equivalence(
    f: &Functor,
    src: &FiniteCategory,
    tgt: &FiniteCategory,
) -> Result<EquivalenceResult, TableError> {
    let shape = check_functor(f, src, tgt)?;
    if !shape.passed() {
        return Err(TableError::new(
            "is_equivalence",
            format!("input is not a functor: {}", shape.violations[0].law),
        ));
    }
    // Faithfulness.
    for m1 in 0..src.n_morphisms() {
        for m2 in (m1 + 1)..src.n_morphisms() {
            if src.src(m1) == src.src(m2)
                && src.tgt(m1) == src.tgt(m2)
                && f.mor[m1 as usize] == f.mor[m2 as usize]
            {
                return Ok(EquivalenceResult::Not(NotEquivalence::NotFaithful {
                    first: src.morphisms[m1 as usize].id.clone(),
                    second: src.morphisms[m2 as usize].id.clone(),
                }));
            }
        }
    }
    // Fullness.
    for a in 0..src.n_objects() {
        for b in 0..src.n_objects() {
            for m in tgt.hom(f.obj[a as usize], f.obj[b as usize]) {
                let hit = (0..src.n_morphisms()).any(|q| {
                    src.src(q) == a && src.tgt(q) == b && f.mor[q as usize] == m
                });
                if !hit {
                    return Ok(EquivalenceResult::Not(NotEquivalence::NotFull {
                        src_a: src.objects[a as usize].clone(),
                        src_b: src.objects[b as usize].clone(),
                        missing: tgt.morphisms[m as usize].id.clone(),
                    }));
                }
            }
        }
    }
    // Essential surjectivity, with canonical preimage and iso choices.
    let mut preim: Vec<(u32, u32)> = Vec::new(); // per tgt object: (src object, iso F a -> c)
    for c in 0..tgt.n_objects() {
        let mut found = None;
        'outer: for a in 0..src.n_objects() {
            let fa = f.obj[a as usize];
            if fa == c {
                found = Some((a, tgt.id_of(c)));
                break;
            }
            for m in tgt.hom(fa, c) {
                if tgt.is_iso(m) {
                    found = Some((a, m));
                    break 'outer;
                }
            }
        }
        match found {
            Some(p) => preim.push(p),
            None => {
                return Ok(EquivalenceResult::Not(NotEquivalence::NotEssentiallySurjective {
                    object: tgt.objects[c as usize].clone(),
                }))
            }
        }
    }
    // Quasi-inverse on morphisms: g(m: c -> c') is the unique preimage of
    // iso_{c'}⁻¹ ∘ m ∘ iso_c under the (fully faithful) f.
    let unique_preimage = |a: u32, b: u32, m: u32| -> u32 {
        (0..src.n_morphisms())
            .find(|&q| src.src(q) == a && src.tgt(q) == b && f.mor[q as usize] == m)
            .expect("fullness already verified")
    };
    let mut g_obj = Vec::with_capacity(tgt.objects.len());
    for c in 0..tgt.n_objects() {
        g_obj.push(preim[c as usize].0);
    }
    let mut g_mor = Vec::with_capacity(tgt.morphisms.len());
    for m in 0..tgt.n_morphisms() {
        let (c, c2) = (tgt.src(m), tgt.tgt(m));
        let (a, iso_c) = preim[c as usize];
        let (a2, iso_c2) = preim[c2 as usize];
        let inv_c2 = tgt.inverse(iso_c2).expect("chosen iso");
        let conj = tgt
            .comp(inv_c2, tgt.comp(m, iso_c).expect("composable"))
            .expect("composable");
        g_mor.push(unique_preimage(a, a2, conj));
    }
    let g = Functor { obj: g_obj, mor: g_mor };
    // Unit Id_src ⇒ g∘f: at a, the preimage of iso_{f a}: F a -> F(g(F a)).
    let mut unit = Vec::with_capacity(src.objects.len());
    for a in 0..src.n_objects() {
        let fa = f.obj[a as usize];
        let (ga, iso) = preim[fa as usize];
        let inv = tgt.inverse(iso).expect("chosen iso");
        unit.push(unique_preimage(a, ga, inv));
    }
    // Counit f∘g ⇒ Id_tgt: at c, the chosen iso F(g c) -> c.
    let counit = (0..tgt.n_objects())
        .map(|c| preim[c as usize].1)
        .collect();
    Ok(EquivalenceResult::Equivalence(EquivalenceWitness {
        quasi_inverse: g,
        unit: NatTransformation { components: unit },
        counit: NatTransformation { components: counit },
    }))
}

/// Re-check an equivalence witness against its claimed functor.
pub fn verify_equivalence_witness(
    f: &Functor,
    w: &EquivalenceWitness,
    src: &FiniteCategory,
    tgt: &FiniteCategory,
) -> Result<bool, TableError> {
    let gf = w.quasi_inverse.compose(f);
    let fg = f.compose(&w.quasi_inverse);
    let ok_g = check_functor(&w.quasi_inverse, tgt, src)?.passed();
    let ok_unit = check_nat(&w.unit, &Functor::identity(src), &gf, src, src)?.passed()
        && nat_is_iso(&w.unit, src);
    let ok_counit = check_nat(&w.counit, &fg, &Functor::identity(tgt), tgt, tgt)?.passed()
        && nat_is_iso(&w.counit, tgt);
    Ok(ok_g && ok_unit && ok_counit)
}

/// Search for an invertible natural transformation `f ⇒ g` by depth-first
/// assignment of component isomorphisms with incremental naturality pruning.
pub fn find_natural_iso(
    f: &Functor,
    g: &Functor,
    src: &FiniteCategory,
    tgt: &FiniteCategory,
) -> Option<NatTransformation> {
    let n = src.n_objects() as usize;
    let slots: Vec<Vec<u32>> = (0..n)
        .map(|o| {
            tgt.hom(f.obj[o], g.obj[o])
                .into_iter()
                .filter(|&m| tgt.is_iso(m))
                .collect()
        })
        .collect();
    if slots.iter().any(|s| s.is_empty()) {
        return None;
    }
    fn consistent(
        assigned: &[u32],
        upto: usize,
        f: &Functor,
        g: &Functor,
        src: &FiniteCategory,
        tgt: &FiniteCategory,
    ) -> bool {
        for m in 0..src.n_morphisms() {
            let (a, b) = (src.src(m) as usize, src.tgt(m) as usize);
            if a >= upto || b >= upto {
                continue;
            }
            let lhs = tgt.comp(assigned[b], f.mor[m as usize]);
            let rhs = tgt.comp(g.mor[m as usize], assigned[a]);
            if lhs != rhs || lhs.is_none() {
                return false;
            }
        }
        true
    }
    fn dfs(
        k: usize,
        assigned: &mut Vec<u32>,
        slots: &[Vec<u32>],
        f: &Functor,
        g: &Functor,
        src: &FiniteCategory,
        tgt: &FiniteCategory,
    ) -> bool {
        if k == slots.len() {
            return true;
        }
        for &cand in &slots[k] {
            assigned.push(cand);
            if consistent(assigned, k + 1, f, g, src, tgt)
                && dfs(k + 1, assigned, slots, f, g, src, tgt)
            {
                return true;
            }
            assigned.pop();
        }
        false
    }
    let mut assigned = Vec::with_capacity(n);
    if dfs(0, &mut assigned, &slots, f, g, src, tgt) {
        Some(NatTransformation { components: assigned })
    } else {
        None
    }
}

/// Product category (used for horizontal-composition sources).
pub fn product(a: &FiniteCategory, b: &FiniteCategory) -> FiniteCategory {
    let mut objects = Vec::new();
    for x in &a.objects {
        for y in &b.objects {
            objects.push(format!("({x},{y})"));
        }
    }
    let nb = b.n_objects();
    let nbm = b.n_morphisms();
    let mut morphisms = Vec::new();
    for (i, m) in a.morphisms.iter().enumerate() {
        for (j, w) in b.morphisms.iter().enumerate() {
            morphisms.push(Morphism {
                id: format!("({},{})", m.id, w.id),
                src: m.src * nb + w.src,
                tgt: m.tgt * nb + w.tgt,
            });
            let _ = (i, j);
        }
    }
    // Morphism ids above are not sorted in general; rebuild sorted with an
    // index permutation.
    let mut order: Vec<usize> = (0..morphisms.len()).collect();
    order.sort_by(|&i, &j| morphisms[i].id.cmp(&morphisms[j].id));
    let mut rank = vec![0u32; morphisms.len()];
    for (new_i, &old_i) in order.iter().enumerate() {
        rank[old_i] = new_i as u32;
    }
    let sorted: Vec<Morphism> = order.iter().map(|&i| morphisms[i].clone()).collect();
    let pair_m = |i: u32, j: u32| rank[(i * nbm + j) as usize];
    let mut identity = Vec::new();
    for x in 0..a.n_objects() {
        for y in 0..nb {
            identity.push(pair_m(a.id_of(x), b.id_of(y)));
        }
    }
    let mut composition = HashMap::new();
    for g1 in 0..a.n_morphisms() {
        for g2 in 0..nbm {
            for f1 in 0..a.n_morphisms() {
                if a.src(g1) != a.tgt(f1) {
                    continue;
                }
                for f2 in 0..nbm {
                    if b.src(g2) != b.tgt(f2) {
                        continue;
                    }
                    let c1 = a.comp(g1, f1).expect("checked category");
                    let c2 = b.comp(g2, f2).expect("checked category");
                    composition.insert((pair_m(g1, g2), pair_m(f1, f2)), pair_m(c1, c2));
                }
            }
        }
    }
    FiniteCategory {
        objects,
        morphisms: sorted,
        identity,
        composition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn terminal() -> FiniteCategory {
        FiniteCategory::from_tables(&["*"], &[("id", "*", "*")], &[("*", "id")], &[("id", "id", "id")])
            .unwrap()
    }

    /// One object, morphisms {+1, -1} under multiplication.
    pub fn z2_hom() -> FiniteCategory {
        FiniteCategory::from_tables(
            &["*"],
            &[("m+1", "*", "*"), ("m-1", "*", "*")],
            &[("*", "m+1")],
            &[
                ("m+1", "m+1", "m+1"),
                ("m+1", "m-1", "m-1"),
                ("m-1", "m+1", "m-1"),
                ("m-1", "m-1", "m+1"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn terminal_category_passes() {
        assert!(check_category(&terminal()).unwrap().passed());
    }

    #[test]
    fn z2_delooping_hom_passes() {
        assert!(check_category(&z2_hom()).unwrap().passed());
    }

    #[test]
    fn mutated_z2_reports_law_failure() {
        // comp(-1,-1) := -1 turns the group table into the AND-monoid, which
        // is still a category; the checker must accept it.
        let mut and_monoid = z2_hom();
        let m = and_monoid.morphism_index("m-1").unwrap();
        and_monoid.composition.insert((m, m), m);
        assert!(check_category(&and_monoid).unwrap().passed());
        // comp(+1,-1) := +1 breaks the left identity law.
        let mut broken = z2_hom();
        let p = broken.morphism_index("m+1").unwrap();
        broken.composition.insert((p, m), p);
        let report = check_category(&broken).unwrap();
        assert!(!report.passed());
        let laws = report.laws_violated();
        assert!(laws.contains(&"identity-left"), "got {laws:?}");
    }

    #[test]
    fn dangling_id_is_malformed_not_law_failure() {
        let err = FiniteCategory::from_tables(
            &["*"],
            &[("f", "*", "ghost")],
            &[("*", "f")],
            &[],
        );
        assert!(err.is_err());
    }

    #[test]
    fn identity_functor_is_equivalence() {
        let c = z2_hom();
        let f = Functor::identity(&c);
        assert!(check_functor(&f, &c, &c).unwrap().passed());
        let r = is_equivalence(&f, &c, &c).unwrap();
        match r {
            EquivalenceResult::Equivalence(w) => {
                assert!(verify_equivalence_witness(&f, &w, &c, &c).unwrap());
            }
            _ => panic!("identity must be an equivalence"),
        }
    }

    #[test]
    fn constant_functor_passes_check() {
        let src = z2_hom();
        let tgt = terminal();
        let f = Functor::from_tables(&src, &tgt, &[("*", "*")], &[("m+1", "id"), ("m-1", "id")])
            .unwrap();
        assert!(check_functor(&f, &src, &tgt).unwrap().passed());
    }

    #[test]
    fn sign_flip_breaks_identity_preservation() {
        let c = z2_hom();
        // swap the two morphisms: +1 ↦ -1, -1 ↦ +1
        let p = c.morphism_index("m+1").unwrap();
        let m = c.morphism_index("m-1").unwrap();
        let mut f = Functor::identity(&c);
        f.mor[p as usize] = m;
        f.mor[m as usize] = p;
        let report = check_functor(&f, &c, &c).unwrap();
        assert!(report.first_of("functor-identity").is_some());
    }

    #[test]
    fn skeleton_inclusion_is_equivalence() {
        // Target: two isomorphic objects a ≅ b; source: the full subcategory on a.
        let tgt = FiniteCategory::from_tables(
            &["a", "b"],
            &[
                ("ida", "a", "a"),
                ("idb", "b", "b"),
                ("u", "a", "b"),
                ("v", "b", "a"),
            ],
            &[("a", "ida"), ("b", "idb")],
            &[
                ("ida", "ida", "ida"),
                ("idb", "idb", "idb"),
                ("u", "ida", "u"),
                ("idb", "u", "u"),
                ("v", "idb", "v"),
                ("ida", "v", "v"),
                ("v", "u", "ida"),
                ("u", "v", "idb"),
            ],
        )
        .unwrap();
        assert!(check_category(&tgt).unwrap().passed());
        let src = FiniteCategory::from_tables(
            &["a"],
            &[("ida", "a", "a")],
            &[("a", "ida")],
            &[("ida", "ida", "ida")],
        )
        .unwrap();
        let f = Functor::from_tables(&src, &tgt, &[("a", "a")], &[("ida", "ida")]).unwrap();
        let r = is_equivalence(&f, &src, &tgt).unwrap();
        match r {
            EquivalenceResult::Equivalence(w) => {
                assert!(verify_equivalence_witness(&f, &w, &src, &tgt).unwrap())
            }
            EquivalenceResult::Not(n) => panic!("skeleton inclusion must be an equivalence: {n:?}"),
        }
    }

    #[test]
    fn discrete_pair_to_terminal_fails_fullness() {
        let src = FiniteCategory::from_tables(
            &["a", "b"],
            &[("ida", "a", "a"), ("idb", "b", "b")],
            &[("a", "ida"), ("b", "idb")],
            &[("ida", "ida", "ida"), ("idb", "idb", "idb")],
        )
        .unwrap();
        let tgt = terminal();
        let f = Functor::from_tables(
            &src,
            &tgt,
            &[("a", "*"), ("b", "*")],
            &[("ida", "id"), ("idb", "id")],
        )
        .unwrap();
        match is_equivalence(&f, &src, &tgt).unwrap() {
            EquivalenceResult::Not(NotEquivalence::NotFull { src_a, src_b, missing }) => {
                assert_eq!((src_a.as_str(), src_b.as_str(), missing.as_str()), ("a", "b", "id"));
            }
            other => panic!("expected fullness failure, got {other:?}"),
        }
    }

    /// Brute-force oracle: search all functors tgt -> src and all invertible
    /// natural transformations for a quasi-inverse.
    fn equivalence_oracle(f: &Functor, src: &FiniteCategory, tgt: &FiniteCategory) -> bool {
        fn all_functors(src: &FiniteCategory, tgt: &FiniteCategory) -> Vec<Functor> {
            let mut out = Vec::new();
            let n_o = src.n_objects() as usize;
            let mut obj = vec![0u32; n_o];
            loop {
                // for this object map, enumerate all typed morphism maps
                let slots: Vec<Vec<u32>> = (0..src.n_morphisms())
                    .map(|m| {
                        tgt.hom(obj[src.src(m) as usize], obj[src.tgt(m) as usize])
                    })
                    .collect();
                if slots.iter().all(|s| !s.is_empty()) {
                    let mut pick = vec![0usize; slots.len()];
                    loop {
                        let mor: Vec<u32> =
                            pick.iter().zip(&slots).map(|(&i, s)| s[i]).collect();
                        let cand = Functor { obj: obj.clone(), mor };
                        if check_functor(&cand, src, tgt).unwrap().passed() {
                            out.push(cand);
                        }
                        let mut k = 0;
                        loop {
                            if k == pick.len() {
                                break;
                            }
                            pick[k] += 1;
                            if pick[k] < slots[k].len() {
                                break;
                            }
                            pick[k] = 0;
                            k += 1;
                        }
                        if k == pick.len() {
                            break;
                        }
                    }
                }
                let mut k = 0;
                loop {
                    if k == n_o {
                        return out;
                    }
                    obj[k] += 1;
                    if obj[k] < tgt.n_objects() {
                        break;
                    }
                    obj[k] = 0;
                    k += 1;
                }
            }
        }
        fn has_iso_nat(
            f: &Functor,
            g: &Functor,
            src: &FiniteCategory,
            tgt: &FiniteCategory,
        ) -> bool {
            // invertible natural transformation f ⇒ g?
            let slots: Vec<Vec<u32>> = (0..src.n_objects())
                .map(|o| {
                    tgt.hom(f.obj[o as usize], g.obj[o as usize])
                        .into_iter()
                        .filter(|&m| tgt.is_iso(m))
                        .collect()
                })
                .collect();
            if slots.iter().any(|s| s.is_empty()) {
                return false;
            }
            let mut pick = vec![0usize; slots.len()];
            loop {
                let t = NatTransformation {
                    components: pick.iter().zip(&slots).map(|(&i, s)| s[i]).collect(),
                };
                if check_nat(&t, f, g, src, tgt).unwrap().passed() {
                    return true;
                }
                let mut k = 0;
                loop {
                    if k == pick.len() {
                        return false;
                    }
                    pick[k] += 1;
                    if pick[k] < slots[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
            }
        }
        let id_src = Functor::identity(src);
        let id_tgt = Functor::identity(tgt);
        all_functors(tgt, src).into_iter().any(|g| {
            has_iso_nat(&g.compose(f), &id_src, src, src)
                && has_iso_nat(&f.compose(&g), &id_tgt, tgt, tgt)
        })
    }

    #[test]
    fn equivalence_decision_matches_bruteforce_oracle() {
        // Assemble a small zoo of (functor, src, tgt) cases and compare.
        let term = terminal();
        let z2 = z2_hom();
        let disc2 = FiniteCategory::from_tables(
            &["a", "b"],
            &[("ida", "a", "a"), ("idb", "b", "b")],
            &[("a", "ida"), ("b", "idb")],
            &[("ida", "ida", "ida"), ("idb", "idb", "idb")],
        )
        .unwrap();
        let cases: Vec<(Functor, &FiniteCategory, &FiniteCategory)> = vec![
            (Functor::identity(&term), &term, &term),
            (Functor::identity(&z2), &z2, &z2),
            (
                Functor::from_tables(&z2, &term, &[("*", "*")], &[("m+1", "id"), ("m-1", "id")])
                    .unwrap(),
                &z2,
                &term,
            ),
            (
                Functor::from_tables(
                    &disc2,
                    &term,
                    &[("a", "*"), ("b", "*")],
                    &[("ida", "id"), ("idb", "id")],
                )
                .unwrap(),
                &disc2,
                &term,
            ),
            (
                Functor::from_tables(&term, &disc2, &[("*", "a")], &[("id", "ida")]).unwrap(),
                &term,
                &disc2,
            ),
        ];
        for (f, s, t) in cases {
            let ours = is_equivalence(&f, s, t).unwrap().is_equivalence();
            let oracle = equivalence_oracle(&f, s, t);
            assert_eq!(ours, oracle, "disagreement on a case");
        }
    }

    #[test]
    fn check_category_is_pure_and_deterministic() {
        let c = z2_hom();
        let r1 = check_category(&c).unwrap();
        let r2 = check_category(&c).unwrap();
        assert_eq!(r1, r2);
    }
}
