//! Biadjunctions, pseudomonads, KZ-monads, the Kleisli bicategory with its
//! canonical biadjunction, and the inverter sub-bicategory extraction.
//!
//! Completion-style monads cannot be total on a finite universe, so every
//! component here quantifies over the declared (possibly graded) domains of
//! its pseudofunctors; reports state those domains.

use crate::bicat_core::core::Paste;
use crate::bicat_core::{Bicat, CellIx, Coherence, Comp2, HomCat, ObjIx, TwoCell};
use crate::cell_calculus::{
    check_modification, check_pseudofunctor, check_transformation, exchange, id_trans,
    inverse_modif, post_id_collapse, post_whisker, post_whisker_compat, post_whisker_modif,
    pre_whisker, pre_whisker_compat, pre_whisker_modif, rebracket, vcomp_modif_many,
    vcomp_trans, whisker_l_modif, whisker_r_modif, CompositorCells, Modif, PsFun, PsTrans,
    TwoMap, UnitCells,
};
use crate::fincat::{self, FiniteCategory, Functor, NatTransformation};
use crate::limits::{check_split_inverter, InverterCert, InverterCone, SplitInverter, TwoCellAt};
use crate::report::{CheckReport, TableError};

fn xi2u(i: usize) -> u32 {
    i as u32
}
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use thiserror::Error;

// ---------------------------------------------------------------------------
// Biadjunctions
// ---------------------------------------------------------------------------

/// A biadjunction L ⊣ R with unit, counit and the two triangulators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Biadjunction {
    /// L : A → B.
    pub left: PsFun,
    /// R : B → A.
    pub right: PsFun,
    /// H : Id_A ⇒ R L.
    pub unit: PsTrans,
    /// E : L R ⇒ Id_B.
    pub counit: PsTrans,
    /// E_L ∘ L(H) ⇛ Id_L.
    pub tri_l: Modif,
    /// R(E) ∘ H_R ⇛ Id_R.
    pub tri_r: Modif,
}

impl Biadjunction {
    /// The identity biadjunction on a bicategory, with unitor triangulators.
    pub fn identity(b: &Arc<Bicat>) -> Biadjunction {
        let idf = PsFun::identity(b);
        let unit = id_trans(&idf);
        let counit = id_trans(&idf);
        let tri_l_src = vcomp_trans(&pre_whisker(&counit, &idf), &post_whisker(&idf, &unit));
        let tri_r_src = vcomp_trans(&post_whisker(&idf, &counit), &pre_whisker(&unit, &idf));
        let id_l = id_trans(&idf);
        let mk = |src: &PsTrans| -> Modif {
            let comp = src
                .dom
                .iter()
                .map(|&x| {
                    // Id∘Id ⇒ Id
                    (x, b.lunitor(x, x, b.id1[x as usize]))
                })
                .collect();
            Modif {
                s: src.clone(),
                t: id_l.clone(),
                dom: src.dom.clone(),
                comp,
            }
        };
        Biadjunction {
            left: idf.clone(),
            right: idf,
            tri_l: mk(&tri_l_src),
            tri_r: mk(&tri_r_src),
            unit,
            counit,
        }
    }

    /// Expected source transformation of the left triangulator.
    pub fn tri_l_source(&self) -> PsTrans {
        vcomp_trans(
            &pre_whisker(&self.counit, &self.left),
            &post_whisker(&self.left, &self.unit),
        )
    }

    pub fn tri_r_source(&self) -> PsTrans {
        vcomp_trans(
            &post_whisker(&self.right, &self.counit),
            &pre_whisker(&self.unit, &self.right),
        )
    }
}

/// Verify the biadjunction data: component law checks, triangulator
/// endpoints, invertibility, and the modification law.
pub fn check_biadjunction(ba: &Biadjunction) -> Result<CheckReport, TableError> {
    let mut report = CheckReport::new(format!(
        "biadjunction (unit on {} objects, counit on {})",
        ba.unit.dom.len(),
        ba.counit.dom.len()
    ));
    report.merge(check_pseudofunctor(&ba.left)?);
    report.merge(check_pseudofunctor(&ba.right)?);
    report.merge(check_transformation(&ba.unit)?);
    report.merge(check_transformation(&ba.counit)?);
    if !report.passed() {
        return Ok(report);
    }
    let tl_src = ba.tri_l_source();
    for &x in &ba.tri_l.dom {
        if ba.tri_l.s.at(x) != tl_src.at(x) {
            report.push(
                "triangulator-left-endpoints",
                format!("object {x}"),
                "source of the left triangulator is not E_L ∘ L(H)",
            );
        }
        if ba.tri_l.t.at(x) != ba.left.tgt.id1[ba.left.o(x) as usize] {
            report.push(
                "triangulator-left-endpoints",
                format!("object {x}"),
                "target of the left triangulator is not Id_L",
            );
        }
    }
    let tr_src = ba.tri_r_source();
    for &x in &ba.tri_r.dom {
        if ba.tri_r.s.at(x) != tr_src.at(x) {
            report.push(
                "triangulator-right-endpoints",
                format!("object {x}"),
                "source of the right triangulator is not R(E) ∘ H_R",
            );
        }
        if ba.tri_r.t.at(x) != ba.right.tgt.id1[ba.right.o(x) as usize] {
            report.push(
                "triangulator-right-endpoints",
                format!("object {x}"),
                "target of the right triangulator is not Id_R",
            );
        }
    }
    if !ba.tri_l.is_invertible() {
        report.push("triangulator-invertible", "left", "left triangulator not invertible");
    }
    if !ba.tri_r.is_invertible() {
        report.push("triangulator-invertible", "right", "right triangulator not invertible");
    }
    report.merge(check_modification(&ba.tri_l)?);
    report.merge(check_modification(&ba.tri_r)?);
    Ok(report)
}

/// Witness for the hom-category equivalence induced by a biadjunction at a
/// pair of objects.
#[derive(Debug, Clone)]
pub struct HomEquivalence {
    pub to_right: Functor,
    pub to_left: Functor,
    pub left_cat: FiniteCategory,
    pub right_cat: FiniteCategory,
    pub round_left: NatTransformation,
    pub round_right: NatTransformation,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HomEquivalenceError {
    #[error("pair outside the certified domain: {0}")]
    OutsideDomain(String),
    #[error("induced functors are not quasi-inverse: {0}")]
    NotQuasiInverse(String),
    #[error("law failure: {0}")]
    LawFailure(String),
}

/// Build the two induced functors Hom_B(L a, b) ⇄ Hom_A(a, R b) and certify
/// they are quasi-inverse.
pub fn hom_equivalence_check(
    ba: &Biadjunction,
    a: ObjIx,
    b_obj: ObjIx,
) -> Result<HomEquivalence, HomEquivalenceError> {
    let bb = &ba.left.tgt;
    let ab = &ba.left.src;
    if !ba.unit.dom.contains(&a) {
        return Err(HomEquivalenceError::OutsideDomain(format!(
            "unit undefined at {}",
            ab.objects[a as usize]
        )));
    }
    if !ba.counit.dom.contains(&b_obj) {
        return Err(HomEquivalenceError::OutsideDomain(format!(
            "counit undefined at {}",
            bb.objects[b_obj as usize]
        )));
    }
    let la = ba.left.o(a);
    let rb = ba.right.o(b_obj);
    let left_hom = bb.hom(la, b_obj);
    let right_hom = ab.hom(a, rb);
    let left_cat = left_hom.to_fincat();
    let right_cat = right_hom.to_fincat();
    // u : g ↦ R(g) ∘ H_a
    let rla = ba.right.o(la);
    let mut u_obj = Vec::new();
    for g in 0..left_hom.n_cells() {
        let rg = ba.right.c(la, b_obj, g);
        u_obj.push(ab.c1(a, rla, rb, rg, ba.unit.at(a)));
    }
    let mut u_mor = Vec::new();
    for m in &left_cat.morphisms {
        let tc = two_by_id(left_hom, &m.id);
        let img = ab.c2(
            a,
            rla,
            rb,
            ba.right.t2(la, b_obj, tc),
            ab.hom(a, rla).id2(ba.unit.at(a)),
        );
        u_mor.push(
            right_cat
                .morphism_index(&right_hom.two_mor_id(img))
                .ok_or_else(|| HomEquivalenceError::LawFailure("u image missing".into()))?,
        );
    }
    let u = Functor { obj: u_obj, mor: u_mor };
    // v : f ↦ E_b ∘ L(f)
    let lrb = ba.left.o(rb);
    let mut v_obj = Vec::new();
    for f in 0..right_hom.n_cells() {
        let lf = ba.left.c(a, rb, f);
        v_obj.push(bb.c1(la, lrb, b_obj, ba.counit.at(b_obj), lf));
    }
    let mut v_mor = Vec::new();
    for m in &right_cat.morphisms {
        let tc = two_by_id(right_hom, &m.id);
        let img = bb.c2(
            la,
            lrb,
            b_obj,
            bb.hom(lrb, b_obj).id2(ba.counit.at(b_obj)),
            ba.left.t2(a, rb, tc),
        );
        v_mor.push(
            left_cat
                .morphism_index(&left_hom.two_mor_id(img))
                .ok_or_else(|| HomEquivalenceError::LawFailure("v image missing".into()))?,
        );
    }
    let v = Functor { obj: v_obj, mor: v_mor };
    for (fun, s, t, name) in [(&u, &left_cat, &right_cat, "u"), (&v, &right_cat, &left_cat, "v")] {
        let rep = fincat::check_functor(fun, s, t)
            .map_err(|e| HomEquivalenceError::LawFailure(e.to_string()))?;
        if !rep.passed() {
            return Err(HomEquivalenceError::LawFailure(format!(
                "{name} is not a functor: {}",
                rep.violations[0].law
            )));
        }
    }
    let round_left = fincat::find_natural_iso(
        &v.compose(&u),
        &Functor::identity(&left_cat),
        &left_cat,
        &left_cat,
    )
    .ok_or_else(|| HomEquivalenceError::NotQuasiInverse("v∘u ≇ Id".into()))?;
    let round_right = fincat::find_natural_iso(
        &u.compose(&v),
        &Functor::identity(&right_cat),
        &right_cat,
        &right_cat,
    )
    .ok_or_else(|| HomEquivalenceError::NotQuasiInverse("u∘v ≇ Id".into()))?;
    Ok(HomEquivalence {
        to_right: u,
        to_left: v,
        left_cat,
        right_cat,
        round_left,
        round_right,
    })
}

fn two_by_id(hom: &HomCat, id: &str) -> TwoCell {
    match hom {
        HomCat::Poset(p) => {
            let inner = id
                .strip_prefix("le[")
                .and_then(|s| s.strip_suffix(']'))
                .expect("posetal morphism id");
            let (s, t) = inner.split_once("=>").expect("posetal morphism id");
            let si = p.cells.binary_search_by(|c| c.as_str().cmp(s)).expect("cell") as u32;
            let ti = p.cells.binary_search_by(|c| c.as_str().cmp(t)).expect("cell") as u32;
            TwoCell::new(si, ti, 0)
        }
        HomCat::Table(tb) => tb.loc_of(tb.cat.morphism_index(id).expect("morphism")),
    }
}

// ---------------------------------------------------------------------------
// Pseudomonads
// ---------------------------------------------------------------------------

/// A pseudomonad (T, Π, Ψ, β, η, π).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pseudomonad {
    pub t: PsFun,
    /// Π : T² ⇒ T.
    pub mult: PsTrans,
    /// Ψ : Id ⇒ T.
    pub unit: PsTrans,
    /// β : Π ∘ Ψ_T ⇛ Id_T.
    pub beta: Modif,
    /// η : Π ∘ T(Ψ) ⇛ Id_T.
    pub eta: Modif,
    /// π : Π ∘ T(Π) ⇛ Π ∘ Π_T.
    pub pi: Modif,
}

impl Pseudomonad {
    pub fn bicat(&self) -> &Arc<Bicat> {
        &self.t.src
    }

    /// The identity pseudomonad on a bicategory.
    pub fn identity(b: &Arc<Bicat>) -> Pseudomonad {
        let idf = PsFun::identity(b);
        let mult = id_trans(&idf);
        let unit = id_trans(&idf);
        let mk_collapse = |src: &PsTrans, tgt: &PsTrans| -> Modif {
            let comp = src
                .dom
                .iter()
                .map(|&x| (x, b.lunitor(x, x, b.id1[x as usize])))
                .collect();
            Modif {
                s: src.clone(),
                t: tgt.clone(),
                dom: src.dom.clone(),
                comp,
            }
        };
        let beta_src = vcomp_trans(&mult, &pre_whisker(&unit, &idf));
        let eta_src = vcomp_trans(&mult, &post_whisker(&idf, &unit));
        let id_t = id_trans(&idf);
        let pi_src = vcomp_trans(&mult, &post_whisker(&idf, &mult));
        let pi_tgt = vcomp_trans(&mult, &pre_whisker(&mult, &idf));
        let pi_comp = pi_src
            .dom
            .iter()
            .map(|&x| {
                let hom = b.hom(x, x);
                (x, hom.id2(pi_src.at(x)))
            })
            .collect();
        Pseudomonad {
            t: idf.clone(),
            beta: mk_collapse(&beta_src, &id_t),
            eta: mk_collapse(&eta_src, &id_t),
            pi: Modif {
                s: pi_src.clone(),
                t: pi_tgt,
                dom: pi_src.dom.clone(),
                comp: pi_comp,
            },
            mult,
            unit,
        }
    }
}

/// Check component laws, modification typing, and the two pseudomonad
/// coherence conditions (associativity pentagon for π, and the middle-unit
/// compatibility of β/η through π).
pub fn check_pseudomonad(m: &Pseudomonad) -> Result<CheckReport, TableError> {
    let mut report = CheckReport::new(format!(
        "pseudomonad (T on {} objects, Π on {}, Ψ on {})",
        m.t.dom.len(),
        m.mult.dom.len(),
        m.unit.dom.len()
    ));
    report.merge(check_pseudofunctor(&m.t)?);
    report.merge(check_transformation(&m.mult)?);
    report.merge(check_transformation(&m.unit)?);
    report.merge(check_modification(&m.beta)?);
    report.merge(check_modification(&m.eta)?);
    report.merge(check_modification(&m.pi)?);
    if !report.passed() {
        return Ok(report);
    }
    for (name, md) in [("β", &m.beta), ("η", &m.eta), ("π", &m.pi)] {
        if !md.is_invertible() {
            report.push(
                "non-invertible-coherence-cell",
                name,
                "pseudomonad structure modification not invertible",
            );
        }
    }
    // Endpoint typing of the structure modifications.
    let beta_src = vcomp_trans(&m.mult, &pre_whisker(&m.unit, &m.t));
    let eta_src = vcomp_trans(&m.mult, &post_whisker(&m.t, &m.unit));
    let pi_src = vcomp_trans(&m.mult, &post_whisker(&m.t, &m.mult));
    let pi_tgt = vcomp_trans(&m.mult, &pre_whisker(&m.mult, &m.t));
    for (name, md, want_s, want_t) in [
        ("β", &m.beta, &beta_src, &id_trans(&m.t)),
        ("η", &m.eta, &eta_src, &id_trans(&m.t)),
        ("π", &m.pi, &pi_src, &pi_tgt),
    ] {
        for &x in &md.dom {
            if md.s.at(x) != want_s.at(x) || md.t.at(x) != want_t.at(x) {
                report.push(
                    "pseudomonad-typing",
                    format!("{name} at object {x}"),
                    "structure modification has wrong endpoints",
                );
            }
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    // Coherence 1: associativity pentagon for π over T⁴ ⇒ T.
    let t = &m.t;
    let t2 = t.compose(t);
    let tm = post_whisker(t, &m.mult);
    let t2m = post_whisker(t, &tm);
    let mt = pre_whisker(&m.mult, t);
    let mt2 = pre_whisker(&m.mult, &t2);
    let m1 = pre_whisker(&tm, t);
    let v1 = vcomp_trans(&m.mult, &vcomp_trans(&tm, &t2m));
    let v4 = vcomp_trans(&m.mult, &vcomp_trans(&mt, &mt2));
    use crate::cell_calculus::assoc_modification;
    // side 1: π ∗ T²m, then m ∗ exchange(m,m)⁻¹, then π ∗ m_{T²}
    let s1 = vcomp_modif_many(&[
        &inverse_modif(&assoc_modification(&m.mult, &tm, &t2m)),
        &whisker_r_modif(&m.pi, &t2m),
        &assoc_modification(&m.mult, &mt, &t2m),
        &whisker_l_modif(&m.mult, &inverse_modif(&exchange(&m.mult, &m.mult))),
        &inverse_modif(&assoc_modification(&m.mult, &tm, &mt2)),
        &whisker_r_modif(&m.pi, &mt2),
        &assoc_modification(&m.mult, &mt, &mt2),
    ]);
    // side 2: m ∗ T(π), then π ∗ M1, then m ∗ π_T
    let compat1 = post_whisker_compat(t, &m.mult, &tm);
    let compat2 = post_whisker_compat(t, &m.mult, &mt);
    let inner_mid = vcomp_modif_many(&[
        &inverse_modif(&compat1),
        &post_whisker_modif(t, &m.pi),
        &compat2,
    ]);
    let compat3 = pre_whisker_compat(&m.mult, &tm, t);
    let compat4 = pre_whisker_compat(&m.mult, &mt, t);
    let inner_right = vcomp_modif_many(&[
        &inverse_modif(&compat3),
        &pre_whisker_modif(&m.pi, t),
        &compat4,
    ]);
    let s2 = vcomp_modif_many(&[
        &whisker_l_modif(&m.mult, &inner_mid),
        &inverse_modif(&assoc_modification(&m.mult, &tm, &m1)),
        &whisker_r_modif(&m.pi, &m1),
        &assoc_modification(&m.mult, &mt, &m1),
        &whisker_l_modif(&m.mult, &inner_right),
    ]);
    let dom_pent: Vec<ObjIx> = s1.dom.iter().copied().filter(|x| s2.dom.contains(x)).collect();
    for &x in &dom_pent {
        if s1.at(x) != s2.at(x) {
            report.push(
                "pseudomonad-pentagon",
                format!("object {x}"),
                "the two π-composites differ",
            );
        }
        debug_assert_eq!(s1.s.at(x), v1.at(x));
        debug_assert_eq!(s1.t.at(x), v4.at(x));
    }
    // Coherence 2: middle-unit compatibility.
    let te = post_whisker(t, &m.unit);
    let et = pre_whisker(&m.unit, t);
    let m2 = pre_whisker(&te, t);
    let compat_b1 = post_whisker_compat(t, &m.mult, &et);
    let inner1 = vcomp_modif_many(&[
        &inverse_modif(&compat_b1),
        &post_whisker_modif(t, &m.beta),
        &post_id_collapse(t, t),
    ]);
    let rho_m = crate::cell_calculus::runitor_modification(&m.mult);
    let path1 = vcomp_modif_many(&[
        &whisker_l_modif(&m.mult, &inner1),
        &rho_m,
    ]);
    let compat_b2 = pre_whisker_compat(&m.mult, &te, t);
    let inner2 = vcomp_modif_many(&[
        &inverse_modif(&compat_b2),
        &pre_whisker_modif(&m.eta, t),
    ]);
    let path2 = vcomp_modif_many(&[
        &inverse_modif(&assoc_modification(&m.mult, &tm, &m2)),
        &whisker_r_modif(&m.pi, &m2),
        &assoc_modification(&m.mult, &mt, &m2),
        &whisker_l_modif(&m.mult, &inner2),
        &rho_m,
    ]);
    let dom_unit: Vec<ObjIx> = path1
        .dom
        .iter()
        .copied()
        .filter(|x| path2.dom.contains(x))
        .collect();
    for &x in &dom_unit {
        if path1.at(x) != path2.at(x) {
            report.push(
                "pseudomonad-middle-unit",
                format!("object {x}"),
                "β-route and η-route disagree through π",
            );
        }
    }
    Ok(report)
}

/// A Kock–Zöberlein monad: a pseudomonad with the structural modification
/// μ : Ψ_T ⇛ T(Ψ) and the adjunction between the multiplication and the
/// whiskered unit, with counit η.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KZMonad {
    pub monad: Pseudomonad,
    /// μ : Ψ_T ⇛ T(Ψ).
    pub mu: Modif,
    /// Per object X: unit 2-cell Id_{T²X} ⇒ T(Ψ_X)∘Π_X of the adjunction
    /// Π_X ⊣ T(Ψ_X); its counit is η's component at X.
    pub adj_unit: HashMap<ObjIx, TwoCell>,
}

/// Verify μ and the per-object adjunction triangle identities.
pub fn check_kz(k: &KZMonad) -> Result<CheckReport, TableError> {
    let mut report = check_pseudomonad(&k.monad)?;
    let m = &k.monad;
    let b = m.bicat().clone();
    let mu_src = pre_whisker(&m.unit, &m.t);
    let mu_tgt = post_whisker(&m.t, &m.unit);
    for &x in &k.mu.dom {
        if k.mu.s.at(x) != mu_src.at(x) || k.mu.t.at(x) != mu_tgt.at(x) {
            report.push(
                "kz-mu-typing",
                format!("object {x}"),
                "μ is not Ψ_T ⇛ T(Ψ)",
            );
        }
    }
    report.merge(check_modification(&k.mu)?);
    if !report.passed() {
        return Ok(report);
    }
    for (&x, &u) in k.adj_unit.iter().collect::<BTreeMap<_, _>>() {
        let tx = m.t.o(x);
        let t2x = m.t.o(tx);
        let l = m.mult.at(x); // Π_X : T²X → TX
        let r = mu_tgt.at(x); // T(Ψ_X) : TX → T²X
        let eps = m.eta.at(x); // Π_X∘T(Ψ_X) ⇒ Id_{TX}
        let rl = b.c1(t2x, tx, t2x, r, l);
        if u.src != b.id1[t2x as usize] || u.tgt != rl || !b.hom(t2x, t2x).two_exists(u) {
            report.push(
                "kz-adjunction-unit-typing",
                format!("object {x}"),
                "adjunction unit has wrong endpoints",
            );
            continue;
        }
        // Triangle 1 on ℓ = Π_X: λ∘(ε∗ℓ)∘α⁻¹∘(ℓ∗u)∘ρ⁻¹ = id.
        let tri1 = Paste::start(&b, t2x, tx, l)
            .step(b.runitor_inv(t2x, tx, l))
            .step(b.c2(t2x, t2x, tx, b.hom(t2x, tx).id2(l), u))
            .step(b.assoc_inv(t2x, t2x, tx, tx, l, r, l))
            .step(b.c2(t2x, tx, tx, eps, b.hom(t2x, tx).id2(l)))
            .step(b.lunitor(t2x, tx, l))
            .finish();
        if tri1 != b.hom(t2x, tx).id2(l) {
            report.push(
                "kz-adjunction-triangle",
                format!("object {x}"),
                "triangle identity on the multiplication fails",
            );
        }
        // Triangle 2 on r = T(Ψ_X): ρ∘(r∗ε)∘α∘(u∗r)∘λ⁻¹ = id.
        let tri2 = Paste::start(&b, tx, t2x, r)
            .step(b.lunitor_inv(tx, t2x, r))
            .step(b.c2(tx, t2x, t2x, u, b.hom(tx, t2x).id2(r)))
            .step(b.assoc(tx, t2x, tx, t2x, r, l, r))
            .step(b.c2(tx, tx, t2x, b.hom(tx, t2x).id2(r), eps))
            .step(b.runitor(tx, t2x, r))
            .finish();
        if tri2 != b.hom(tx, t2x).id2(r) {
            report.push(
                "kz-adjunction-triangle",
                format!("object {x}"),
                "triangle identity on the whiskered unit fails",
            );
        }
    }
    Ok(report)
}

/// Extract the pseudomonad of a biadjunction: T = RL, Π from the counit,
/// Ψ = unit, with β/η/π assembled from the triangulators and coherence.
pub fn pseudomonad_from_biadjunction(ba: &Biadjunction) -> Pseudomonad {
    let l = &ba.left;
    let r = &ba.right;
    let t = r.compose(l);
    let e_l = pre_whisker(&ba.counit, l);
    let mult = post_whisker(r, &e_l);
    let unit = ba.unit.clone();
    // β from the right triangulator, pre-whiskered by L.
    let beta_raw = pre_whisker_modif(&ba.tri_r, l);
    let beta_src = vcomp_trans(&mult, &pre_whisker(&unit, &t));
    let beta = rebracket(&beta_raw, &beta_src, &id_trans(&t));
    // η from the left triangulator, post-whiskered by R, with R²/R⁰ collapses.
    let tl_src = ba.tri_l_source();
    let delta = post_whisker_compat(r, &pre_whisker(&ba.counit, l), &post_whisker(l, &ba.unit));
    let eta_mid = vcomp_modif_many(&[
        &inverse_modif(&delta),
        &post_whisker_modif(r, &rebracket(&ba.tri_l, &tl_src, &id_trans(l))),
        &post_id_collapse(r, l),
    ]);
    let eta_src = vcomp_trans(&mult, &post_whisker(&t, &unit));
    let eta = rebracket(&eta_mid, &eta_src, &id_trans(&t));
    // π from the exchange of the counit with its own L-whiskering.
    let lr = l.compose(r);
    let ex = exchange(&ba.counit, &e_l);
    let d1 = post_whisker_compat(r, &e_l, &pre_whisker(&e_l, &lr));
    let d2 = post_whisker_compat(r, &e_l, &post_whisker(&lr, &e_l));
    let pi_mid = vcomp_modif_many(&[&inverse_modif(&d2), &post_whisker_modif(r, &inverse_modif(&ex)), &d1]);
    let pi_src = vcomp_trans(&mult, &post_whisker(&t, &mult));
    let pi_tgt = vcomp_trans(&mult, &pre_whisker(&mult, &t));
    let pi = rebracket(&pi_mid, &pi_src, &pi_tgt);
    Pseudomonad {
        t,
        mult,
        unit,
        beta,
        eta,
        pi,
    }
}

// ---------------------------------------------------------------------------
// Kleisli bicategory
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Error, PartialEq)]
pub enum KleisliError {
    #[error("universe not closed: missing {0}")]
    UniverseNotClosed(String),
}

#[derive(Debug, Clone)]
pub struct KleisliPack {
    pub kl: Arc<Bicat>,
    /// J : C → Kl (identity on objects, f ↦ Ψ∘f).
    pub j: PsFun,
    /// T̃ : Kl → C (X ↦ T X, g ↦ Π∘T(g)).
    pub ttilde: PsFun,
    /// The canonical biadjunction J ⊣ T̃.
    pub biadj: Biadjunction,
    /// Objects of the ambient bicategory carried by Kl.
    pub objects: Vec<ObjIx>,
}

/// Objects with enough materialized T-powers to support Kleisli composition
/// and its coherence (three levels).
fn kleisli_objects(m: &Pseudomonad) -> Result<Vec<ObjIx>, KleisliError> {
    let t = &m.t;
    let mut out = Vec::new();
    let mut first_missing: Option<String> = None;
    for &x in &t.dom {
        let tx = t.o(x);
        if !t.defined_at(tx) {
            if first_missing.is_none() {
                first_missing = Some(format!("T²({})", t.src.objects[x as usize]));
            }
            continue;
        }
        let t2x = t.o(tx);
        if !t.defined_at(t2x) {
            if first_missing.is_none() {
                first_missing = Some(format!("T³({})", t.src.objects[x as usize]));
            }
            continue;
        }
        if !(m.mult.dom.contains(&x) && m.mult.dom.contains(&tx) && m.unit.dom.contains(&x)) {
            if first_missing.is_none() {
                first_missing = Some(format!(
                    "monad structure at T-powers of {}",
                    t.src.objects[x as usize]
                ));
            }
            continue;
        }
        out.push(x);
    }
    if out.is_empty() {
        return Err(KleisliError::UniverseNotClosed(
            first_missing.unwrap_or_else(|| "empty monad domain".to_string()),
        ));
    }
    Ok(out)
}

/// Build the Kleisli bicategory with its canonical biadjunction. Coherence
/// cells are assembled from the monad's structure cells and verified a
/// posteriori by the caller via `check_bicategory`.
pub fn kleisli(m: &Pseudomonad) -> Result<KleisliPack, KleisliError> {
    let c = m.bicat().clone();
    let t = &m.t;
    let objs = kleisli_objects(m)?;
    let n = objs.len();
    let names: Vec<String> = objs.iter().map(|&x| c.objects[x as usize].clone()).collect();
    // hom_Kl(X, Y) = hom_C(X, T Y)
    let mut homs = Vec::with_capacity(n * n);
    for &x in &objs {
        for &y in &objs {
            homs.push(c.hom(x, t.o(y)).clone());
        }
    }
    let id1: Vec<CellIx> = objs.iter().map(|&x| m.unit.at(x)).collect();
    // composition: g ⋄ f = Π_z ∘ (T(g) ∘ f)
    let dia = |xi: usize, yi: usize, zi: usize, g: CellIx, f: CellIx| -> CellIx {
        let (x, y, z) = (objs[xi], objs[yi], objs[zi]);
        let (tx, ty, tz) = (t.o(x), t.o(y), t.o(z));
        let _ = tx;
        let t2z = t.o(tz);
        let tg = t.c(y, tz, g);
        let inner = c.c1(x, ty, t2z, tg, f);
        c.c1(x, t2z, tz, m.mult.at(z), inner)
    };
    let mut comp1 = Vec::with_capacity(n * n * n);
    let mut comp2 = Vec::with_capacity(n * n * n);
    for xi in 0..n {
        for yi in 0..n {
            for zi in 0..n {
                let hf = c.hom(objs[xi], t.o(objs[yi]));
                let hg = c.hom(objs[yi], t.o(objs[zi]));
                let mut table = Vec::with_capacity((hg.n_cells() * hf.n_cells()) as usize);
                for g in 0..hg.n_cells() {
                    for f in 0..hf.n_cells() {
                        table.push(dia(xi, yi, zi, g, f));
                    }
                }
                comp1.push(table);
                let target = c.hom(objs[xi], t.o(objs[zi]));
                if target.is_poset() {
                    comp2.push(Comp2::Implicit);
                } else {
                    let (x, y, z) = (objs[xi], objs[yi], objs[zi]);
                    let (ty, tz) = (t.o(y), t.o(z));
                    let t2z = t.o(tz);
                    let mut tab = Vec::with_capacity(hg.n_two_cells() * hf.n_two_cells());
                    for psi in hg.two_cells() {
                        for phi in hf.two_cells() {
                            let tpsi = t.t2(y, tz, psi);
                            let inner = c.c2(x, ty, t2z, tpsi, phi);
                            tab.push(c.c2(
                                x,
                                t2z,
                                tz,
                                c.hom(t2z, tz).id2(m.mult.at(z)),
                                inner,
                            ));
                        }
                    }
                    comp2.push(Comp2::Table(tab));
                }
            }
        }
    }
    // Coherence cells via the standard assembly.
    let kl_assoc = |xi: usize, yi: usize, zi: usize, wi: usize, h: CellIx, g: CellIx, f: CellIx| -> TwoCell {
        let (x, y, z, w) = (objs[xi], objs[yi], objs[zi], objs[wi]);
        let (ty, tz, tw) = (t.o(y), t.o(z), t.o(w));
        let (t2z, t2w) = (t.o(tz), t.o(tw));
        let t3w = t.o(t2w);
        let pw = m.mult.at(w);
        let pz = m.mult.at(z);
        let ptw = m.mult.at(tw);
        let tg = t.c(y, tz, g);
        let th = t.c(z, tw, h);
        let t2h = t.c(tz, t2w, th);
        let tpw = t.c(t2w, tw, pw);
        let hg = c.c1(y, tz, t2w, th, g); // T(h)∘g
        let q = c.c1(y, t2w, tw, pw, hg); // h⋄g
        let tq = t.c(y, tw, q);
        let tgf = c.c1(x, ty, t2z, tg, f);
        let _ = tgf;
        let a_cell = c.c1(x, ty, t2w, tq, f);
        let start = c.c1(x, t2w, tw, pw, a_cell);
        // Π_w∘(T(q)∘f) ⇒ ... ⇒ Π_w∘(T h∘(Π_z∘(T g∘f)))
        let chain = Paste::start(&c, x, tw, start)
            .step(c.whisk_l(
                x,
                t2w,
                tw,
                pw,
                c.whisk_r(x, ty, t2w, t.f2_inv(y, t2w, tw, pw, hg), f),
            ))
            .step(c.whisk_l(
                x,
                t2w,
                tw,
                pw,
                c.whisk_r(
                    x,
                    ty,
                    t2w,
                    c.whisk_l(ty, t3w, t2w, tpw, t.f2_inv(y, tz, t2w, th, g)),
                    f,
                ),
            ))
            .step(c.whisk_l(
                x,
                t2w,
                tw,
                pw,
                c.assoc(x, ty, t3w, t2w, tpw, c.c1(ty, t2z, t3w, t2h, tg), f),
            ))
            .step(c.whisk_l(
                x,
                t2w,
                tw,
                pw,
                c.whisk_l(
                    x,
                    t3w,
                    t2w,
                    tpw,
                    c.assoc(x, ty, t2z, t3w, t2h, tg, f),
                ),
            ))
            .step(c.assoc_inv(x, t3w, t2w, tw, pw, tpw, c.c1(x, t2z, t3w, t2h, c.c1(x, ty, t2z, tg, f))))
            .step(c.whisk_r(
                x,
                t3w,
                tw,
                m.pi.at(w),
                c.c1(x, t2z, t3w, t2h, c.c1(x, ty, t2z, tg, f)),
            ))
            .step(c.assoc(x, t3w, t2w, tw, pw, ptw, c.c1(x, t2z, t3w, t2h, c.c1(x, ty, t2z, tg, f))))
            .step(c.whisk_l(
                x,
                t2w,
                tw,
                pw,
                c.assoc_inv(x, t2z, t3w, t2w, ptw, t2h, c.c1(x, ty, t2z, tg, f)),
            ))
            .step(c.whisk_l(
                x,
                t2w,
                tw,
                pw,
                c.whisk_r(
                    x,
                    t2z,
                    t2w,
                    c.hom(t2z, t2w)
                        .inverse(m.mult.nat_at(z, tw, h))
                        .expect("Π naturality invertible"),
                    c.c1(x, ty, t2z, tg, f),
                ),
            ))
            .step(c.whisk_l(
                x,
                t2w,
                tw,
                pw,
                c.assoc(x, t2z, tz, t2w, th, pz, c.c1(x, ty, t2z, tg, f)),
            ))
            .finish();
        chain
    };
    let kl_lunit = |xi: usize, yi: usize, f: CellIx| -> TwoCell {
        let (x, y) = (objs[xi], objs[yi]);
        let ty = t.o(y);
        let t2y = t.o(ty);
        let py = m.mult.at(y);
        let tpsi = t.c(y, ty, m.unit.at(y)); // T(Ψ_y)
        let start = c.c1(x, t2y, ty, py, c.c1(x, ty, t2y, tpsi, f));
        Paste::start(&c, x, ty, start)
            .step(c.assoc_inv(x, ty, t2y, ty, py, tpsi, f))
            .step(c.whisk_r(x, ty, ty, m.eta.at(y), f))
            .step(c.lunitor(x, ty, f))
            .finish()
    };
    let kl_runit = |xi: usize, yi: usize, f: CellIx| -> TwoCell {
        let (x, y) = (objs[xi], objs[yi]);
        let ty = t.o(y);
        let t2y = t.o(ty);
        let tx = t.o(x);
        let _ = tx;
        let py = m.mult.at(y);
        let tf = t.c(x, ty, f);
        let start = c.c1(x, t2y, ty, py, c.c1(x, tx_of(t, x), t2y, tf, m.unit.at(x)));
        Paste::start(&c, x, ty, start)
            .step(c.whisk_l(x, t2y, ty, py, m.unit.nat_at(x, ty, f)))
            .step(c.assoc_inv(x, ty, t2y, ty, py, m.unit.at(ty), f))
            .step(c.whisk_r(x, ty, ty, m.beta.at(y), f))
            .step(c.lunitor(x, ty, f))
            .finish()
    };
    fn tx_of(t: &PsFun, x: ObjIx) -> ObjIx {
        t.o(x)
    }
    // Materialize coherence tables, detect strictness.
    let mut assoc_tabs: HashMap<(ObjIx, ObjIx, ObjIx, ObjIx), Vec<TwoCell>> = HashMap::new();
    let mut lunit_tabs: Vec<Vec<TwoCell>> = Vec::with_capacity(n * n);
    let mut runit_tabs: Vec<Vec<TwoCell>> = Vec::with_capacity(n * n);
    let mut all_strict = true;
    for xi in 0..n {
        for yi in 0..n {
            let hom = &homs[xi * n + yi];
            let mut lt = Vec::with_capacity(hom.n_cells() as usize);
            let mut rt = Vec::with_capacity(hom.n_cells() as usize);
            for f in 0..hom.n_cells() {
                let l = kl_lunit(xi, yi, f);
                let r = kl_runit(xi, yi, f);
                // identity 2-cell on f with the composites being f itself?
                let strict_l = comp1[(xi * n + yi) * n + yi]
                    [(id1[yi] as usize) * hom.n_cells() as usize + f as usize]
                    == f
                    && l == hom.id2(f);
                let strict_r = comp1[(xi * n + xi) * n + yi]
                    [(f as usize) * homs[xi * n + xi].n_cells() as usize + id1[xi] as usize]
                    == f
                    && r == hom.id2(f);
                if !(strict_l && strict_r) {
                    all_strict = false;
                }
                lt.push(l);
                rt.push(r);
            }
            lunit_tabs.push(lt);
            runit_tabs.push(rt);
        }
    }
    for xi in 0..n {
        for yi in 0..n {
            for zi in 0..n {
                for wi in 0..n {
                    let nh = homs[zi * n + wi].n_cells() as usize;
                    let ng = homs[yi * n + zi].n_cells() as usize;
                    let nf = homs[xi * n + yi].n_cells() as usize;
                    let mut tab = Vec::with_capacity(nh * ng * nf);
                    for h in 0..nh {
                        for g in 0..ng {
                            for f in 0..nf {
                                let a = kl_assoc(xi, yi, zi, wi, h as u32, g as u32, f as u32);
                                if a != homs[xi * n + wi].id2(a.src) || a.src != a.tgt {
                                    all_strict = false;
                                }
                                tab.push(a);
                            }
                        }
                    }
                    assoc_tabs.insert((xi as u32, yi as u32, zi as u32, wi as u32), tab);
                }
            }
        }
    }
    let coherence = if all_strict {
        Coherence::Strict
    } else {
        Coherence::Cells {
            assoc: assoc_tabs,
            lunit: lunit_tabs,
            runit: runit_tabs,
        }
    };
    let kl = Arc::new(Bicat {
        objects: names,
        homs,
        id1,
        comp1,
        comp2,
        coherence,
        carrier: None,
    });

    // J : C → Kl
    let obj_pos: HashMap<ObjIx, ObjIx> = objs
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as ObjIx))
        .collect();
    let mut j_cell1 = HashMap::new();
    let mut j_two = HashMap::new();
    let mut j_unit = HashMap::new();
    let mut j_comp = HashMap::new();
    for &x in &objs {
        for &y in &objs {
            let ty = t.o(y);
            let hs = c.hom(x, y);
            let table: Vec<CellIx> = (0..hs.n_cells())
                .map(|f| c.c1(x, y, ty, m.unit.at(y), f))
                .collect();
            let tm = if kl.hom(obj_pos[&x], obj_pos[&y]).is_poset() {
                TwoMap::Implicit
            } else {
                TwoMap::Table(
                    hs.two_cells()
                        .into_iter()
                        .map(|tc| c.whisk_l(x, y, ty, m.unit.at(y), tc))
                        .collect(),
                )
            };
            j_cell1.insert((x, y), table);
            j_two.insert((x, y), tm);
        }
    }
    for &x in &objs {
        let tx = t.o(x);
        // Id_Kl(X) = Ψ_X ⇒ J(Id_X) = Ψ_X∘Id_X
        j_unit.insert(x, c.runitor_inv(x, tx, m.unit.at(x)));
    }
    for &x in &objs {
        for &y in &objs {
            for &z in &objs {
                let tz = t.o(z);
                let t2z = t.o(tz);
                let ng = c.hom(y, z).n_cells();
                let nf = c.hom(x, y).n_cells();
                let mut tab = Vec::with_capacity((ng * nf) as usize);
                for g in 0..ng {
                    for f in 0..nf {
                        let q = c.c1(y, z, tz, m.unit.at(z), g); // J(g)
                        let jf = c.c1(x, y, t.o(y), m.unit.at(y), f);
                        let tq = t.c(y, tz, q);
                        let start = c.c1(x, t2z, tz, m.mult.at(z), c.c1(x, t.o(y), t2z, tq, jf));
                        let cell = Paste::start(&c, x, tz, start)
                            .step(c.whisk_l(
                                x,
                                t2z,
                                tz,
                                m.mult.at(z),
                                c.assoc_inv(x, y, t.o(y), t2z, tq, m.unit.at(y), f),
                            ))
                            .step(c.whisk_l(
                                x,
                                t2z,
                                tz,
                                m.mult.at(z),
                                c.whisk_r(x, y, t2z, m.unit.nat_at(y, tz, q), f),
                            ))
                            .step(c.whisk_l(
                                x,
                                t2z,
                                tz,
                                m.mult.at(z),
                                c.assoc(x, y, tz, t2z, m.unit.at(tz), q, f),
                            ))
                            .step(c.assoc_inv(
                                x,
                                tz,
                                t2z,
                                tz,
                                m.mult.at(z),
                                m.unit.at(tz),
                                c.c1(x, y, tz, q, f),
                            ))
                            .step(c.whisk_r(x, tz, tz, m.beta.at(z), c.c1(x, y, tz, q, f)))
                            .step(c.lunitor(x, tz, c.c1(x, y, tz, q, f)))
                            .step(c.assoc(x, y, z, tz, m.unit.at(z), g, f))
                            .finish();
                        tab.push(cell);
                    }
                }
                j_comp.insert((x, y, z), tab);
            }
        }
    }
    let j = PsFun {
        src: c.clone(),
        tgt: kl.clone(),
        dom: objs.clone(),
        obj: objs.iter().map(|&x| (x, obj_pos[&x])).collect(),
        cell1: j_cell1,
        two: j_two,
        unit: UnitCells::Cells(j_unit),
        compositor: CompositorCells::Cells(j_comp),
    };
    // T̃ : Kl → C
    let mut tt_cell1 = HashMap::new();
    let mut tt_two = HashMap::new();
    let mut tt_unit = HashMap::new();
    let mut tt_comp = HashMap::new();
    let kl_dom: Vec<ObjIx> = (0..n as ObjIx).collect();
    for xi in 0..n {
        for yi in 0..n {
            let (x, y) = (objs[xi], objs[yi]);
            let _ = x;
            let ty = t.o(y);
            let t2y = t.o(ty);
            let hs = kl.hom(xi as u32, yi as u32);
            let table: Vec<CellIx> = (0..hs.n_cells())
                .map(|g| {
                    let tg = t.c(objs[xi], ty, g);
                    c.c1(t.o(objs[xi]), t2y, ty, m.mult.at(y), tg)
                })
                .collect();
            let tm = if c.hom(t.o(objs[xi]), ty).is_poset() {
                TwoMap::Implicit
            } else {
                TwoMap::Table(
                    hs.two_cells()
                        .into_iter()
                        .map(|tc| {
                            let timg = t.t2(objs[xi], ty, tc);
                            c.whisk_l(t.o(objs[xi]), t2y, ty, m.mult.at(y), timg)
                        })
                        .collect(),
                )
            };
            tt_cell1.insert((xi as ObjIx, yi as ObjIx), table);
            tt_two.insert((xi as ObjIx, yi as ObjIx), tm);
        }
    }
    for xi in 0..n {
        let x = objs[xi];
        let tx = t.o(x);
        let eta_inv = {
            let (hom, _, _) = m.eta.s.comp_hom(x);
            hom.inverse(m.eta.at(x)).expect("η invertible")
        };
        let _ = tx;
        tt_unit.insert(xi as ObjIx, eta_inv);
    }
    for xi in 0..n {
        for yi in 0..n {
            for zi in 0..n {
                let (x, y, z) = (objs[xi], objs[yi], objs[zi]);
                let (ty, tz) = (t.o(y), t.o(z));
                let (t2y, t2z) = (t.o(ty), t.o(tz));
                let t3z = t.o(t2z);
                let _ = t2y;
                let ng = kl.hom(xi2u(yi), xi2u(zi)).n_cells();
                let nf = kl.hom(xi2u(xi), xi2u(yi)).n_cells();
                let mut tab = Vec::with_capacity((ng * nf) as usize);
                for g in 0..ng {
                    for f in 0..nf {
                        let tg = t.c(y, tz, g);
                        let tf = t.c(x, ty, f);
                        let ttg = t.c(ty, t2z, tg);
                        let tpz = t.c(t2z, tz, m.mult.at(z));
                        let ttilde_g = c.c1(ty, t2z, tz, m.mult.at(z), tg);
                        let ttilde_f = c.c1(t.o(x), t2y, ty, m.mult.at(y), tf);
                        let start = c.c1(t.o(x), ty, tz, ttilde_g, ttilde_f);
                        let gf_kl = {
                            let inner = c.c1(x, ty, t2z, tg, f);
                            c.c1(x, t2z, tz, m.mult.at(z), inner)
                        };
                        let cell = Paste::start(&c, t.o(x), tz, start)
                            .step(c.assoc(t.o(x), t2y, t2z, tz, m.mult.at(z), tg, ttilde_f))
                            .step(c.whisk_l(
                                t.o(x),
                                t2z,
                                tz,
                                m.mult.at(z),
                                c.assoc_inv(t.o(x), t2y, ty, t2z, tg, m.mult.at(y), tf),
                            ))
                            .step(c.whisk_l(
                                t.o(x),
                                t2z,
                                tz,
                                m.mult.at(z),
                                c.whisk_r(
                                    t.o(x),
                                    t2y,
                                    t2z,
                                    m.mult.nat_at(y, tz, g),
                                    tf,
                                ),
                            ))
                            .step(c.whisk_l(
                                t.o(x),
                                t2z,
                                tz,
                                m.mult.at(z),
                                c.assoc(t.o(x), t2y, t3z, t2z, m.mult.at(tz), ttg, tf),
                            ))
                            .step(c.assoc_inv(
                                t.o(x),
                                t3z,
                                t2z,
                                tz,
                                m.mult.at(z),
                                m.mult.at(tz),
                                c.c1(t.o(x), t2y, t3z, ttg, tf),
                            ))
                            .step(c.whisk_r(
                                t.o(x),
                                t3z,
                                tz,
                                {
                                    let (hom, _, _) = m.pi.s.comp_hom(z);
                                    hom.inverse(m.pi.at(z)).expect("π invertible")
                                },
                                c.c1(t.o(x), t2y, t3z, ttg, tf),
                            ))
                            .step(c.assoc(
                                t.o(x),
                                t3z,
                                t2z,
                                tz,
                                m.mult.at(z),
                                tpz,
                                c.c1(t.o(x), t2y, t3z, ttg, tf),
                            ))
                            .step(c.whisk_l(
                                t.o(x),
                                t2z,
                                tz,
                                m.mult.at(z),
                                c.assoc_inv(t.o(x), t2y, t3z, t2z, tpz, ttg, tf),
                            ))
                            .step(c.whisk_l(
                                t.o(x),
                                t2z,
                                tz,
                                m.mult.at(z),
                                c.whisk_r(t.o(x), t2y, t2z, t.f2(ty, t2z, tz, m.mult.at(z), tg), tf),
                            ))
                            .step(c.whisk_l(
                                t.o(x),
                                t2z,
                                tz,
                                m.mult.at(z),
                                t.f2(x, ty, tz, ttilde_g, f),
                            ))
                            .step(c.whisk_l(
                                t.o(x),
                                t2z,
                                tz,
                                m.mult.at(z),
                                t.t2(x, tz, c.assoc(x, ty, t2z, tz, m.mult.at(z), tg, f)),
                            ))
                            .finish();
                        debug_assert_eq!(
                            cell.tgt,
                            c.c1(t.o(x), t2z, tz, m.mult.at(z), t.c(x, tz, gf_kl))
                        );
                        tab.push(cell);
                    }
                }
                tt_comp.insert((xi as ObjIx, yi as ObjIx, zi as ObjIx), tab);
            }
        }
    }
    let ttilde = PsFun {
        src: kl.clone(),
        tgt: c.clone(),
        dom: kl_dom.clone(),
        obj: (0..n as ObjIx).map(|xi| (xi, t.o(objs[xi as usize]))).collect(),
        cell1: tt_cell1,
        two: tt_two,
        unit: UnitCells::Cells(tt_unit),
        compositor: CompositorCells::Cells(tt_comp),
    };

    // Unit H : Id_C ⇒ T̃ J with components Ψ, and counit E : J T̃ ⇒ Id_Kl.
    let idc = PsFun::identity(&c).restrict(&objs);
    let ttj = ttilde.compose(&j);
    let mut h_comp = HashMap::new();
    let mut h_nat = HashMap::new();
    for &x in &objs {
        h_comp.insert(x, m.unit.at(x));
    }
    for &x in &objs {
        for &y in &objs {
            let ty = t.o(y);
            let tx = t.o(x);
            for k in 0..c.hom(x, y).n_cells() {
                let q = c.c1(x, y, ty, m.unit.at(y), k); // Ψ_Y∘k
                let tq = t.c(x, ty, q);
                let t2y = t.o(ty);
                // T̃J(k)∘Ψ_X = (Π_Y∘T(q))∘Ψ_X ⇒ Ψ_Y∘k
                let composite = c.c1(x, tx, ty, c.c1(tx, t2y, ty, m.mult.at(y), tq), m.unit.at(x));
                let cell = Paste::start(&c, x, ty, composite)
                    .step(c.assoc(x, tx, t2y, ty, m.mult.at(y), tq, m.unit.at(x)))
                    .step(c.whisk_l(x, t2y, ty, m.mult.at(y), m.unit.nat_at(x, ty, q)))
                    .step(c.assoc_inv(x, ty, t2y, ty, m.mult.at(y), m.unit.at(ty), q))
                    .step(c.whisk_r(x, ty, ty, m.beta.at(y), q))
                    .step(c.lunitor(x, ty, q))
                    .finish();
                h_nat.insert((x, y, k), cell);
            }
        }
    }
    let h = PsTrans {
        f: idc.clone(),
        g: ttj.clone(),
        dom: objs.clone(),
        comp: h_comp,
        nat: h_nat,
    };
    // counit: defined where T X is itself a Kleisli object.
    let e_dom: Vec<ObjIx> = kl_dom
        .iter()
        .copied()
        .filter(|&xi| obj_pos.contains_key(&t.o(objs[xi as usize])))
        .collect();
    let jtt = j.compose(&ttilde);
    let mut e_comp = HashMap::new();
    let mut e_nat = HashMap::new();
    for &xi in &e_dom {
        let x = objs[xi as usize];
        let tx = t.o(x);
        // E_X = Id_{T X} as a Kleisli cell T X → X, i.e. an element of
        // hom_C(T X, T X).
        e_comp.insert(xi, c.id1[tx as usize]);
    }
    for &xi in &e_dom {
        for &yi in &e_dom {
            let (x, y) = (objs[xi as usize], objs[yi as usize]);
            let (tx, ty) = (t.o(x), t.o(y));
            let txi = obj_pos[&tx];
            let _tyi = obj_pos[&ty];
            let _ = txi;
            let t2y = t.o(ty);
            for g in 0..kl.hom(xi, yi).n_cells() {
                // LHS: g ⋄ E_X in Kl = Π_Y∘(T(g)∘Id_{TX})
                let tg = t.c(x, ty, g);
                let lhs_inner = c.c1(tx, tx, t2y, tg, c.id1[tx as usize]);
                let lhs = c.c1(tx, t2y, ty, m.mult.at(y), lhs_inner);
                let to_m = Paste::start(&c, tx, ty, lhs)
                    .step(c.whisk_l(tx, t2y, ty, m.mult.at(y), c.runitor(tx, t2y, tg)))
                    .finish();
                // RHS: E_Y ⋄ JT̃(g) = Π_Y∘(T(Id_TY)∘(Ψ_TY∘(Π_Y∘T(g))))
                let ttg = c.c1(tx, t2y, ty, m.mult.at(y), tg);
                let jttg = c.c1(tx, ty, t2y, m.unit.at(ty), ttg);
                let tid = t.c(ty, ty, c.id1[ty as usize]);
                let rhs_inner = c.c1(tx, t2y, t2y, tid, jttg);
                let rhs = c.c1(tx, t2y, ty, m.mult.at(y), rhs_inner);
                let rhs_chain = Paste::start(&c, tx, ty, rhs)
                    .step(c.whisk_l(
                        tx,
                        t2y,
                        ty,
                        m.mult.at(y),
                        c.whisk_r(tx, t2y, t2y, t.f0_inv(ty), jttg),
                    ))
                    .step(c.whisk_l(tx, t2y, ty, m.mult.at(y), c.lunitor(tx, t2y, jttg)))
                    .step(c.assoc_inv(tx, ty, t2y, ty, m.mult.at(y), m.unit.at(ty), ttg))
                    .step(c.whisk_r(tx, ty, ty, m.beta.at(y), ttg))
                    .step(c.lunitor(tx, ty, ttg))
                    .finish();
                let to_m_inv_target = to_m.tgt;
                debug_assert_eq!(to_m_inv_target, rhs_chain.tgt);
                let cell = c
                    .hom(tx, ty)
                    .vcomp(
                        c.hom(tx, ty).inverse(rhs_chain).expect("invertible"),
                        to_m,
                    )
                    .expect("Kleisli counit naturality");
                e_nat.insert((xi, yi, g), cell);
            }
        }
    }
    let id_kl = PsFun::identity(&kl).restrict(&e_dom);
    let e = PsTrans {
        f: jtt.restrict(&e_dom),
        g: id_kl,
        dom: e_dom.clone(),
        comp: e_comp,
        nat: e_nat,
    };
    // Triangulators.
    let tri_l_src = vcomp_trans(&pre_whisker(&e, &j), &post_whisker(&j, &h));
    let mut tri_l_comp = HashMap::new();
    for &x in &tri_l_src.dom {
        let tx = t.o(x);
        let t2x = t.o(tx);
        let jid = c.c1(x, tx, t2x, m.unit.at(tx), m.unit.at(x)); // J(H_X)
        let tid = t.c(tx, tx, c.id1[tx as usize]);
        let inner = c.c1(x, t2x, t2x, tid, jid);
        let start = c.c1(x, t2x, tx, m.mult.at(x), inner);
        debug_assert_eq!(start, tri_l_src.at(x));
        let cell = Paste::start(&c, x, tx, start)
            .step(c.whisk_l(
                x,
                t2x,
                tx,
                m.mult.at(x),
                c.whisk_r(x, t2x, t2x, t.f0_inv(tx), jid),
            ))
            .step(c.whisk_l(x, t2x, tx, m.mult.at(x), c.lunitor(x, t2x, jid)))
            .step(c.assoc_inv(x, tx, t2x, tx, m.mult.at(x), m.unit.at(tx), m.unit.at(x)))
            .step(c.whisk_r(x, tx, tx, m.beta.at(x), m.unit.at(x)))
            .step(c.lunitor(x, tx, m.unit.at(x)))
            .finish();
        tri_l_comp.insert(x, cell);
    }
    let tri_l = Modif {
        t: id_trans(&j.restrict(&tri_l_src.dom)),
        dom: tri_l_src.dom.clone(),
        s: tri_l_src,
        comp: tri_l_comp,
    };
    let tri_r_src = vcomp_trans(&post_whisker(&ttilde, &e), &pre_whisker(&h, &ttilde));
    let mut tri_r_comp = HashMap::new();
    for &xi in &tri_r_src.dom {
        let x = objs[xi as usize];
        let tx = t.o(x);
        let t2x = t.o(tx);
        let tid = t.c(tx, tx, c.id1[tx as usize]);
        let tte = c.c1(tx, t2x, tx, m.mult.at(x), tid); // T̃(E_X)
        let start = c.c1(tx, tx, tx, tte, m.unit.at(tx));
        debug_assert_eq!(start, tri_r_src.at(xi));
        let inner_collapse = Paste::start(&c, tx, tx, tte)
            .step(c.whisk_l(tx, t2x, tx, m.mult.at(x), t.f0_inv(tx)))
            .step(c.runitor(tx, tx, m.mult.at(x)))
            .finish();
        let cell = Paste::start(&c, tx, tx, start)
            .step(c.c2(tx, tx, tx, inner_collapse, c.hom(tx, tx).id2(m.unit.at(tx))))
            .step(m.beta.at(x))
            .finish();
        tri_r_comp.insert(xi, cell);
    }
    let tri_r = Modif {
        t: id_trans(&ttilde.restrict(&tri_r_src.dom)),
        dom: tri_r_src.dom.clone(),
        s: tri_r_src,
        comp: tri_r_comp,
    };
    let biadj = Biadjunction {
        left: j.clone(),
        right: ttilde.clone(),
        unit: h,
        counit: e,
        tri_l,
        tri_r,
    };
    Ok(KleisliPack {
        kl,
        j,
        ttilde,
        biadj,
        objects: objs,
    })
}

// ---------------------------------------------------------------------------
// The inverter sub-bicategory of a KZ-monad
// ---------------------------------------------------------------------------

/// Full sub-bicategory on a sorted subset of objects, plus the object map
/// back into the ambient bicategory.
pub fn full_sub_bicat(b: &Arc<Bicat>, keep: &[ObjIx]) -> (Arc<Bicat>, Vec<ObjIx>) {
    let n = keep.len();
    let objects: Vec<String> = keep.iter().map(|&x| b.objects[x as usize].clone()).collect();
    let mut homs = Vec::with_capacity(n * n);
    for &x in keep {
        for &y in keep {
            homs.push(b.hom(x, y).clone());
        }
    }
    let id1 = keep.iter().map(|&x| b.id1[x as usize]).collect();
    let mut comp1 = Vec::with_capacity(n * n * n);
    let mut comp2 = Vec::with_capacity(n * n * n);
    for &x in keep {
        for &y in keep {
            for &z in keep {
                comp1.push(b.comp1[b.tix(x, y, z)].clone());
                comp2.push(b.comp2[b.tix(x, y, z)].clone());
            }
        }
    }
    let coherence = match &b.coherence {
        Coherence::Strict => Coherence::Strict,
        Coherence::Cells { assoc, lunit, runit } => {
            let mut a2 = HashMap::new();
            for (xi, &x) in keep.iter().enumerate() {
                for (yi, &y) in keep.iter().enumerate() {
                    for (zi, &z) in keep.iter().enumerate() {
                        for (wi, &w) in keep.iter().enumerate() {
                            a2.insert(
                                (xi as u32, yi as u32, zi as u32, wi as u32),
                                assoc[&(x, y, z, w)].clone(),
                            );
                        }
                    }
                }
            }
            let mut l2 = Vec::new();
            let mut r2 = Vec::new();
            for &x in keep {
                for &y in keep {
                    l2.push(lunit[b.hix(x, y)].clone());
                    r2.push(runit[b.hix(x, y)].clone());
                }
            }
            Coherence::Cells { assoc: a2, lunit: l2, runit: r2 }
        }
    };
    let carrier = b.carrier.as_ref().map(|car| match car {
        crate::bicat_core::Carrier::Posets { elems, leq, maps } => {
            let mut m2 = Vec::new();
            for &x in keep {
                for &y in keep {
                    m2.push(maps[b.hix(x, y)].clone());
                }
            }
            crate::bicat_core::Carrier::Posets {
                elems: keep.iter().map(|&x| elems[x as usize].clone()).collect(),
                leq: keep.iter().map(|&x| leq[x as usize].clone()).collect(),
                maps: m2,
            }
        }
        crate::bicat_core::Carrier::Relations { elems, rels } => {
            let mut r2 = Vec::new();
            for &x in keep {
                for &y in keep {
                    r2.push(rels[b.hix(x, y)].clone());
                }
            }
            crate::bicat_core::Carrier::Relations {
                elems: keep.iter().map(|&x| elems[x as usize].clone()).collect(),
                rels: r2,
            }
        }
    });
    (
        Arc::new(Bicat {
            objects,
            homs,
            id1,
            comp1,
            comp2,
            coherence,
            carrier,
        }),
        keep.to_vec(),
    )
}

/// Inclusion pseudofunctor of a full sub-bicategory.
pub fn inclusion_psfun(sub: &Arc<Bicat>, ambient: &Arc<Bicat>, keep: &[ObjIx]) -> PsFun {
    let n = sub.n_objects();
    let mut cell1 = HashMap::new();
    let mut two = HashMap::new();
    for xi in 0..n {
        for yi in 0..n {
            cell1.insert((xi, yi), (0..sub.hom(xi, yi).n_cells()).collect::<Vec<_>>());
            two.insert(
                (xi, yi),
                if ambient
                    .hom(keep[xi as usize], keep[yi as usize])
                    .is_poset()
                {
                    TwoMap::Implicit
                } else {
                    TwoMap::Table(sub.hom(xi, yi).two_cells())
                },
            );
        }
    }
    PsFun {
        src: sub.clone(),
        tgt: ambient.clone(),
        dom: (0..n).collect(),
        obj: (0..n).map(|xi| (xi, keep[xi as usize])).collect(),
        cell1,
        two,
        unit: UnitCells::Strict,
        compositor: CompositorCells::Strict,
    }
}

#[derive(Debug, Clone)]
pub struct KzSubBicat {
    pub sub: Arc<Bicat>,
    pub object_map: Vec<ObjIx>,
    pub inclusion: PsFun,
    /// Per retained ambient object: the inverter certificate of μ there.
    pub certificates: BTreeMap<ObjIx, InverterCert>,
    /// Per checked object X: the split-inverter certificate at T(X).
    pub split_certs: BTreeMap<ObjIx, InverterCert>,
}

/// Materialize the full sub-bicategory on the objects whose unit component
/// is an inverter of μ, with per-object certificates, and verify membership
/// of every materialized T(X) via the split-inverter septuple.
pub fn kz_subbicat(k: &KZMonad) -> KzSubBicat {
    let m = &k.monad;
    let c = m.bicat().clone();
    let mut keep = Vec::new();
    let mut certificates = BTreeMap::new();
    for &x in &k.mu.dom {
        let phi = TwoCellAt {
            x1: m.t.o(x),
            x2: m.t.o(m.t.o(x)),
            two: k.mu.at(x),
        };
        let cone = InverterCone {
            vertex: x,
            leg: m.unit.at(x),
        };
        if let Ok(cert) = crate::limits::check_inverter(&c, cone, phi) {
            keep.push(x);
            certificates.insert(x, cert);
        }
    }
    let (sub, object_map) = full_sub_bicat(&c, &keep);
    let inclusion = inclusion_psfun(&sub, &c, &keep);
    // Split-inverter certificates for T(X) per the multiplication septuple.
    let mut split_certs = BTreeMap::new();
    for &x in &k.mu.dom {
        let tx = m.t.o(x);
        if !k.mu.dom.contains(&tx) {
            continue;
        }
        let t2x = m.t.o(tx);
        let t3x = m.t.o(t2x);
        let _ = t3x;
        let phi = TwoCellAt {
            x1: t2x,
            x2: m.t.o(t2x),
            two: k.mu.at(tx),
        };
        let tbeta = m.t.t2(tx, tx, m.beta.at(x));
        let section = Paste::start(
            &c,
            t2x,
            t2x,
            c.c1(t2x, m.t.o(t2x), t2x, m.t.c(t2x, tx, m.mult.at(x)), m.t.c(tx, t2x, m.unit.at(tx))),
        )
        .step(m.t.f2(tx, t2x, tx, m.mult.at(x), m.unit.at(tx)))
        .step(tbeta)
        .step(m.t.f0_inv(tx))
        .finish();
        let s = SplitInverter {
            phi,
            cone: InverterCone {
                vertex: tx,
                leg: m.unit.at(tx),
            },
            r0: m.mult.at(x),
            r1: m.t.c(t2x, tx, m.mult.at(x)),
            retract: m.beta.at(x),
            section,
            swap: m.unit.nat_at(t2x, tx, m.mult.at(x)),
        };
        if let Ok(cert) = check_split_inverter(&c, &s) {
            split_certs.insert(x, cert);
        }
    }
    KzSubBicat {
        sub,
        object_map,
        inclusion,
        certificates,
        split_certs,
    }
}
