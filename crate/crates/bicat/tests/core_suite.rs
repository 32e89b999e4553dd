//! Core-layer suite: delooping coherence against the independent cocycle
//! oracle, expression evaluation and coherence normalization, relation and
//! poset universes, and 1-cell predicates.

use bicat::bicat_core::{
    check_bicategory, coherence_iso, eval1, eval2, one_cell_predicate, Env, Expr1, Expr2, Loc1,
    OneCellPredicate, TwoCell,
};
use bicat::instances::{
    deloop_cocycle, deloop_raw, finpos_universe, finrel, CompletionKind, DeloopSpec, Poset,
};

/// Independent 3-cocycle oracle: δω(a,b,c,d) = ω(b,c,d)·ω(ab,c,d)⁻¹·ω(a,bc,d)
/// ·ω(a,b,cd)⁻¹·ω(a,b,c) must be the unit scalar for all quadruples.
fn is_cocycle(spec: &DeloopSpec) -> bool {
    let n = spec.monoid.len();
    let s = &spec.smult;
    let sinv = |a: u32| -> u32 {
        (0..spec.scalars.len() as u32)
            .find(|&b| s[a as usize][b as usize] == spec.scalar_unit)
            .expect("scalar group")
    };
    let m = &spec.mult;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let ab = m[a][b] as usize;
                    let bc = m[b][c] as usize;
                    let cd = m[c][d] as usize;
                    let mut acc = spec.omega[b][c][d];
                    acc = s[acc as usize][sinv(spec.omega[ab][c][d]) as usize];
                    acc = s[acc as usize][spec.omega[a][bc][d] as usize];
                    acc = s[acc as usize][sinv(spec.omega[a][b][cd]) as usize];
                    acc = s[acc as usize][spec.omega[a][b][c] as usize];
                    if acc != spec.scalar_unit {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn z2_cocycle_delooping_passes() {
    let spec = DeloopSpec::z2_nontrivial();
    assert!(is_cocycle(&spec), "oracle: ω(g,g,g)=-1 is a 3-cocycle");
    let b = deloop_cocycle(&spec).expect("valid cocycle");
    assert!(check_bicategory(&b).unwrap().passed());
}

#[test]
fn trivial_cocycle_passes() {
    let b = deloop_cocycle(&DeloopSpec::z2_trivial()).expect("trivial cocycle");
    assert!(check_bicategory(&b).unwrap().passed());
}

#[test]
fn all_sixteen_single_entry_mutations_match_cocycle_oracle() {
    // Flip each of the 8 ω entries of both base tables: 16 mutations total.
    // Pentagon outcome must match δω = 1 exactly; unit-slot mutations must
    // additionally be rejected through the unity axiom.
    let mut disagreements = 0;
    for base in [DeloopSpec::z2_nontrivial(), DeloopSpec::z2_trivial()] {
        for h in 0..2 {
            for g in 0..2 {
                for f in 0..2 {
                    let mut spec = base.clone();
                    spec.omega[h][g][f] ^= 1;
                    let oracle = is_cocycle(&spec);
                    let raw = deloop_raw(&spec).expect("tables well-formed");
                    let report = check_bicategory(&raw).unwrap();
                    let pentagon_ok = report.first_of("pentagon").is_none();
                    if pentagon_ok != oracle {
                        disagreements += 1;
                    }
                    let touches_unit = h == 0 || g == 0 || f == 0;
                    if touches_unit {
                        assert!(
                            !report.passed(),
                            "non-normalized ω must be rejected ({h},{g},{f})"
                        );
                        assert!(
                            report.first_of("unity").is_some()
                                || report.first_of("pentagon").is_some(),
                            "rejection must localize a coherence axiom"
                        );
                    }
                }
            }
        }
    }
    assert_eq!(disagreements, 0);
}

#[test]
fn mutated_associator_entry_reports_localized_pentagon_failure() {
    let mut spec = DeloopSpec::z2_nontrivial();
    // flip α_{g,g,e}: breaks normalization, hence δω ≠ 1 somewhere away from
    // the unit too? No: instead flip a non-unit entry of the trivial table:
    // ω(g,g,g) := -1 alone IS a cocycle, so mutate the nontrivial table at
    // (g,g,g), giving the trivial table: still a cocycle. The failing
    // mutation must combine slots: flip ω(g,g,g) of the trivial table and
    // also ω at another non-unit slot... With Z/2 there is only one non-unit
    // slot, so single-entry non-unit mutations toggle between the two
    // cocycles. Use Z/4-like scalars instead: scalar group Z/4 over monoid
    // Z/2 admits non-cocycle single flips.
    spec.scalars = vec!["s0".into(), "s1".into(), "s2".into(), "s3".into()];
    spec.smult = (0..4)
        .map(|a| (0..4).map(|b| ((a + b) % 4) as u32).collect())
        .collect();
    spec.scalar_unit = 0;
    spec.omega = vec![vec![vec![0; 2]; 2]; 2];
    spec.omega[1][1][1] = 1; // ω(g,g,g) = i is NOT a Z/4-valued 3-cocycle on Z/2
    assert!(!is_cocycle(&spec));
    let raw = deloop_raw(&spec).expect("tables well-formed");
    let report = check_bicategory(&raw).unwrap();
    let v = report.first_of("pentagon").expect("pentagon must fail");
    assert!(v.at.contains("g"), "counterexample names the offending cells: {}", v.at);
}

#[test]
fn evaluate_left_normalized_composite_in_z2() {
    let b = deloop_cocycle(&DeloopSpec::z2_nontrivial()).unwrap();
    let g = b.hom(0, 0).cell_index("g").unwrap();
    let env = Env {
        gens1: vec![(0, 0, g), (0, 0, g), (0, 0, g)],
        gens2: vec![],
    };
    // h∘(g∘f) with h=g=f=g evaluates to the 1-cell g (group multiplication)
    let e = Expr1::comp(Expr1::Gen(2), Expr1::comp(Expr1::Gen(1), Expr1::Gen(0)));
    let v = eval1(&b, &env, &e).unwrap();
    assert_eq!(v.cell, g);
}

#[test]
fn evaluate_identity_and_inverse_pairs() {
    let b = deloop_cocycle(&DeloopSpec::z2_nontrivial()).unwrap();
    let g = b.hom(0, 0).cell_index("g").unwrap();
    let env = Env {
        gens1: vec![(0, 0, g), (0, 0, g), (0, 0, g)],
        gens2: vec![],
    };
    // Id2(Id1(X)) is the identity 2-cell on Id_X
    let e = Expr2::Id2(Expr1::Id1(0));
    let v = eval2(&b, &env, &e).unwrap();
    assert!(b.hom(0, 0).is_id2(v.two));
    // VComp(Assoc, AssocInv) is an identity 2-cell
    let a = Expr2::vcomp(
        Expr2::Assoc(Expr1::Gen(2), Expr1::Gen(1), Expr1::Gen(0)),
        Expr2::AssocInv(Expr1::Gen(2), Expr1::Gen(1), Expr1::Gen(0)),
    );
    let v = eval2(&b, &env, &a).unwrap();
    assert!(b.hom(0, 0).is_id2(v.two));
}

#[test]
fn coherence_iso_matches_canonical_cells() {
    let b = deloop_cocycle(&DeloopSpec::z2_nontrivial()).unwrap();
    let g = b.hom(0, 0).cell_index("g").unwrap();
    let env = Env {
        gens1: vec![(0, 0, g), (0, 0, g), (0, 0, g)],
        gens2: vec![],
    };
    // h∘(g∘f) vs (h∘g)∘f must be α⁻¹
    let e1 = Expr1::comp(Expr1::Gen(2), Expr1::comp(Expr1::Gen(1), Expr1::Gen(0)));
    let e2 = Expr1::comp(Expr1::comp(Expr1::Gen(2), Expr1::Gen(1)), Expr1::Gen(0));
    let iso = coherence_iso(&b, &env, &e1, &e2).unwrap();
    let alpha_inv = eval2(
        &b,
        &env,
        &Expr2::AssocInv(Expr1::Gen(2), Expr1::Gen(1), Expr1::Gen(0)),
    )
    .unwrap();
    assert_eq!(iso.two, alpha_inv.two);
    // Id∘f vs f must be λ_f
    let e3 = Expr1::comp(Expr1::Id1(0), Expr1::Gen(0));
    let e4 = Expr1::Gen(0);
    let iso2 = coherence_iso(&b, &env, &e3, &e4).unwrap();
    let lam = eval2(&b, &env, &Expr2::LUnitor(Expr1::Gen(0))).unwrap();
    assert_eq!(iso2.two, lam.two);
}

#[test]
fn coherence_iso_is_path_independent() {
    // (Id∘g)∘(f∘Id) ⇒ g∘f: compare the canonical cell with two hand-built
    // coherence routes.
    let b = deloop_cocycle(&DeloopSpec::z2_nontrivial()).unwrap();
    let g = b.hom(0, 0).cell_index("g").unwrap();
    let env = Env {
        gens1: vec![(0, 0, g), (0, 0, g)],
        gens2: vec![],
    };
    let lhs = Expr1::comp(
        Expr1::comp(Expr1::Id1(0), Expr1::Gen(1)),
        Expr1::comp(Expr1::Gen(0), Expr1::Id1(0)),
    );
    let rhs = Expr1::comp(Expr1::Gen(1), Expr1::Gen(0));
    let canonical = coherence_iso(&b, &env, &lhs, &rhs).unwrap();
    // route 1: (λ_g ∗ ρ_f)
    let route1 = eval2(
        &b,
        &env,
        &Expr2::hcomp(
            Expr2::LUnitor(Expr1::Gen(1)),
            Expr2::RUnitor(Expr1::Gen(0)),
        ),
    )
    .unwrap();
    assert_eq!(canonical.two, route1.two);
    // route 2: α then λ-collapse then inner coherence
    let route2 = eval2(
        &b,
        &env,
        &Expr2::vcomp(
            Expr2::vcomp(
                Expr2::LUnitor(Expr1::comp(Expr1::Gen(1), Expr1::comp(Expr1::Gen(0), Expr1::Id1(0)))),
                Expr2::Assoc(
                    Expr1::Id1(0),
                    Expr1::Gen(1),
                    Expr1::comp(Expr1::Gen(0), Expr1::Id1(0)),
                ),
            ),
            Expr2::Id2(lhs.clone()),
        ),
    )
    .unwrap();
    // route2 lands on g∘(f∘Id); finish with g ∗ ρ_f
    let finish = eval2(
        &b,
        &env,
        &Expr2::hcomp(Expr2::Id2(Expr1::Gen(1)), Expr2::RUnitor(Expr1::Gen(0))),
    )
    .unwrap();
    let composed = b.hom(0, 0).vcomp(finish.two, route2.two).unwrap();
    assert_eq!(canonical.two, composed);
}

#[test]
fn sequence_mismatch_is_reported() {
    let b = deloop_cocycle(&DeloopSpec::z2_nontrivial()).unwrap();
    let g = b.hom(0, 0).cell_index("g").unwrap();
    let env = Env {
        gens1: vec![(0, 0, g), (0, 0, g)],
        gens2: vec![],
    };
    let e1 = Expr1::Gen(0);
    let e2 = Expr1::comp(Expr1::Gen(1), Expr1::Gen(0));
    assert!(coherence_iso(&b, &env, &e1, &e2).is_err());
}

#[test]
fn finrel_universe_counts_and_laws() {
    let b = finrel(&[0, 1, 2]);
    // hom(A,B) has 2^(|A||B|) relations
    let s0 = b.object_index("S0").unwrap();
    let s1 = b.object_index("S1").unwrap();
    let s2 = b.object_index("S2").unwrap();
    assert_eq!(b.hom(s0, s1).n_cells(), 1);
    assert_eq!(b.hom(s1, s1).n_cells(), 2);
    assert_eq!(b.hom(s1, s2).n_cells(), 4);
    assert_eq!(b.hom(s2, s2).n_cells(), 16);
    assert!(check_bicategory(&b).unwrap().passed());
}

#[test]
fn poset_universe_passes_checks() {
    let u = finpos_universe(
        &[Poset::chain(0), Poset::chain(1), Poset::antichain(2)],
        CompletionKind::Top,
        2,
    );
    assert!(check_bicategory(&u.bicat).unwrap().passed());
    // chains materialized: C0,C1,C2,C3 plus the antichain tower A2,V3,V4
    assert_eq!(u.bicat.n_objects(), 7);
}

#[test]
fn identity_cell_satisfies_all_four_predicates() {
    let b = finrel(&[1, 2]);
    for x in 0..b.n_objects() {
        let f = Loc1 {
            src: x,
            tgt: x,
            cell: b.id1[x as usize],
        };
        for p in [
            OneCellPredicate::FullyFaithful,
            OneCellPredicate::Pseudomonic,
            OneCellPredicate::Conservative,
            OneCellPredicate::Equivalence,
        ] {
            assert!(one_cell_predicate(&b, f, p).is_ok(), "{p:?} at {x}");
        }
    }
}

#[test]
fn chain_inclusion_is_fully_faithful() {
    // In posets of size ≤ 3: the inclusion of the singleton into the 2-chain
    // as the top element is fully faithful.
    let u = finpos_universe(
        &[Poset::chain(1), Poset::chain(2), Poset::chain(3)],
        CompletionKind::Identity,
        0,
    );
    let c1 = u.find(&Poset::chain(1)).unwrap();
    let c2 = u.find(&Poset::chain(2)).unwrap();
    let cell = u.map_cell(c1, c2, &[1]).unwrap();
    let loc = Loc1 {
        src: c1,
        tgt: c2,
        cell,
    };
    assert!(one_cell_predicate(&u.bicat, loc, OneCellPredicate::FullyFaithful).is_ok());
}

#[test]
fn relation_into_two_element_set_is_fully_faithful() {
    // The relation {(∗,a₂)} : {∗} → {a₁,a₂}.
    let b = finrel(&[1, 2]);
    let s1 = b.object_index("S1").unwrap();
    let s2 = b.object_index("S2").unwrap();
    let cell = b.hom(s1, s2).cell_index("r[01]").unwrap();
    let loc = Loc1 {
        src: s1,
        tgt: s2,
        cell,
    };
    let w = one_cell_predicate(&b, loc, OneCellPredicate::FullyFaithful).expect("fully faithful");
    assert!(bicat::bicat_core::verify_witness(&b, loc, &w));
}

#[test]
fn two_cell_locations_roundtrip() {
    let b = finrel(&[2]);
    let hom = b.hom(0, 0);
    for t in hom.two_cells() {
        assert!(hom.two_exists(t));
        assert_eq!(hom.vcomp(hom.id2(t.tgt), t), Some(t));
        assert_eq!(hom.vcomp(t, hom.id2(t.src)), Some(t));
        let _ = TwoCell::new(t.src, t.tgt, t.k);
    }
}
