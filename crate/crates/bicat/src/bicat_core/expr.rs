//! Expression trees for composite cells and their evaluator.
//!
//! 1-cell expressions are built from named generators, identities and binary
//! composition; 2-cell expressions add vertical/horizontal composition and
//! coherence constructors. Evaluation realizes the left-normalized bracketing
//! convention: the normal form of a generator word f, g, h is h∘(g∘f).
//!
//! `coherence_iso` rewrites two 1-cell expressions with the same generator
//! word to the shared normal form and returns the canonical invertible 2-cell
//! between them, the computational content of coherence for bicategories.

use super::core::{Bicat, CellIx, ObjIx};
use super::hom::TwoCell;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr1 {
    /// Index into the environment's 1-cell generators.
    Gen(usize),
    Id1(ObjIx),
    /// `Comp(g, f)` is g∘f: f acts first.
    Comp(Box<Expr1>, Box<Expr1>),
}

impl Expr1 {
    pub fn comp(g: Expr1, f: Expr1) -> Expr1 {
        Expr1::Comp(Box::new(g), Box::new(f))
    }

    /// Left-normalized composite of a nonempty generator word (first acting
    /// generator first).
    pub fn normal_form(word: &[usize]) -> Expr1 {
        assert!(!word.is_empty());
        let mut e = Expr1::Gen(word[0]);
        for &g in &word[1..] {
            e = Expr1::comp(Expr1::Gen(g), e);
        }
        e
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr2 {
    /// Index into the environment's 2-cell generators.
    Gen2(usize),
    Id2(Expr1),
    VComp(Box<Expr2>, Box<Expr2>),
    HComp(Box<Expr2>, Box<Expr2>),
    Assoc(Expr1, Expr1, Expr1),
    AssocInv(Expr1, Expr1, Expr1),
    LUnitor(Expr1),
    LUnitorInv(Expr1),
    RUnitor(Expr1),
    RUnitorInv(Expr1),
}

impl Expr2 {
    pub fn vcomp(b: Expr2, a: Expr2) -> Expr2 {
        Expr2::VComp(Box::new(b), Box::new(a))
    }

    pub fn hcomp(b: Expr2, a: Expr2) -> Expr2 {
        Expr2::HComp(Box::new(b), Box::new(a))
    }
}

/// Generator assignment: 1-cell generators with their hom location, 2-cell
/// generators with theirs.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub gens1: Vec<(ObjIx, ObjIx, CellIx)>,
    pub gens2: Vec<(ObjIx, ObjIx, TwoCell)>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("type mismatch at {path}: {detail}")]
    TypeMismatch { path: String, detail: String },
    #[error("generator {index} out of range at {path}")]
    UnknownGenerator { path: String, index: usize },
    #[error("generator words differ: {left:?} vs {right:?}")]
    SequenceMismatch { left: Vec<usize>, right: Vec<usize> },
}

fn mismatch(path: &str, detail: impl Into<String>) -> EvalError {
    EvalError::TypeMismatch {
        path: path.to_string(),
        detail: detail.into(),
    }
}

/// A located 1-cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell1 {
    pub src: ObjIx,
    pub tgt: ObjIx,
    pub cell: CellIx,
}

/// A located 2-cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell2 {
    pub src: ObjIx,
    pub tgt: ObjIx,
    pub two: TwoCell,
}

pub fn eval1(b: &Bicat, env: &Env, e: &Expr1) -> Result<Cell1, EvalError> {
    eval1_at(b, env, e, "1")
}

fn eval1_at(b: &Bicat, env: &Env, e: &Expr1, path: &str) -> Result<Cell1, EvalError> {
    match e {
        Expr1::Gen(i) => env
            .gens1
            .get(*i)
            .map(|&(x, y, c)| Cell1 { src: x, tgt: y, cell: c })
            .ok_or(EvalError::UnknownGenerator {
                path: path.to_string(),
                index: *i,
            }),
        Expr1::Id1(x) => {
            if *x >= b.n_objects() {
                return Err(mismatch(path, "object index out of range"));
            }
            Ok(Cell1 {
                src: *x,
                tgt: *x,
                cell: b.id1[*x as usize],
            })
        }
        Expr1::Comp(g, f) => {
            let fv = eval1_at(b, env, f, &format!("{path}.rhs"))?;
            let gv = eval1_at(b, env, g, &format!("{path}.lhs"))?;
            if fv.tgt != gv.src {
                return Err(mismatch(
                    path,
                    format!(
                        "composition endpoint clash: {} vs {}",
                        b.objects[fv.tgt as usize], b.objects[gv.src as usize]
                    ),
                ));
            }
            Ok(Cell1 {
                src: fv.src,
                tgt: gv.tgt,
                cell: b.c1(fv.src, fv.tgt, gv.tgt, gv.cell, fv.cell),
            })
        }
    }
}

pub fn eval2(b: &Bicat, env: &Env, e: &Expr2) -> Result<Cell2, EvalError> {
    eval2_at(b, env, e, "2")
}

fn eval2_at(b: &Bicat, env: &Env, e: &Expr2, path: &str) -> Result<Cell2, EvalError> {
    match e {
        Expr2::Gen2(i) => env
            .gens2
            .get(*i)
            .map(|&(x, y, t)| Cell2 { src: x, tgt: y, two: t })
            .ok_or(EvalError::UnknownGenerator {
                path: path.to_string(),
                index: *i,
            }),
        Expr2::Id2(f) => {
            let fv = eval1_at(b, env, f, path)?;
            Ok(Cell2 {
                src: fv.src,
                tgt: fv.tgt,
                two: b.hom(fv.src, fv.tgt).id2(fv.cell),
            })
        }
        Expr2::VComp(b2, a2) => {
            let av = eval2_at(b, env, a2, &format!("{path}.first"))?;
            let bv = eval2_at(b, env, b2, &format!("{path}.second"))?;
            if av.src != bv.src || av.tgt != bv.tgt {
                return Err(mismatch(path, "vertical composition across different homs"));
            }
            b.hom(av.src, av.tgt)
                .vcomp(bv.two, av.two)
                .map(|t| Cell2 {
                    src: av.src,
                    tgt: av.tgt,
                    two: t,
                })
                .ok_or_else(|| mismatch(path, "vertical composition endpoint clash"))
        }
        Expr2::HComp(b2, a2) => {
            let av = eval2_at(b, env, a2, &format!("{path}.rhs"))?;
            let bv = eval2_at(b, env, b2, &format!("{path}.lhs"))?;
            if av.tgt != bv.src {
                return Err(mismatch(path, "horizontal composition endpoint clash"));
            }
            Ok(Cell2 {
                src: av.src,
                tgt: bv.tgt,
                two: b.c2(av.src, av.tgt, bv.tgt, bv.two, av.two),
            })
        }
        Expr2::Assoc(h, g, f) | Expr2::AssocInv(h, g, f) => {
            let fv = eval1_at(b, env, f, &format!("{path}.f"))?;
            let gv = eval1_at(b, env, g, &format!("{path}.g"))?;
            let hv = eval1_at(b, env, h, &format!("{path}.h"))?;
            if fv.tgt != gv.src || gv.tgt != hv.src {
                return Err(mismatch(path, "associator arguments not composable"));
            }
            let a = b.assoc(fv.src, fv.tgt, gv.tgt, hv.tgt, hv.cell, gv.cell, fv.cell);
            let two = if matches!(e, Expr2::Assoc(..)) {
                a
            } else {
                b.hom(fv.src, hv.tgt)
                    .inverse(a)
                    .ok_or_else(|| mismatch(path, "associator not invertible"))?
            };
            Ok(Cell2 {
                src: fv.src,
                tgt: hv.tgt,
                two,
            })
        }
        Expr2::LUnitor(f) | Expr2::LUnitorInv(f) => {
            let fv = eval1_at(b, env, f, path)?;
            let l = b.lunitor(fv.src, fv.tgt, fv.cell);
            let two = if matches!(e, Expr2::LUnitor(_)) {
                l
            } else {
                b.hom(fv.src, fv.tgt)
                    .inverse(l)
                    .ok_or_else(|| mismatch(path, "unitor not invertible"))?
            };
            Ok(Cell2 {
                src: fv.src,
                tgt: fv.tgt,
                two,
            })
        }
        Expr2::RUnitor(f) | Expr2::RUnitorInv(f) => {
            let fv = eval1_at(b, env, f, path)?;
            let r = b.runitor(fv.src, fv.tgt, fv.cell);
            let two = if matches!(e, Expr2::RUnitor(_)) {
                r
            } else {
                b.hom(fv.src, fv.tgt)
                    .inverse(r)
                    .ok_or_else(|| mismatch(path, "unitor not invertible"))?
            };
            Ok(Cell2 {
                src: fv.src,
                tgt: fv.tgt,
                two,
            })
        }
    }
}

/// Generator word of a 1-cell expression, identities erased, in composition
/// order (first acting generator first).
pub fn word(e: &Expr1) -> Vec<usize> {
    match e {
        Expr1::Gen(i) => vec![*i],
        Expr1::Id1(_) => vec![],
        Expr1::Comp(g, f) => {
            let mut w = word(f);
            w.extend(word(g));
            w
        }
    }
}

/// The canonical coherence 2-cell from `e` to the left-normalized, unit-free
/// form of its generator word (or the bare identity when the word is empty).
fn canon(b: &Bicat, env: &Env, e: &Expr1) -> Result<(Cell1, Cell2), EvalError> {
    match e {
        Expr1::Gen(_) | Expr1::Id1(_) => {
            let v = eval1(b, env, e)?;
            Ok((
                v,
                Cell2 {
                    src: v.src,
                    tgt: v.tgt,
                    two: b.hom(v.src, v.tgt).id2(v.cell),
                },
            ))
        }
        Expr1::Comp(g, f) => {
            let (fv, fcan) = canon(b, env, f)?;
            let (gv, gcan) = canon(b, env, g)?;
            if fv.tgt != gv.src {
                return Err(mismatch("canon", "composition endpoint clash"));
            }
            let x = fv.src;
            let y = fv.tgt;
            let z = gv.tgt;
            // step 1: normalize both factors under horizontal composition
            let step = b.c2(x, y, z, gcan.two, fcan.two);
            let fw = word(f);
            let gw = word(g);
            let nf_f = fcan.two.tgt; // cell index of nf(f) in hom(x,y)
            let nf_g = gcan.two.tgt;
            let here = Cell2 {
                src: x,
                tgt: z,
                two: step,
            };
            // step 2: merge the two normal forms
            let merge = merge_normal(b, env, x, y, z, nf_g, &gw, nf_f, &fw)?;
            let composed = b
                .hom(x, z)
                .vcomp(merge.two, here.two)
                .ok_or_else(|| mismatch("canon", "merge cell mismatch"))?;
            Ok((
                Cell1 {
                    src: x,
                    tgt: z,
                    cell: eval1(b, env, e)?.cell,
                },
                Cell2 {
                    src: x,
                    tgt: z,
                    two: composed,
                },
            ))
        }
    }
}

/// Cells of the normal-form prefixes of a word starting at object `x`.
fn prefix_cells(b: &Bicat, env: &Env, x: ObjIx, w: &[usize]) -> Result<Vec<Cell1>, EvalError> {
    let mut out = Vec::with_capacity(w.len());
    let mut cur: Option<Cell1> = None;
    for &g in w {
        let (gx, gy, gc) = env.gens1[g];
        match cur {
            None => {
                if gx != x {
                    return Err(mismatch("prefix", "word does not start at the given object"));
                }
                cur = Some(Cell1 { src: gx, tgt: gy, cell: gc });
            }
            Some(p) => {
                if p.tgt != gx {
                    return Err(mismatch("prefix", "word is not composable"));
                }
                cur = Some(Cell1 {
                    src: p.src,
                    tgt: gy,
                    cell: b.c1(p.src, p.tgt, gy, gc, p.cell),
                });
            }
        }
        out.push(cur.unwrap());
    }
    Ok(out)
}

/// Coherence cell nf(gw)∘nf(fw) ⇒ nf(fw ++ gw) in hom(x,z), given the cells
/// of the two normal forms.
fn merge_normal(
    b: &Bicat,
    env: &Env,
    x: ObjIx,
    y: ObjIx,
    z: ObjIx,
    nf_g: CellIx,
    gw: &[usize],
    nf_f: CellIx,
    fw: &[usize],
) -> Result<Cell2, EvalError> {
    if gw.is_empty() {
        // nf_g = Id_y (y = z): λ on nf_f
        let l = b.lunitor(x, y, nf_f);
        return Ok(Cell2 { src: x, tgt: y, two: l });
    }
    if fw.is_empty() {
        let r = b.runitor(x, z, nf_g);
        return Ok(Cell2 { src: x, tgt: z, two: r });
    }
    if gw.len() == 1 {
        // t∘nf(S) is already the normal form of S ++ [t]
        let composed = b.c1(x, y, z, nf_g, nf_f);
        return Ok(Cell2 {
            src: x,
            tgt: z,
            two: b.hom(x, z).id2(composed),
        });
    }
    // gw = gw' ++ [t], nf(gw) = t ∘ nf(gw')
    let gp = prefix_cells(b, env, y, gw)?;
    let t = env.gens1[*gw.last().unwrap()];
    let t_cell = Cell1 { src: t.0, tgt: t.1, cell: t.2 };
    let nf_gp = gp[gp.len() - 2];
    debug_assert_eq!(b.c1(y, nf_gp.tgt, z, t_cell.cell, nf_gp.cell), nf_g);
    let alpha = b.assoc(x, y, nf_gp.tgt, z, t_cell.cell, nf_gp.cell, nf_f);
    let inner = merge_normal(b, env, x, y, nf_gp.tgt, nf_gp.cell, &gw[..gw.len() - 1], nf_f, fw)?;
    let wl = b.whisk_l(x, nf_gp.tgt, z, t_cell.cell, inner.two);
    let two = b
        .hom(x, z)
        .vcomp(wl, alpha)
        .ok_or_else(|| mismatch("merge", "associator/whisker mismatch"))?;
    Ok(Cell2 { src: x, tgt: z, two })
}

/// Canonical invertible coherence 2-cell `e1 ⇒ e2` for two 1-cell
/// expressions with the same generator word.
pub fn coherence_iso(b: &Bicat, env: &Env, e1: &Expr1, e2: &Expr1) -> Result<Cell2, EvalError> {
    let w1 = word(e1);
    let w2 = word(e2);
    if w1 != w2 {
        return Err(EvalError::SequenceMismatch { left: w1, right: w2 });
    }
    let (_, c1) = canon(b, env, e1)?;
    let (_, c2) = canon(b, env, e2)?;
    let inv = b
        .hom(c2.src, c2.tgt)
        .inverse(c2.two)
        .ok_or_else(|| mismatch("coherence", "canonical cell not invertible"))?;
    let two = b
        .hom(c1.src, c1.tgt)
        .vcomp(inv, c1.two)
        .ok_or_else(|| mismatch("coherence", "normal forms disagree"))?;
    Ok(Cell2 {
        src: c1.src,
        tgt: c1.tgt,
        two,
    })
}
