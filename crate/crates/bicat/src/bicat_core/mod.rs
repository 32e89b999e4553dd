//! Finite bicategories: data model, axiom checker, cell-expression
//! evaluator with coherence normalization, and 1-cell predicates.

pub mod core;
pub mod expr;
pub mod hom;
pub mod predicates;

pub use core::{check_bicategory, Bicat, Carrier, CellIx, Coherence, Comp2, ObjIx};
pub use expr::{coherence_iso, eval1, eval2, Cell1, Cell2, Env, EvalError, Expr1, Expr2};
pub use hom::{BitMat, HomCat, PosetHom, TableHom, TwoCell};
pub use predicates::{
    one_cell_predicate, verify_witness, Loc1, OneCellPredicate, PredicateFailure,
    PredicateResult, PredicateWitness,
};
