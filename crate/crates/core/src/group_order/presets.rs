//! Closed-form cone structures for the built-in examples.

use super::cone::{CmpOp, ConeExpr, ConeStructure};

/// `𝒫 = {n > 0}` on ℤ.
pub fn integers_standard() -> ConeStructure {
    ConeStructure { p: ConeExpr::cmp(0, CmpOp::Gt, 0), u: ConeExpr::False, l: ConeExpr::False }
}

/// `𝒫 = {1}` on ℤ: not closed under products.
pub fn integers_broken() -> ConeStructure {
    ConeStructure { p: ConeExpr::cmp(0, CmpOp::Eq, 1), u: ConeExpr::False, l: ConeExpr::False }
}

/// Lexicographic total order on ℤᵏ.
pub fn lattice_lex() -> ConeStructure {
    ConeStructure { p: ConeExpr::LexPositive, u: ConeExpr::False, l: ConeExpr::False }
}

/// Componentwise order on ℤᵏ with every mixed-sign difference tagged `~u`.
///
/// Incomparable pairs of ℤᵏ have both common upper and lower bounds, so this
/// fails the cone conditions; it serves as a negative control.
pub fn lattice_product(rank: usize) -> ConeStructure {
    let nonneg = ConeExpr::all((0..rank).map(|i| ConeExpr::cmp(i, CmpOp::Ge, 0)));
    let nonpos = ConeExpr::all((0..rank).map(|i| ConeExpr::cmp(i, CmpOp::Le, 0)));
    ConeStructure {
        p: ConeExpr::all([nonneg.clone(), ConeExpr::not(ConeExpr::Identity)]),
        u: ConeExpr::not(ConeExpr::any([nonneg, nonpos])),
        l: ConeExpr::False,
    }
}

/// Magnus order on a free group (bi-invariant and total).
pub fn free_magnus() -> ConeStructure {
    ConeStructure { p: ConeExpr::MagnusPositive, u: ConeExpr::False, l: ConeExpr::False }
}

/// Cones of `D∞ = ⟨t, s⟩` read off the orbit of `1/4` under the action on
/// the zigzag-oriented line (`t: x ↦ x + 2`, `s: x ↦ −x`):
/// `𝒫 = {tⁿ | n > 0}`, `𝒰 = {tⁿs | n ≥ 1}`, `ℒ = {tⁿs | n ≤ 0}`.
///
/// The orbit-order tests re-derive these from the action.
pub fn dihedral_zigzag() -> ConeStructure {
    let rot = ConeExpr::cmp(1, CmpOp::Eq, 0);
    let refl = ConeExpr::cmp(1, CmpOp::Eq, 1);
    ConeStructure {
        p: ConeExpr::all([rot, ConeExpr::cmp(0, CmpOp::Gt, 0)]),
        u: ConeExpr::all([refl.clone(), ConeExpr::cmp(0, CmpOp::Ge, 1)]),
        l: ConeExpr::all([refl, ConeExpr::cmp(0, CmpOp::Le, 0)]),
    }
}
