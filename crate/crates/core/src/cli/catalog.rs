//! Built-in examples, addressable by name.

use super::spec::{ActionSpec, GroupOrderSpec, ScenarioSpec, SPEC_VERSION};
use crate::group_order::presets::{
    dihedral_zigzag, free_magnus, integers_broken, integers_standard, lattice_lex, lattice_product,
};
use crate::group_order::{CmpOp, ConeExpr, ConeStructure, GroupModel};

/// What `examples run` does with an example.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Cones,
    GPlus,
    BuildTree,
    RoundTrip,
    Orbit(ScenarioSpec),
    Quotient(ConeExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    /// Remarks on the associated action: minimality, fixed ends.
    pub remarks: &'static str,
    pub spec: GroupOrderSpec,
    pub steps: Vec<Step>,
    /// Whether every step is expected to pass.
    pub expect_pass: bool,
}

fn spec(name: &str, group: GroupModel, cones: ConeStructure) -> GroupOrderSpec {
    GroupOrderSpec { version: SPEC_VERSION.into(), name: Some(name.into()), group, cones }
}

pub fn dihedral_scenario() -> ScenarioSpec {
    ScenarioSpec {
        version: SPEC_VERSION.into(),
        name: Some("dihedral-orbit".into()),
        action: ActionSpec::Dihedral { width: None },
        x0: "1/4".into(),
        stabilizer_positive: None,
        expect: Some(dihedral_zigzag()),
    }
}

pub fn integers_scenario() -> ScenarioSpec {
    ScenarioSpec {
        version: SPEC_VERSION.into(),
        name: Some("integers-orbit".into()),
        action: ActionSpec::Translation { group: GroupModel::Integers, width: None },
        x0: "0".into(),
        stabilizer_positive: None,
        expect: Some(integers_standard()),
    }
}

/// `ℤ²` translating the line through its first factor: the stabilizer of
/// every point is `{0} × ℤ`, ordered by the second coordinate.
pub fn lattice_scenario() -> ScenarioSpec {
    ScenarioSpec {
        version: SPEC_VERSION.into(),
        name: Some("lattice-orbit".into()),
        action: ActionSpec::Translation { group: GroupModel::Lattice { rank: 2 }, width: None },
        x0: "0".into(),
        stabilizer_positive: Some(ConeExpr::cmp(1, CmpOp::Gt, 0)),
        expect: Some(lattice_lex()),
    }
}

pub fn vertical_subgroup() -> ConeExpr {
    ConeExpr::cmp(0, CmpOp::Eq, 0)
}

pub fn even_subgroup() -> ConeExpr {
    ConeExpr::Parity { index: 0, modulus: 2, residue: 0 }
}

pub fn catalog() -> Vec<Example> {
    vec![
        Example {
            name: "integers",
            summary: "Z with its standard order",
            remarks: "Z translates the oriented line; the action is minimal and fixes both ends.",
            spec: spec("integers", GroupModel::Integers, integers_standard()),
            steps: vec![Step::Cones, Step::GPlus, Step::BuildTree, Step::RoundTrip, Step::Orbit(integers_scenario())],
            expect_pass: true,
        },
        Example {
            name: "integers-broken",
            summary: "Z with P = {1}, which is not closed under products",
            remarks: "No action: the cones do not define an order.",
            spec: spec("integers-broken", GroupModel::Integers, integers_broken()),
            steps: vec![Step::Cones],
            expect_pass: false,
        },
        Example {
            name: "lattice-lex",
            summary: "Z^2 with the lexicographic order, and its quotient by {0} x Z",
            remarks: "Z^2 acts on the line through its first factor; {0} x Z is the stabilizer of every point, \
                      so the orbit order needs the stabilizer order.",
            spec: spec("lattice-lex", GroupModel::Lattice { rank: 2 }, lattice_lex()),
            steps: vec![Step::Cones, Step::Quotient(vertical_subgroup()), Step::Orbit(lattice_scenario())],
            expect_pass: true,
        },
        Example {
            name: "lattice-product",
            summary: "Z^2 with the componentwise order and every mixed pair tagged ~u",
            remarks: "Negative control: incomparable pairs have both common upper and lower bounds.",
            spec: spec("lattice-product", GroupModel::Lattice { rank: 2 }, lattice_product(2)),
            steps: vec![Step::Cones],
            expect_pass: false,
        },
        Example {
            name: "free-magnus",
            summary: "F_2 with the Magnus order",
            remarks: "A bi-invariant total order; the associated tree is a line.",
            spec: spec("free-magnus", GroupModel::Free { rank: 2 }, free_magnus()),
            steps: vec![Step::Cones],
            expect_pass: true,
        },
        Example {
            name: "dihedral",
            summary: "D_inf with the cones read off the zigzag line",
            remarks: "t shifts the alternately oriented line by 2 and s reflects it at 0; s swaps the two \
                      ends, so no end is fixed, and the order is acyclic but not connected.",
            spec: spec("dihedral", GroupModel::Dihedral, dihedral_zigzag()),
            steps: vec![Step::Cones, Step::GPlus, Step::BuildTree, Step::RoundTrip, Step::Orbit(dihedral_scenario())],
            expect_pass: true,
        },
        Example {
            name: "integers-even",
            summary: "Z with the subgroup 2Z, which is not convex",
            remarks: "1 lies between 0 and 2, so 2Z is not completely convex and there is no quotient order.",
            spec: spec("integers-even", GroupModel::Integers, integers_standard()),
            steps: vec![Step::Quotient(even_subgroup())],
            expect_pass: false,
        },
    ]
}

pub fn find(name: &str) -> Option<Example> {
    catalog().into_iter().find(|e| e.name == name)
}
