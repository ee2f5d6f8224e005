//! Built-in examples.

mod actions;
mod cocycles;
mod groups;

pub use actions::{
    block_character, function_algebra_action, right_convolution, trivial_action, ACTIONS,
    COUNTEREXAMPLES,
};
pub use cocycles::COCYCLES;
pub use groups::{function_algebra, group_algebra, kac_paljutkin, FiniteGroup};

use crate::action::ActionData;
use crate::format::SpecDocument;
use crate::cocycle::CocycleData;
use crate::error::{Error, Result};
use crate::quantum_group::QuantumGroupData;

/// Quantum group by catalog name: `fn_group:<G>`, `group_alg:<G>` or
/// `kac_paljutkin`.
pub fn quantum_group(name: &str) -> Result<QuantumGroupData> {
    if name == "kac_paljutkin" {
        return Ok(kac_paljutkin());
    }
    if let Some(g) = name.strip_prefix("fn_group:") {
        return Ok(function_algebra(&FiniteGroup::by_name(g)?));
    }
    if let Some(g) = name.strip_prefix("group_alg:") {
        return Ok(group_algebra(&FiniteGroup::by_name(g)?));
    }
    Err(Error::UnknownEntry(name.to_string()))
}

/// Action by catalog name, e.g. `action:z2_swap`.
pub fn action(name: &str) -> Result<ActionData> {
    actions::build(name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

/// Cocycle action by catalog name, e.g. `cocycle:z2z2_bichar`.
pub fn cocycle(name: &str) -> Result<CocycleData> {
    cocycles::build(name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

pub const QUANTUM_GROUPS: &[&str] = &[
    "fn_group:Z2",
    "fn_group:Z3",
    "fn_group:Z4",
    "fn_group:Z2xZ2",
    "fn_group:S3",
    "group_alg:Z2",
    "group_alg:Z3",
    "group_alg:Z4",
    "group_alg:Z2xZ2",
    "group_alg:S3",
    "kac_paljutkin",
];

/// Prefix selecting the corrupted variant of an entry.
pub const CORRUPT_PREFIX: &str = "corrupt:";

/// Size of the perturbation in corrupted variants.
pub const CORRUPTION: f64 = 0.1;

/// Every built-in name, quantum groups first.
pub fn names() -> Vec<&'static str> {
    QUANTUM_GROUPS
        .iter()
        .chain(ACTIONS)
        .chain(COUNTEREXAMPLES)
        .chain(COCYCLES)
        .copied()
        .collect()
}

fn describe(name: &str) -> String {
    if let Some(g) = name.strip_prefix("fn_group:") {
        return format!("function algebra C({g}) with Δf(x,y) = f(xy)");
    }
    if let Some(g) = name.strip_prefix("group_alg:") {
        return format!("group algebra C*({g}) with Δλ_g = λ_g ⊗ λ_g");
    }
    match name {
        "kac_paljutkin" => "Kac–Paljutkin quantum group, C⁴ ⊕ M₂",
        "action:trivial_z2" => "trivial action of C(Z2) on C",
        "action:trivial_z2_c2" => "trivial action of C(Z2) on C²",
        "action:trivial_kp" => "trivial action of the Kac–Paljutkin quantum group on C",
        "action:trivial_group_c2" => "action of the trivial group on C²",
        "action:regular_z2" => "C(Z2) acting on itself by α = Δ",
        "action:regular_s3" => "C(S3) acting on itself by α = Δ",
        "action:regular_group_alg_s3" => "C*(S3) acting on itself by α = Δ",
        "action:regular_kp" => "Kac–Paljutkin acting on itself by α = Δ",
        "action:z2_swap" => "Z2 swapping the two points of C²",
        "action:z2_ad_m2" => "Z2 acting on M₂ by Ad diag(1, −1)",
        "action:translation_z3" => "translation coaction of C*(Z3) on C(Z3)",
        "counterexample:character_collapse" => "α(b) = 1 ⊗ χ(b)1: coassociative but not injective",
        "counterexample:idempotent_collapse" => "trivial action composed with θ(b) = (b₀, b₁, b₁): coassociative but not injective",
        "cocycle:z2z2_bichar" => "Z2×Z2 bicharacter twist of the trivial action on C",
        "cocycle:z2z2_bichar_c2" => "Z2×Z2 bicharacter twist of a swap action on C²",
        "cocycle:unit_z2_swap" => "Z2 swap on C² with U = 1",
        "cocycle:unit_z2_ad_m2" => "Z2 Ad action on M₂ with U = 1",
        "cocycle:unit_trivial_group" => "trivial group on C² with U = 1",
        "cocycle:inner_trivial_group" => "trivial group on M₂ with α = Ad w*, U = w*",
        _ => "",
    }
    .to_string()
}

/// A catalog entry as a document. `corrupt:<name>` perturbs the first
/// structure constant (Δ, α or U) by [`CORRUPTION`].
pub fn document(name: &str) -> Result<SpecDocument> {
    if let Some(base) = name.strip_prefix(CORRUPT_PREFIX) {
        let mut doc = document(base)?;
        doc.name = name.to_string();
        doc.description = format!("{} (corrupted by {CORRUPTION})", doc.description);
        match &mut doc.body {
            crate::format::Body::QuantumGroup(s) => s.coproduct[0][0][0] += CORRUPTION,
            crate::format::Body::Action(s) => s.alpha[0][0][0] += CORRUPTION,
            crate::format::Body::CocycleAction(s) => s.u[0][0] += CORRUPTION,
            crate::format::Body::ObservationSet(s) => s.elements[0][0][0] += CORRUPTION,
        }
        return Ok(doc);
    }
    let desc = describe(name);
    if name.starts_with("cocycle:") {
        return Ok(SpecDocument::from_cocycle(&cocycle(name)?, &desc));
    }
    if name.starts_with("action:") || name.starts_with("counterexample:") {
        return Ok(SpecDocument::from_action(&action(name)?, &desc));
    }
    Ok(SpecDocument::from_quantum_group(&quantum_group(name)?, &desc))
}

