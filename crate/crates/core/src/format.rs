//! Structure-constant documents.
//!
//! A document is JSON with complex numbers written as `[re, im]` and linear
//! maps written as row arrays of their matrix in the canonical bases
//! (rows index the codomain). Floats are printed in shortest round-trip form
//! and parsed with correct rounding, so `serialize ∘ parse` is the identity on
//! canonical text and `parse ∘ serialize` is the identity on values.

use crate::action::ActionData;
use crate::algebra::{AlgebraShape, Element, LinearMap};
use crate::cocycle::CocycleData;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec};
use crate::quantum_group::QuantumGroupData;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    QuantumGroup(QuantumGroupSpec),
    Action(ActionSpec),
    CocycleAction(CocycleSpec),
    ObservationSet(ObservationSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumGroupSpec {
    pub shape: Vec<usize>,
    pub coproduct: Matrix,
    pub counit: Matrix,
    pub antipode: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedQuantumGroup {
    pub name: String,
    #[serde(flatten)]
    pub spec: QuantumGroupSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedMap {
    pub name: String,
    pub map: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub quantum_group: NamedQuantumGroup,
    pub target: Vec<usize>,
    pub alpha: Matrix,
    #[serde(default)]
    pub commuting: Vec<NamedMap>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleSpec {
    pub quantum_group: NamedQuantumGroup,
    pub target: Vec<usize>,
    pub alpha: Matrix,
    /// Coordinates of `U ∈ A ⊗ A ⊗ B`.
    pub u: Vec<Complex>,
    #[serde(default)]
    pub commuting: Vec<NamedMap>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservationSpec {
    pub shape: Vec<usize>,
    /// Coordinates of each element in the canonical basis.
    pub elements: Vec<Vec<Complex>>,
}

impl SpecDocument {
    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::QuantumGroup(_) => "quantum_group",
            Body::Action(_) => "action",
            Body::CocycleAction(_) => "cocycle_action",
            Body::ObservationSet(_) => "observation_set",
        }
    }

    pub fn from_quantum_group(qg: &QuantumGroupData, description: &str) -> SpecDocument {
        SpecDocument {
            version: FORMAT_VERSION,
            name: qg.name.clone(),
            description: description.to_string(),
            body: Body::QuantumGroup(qg_spec(qg)),
        }
    }

    pub fn from_action(act: &ActionData, description: &str) -> SpecDocument {
        SpecDocument {
            version: FORMAT_VERSION,
            name: act.name.clone(),
            description: description.to_string(),
            body: Body::Action(ActionSpec {
                quantum_group: named_qg(&act.qg),
                target: act.target.blocks().to_vec(),
                alpha: map_rows(&act.alpha),
                commuting: named_maps(&act.commuting),
            }),
        }
    }

    pub fn from_cocycle(coc: &CocycleData, description: &str) -> SpecDocument {
        SpecDocument {
            version: FORMAT_VERSION,
            name: coc.name.clone(),
            description: description.to_string(),
            body: Body::CocycleAction(CocycleSpec {
                quantum_group: named_qg(&coc.qg),
                target: coc.target.blocks().to_vec(),
                alpha: map_rows(&coc.alpha),
                u: coc.u.coords().iter().map(|z| [z.re, z.im]).collect(),
                commuting: named_maps(&coc.commuting),
            }),
        }
    }

    /// The quantum group of the document, embedded or top level.
    pub fn quantum_group(&self) -> Result<QuantumGroupData> {
        match &self.body {
            Body::QuantumGroup(s) => build_qg(&self.name, s, ""),
            Body::Action(s) => build_qg(&s.quantum_group.name, &s.quantum_group.spec, "quantum_group."),
            Body::CocycleAction(s) => build_qg(&s.quantum_group.name, &s.quantum_group.spec, "quantum_group."),
            Body::ObservationSet(_) => Err(Error::Input(format!("{} is an observation set", self.name))),
        }
    }

    pub fn action(&self) -> Result<ActionData> {
        let Body::Action(s) = &self.body else {
            return Err(Error::Input(format!("{} is a {}, not an action", self.name, self.kind())));
        };
        let qg = self.quantum_group()?;
        let target = shape("target", &s.target)?;
        let alpha = map("alpha", &s.alpha, &target, &qg.shape.tensor(&target))?;
        let commuting = commuting_maps(&s.commuting, &target)?;
        Ok(ActionData {
            name: self.name.clone(),
            qg,
            target,
            alpha,
            commuting,
        })
    }

    pub fn cocycle(&self) -> Result<CocycleData> {
        let Body::CocycleAction(s) = &self.body else {
            return Err(Error::Input(format!("{} is a {}, not a cocycle action", self.name, self.kind())));
        };
        let qg = self.quantum_group()?;
        let target = shape("target", &s.target)?;
        let alpha = map("alpha", &s.alpha, &target, &qg.shape.tensor(&target))?;
        let aab = qg.shape.tensor(&qg.shape).tensor(&target);
        if s.u.len() != aab.dim() {
            return Err(field_error("u", format!("expected {} coordinates, found {}", aab.dim(), s.u.len())));
        }
        let u = Element::from_coords(&aab, &vector(&s.u))?;
        let commuting = commuting_maps(&s.commuting, &target)?;
        Ok(CocycleData {
            name: self.name.clone(),
            qg,
            target,
            alpha,
            u,
            commuting,
        })
    }

    pub fn observations(&self) -> Result<(AlgebraShape, Vec<Element>)> {
        let Body::ObservationSet(s) = &self.body else {
            return Err(Error::Input(format!("{} is a {}, not an observation set", self.name, self.kind())));
        };
        let sh = shape("shape", &s.shape)?;
        let mut out = Vec::with_capacity(s.elements.len());
        for (i, e) in s.elements.iter().enumerate() {
            if e.len() != sh.dim() {
                return Err(field_error(
                    &format!("elements[{i}]"),
                    format!("expected {} coordinates, found {}", sh.dim(), e.len()),
                ));
            }
            out.push(Element::from_coords(&sh, &vector(e))?);
        }
        Ok((sh, out))
    }

    /// Shape consistency of every array, without building anything.
    pub fn check_dimensions(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(field_error("version", format!("unsupported version {}", self.version)));
        }
        match &self.body {
            Body::QuantumGroup(_) => self.quantum_group().map(|_| ()),
            Body::Action(_) => self.action().map(|_| ()),
            Body::CocycleAction(_) => self.cocycle().map(|_| ()),
            Body::ObservationSet(_) => self.observations().map(|_| ()),
        }
    }
}

fn field_error(field: &str, message: String) -> Error {
    Error::Field {
        field: field.to_string(),
        message,
    }
}

fn shape(field: &str, blocks: &[usize]) -> Result<AlgebraShape> {
    AlgebraShape::new(blocks.to_vec()).map_err(|e| field_error(field, e.to_string()))
}

fn vector(v: &[Complex]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|z| c(z[0], z[1])))
}

fn map(field: &str, rows: &Matrix, domain: &AlgebraShape, codomain: &AlgebraShape) -> Result<LinearMap> {
    let (r, k) = (codomain.dim(), domain.dim());
    let found_cols = rows.iter().map(Vec::len).find(|&l| l != k);
    if rows.len() != r || found_cols.is_some() {
        let found = match found_cols {
            Some(l) => format!("a row of length {l}"),
            None => format!("{} rows", rows.len()),
        };
        return Err(field_error(field, format!("expected a {r}x{k} matrix, found {found}")));
    }
    let m = CMat::from_fn(r, k, |i, j| c(rows[i][j][0], rows[i][j][1]));
    LinearMap::new(domain, codomain, m).map_err(|e| field_error(field, e.to_string()))
}

fn build_qg(name: &str, s: &QuantumGroupSpec, prefix: &str) -> Result<QuantumGroupData> {
    let f = |x: &str| format!("{prefix}{x}");
    let a = shape(&f("shape"), &s.shape)?;
    let delta = map(&f("coproduct"), &s.coproduct, &a, &a.tensor(&a))?;
    let eps = map(&f("counit"), &s.counit, &a, &AlgebraShape::full(1))?;
    let anti = map(&f("antipode"), &s.antipode, &a, &a)?;
    QuantumGroupData::new(name, a, delta, eps, anti)
}

fn commuting_maps(maps: &[NamedMap], target: &AlgebraShape) -> Result<Vec<(String, LinearMap)>> {
    maps.iter()
        .enumerate()
        .map(|(i, m)| Ok((m.name.clone(), map(&format!("commuting[{i}].map"), &m.map, target, target)?)))
        .collect()
}

fn map_rows(m: &LinearMap) -> Matrix {
    let mat = m.matrix();
    (0..mat.nrows())
        .map(|i| (0..mat.ncols()).map(|j| [mat[(i, j)].re, mat[(i, j)].im]).collect())
        .collect()
}

fn qg_spec(qg: &QuantumGroupData) -> QuantumGroupSpec {
    QuantumGroupSpec {
        shape: qg.shape.blocks().to_vec(),
        coproduct: map_rows(&qg.coproduct),
        counit: map_rows(&qg.counit),
        antipode: map_rows(&qg.antipode),
    }
}

fn named_qg(qg: &QuantumGroupData) -> NamedQuantumGroup {
    NamedQuantumGroup {
        name: qg.name.clone(),
        spec: qg_spec(qg),
    }
}

fn named_maps(maps: &[(String, LinearMap)]) -> Vec<NamedMap> {
    maps.iter()
        .map(|(n, m)| NamedMap {
            name: n.clone(),
            map: map_rows(m),
        })
        .collect()
}

/// Parse and dimension-check a document.
pub fn parse_spec(text: &str) -> Result<SpecDocument> {
    let doc: SpecDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.check_dimensions()?;
    Ok(doc)
}

/// Canonical text: one key per line, arrays of numbers and of complex pairs
/// inline, so a matrix prints one row per line.
pub fn serialize_spec(doc: &SpecDocument) -> String {
    let v = serde_json::to_value(doc).expect("documents serialize");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

const KEY_ORDER: &[&str] = &["version", "kind", "name", "description"];

fn key_rank(k: &str) -> (usize, &str) {
    (KEY_ORDER.iter().position(|x| *x == k).unwrap_or(KEY_ORDER.len()), k)
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_inline(v: &Value) -> bool {
    match v {
        Value::Array(items) => items
            .iter()
            .all(|x| is_scalar(x) || matches!(x, Value::Array(inner) if inner.iter().all(is_scalar))),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    if is_inline(v) {
        out.push_str(&serde_json::to_string(v).expect("values serialize"));
        return;
    }
    match v {
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort_by_key(|k| key_rank(k));
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(out, &m[k.as_str()], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => unreachable!("scalars are inline"),
    }
}
