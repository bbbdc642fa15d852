//! Serializable mirrors of the core types.
//!
//! Field elements travel as strings: `"a/b"` (or `"a"`) over the
//! rationals, the decimal canonical index otherwise.  Polynomials are
//! sparse: `{"vars": [...], "terms": [{"exp": [...], "coeff": "..."}]}`.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use dp4::algebra::field::{FieldElement, FieldSpec};
use dp4::algebra::matrix::Mat;
use dp4::algebra::multipoly::MultiPoly;
use dp4::algebra::poly::{BinaryForm, UniPoly};
use dp4::fibration::{CaseSpec, FibrationModel, FormRole, FormTag, ModelForm, Parity};
use dp4::lattice::GramTable;
use dp4::pencil::QuadricPencil;

// ---------------------------------------------------------------------------
// Fields and elements
// ---------------------------------------------------------------------------

/// `{"rationals": true}` or `{"p": 101, "k": 1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Rationals { rationals: bool },
    Finite { p: u64, k: usize },
}

impl FieldJson {
    pub fn to_spec(&self) -> Result<FieldSpec> {
        match self {
            FieldJson::Rationals { rationals } => {
                if !rationals {
                    bail!("field object must set rationals: true or give p, k");
                }
                Ok(FieldSpec::rationals())
            }
            FieldJson::Finite { p, k } => {
                FieldSpec::extension_field(*p, *k).map_err(|e| anyhow!("{e}"))
            }
        }
    }

    pub fn from_spec(spec: &FieldSpec) -> FieldJson {
        match spec.characteristic() {
            None => FieldJson::Rationals { rationals: true },
            Some(p) => FieldJson::Finite {
                p,
                k: spec.extension_degree(),
            },
        }
    }
}

pub fn parse_element(spec: &FieldSpec, s: &str) -> Result<FieldElement> {
    spec.parse_element(s).map_err(|e| anyhow!("{e}"))
}

pub fn element_string(e: &FieldElement) -> String {
    e.to_decimal_string()
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn to_multipoly(&self, spec: &FieldSpec) -> Result<MultiPoly> {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exp.len() != self.vars.len() {
                bail!(
                    "term exponent length {} does not match {} variables",
                    t.exp.len(),
                    self.vars.len()
                );
            }
            terms.push((t.exp.clone(), parse_element(spec, &t.coeff)?));
        }
        Ok(MultiPoly::from_terms(spec, &vars, terms))
    }

    pub fn from_multipoly(p: &MultiPoly) -> PolyJson {
        PolyJson {
            vars: p.vars().to_vec(),
            terms: p
                .terms()
                .map(|(exp, c)| TermJson {
                    exp: exp.clone(),
                    coeff: element_string(c),
                })
                .collect(),
        }
    }
}

/// Dense univariate coefficients, constant term first.
pub fn unipoly_strings(p: &UniPoly) -> Vec<String> {
    p.coeffs().iter().map(element_string).collect()
}

// ---------------------------------------------------------------------------
// Pencils
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilJson {
    pub field: FieldJson,
    #[serde(rename = "Q0")]
    pub q0: Vec<Vec<String>>,
    #[serde(rename = "Q1")]
    pub q1: Vec<Vec<String>>,
}

impl PencilJson {
    pub fn to_pencil(&self) -> Result<QuadricPencil> {
        let spec = self.field.to_spec()?;
        let parse_mat = |rows: &Vec<Vec<String>>, name: &str| -> Result<Mat> {
            if rows.len() != 5 || rows.iter().any(|r| r.len() != 5) {
                bail!("{name} must be a 5x5 matrix");
            }
            let mut m = Mat::zeros(&spec, 5, 5);
            for (i, row) in rows.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    m.set(i, j, parse_element(&spec, s).context("matrix entry")?);
                }
            }
            Ok(m)
        };
        let a = parse_mat(&self.q0, "Q0")?;
        let b = parse_mat(&self.q1, "Q1")?;
        QuadricPencil::new(a, b).map_err(|e| anyhow!("{e}"))
    }

    pub fn from_pencil(p: &QuadricPencil) -> PencilJson {
        let dump = |m: &Mat| -> Vec<Vec<String>> {
            (0..5)
                .map(|i| (0..5).map(|j| element_string(m.at(i, j))).collect())
                .collect()
        };
        PencilJson {
            field: FieldJson::from_spec(p.spec()),
            q0: dump(p.a()),
            q1: dump(p.b()),
        }
    }
}

/// A binary quintic as its length-6 coefficient array (`s^i t^(5-i)`
/// coefficient at index `i`); the field comes from the command line.
pub fn quintic_from_strings(spec: &FieldSpec, coeffs: &[String]) -> Result<BinaryForm> {
    if coeffs.len() != 6 {
        bail!("a binary quintic needs exactly 6 coefficients, got {}", coeffs.len());
    }
    let parsed: Result<Vec<FieldElement>> =
        coeffs.iter().map(|s| parse_element(spec, s)).collect();
    Ok(BinaryForm::from_coeffs(spec, parsed?))
}

// ---------------------------------------------------------------------------
// Gram tables
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GramTableJson {
    pub labels: Vec<String>,
    pub gram: Vec<Vec<i64>>,
}

impl GramTableJson {
    pub fn to_table(&self) -> Result<GramTable> {
        GramTable::new(self.labels.clone(), self.gram.clone()).map_err(|e| anyhow!("{e}"))
    }
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFormJson {
    pub bidegree: [u32; 2],
    /// "linear" or "quadratic"
    pub role: String,
    #[serde(default)]
    pub group: usize,
    /// "plain", "t0", or "t1" (quadratics only)
    #[serde(default = "default_tag")]
    pub tag: String,
    pub poly: PolyJson,
}

fn default_tag() -> String {
    "plain".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelJson {
    #[serde(default)]
    pub schema: Option<String>,
    pub case: u8,
    pub parity: String,
    pub n: i64,
    pub field: FieldJson,
    pub seed: u64,
    #[serde(default)]
    pub retries: u32,
    pub alpha: i64,
    pub forms: Vec<ModelFormJson>,
}

impl ModelJson {
    pub fn to_model(&self) -> Result<FibrationModel> {
        let spec = self.field.to_spec()?;
        let parity = match self.parity.as_str() {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            other => bail!("parity must be 'even' or 'odd', got '{other}'"),
        };
        let case = CaseSpec::new(self.case, parity, self.n).map_err(|e| anyhow!("{e}"))?;
        let mut forms = Vec::with_capacity(self.forms.len());
        for f in &self.forms {
            let role = match f.role.as_str() {
                "linear" => FormRole::Linear,
                "quadratic" => {
                    let tag = match f.tag.as_str() {
                        "plain" => FormTag::Plain,
                        "t0" => FormTag::TimesT0,
                        "t1" => FormTag::TimesT1,
                        other => bail!("unknown form tag '{other}'"),
                    };
                    FormRole::Quadratic {
                        group: f.group,
                        tag,
                    }
                }
                other => bail!("unknown form role '{other}'"),
            };
            forms.push(ModelForm {
                poly: f.poly.to_multipoly(&spec)?,
                bidegree: (f.bidegree[0], f.bidegree[1]),
                role,
            });
        }
        FibrationModel::from_parts(case, &spec, self.seed, forms, self.alpha)
            .map_err(|e| anyhow!("{e}"))
    }

    pub fn from_model(m: &FibrationModel) -> ModelJson {
        ModelJson {
            schema: Some(crate::SCHEMA.into()),
            case: m.case().case,
            parity: match m.case().parity {
                Parity::Even => "even".into(),
                Parity::Odd => "odd".into(),
            },
            n: m.case().n,
            field: FieldJson::from_spec(m.spec()),
            seed: m.seed(),
            retries: m.retries(),
            alpha: m.alpha(),
            forms: m
                .forms()
                .iter()
                .map(|f| ModelFormJson {
                    bidegree: [f.bidegree.0, f.bidegree.1],
                    role: match f.role {
                        FormRole::Linear => "linear".into(),
                        FormRole::Quadratic { .. } => "quadratic".into(),
                    },
                    group: match f.role {
                        FormRole::Quadratic { group, .. } => group,
                        FormRole::Linear => 0,
                    },
                    tag: match f.role {
                        FormRole::Quadratic { tag: FormTag::TimesT0, .. } => "t0".into(),
                        FormRole::Quadratic { tag: FormTag::TimesT1, .. } => "t1".into(),
                        _ => "plain".into(),
                    },
                    poly: PolyJson::from_multipoly(&f.poly),
                })
                .collect(),
        }
    }
}

/// Four quadratic forms in five variables, for the common-zero search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadricsJson {
    pub field: FieldJson,
    pub quadrics: Vec<PolyJson>,
}

impl QuadricsJson {
    pub fn to_forms(&self) -> Result<(FieldSpec, [MultiPoly; 4])> {
        let spec = self.field.to_spec()?;
        if self.quadrics.len() != 4 {
            bail!("expected exactly 4 quadrics, got {}", self.quadrics.len());
        }
        let v: Result<Vec<MultiPoly>> = self
            .quadrics
            .iter()
            .map(|p| p.to_multipoly(&spec))
            .collect();
        let v = v?;
        Ok((
            spec,
            [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()],
        ))
    }
}
