use std::collections::BTreeMap;
use std::time::Instant;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use steinberg_core::ash::{exactness_check, h0_to_steinberg, AshComplex};
use steinberg_core::building::{apartment_span_check, building_summary, steinberg_dimension_formula, steinberg_space, TitsBuilding};
use steinberg_core::coinvariant::coinvariant_complex;
use steinberg_core::lie::chevalley_eilenberg_betti;
use steinberg_core::modular::{euler_characteristic_rank, level_report, LevelReport};
use steinberg_core::projective::MatrixGroup;
use steinberg_core::quartic::{lattice_certificate, EMBEDDING_TOLERANCE};
use steinberg_core::stabilization::{compare_phi_psi, double_stabilization_zero, psi_l};
use steinberg_core::LabError;

use crate::golden::{self, GoldenEntry};
use crate::report::{merge, Certificate, Expectation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    SolomonTits,
    AshExactness,
    H0Iso,
    PsiChainmap,
    PhiVsPsi,
    TauVanishing,
    Coinvariants,
    ModularSymbols,
    Nilmanifold,
    Lattice,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::SolomonTits => "solomon-tits",
            Suite::AshExactness => "ash-exactness",
            Suite::H0Iso => "h0-iso",
            Suite::PsiChainmap => "psi-chainmap",
            Suite::PhiVsPsi => "phi-vs-psi",
            Suite::TauVanishing => "tau-vanishing",
            Suite::Coinvariants => "coinvariants",
            Suite::ModularSymbols => "modular-symbols",
            Suite::Nilmanifold => "nilmanifold",
            Suite::Lattice => "lattice",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub n: usize,
    pub p: u64,
    pub levels: Vec<u64>,
    pub height: i64,
    pub word_length: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            n: 2,
            p: 2,
            levels: (1..=5).collect(),
            height: 2,
            word_length: 4,
        }
    }
}

impl Params {
    /// The parameters a suite actually reads, for the certificate.
    pub fn relevant(&self, suite: Suite) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        match suite {
            Suite::ModularSymbols => {
                m.insert("level".into(), json!(self.levels));
            }
            Suite::Nilmanifold => {
                m.insert("n".into(), json!(self.n));
            }
            Suite::Lattice => {
                m.insert("height".into(), json!(self.height));
                m.insert("word_length".into(), json!(self.word_length));
            }
            _ => {
                m.insert("n".into(), json!(self.n));
                m.insert("p".into(), json!(self.p));
            }
        }
        m
    }

    pub fn label(&self, suite: Suite) -> String {
        self.relevant(suite)
            .iter()
            .map(|(k, v)| match v {
                Value::Array(a) => {
                    let parts: Vec<String> = a.iter().map(Value::to_string).collect();
                    format!("{k}={}", parts.join(","))
                }
                other => format!("{k}={other}"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// What a suite computed, before expected values are attached.
pub struct Outcome {
    pub computed: Value,
    pub expected: Vec<Expectation>,
    pub constants: Option<Value>,
    pub module_pass: bool,
    pub levels: Option<Vec<LevelReport>>,
}

/// Errors caused by the request rather than by a failed check.
pub fn is_usage_error(e: &LabError) -> bool {
    matches!(e, LabError::InvalidParameter(_) | LabError::SizeBound { .. } | LabError::Parse(_))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("certificates serialize")
}

const FORMULA: &str = "closed-form: p^(n(n-1)/2)";

fn steinberg_dim(n: usize, p: u64) -> u64 {
    steinberg_dimension_formula(n, p)
}

fn higher_total(h: &[usize]) -> usize {
    h.iter().skip(1).sum()
}

pub fn run(suite: Suite, params: &Params) -> Result<Outcome, LabError> {
    let (n, p) = (params.n, params.p);
    let mut constants = None;
    let mut levels = None;
    let (computed, expected, module_pass) = match suite {
        Suite::SolomonTits => {
            let b = TitsBuilding::new(n, p)?;
            let ash = AshComplex::new(n, p)?;
            let summary = building_summary(&b)?;
            let building_dim = steinberg_space(&b)?.dim();
            let ash_h0 = ash.complex().homology_dimensions()?[0];
            let span = apartment_span_check(n, p)?;
            let st = steinberg_dim(n, p);
            (
                json!({
                    "dim": building_dim,
                    "building_dim": building_dim,
                    "ash_h0_dim": ash_h0,
                    "apartment_rank": span.rank,
                    "frames": span.frames,
                    "simplex_counts": summary.simplex_counts,
                    "reduced_betti": summary.reduced_betti,
                }),
                vec![
                    Expectation::equal("/building_dim", st, FORMULA),
                    Expectation::equal("/ash_h0_dim", st, FORMULA),
                    Expectation::equal("/apartment_rank", st, FORMULA),
                ],
                building_dim == ash_h0 && span.pass,
            )
        }
        Suite::AshExactness => {
            let cert = exactness_check(n, p)?;
            let mut v = to_value(&cert);
            v["higher_homology_total"] = json!(higher_total(&cert.homology));
            (
                v,
                vec![
                    Expectation::equal("/higher_homology_total", 0, "identity: higher homology of the resolution vanishes"),
                    Expectation::equal("/homology/0", steinberg_dim(n, p), FORMULA),
                ],
                cert.pass,
            )
        }
        Suite::H0Iso => {
            let cert = h0_to_steinberg(n, p)?;
            (
                to_value(&cert),
                vec![
                    Expectation::equal("/surjective", true, "identity: apartment classes span the top cycles"),
                    Expectation::equal("/kernel_is_boundaries", true, "identity: relations are exactly the boundaries"),
                    Expectation::equal("/image_rank", steinberg_dim(n, p), FORMULA),
                ],
                cert.pass,
            )
        }
        Suite::PsiChainmap => {
            let cert = psi_l(n, p)?;
            (
                json!({
                    "source_sizes": cert.source_sizes,
                    "degrees_checked": cert.commutation.degrees_checked,
                    "commutes": cert.commutation.pass,
                    "failure": cert.commutation.failure,
                }),
                vec![Expectation::equal(
                    "/commutes",
                    true,
                    "identity: appending a line commutes with the boundary",
                )],
                cert.pass,
            )
        }
        Suite::PhiVsPsi => {
            let cert = compare_phi_psi(n, p)?;
            constants = Some(json!({
                "suspension_signs": cert.signs,
                "prism_term_sign": "(-1)^m for the term switching at position m",
                "line": "<e_{n+1}>",
            }));
            (
                json!({
                    "epsilon": cert.epsilon,
                    "elements_checked": cert.elements_checked,
                    "cycles_checked": cert.cycles_checked,
                    "source_h0_iso": cert.source_h0_iso,
                    "target_h0_iso": cert.target_h0_iso,
                    "witness": cert.witness,
                    "consistent": cert.pass,
                }),
                vec![
                    Expectation::equal("/consistent", true, "identity: one global sign relates the two maps"),
                    Expectation::equal("/cycles_checked", steinberg_dim(n, p), FORMULA),
                ],
                cert.pass,
            )
        }
        Suite::TauVanishing => {
            let epsilon = match compare_phi_psi(n, p) {
                Ok(c) => c.epsilon,
                Err(e) if is_usage_error(&e) => None,
                Err(e) => return Err(e),
            };
            let cert = double_stabilization_zero(n, p, epsilon)?;
            constants = Some(json!({
                "tau": "identity on the first n coordinates, [[0,-1],[1,0]] on the last two",
                "lines": ["<e_{n+1}>", "<e_{n+2}>"],
            }));
            let order = if p == 2 { 2 } else { 4 };
            (
                to_value(&cert),
                vec![
                    Expectation::equal("/max_abs_entry", 0, "identity: the double stabilization equals its own negation"),
                    Expectation::equal(
                        "/chain_level_max_abs_entry",
                        0,
                        "identity: the double stabilization equals its own negation",
                    ),
                    Expectation::equal(
                        "/tau_identity",
                        true,
                        "identity: tau reverses the orientation of the two added lines",
                    ),
                    Expectation::equal("/tau_order", order, "closed-form: 4 for odd p, 2 for p = 2"),
                    Expectation::equal(
                        "/coinvariants_exact",
                        true,
                        "identity: coinvariants of a finite group are exact over Q",
                    ),
                ],
                cert.pass,
            )
        }
        Suite::Coinvariants => {
            let ash = AshComplex::new(n, p)?;
            let mut parts = serde_json::Map::new();
            let mut exact = true;
            for (name, g) in [
                ("special", MatrixGroup::special_linear(n, p)?),
                ("general", MatrixGroup::general_linear(n, p)?),
            ] {
                let co = coinvariant_complex(&ash, &g)?;
                let h = co.homology()?;
                exact &= higher_total(&h) == 0;
                parts.insert(
                    name.into(),
                    json!({
                        "orbits_before": co.orbits_before,
                        "orbits_after": co.orbits_after,
                        "homology": h,
                        "higher_homology_total": higher_total(&h),
                    }),
                );
            }
            let identity = "identity: coinvariants of a finite group are exact over Q";
            (
                Value::Object(parts),
                vec![
                    Expectation::equal("/special/higher_homology_total", 0, identity),
                    Expectation::equal("/general/higher_homology_total", 0, identity),
                ],
                exact,
            )
        }
        Suite::ModularSymbols => {
            if params.levels.is_empty() {
                return Err(LabError::InvalidParameter("no levels requested".into()));
            }
            let reports: Vec<LevelReport> = params.levels.iter().map(|&l| level_report(l)).collect::<Result<_, _>>()?;
            let dims: serde_json::Map<String, Value> = reports.iter().map(|r| (r.level.to_string(), json!(r.dim))).collect();
            let nonvanishing = reports.iter().all(|r| r.level == 1 || r.dim > 0);
            let mut expected = Vec::new();
            for r in &reports {
                if let Some(o) = euler_characteristic_rank(r.level) {
                    expected.push(Expectation::equal(
                        &format!("/dims/{}", r.level),
                        o,
                        "closed-form: 1 + [PSL_2(Z) : image of the level-N subgroup] / 6",
                    ));
                }
            }
            expected.push(Expectation::equal(
                "/nonvanishing",
                true,
                "identity: H^1 of every level above 1 is nonzero",
            ));
            let pass = nonvanishing && reports.iter().all(|r| r.pass);
            let computed = json!({ "levels": reports, "dims": dims, "nonvanishing": nonvanishing });
            levels = Some(reports);
            (computed, expected, pass)
        }
        Suite::Nilmanifold => {
            let betti = chevalley_eilenberg_betti(n)?;
            let mut rev = betti.clone();
            rev.reverse();
            let palindromic = betti == rev;
            let top = *betti.last().expect("nonempty");
            (
                json!({ "betti": betti, "dim": betti.len() - 1, "top": top, "palindromic": palindromic }),
                vec![
                    Expectation::equal("/top", 1, "identity: top class of a compact orientable manifold"),
                    Expectation::equal("/palindromic", true, "identity: Poincare duality"),
                ],
                top == 1 && palindromic,
            )
        }
        Suite::Lattice => {
            let cert = lattice_certificate(params.height, params.word_length)?;
            let tol = "identity: exact form identity evaluated in double precision";
            (
                to_value(&cert),
                vec![
                    Expectation::equal("/all_members_pass", true, "identity: search returns members only"),
                    Expectation::equal("/product_closure", true, "identity: members form a group"),
                    Expectation::equal("/unipotent/pass", true, "identity: the lattice has no unipotent elements"),
                    Expectation::at_most("/max_unitarity_deviation", EMBEDDING_TOLERANCE, tol),
                    Expectation::at_most("/max_sigma_modulus", 1.0 + EMBEDDING_TOLERANCE, tol),
                ],
                cert.pass,
            )
        }
    };
    Ok(Outcome {
        computed,
        expected,
        constants,
        module_pass,
        levels,
    })
}

/// Runs a suite and attaches golden and caller-supplied expectations.
pub fn certify(
    suite: Suite,
    params: &Params,
    golden: &[GoldenEntry],
    overrides: Vec<Expectation>,
) -> Result<(Certificate, Option<Vec<LevelReport>>), LabError> {
    let start = Instant::now();
    let outcome = run(suite, params)?;
    let parameters = params.relevant(suite);
    let mut expected = outcome.expected;
    merge(&mut expected, golden::lookup(golden, suite.name(), &parameters));
    merge(&mut expected, overrides);
    let cert = Certificate::new(
        suite.name(),
        parameters,
        outcome.computed,
        expected,
        outcome.constants,
        outcome.module_pass,
        start.elapsed().as_millis() as u64,
    );
    Ok((cert, outcome.levels))
}
