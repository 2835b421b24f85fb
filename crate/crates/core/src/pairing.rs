//! Pairing Betti vectors with cohomology tables, and the audit of pure-cone
//! facets against functionals induced by supernatural bundles.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::betti::BettiVector;
use crate::error::{Error, Result};
use crate::kt::FunctionalKind;
use crate::polyhedra::{self, ConeH, ConeV};
use crate::pure::enumerate_pure_vectors;
use crate::rational::{self, Rational};
use crate::sheaf::{gamma, SheafSpec};

/// Finitely supported functional, applied by dot product.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFunctional {
    #[serde(with = "rational::q_map")]
    pub coeffs: BTreeMap<i64, Rational>,
}

impl LinearFunctional {
    pub fn from_entries(entries: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        LinearFunctional { coeffs: entries.into_iter().filter(|(_, x)| !x.is_zero()).collect() }
    }

    pub fn apply(&self, v: &BettiVector) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, (j, c)| acc + c * v.get(*j))
    }

    pub fn coeff(&self, j: i64) -> Rational {
        self.coeffs.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn to_dense(&self, p: i64, q: i64) -> Vec<Rational> {
        (p..=q).map(|j| self.coeff(j)).collect()
    }
}

/// `Φ(F, E)_j = β_j(F) · γ_{−j}(E)`
pub fn phi_vector(beta: &BettiVector, spec: &SheafSpec) -> BettiVector {
    BettiVector::from_entries(beta.iter().map(|(j, x)| (j, x * gamma(spec, -j))))
}

/// `f ∘ Φ(−, E)` restricted to the window, for `f = τ_j` or `σ_j`.
pub fn induced_functional(spec: &SheafSpec, kind: FunctionalKind, j: i64, window: (i64, i64)) -> Result<LinearFunctional> {
    let (p, q) = window;
    if p > q {
        return Err(Error::InvalidWindow { p, q });
    }
    Ok(match kind {
        FunctionalKind::Tau => LinearFunctional::from_entries((p..=q).map(|i| {
            let g = gamma(spec, -i);
            (i, if i == j { -g } else { g })
        })),
        FunctionalKind::Sigma => LinearFunctional::from_entries(
            (p..=q).contains(&j).then(|| (j, gamma(spec, -j))),
        ),
    })
}

/// Where a facet came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetMatch {
    pub roots: Vec<i64>,
    pub kind: FunctionalKind,
    pub j: i64,
    /// Set when the roots are those of a line bundle `O_{P^m}(d)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub line_bundle: Option<LineBundleTag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBundleTag {
    pub m: u32,
    pub d: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditedFacet {
    #[serde(with = "rational::int_vec")]
    pub coeffs: Vec<BigInt>,
    #[serde(rename = "match")]
    pub matched: Option<FacetMatch>,
}

/// An induced `τ` functional that is negative on some pure vector of the
/// window: the first such vector and how many there are.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignFailure {
    pub roots: Vec<i64>,
    pub j: i64,
    pub degseq: Vec<i64>,
    #[serde(with = "rational::q")]
    pub value: Rational,
    pub negative_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub window: (i64, i64),
    pub radius: i64,
    pub generators: usize,
    #[serde(with = "rational::int_matrix")]
    pub equations: Vec<Vec<BigInt>>,
    pub facets: Vec<AuditedFacet>,
    pub all_matched: bool,
    /// Number of induced `τ` functionals that were nonnegative on every pure
    /// vector of the window.
    pub nonnegative_tau_functionals: usize,
    pub sign_failures: Vec<SignFailure>,
}

impl AuditReport {
    pub fn find(&self, coeffs: &[BigInt]) -> Option<&AuditedFacet> {
        self.facets.iter().find(|f| f.coeffs == coeffs)
    }
}

/// Strictly decreasing sequences of length `len` inside `[−radius, radius]`.
pub fn root_sequences(len: usize, radius: i64) -> Vec<Vec<i64>> {
    (-radius..=radius)
        .rev()
        .combinations(len)
        .collect()
}

/// Facets of the pure cone `cone(enumerate_pure_vectors(n, 0, window))`,
/// each matched (up to positive scaling on the cone's span) against the
/// functionals `τ_j ∘ Φ(−, E)` and `σ_j ∘ Φ(−, E)` for supernatural `E` with
/// roots in `[−radius, radius]`. `τ` matches are preferred over `σ`; within a
/// kind the first root sequence in decreasing lexicographic order wins.
pub fn audit_conjecture(n: usize, window: (i64, i64), radius: i64) -> Result<AuditReport> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    if radius < 0 {
        return Err(Error::Invalid("radius must be nonnegative".into()));
    }
    let (p, q) = window;
    let pure = enumerate_pure_vectors(n, 0, window)?;
    let cone = ConeV::from_vectors(window, pure.iter().map(|pv| &pv.vector))?;
    let h: ConeH = polyhedra::v_to_h(&cone)?;

    let roots_list = root_sequences(n - 1, radius);
    let mut table: HashMap<Vec<BigInt>, FacetMatch> = HashMap::new();
    let mut sign_failures = Vec::new();
    let mut nonnegative = 0;
    for kind in [FunctionalKind::Tau, FunctionalKind::Sigma] {
        for roots in &roots_list {
            let spec = SheafSpec::supernatural(roots.clone())?;
            for j in p..=q {
                let f = induced_functional(&spec, kind, j, window)?;
                if kind == FunctionalKind::Tau {
                    let negative: Vec<_> = pure
                        .iter()
                        .map(|pv| (pv, f.apply(&pv.vector)))
                        .filter(|(_, value)| value.is_negative())
                        .collect();
                    match negative.first() {
                        None => nonnegative += 1,
                        Some((pv, value)) => sign_failures.push(SignFailure {
                            roots: roots.clone(),
                            j,
                            degseq: pv.degseq.degrees().to_vec(),
                            value: value.clone(),
                            negative_count: negative.len(),
                        }),
                    }
                }
                let key = h.canonical_on_span(&f.to_dense(p, q));
                if key.iter().all(Zero::is_zero) {
                    continue;
                }
                table.entry(key).or_insert_with(|| FacetMatch {
                    roots: roots.clone(),
                    kind,
                    j,
                    line_bundle: spec.as_line_bundle().map(|(m, d)| LineBundleTag { m, d }),
                });
            }
        }
    }

    let facets: Vec<AuditedFacet> = h
        .inequalities
        .iter()
        .map(|f| AuditedFacet { coeffs: f.clone(), matched: table.get(f).cloned() })
        .collect();
    let all_matched = facets.iter().all(|f| f.matched.is_some());
    Ok(AuditReport {
        n,
        window,
        radius,
        generators: pure.len(),
        equations: h.equations.clone(),
        facets,
        all_matched,
        nonnegative_tau_functionals: nonnegative,
        sign_failures,
    })
}

/// `x ↦ coefficient of e_j` read back through `Φ`: `γ_j(E) = Φ(e_{−j}, E)_{−j}`.
pub fn gamma_via_phi(spec: &SheafSpec, j: i64) -> Rational {
    phi_vector(&BettiVector::unit(-j), spec).get(-j)
}

/// Scales a functional so its window coefficients are primitive integers.
pub fn primitive_coefficients(f: &LinearFunctional, window: (i64, i64)) -> Vec<BigInt> {
    rational::primitive_integer(&f.to_dense(window.0, window.1))
}

/// `true` when the two integer vectors lie on the same open ray.
pub fn same_ray(a: &[BigInt], b: &[BigInt]) -> bool {
    let pa = rational::primitive(a.to_vec());
    let pb = rational::primitive(b.to_vec());
    pa == pb && pa.iter().any(|x| !x.is_zero())
}
