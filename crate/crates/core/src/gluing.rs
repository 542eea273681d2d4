//! Fiber-product gluing of quadratic data over a common base.
//!
//! Given `A_1`, `A_2`, a base `C` and restriction maps `res_i : V_i → V_0`,
//! the glued algebra has degree-one part `V = V_1 ×_{V_0} V_2` (the kernel of
//! `(v_1, v_2) ↦ res_1 v_1 - res_2 v_2`) and relations
//! `R = (incl_1⊗incl_1)^{-1}(R_1) ∩ (incl_2⊗incl_2)^{-1}(R_2)`.

use serde::{Deserialize, Serialize};

use crate::algebra::{PresentationJson, QuadraticPresentation};
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Subspace};

/// One leg `res_i : V_i → V_0` of a gluing datum.
#[derive(Clone, Copy, Debug)]
pub struct RestrictionMap<'a> {
    pub source: &'a QuadraticPresentation,
    pub target: &'a QuadraticPresentation,
    pub map: &'a FpMatrix,
}

impl RestrictionMap<'_> {
    pub fn is_surjective(&self) -> bool {
        self.map.rank() == self.target.rank()
    }

    /// `(res ⊗ res)(R_i) ⊆ R_0`.
    pub fn is_compatible(&self) -> bool {
        self.map
            .kron(self.map)
            .and_then(|sq| self.source.relations().map(&sq))
            .map(|image| self.target.relations().contains_subspace(&image))
            .unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingDatum {
    pub a1: QuadraticPresentation,
    pub a2: QuadraticPresentation,
    pub base: QuadraticPresentation,
    /// `dim V_0 × dim V_1`.
    pub res1: FpMatrix,
    /// `dim V_0 × dim V_2`.
    pub res2: FpMatrix,
}

impl GluingDatum {
    pub fn new(
        a1: QuadraticPresentation,
        a2: QuadraticPresentation,
        base: QuadraticPresentation,
        res1: FpMatrix,
        res2: FpMatrix,
    ) -> Result<Self> {
        let p = base.prime();
        for q in [a1.prime(), a2.prime(), res1.prime(), res2.prime()] {
            if q != p {
                return Err(Error::ModulusMismatch(p.get(), q.get()));
            }
        }
        for (m, src) in [(&res1, &a1), (&res2, &a2)] {
            if m.nrows() != base.rank() {
                return Err(Error::DimensionMismatch {
                    context: "restriction map rows (dim V_0)",
                    expected: base.rank(),
                    found: m.nrows(),
                });
            }
            if m.ncols() != src.rank() {
                return Err(Error::DimensionMismatch {
                    context: "restriction map columns (dim V_i)",
                    expected: src.rank(),
                    found: m.ncols(),
                });
            }
        }
        Ok(GluingDatum {
            a1,
            a2,
            base,
            res1,
            res2,
        })
    }

    pub fn res1(&self) -> RestrictionMap<'_> {
        RestrictionMap {
            source: &self.a1,
            target: &self.base,
            map: &self.res1,
        }
    }

    pub fn res2(&self) -> RestrictionMap<'_> {
        RestrictionMap {
            source: &self.a2,
            target: &self.base,
            map: &self.res2,
        }
    }
}

/// Outcome of every hypothesis the gluing relies on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub res1_surjective: bool,
    pub res2_surjective: bool,
    pub res1_compatible: bool,
    pub res2_compatible: bool,
    pub a1_graded_commutative: bool,
    pub a2_graded_commutative: bool,
    pub base_graded_commutative: bool,
    pub fiber_product_dim: usize,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    pub fn checks(&self) -> [(&'static str, bool); 7] {
        [
            ("res1 surjective", self.res1_surjective),
            ("res2 surjective", self.res2_surjective),
            ("res1 relation-compatible", self.res1_compatible),
            ("res2 relation-compatible", self.res2_compatible),
            ("A1 graded-commutative", self.a1_graded_commutative),
            ("A2 graded-commutative", self.a2_graded_commutative),
            ("base graded-commutative", self.base_graded_commutative),
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }

    pub fn failure_summary(&self) -> String {
        let failed: Vec<&str> = self
            .checks()
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect();
        if failed.is_empty() {
            "none".into()
        } else {
            failed.join(", ")
        }
    }
}

/// `V = V_1 ×_{V_0} V_2` with its two coordinate projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProduct {
    /// RREF basis of `ker ρ ⊆ V_1 ⊕ V_2`.
    pub space: Subspace,
    pub labels: Vec<String>,
    /// `dim V_1 × dim V`.
    pub incl1: FpMatrix,
    /// `dim V_2 × dim V`.
    pub incl2: FpMatrix,
}

pub fn fiber_product_h1(d: &GluingDatum) -> Result<FiberProduct> {
    let p = d.base.prime();
    let (n1, n2) = (d.a1.rank(), d.a2.rank());
    let neg2 = {
        let mut m = FpMatrix::zeros(p, d.res2.nrows(), n2);
        for i in 0..d.res2.nrows() {
            for (j, v) in d.res2.row_support(i) {
                m.set(i, j, p.neg(v));
            }
        }
        m
    };
    let rho = d.res1.hstack(&neg2)?;
    let space = rho.kernel();
    let m = space.dim();
    let mut incl1 = FpMatrix::zeros(p, n1, m);
    let mut incl2 = FpMatrix::zeros(p, n2, m);
    let mut labels = Vec::with_capacity(m);
    for (k, &pivot) in space.pivots().iter().enumerate() {
        for (j, v) in space.basis().row_support(k) {
            if j < n1 {
                incl1.set(j, k, v);
            } else {
                incl2.set(j - n1, k, v);
            }
        }
        labels.push(if pivot < n1 {
            format!("1.{}", d.a1.generators()[pivot])
        } else {
            format!("2.{}", d.a2.generators()[pivot - n1])
        });
    }
    Ok(FiberProduct {
        space,
        labels,
        incl1,
        incl2,
    })
}

pub fn hypothesis_report(d: &GluingDatum) -> HypothesisReport {
    let (r1, r2) = (d.res1(), d.res2());
    let fiber_product_dim = fiber_product_h1(d).map(|f| f.space.dim()).unwrap_or(0);
    let mut report = HypothesisReport {
        res1_surjective: r1.is_surjective(),
        res2_surjective: r2.is_surjective(),
        res1_compatible: r1.is_compatible(),
        res2_compatible: r2.is_compatible(),
        a1_graded_commutative: d.a1.is_graded_commutative(),
        a2_graded_commutative: d.a2.is_graded_commutative(),
        base_graded_commutative: d.base.is_graded_commutative(),
        fiber_product_dim,
        notes: vec!["connecting map H^0(G_0) -> H^1(G) taken to vanish (fiber-product exactness)".into()],
    };
    if report.res1_surjective && report.res2_surjective {
        let expected = d.a1.rank() + d.a2.rank() - d.base.rank();
        if expected != fiber_product_dim {
            report
                .notes
                .push(format!("fiber product has dim {fiber_product_dim}, expected {expected}"));
        }
    } else {
        report
            .notes
            .push("a restriction map is not surjective; dimension law not applicable".into());
    }
    report
}

#[derive(Clone, Debug)]
pub struct Glued {
    pub presentation: QuadraticPresentation,
    pub report: HypothesisReport,
    pub fiber: FiberProduct,
}

/// Glues after validating every hypothesis; any failure is returned as
/// [`Error::HypothesesFailed`] carrying the report.
pub fn glue(d: &GluingDatum) -> Result<Glued> {
    let report = hypothesis_report(d);
    if !report.all_passed() {
        return Err(Error::HypothesesFailed(Box::new(report)));
    }
    let glued = glue_forced(d)?;
    if glued.report.notes.iter().any(|n| n.starts_with("pullback square")) {
        return Err(Error::Invariant(glued.report.notes.join("; ")));
    }
    Ok(glued)
}

/// Builds the pullback presentation regardless of the hypotheses. Failures
/// of the square's postcondition are recorded in the report notes.
pub fn glue_forced(d: &GluingDatum) -> Result<Glued> {
    let mut report = hypothesis_report(d);
    let fiber = fiber_product_h1(d)?;
    let p = d.base.prime();
    let pre1 = fiber.incl1.kron(&fiber.incl1)?.preimage(d.a1.relations())?;
    let pre2 = fiber.incl2.kron(&fiber.incl2)?.preimage(d.a2.relations())?;
    let relations = pre1.intersect(&pre2)?;

    let q1 = d.res1.mul(&fiber.incl1)?;
    let q2 = d.res2.mul(&fiber.incl2)?;
    if q1 != q2 {
        report.notes.push("pullback square: res1∘incl1 != res2∘incl2".into());
    }
    let lands = relations.map(&q1.kron(&q1)?)?;
    if !d.base.relations().contains_subspace(&lands) {
        report
            .notes
            .push("pullback square: glued relations do not restrict into R_0".into());
    }
    let presentation = QuadraticPresentation::from_subspace(p, fiber.labels.clone(), relations)?;
    Ok(Glued {
        presentation,
        report,
        fiber,
    })
}

/// A presentation given either inline or as a path to a presentation file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PresentationRef {
    Path(String),
    Inline(PresentationJson),
}

/// JSON gluing datum; restriction maps are row-major residues with
/// `dim V_0` rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingDatumJson {
    pub a1: PresentationRef,
    pub a2: PresentationRef,
    pub base: PresentationRef,
    pub res1: Vec<Vec<i64>>,
    pub res2: Vec<Vec<i64>>,
}

pub fn matrix_from_json(p: crate::linalg::Prime, rows: &[Vec<i64>], cols: usize) -> Result<FpMatrix> {
    if let Some(r) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            context: "restriction map row length",
            expected: cols,
            found: r.len(),
        });
    }
    let flat: Vec<i64> = rows.iter().flatten().copied().collect();
    FpMatrix::from_integers(p, rows.len(), cols, &flat)
}
