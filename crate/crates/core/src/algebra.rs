//! Quadratic presentations `A = T(V)/<R>` and their graded pieces.
//!
//! Graded components are built by the recursion
//! `A^{d} = (A^{d-1} ⊗ V) / (A^{d-2} · R)`, which keeps every ambient space
//! at `dim A^{d-1} * n` instead of `n^d`. The full ideal component
//! `I_d ⊆ V^{⊗d}` is available separately through
//! [`QuadraticPresentation::ideal_component`], computed by summing the
//! Kronecker-embedded copies `V^{⊗i} ⊗ R ⊗ V^{⊗j}`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Prime, Subspace};

/// Default bound on any ambient dimension a computation may allocate.
pub const DEFAULT_AMBIENT_CAP: usize = 1 << 20;

///  Quadratic data `(V, R)` over `F_p`: ordered generator labels spanning
///  `V = A^1` and a relation subspace `R ⊆ V ⊗ V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticPresentation {
    p: Prime,
    generators: Vec<String>,
    relations: Subspace,
}

fn check_labels(generators: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for g in generators {
        if !seen.insert(g.as_str()) {
            return Err(Error::DuplicateLabel(g.clone()));
        }
    }
    Ok(())
}

impl QuadraticPresentation {
    /// Presentation whose relations are spanned by `spanners`, each a vector
    /// of length `n²` in the flat tensor basis.
    pub fn new<R: AsRef<[u8]>>(p: Prime, generators: Vec<String>, spanners: &[R]) -> Result<Self> {
        check_labels(&generators)?;
        let n = generators.len();
        if let Some(bad) = spanners.iter().find(|s| s.as_ref().len() != n * n) {
            return Err(Error::InvalidRelation(format!(
                "relation vector has length {}, expected {}",
                bad.as_ref().len(),
                n * n
            )));
        }
        let relations = Subspace::span(p, n * n, spanners)?;
        Ok(QuadraticPresentation {
            p,
            generators,
            relations,
        })
    }

    pub fn from_subspace(p: Prime, generators: Vec<String>, relations: Subspace) -> Result<Self> {
        check_labels(&generators)?;
        let n = generators.len();
        if relations.ambient_dim() != n * n {
            return Err(Error::DimensionMismatch {
                context: "relation ambient dimension",
                expected: n * n,
                found: relations.ambient_dim(),
            });
        }
        if relations.prime() != p {
            return Err(Error::ModulusMismatch(p.get(), relations.prime().get()));
        }
        Ok(QuadraticPresentation {
            p,
            generators,
            relations,
        })
    }

    /// Presentation from relations written as `(coefficient, left, right)`
    /// terms over the generator labels.
    pub fn from_terms(
        p: Prime,
        generators: Vec<String>,
        relations: &[Vec<(i64, String, String)>],
    ) -> Result<Self> {
        check_labels(&generators)?;
        let n = generators.len();
        let index: HashMap<&str, usize> = generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.as_str(), i))
            .collect();
        let lookup = |l: &str| index.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.to_string()));
        let mut spanners = Vec::with_capacity(relations.len());
        for rel in relations {
            let mut v = vec![0u8; n * n];
            for (c, a, b) in rel {
                let k = lookup(a)? * n + lookup(b)?;
                v[k] = p.add(v[k], p.reduce(*c));
            }
            spanners.push(v);
        }
        let relations = Subspace::span(p, n * n, &spanners)?;
        Ok(QuadraticPresentation {
            p,
            generators,
            relations,
        })
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    /// `dim V`.
    #[inline]
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn generator_index(&self, label: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn relabeled(&self, generators: Vec<String>) -> Result<Self> {
        if generators.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                context: "relabeling",
                expected: self.rank(),
                found: generators.len(),
            });
        }
        Self::from_subspace(self.p, generators, self.relations.clone())
    }

    /// Content hash of the canonical data: prime, rank and the RREF of `R`.
    /// Labels are deliberately left out, so relabeled copies share a digest.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"quadkoszul-presentation-v1\n");
        h.update(format!("p={}\nn={}\n", self.p, self.rank()).as_bytes());
        let basis = self.relations.basis();
        for i in 0..basis.nrows() {
            let row: Vec<String> = basis
                .row_support(i)
                .into_iter()
                .map(|(j, v)| format!("{j}:{v}"))
                .collect();
            h.update(row.join(",").as_bytes());
            h.update(b";\n");
        }
        hex::encode(h.finalize())
    }

    /// `R` must contain the graded-commutativity tensors: `v⊗w + w⊗v` for
    /// `p = 2`, and all symmetric tensors for odd `p`.
    pub fn commutativity_subspace(&self) -> Subspace {
        commutativity_subspace(self.p, self.rank())
    }

    pub fn is_graded_commutative(&self) -> bool {
        self.relations.contains_subspace(&self.commutativity_subspace())
    }

    /// `I_d = Σ_{i+2+j=d} V^{⊗i} ⊗ R ⊗ V^{⊗j}` inside `V^{⊗d}`.
    pub fn ideal_component(&self, d: usize) -> Result<Subspace> {
        self.ideal_component_with_cap(d, DEFAULT_AMBIENT_CAP)
    }

    pub fn ideal_component_with_cap(&self, d: usize, cap: usize) -> Result<Subspace> {
        let n = self.rank();
        let ambient = checked_power(n, d, cap, "tensor power V^d")?;
        if d < 2 || self.relations.is_zero() {
            return Ok(Subspace::zero(self.p, ambient));
        }
        let mut stacked: Option<FpMatrix> = None;
        for i in 0..=d - 2 {
            let j = d - 2 - i;
            let left = FpMatrix::identity(self.p, n.pow(i as u32));
            let right = FpMatrix::identity(self.p, n.pow(j as u32));
            let block = left.kron(self.relations.basis())?.kron(&right)?;
            stacked = Some(match stacked {
                None => block,
                Some(m) => m.vstack(&block)?,
            });
        }
        Ok(Subspace::from_rows(stacked.expect("d >= 2")))
    }

    pub fn components(&self, d_max: usize) -> Result<GradedComponents> {
        GradedComponents::build(self, d_max, DEFAULT_AMBIENT_CAP)
    }

    pub fn components_with_cap(&self, d_max: usize, cap: usize) -> Result<GradedComponents> {
        GradedComponents::build(self, d_max, cap)
    }

    pub fn hilbert_prefix(&self, d_max: usize) -> Result<HilbertPrefix> {
        Ok(self.components(d_max)?.hilbert_prefix())
    }

    /// `T(V*)/<R^⊥>` on the dual basis, which reuses the generator labels.
    pub fn quadratic_dual(&self) -> QuadraticPresentation {
        QuadraticPresentation {
            p: self.p,
            generators: self.generators.clone(),
            relations: self.relations.annihilator(),
        }
    }

    /// Checks `H_A(t) · H_{A^!}(-t) = 1` coefficient-wise through `d_max`.
    pub fn numerical_koszul_test(&self, d_max: usize) -> Result<NumericalKoszulTest> {
        let a = self.hilbert_prefix(d_max)?;
        let dual = self.quadratic_dual().hilbert_prefix(d_max)?;
        let product: Vec<i64> = (0..=d_max)
            .map(|d| {
                (0..=d)
                    .map(|j| {
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        sign * (a.coefficients[d - j] as i64) * (dual.coefficients[j] as i64)
                    })
                    .sum()
            })
            .collect();
        let failing_degree = product
            .iter()
            .enumerate()
            .find(|&(d, &c)| c != if d == 0 { 1 } else { 0 })
            .map(|(d, _)| d);
        Ok(NumericalKoszulTest {
            hilbert: a.coefficients,
            dual_hilbert: dual.coefficients,
            product,
            failing_degree,
        })
    }

    pub fn to_json(&self) -> PresentationJson {
        let n = self.rank();
        let basis = self.relations.basis();
        let relations = (0..basis.nrows())
            .map(|i| {
                RelationJson::Terms(
                    basis
                        .row_support(i)
                        .into_iter()
                        .map(|(k, c)| TermJson {
                            c: c as i64,
                            w: vec![self.generators[k / n].clone(), self.generators[k % n].clone()],
                        })
                        .collect(),
                )
            })
            .collect();
        PresentationJson {
            p: self.p.get() as u32,
            generators: self.generators.clone(),
            relations,
        }
    }

    pub fn from_json(json: &PresentationJson) -> Result<Self> {
        let p = Prime::new(json.p)?;
        let generators = json.generators.clone();
        check_labels(&generators)?;
        let n = generators.len();
        let mut spanners = Vec::with_capacity(json.relations.len());
        let mut terms = Vec::new();
        for (idx, rel) in json.relations.iter().enumerate() {
            match rel {
                RelationJson::Vector(v) => {
                    if v.len() != n * n {
                        return Err(Error::InvalidRelation(format!(
                            "relations[{idx}] has {} entries, expected {}",
                            v.len(),
                            n * n
                        )));
                    }
                    spanners.push(v.iter().map(|&e| p.reduce(e)).collect::<Vec<u8>>());
                }
                RelationJson::Terms(ts) => {
                    let mut rel_terms = Vec::with_capacity(ts.len());
                    for t in ts {
                        if t.w.len() != 2 {
                            return Err(Error::InvalidRelation(format!(
                                "relations[{idx}]: word {:?} is not a two-letter word",
                                t.w
                            )));
                        }
                        rel_terms.push((t.c, t.w[0].clone(), t.w[1].clone()));
                    }
                    terms.push(rel_terms);
                }
            }
        }
        let from_terms = Self::from_terms(p, generators.clone(), &terms)?;
        let vectors = Subspace::span(p, n * n, &spanners)?;
        Self::from_subspace(p, generators, from_terms.relations.sum(&vectors)?)
    }
}

pub(crate) fn commutativity_subspace(p: Prime, n: usize) -> Subspace {
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut v = vec![0u8; n * n];
            if i == j {
                if p.get() == 2 {
                    continue;
                }
                v[i * n + i] = 1;
            } else {
                v[i * n + j] = 1;
                v[j * n + i] = 1;
            }
            rows.push(v);
        }
    }
    Subspace::span(p, n * n, &rows).expect("well-formed commutativity tensors")
}

fn checked_power(n: usize, d: usize, cap: usize, what: &str) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..d {
        acc = acc.saturating_mul(n);
        if acc > cap {
            return Err(Error::ResourceCap {
                what: format!("{what} (n={n}, d={d})"),
                requested: acc,
                cap,
            });
        }
    }
    Ok(acc)
}

/// JSON form of a presentation; each relation is either a list of
/// `{"c": coeff, "w": [left, right]}` terms or a flat vector of length `n²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub p: u32,
    pub generators: Vec<String>,
    pub relations: Vec<RelationJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationJson {
    Terms(Vec<TermJson>),
    Vector(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: i64,
    pub w: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPrefix {
    pub coefficients: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericalKoszulTest {
    pub hilbert: Vec<usize>,
    pub dual_hilbert: Vec<usize>,
    /// Coefficients of `H_A(t) · H_{A^!}(-t)`.
    pub product: Vec<i64>,
    pub failing_degree: Option<usize>,
}

impl NumericalKoszulTest {
    pub fn passed(&self) -> bool {
        self.failing_degree.is_none()
    }
}

/// Sealed truncation of `A` through degree `d_max`.
///
/// Basis elements of `A^d` are standard monomials: each is recorded as a
/// parent basis element of `A^{d-1}` followed by one generator.
#[derive(Clone, Debug)]
pub struct GradedComponents {
    presentation: QuadraticPresentation,
    d_max: usize,
    dims: Vec<usize>,
    parents: Vec<Vec<(usize, usize)>>,
    /// `extend[d]` has one row per `(b, x)` with `b` a basis element of
    /// `A^{d-1}`, flat index `b * n + x`; the row is the class of `b·x` in `A^d`.
    extend: Vec<FpMatrix>,
}

impl GradedComponents {
    fn build(a: &QuadraticPresentation, d_max: usize, cap: usize) -> Result<Self> {
        let p = a.p;
        let n = a.rank();
        let mut dims = vec![1];
        let mut parents: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut extend: Vec<FpMatrix> = vec![FpMatrix::zeros(p, 0, 1)];
        let relation_rows: Vec<Vec<(usize, u8)>> = (0..a.relations.dim())
            .map(|r| a.relations.basis().row_support(r))
            .collect();
        for d in 1..=d_max {
            let ambient = dims[d - 1] * n;
            if ambient > cap {
                return Err(Error::ResourceCap {
                    what: format!("graded component A^{d} ambient"),
                    requested: ambient,
                    cap,
                });
            }
            let mut spanners = FpMatrix::zeros(p, 0, ambient);
            if d >= 2 && dims[d - 2] > 0 && !relation_rows.is_empty() {
                let prev = &extend[d - 1];
                let mut rows = FpMatrix::zeros(p, dims[d - 2] * relation_rows.len(), ambient);
                let mut scratch = vec![0u8; ambient];
                for c in 0..dims[d - 2] {
                    for (ri, rel) in relation_rows.iter().enumerate() {
                        scratch.iter_mut().for_each(|e| *e = 0);
                        for &(k, coeff) in rel {
                            let (i, j) = (k / n, k % n);
                            for (b, val) in prev.row_support(c * n + i) {
                                let slot = b * n + j;
                                scratch[slot] = p.add(scratch[slot], p.mul(coeff, val));
                            }
                        }
                        rows.set_row(c * relation_rows.len() + ri, &scratch);
                    }
                }
                spanners = rows;
            }
            let image = Subspace::from_rows(spanners);
            let mut is_pivot = vec![false; ambient];
            image.pivots().iter().for_each(|&c| is_pivot[c] = true);
            let mut new_index = vec![usize::MAX; ambient];
            let mut level_parents = Vec::new();
            for k in 0..ambient {
                if !is_pivot[k] {
                    new_index[k] = level_parents.len();
                    level_parents.push((k / n, k % n));
                }
            }
            let dim = level_parents.len();
            let mut ext = FpMatrix::zeros(p, ambient, dim);
            for k in 0..ambient {
                if !is_pivot[k] {
                    ext.set(k, new_index[k], 1);
                }
            }
            for (r, &c) in image.pivots().iter().enumerate() {
                for (k, v) in image.basis().row_support(r) {
                    if k != c {
                        ext.set(c, new_index[k], p.neg(v));
                    }
                }
            }
            dims.push(dim);
            parents.push(level_parents);
            extend.push(ext);
        }
        Ok(GradedComponents {
            presentation: a.clone(),
            d_max,
            dims,
            parents,
            extend,
        })
    }

    pub fn presentation(&self) -> &QuadraticPresentation {
        &self.presentation
    }

    pub fn prime(&self) -> Prime {
        self.presentation.p
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims[d]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn hilbert_prefix(&self) -> HilbertPrefix {
        HilbertPrefix {
            coefficients: self.dims.clone(),
        }
    }

    /// Generator indices of the standard monomial `idx` of `A^d`.
    pub fn standard_word(&self, d: usize, idx: usize) -> Vec<usize> {
        let mut word = Vec::with_capacity(d);
        let (mut deg, mut i) = (d, idx);
        while deg > 0 {
            let (parent, x) = self.parents[deg][i];
            word.push(x);
            i = parent;
            deg -= 1;
        }
        word.reverse();
        word
    }

    /// `v · x` for `v ∈ A^d` (needs `d < d_max`).
    pub fn right_multiply(&self, d: usize, v: &[u8], x: usize) -> Vec<u8> {
        let p = self.prime();
        let n = self.presentation.rank();
        let ext = &self.extend[d + 1];
        let mut out = vec![0u8; self.dims[d + 1]];
        for (b, &c) in v.iter().enumerate() {
            if c != 0 {
                for (k, e) in ext.row_support(b * n + x) {
                    out[k] = p.add(out[k], p.mul(c, e));
                }
            }
        }
        out
    }

    /// Projection `V^{⊗d} → A^d` as a `dim A^d × n^d` matrix.
    pub fn projection(&self, d: usize) -> Result<FpMatrix> {
        let p = self.prime();
        let n = self.presentation.rank();
        let words = checked_power(n, d, DEFAULT_AMBIENT_CAP, "tensor power V^d")?;
        // rows of `classes` are the classes of every word of the current length
        let mut classes = FpMatrix::identity(p, 1);
        for deg in 1..=d {
            let mut next = FpMatrix::zeros(p, classes.nrows() * n, self.dims[deg]);
            for u in 0..classes.nrows() {
                let v = classes.row(u);
                for x in 0..n {
                    next.set_row(u * n + x, &self.right_multiply(deg - 1, &v, x));
                }
            }
            classes = next;
        }
        debug_assert_eq!(classes.nrows(), words);
        Ok(classes.transpose())
    }

    /// `I_d` recovered as the kernel of [`GradedComponents::projection`].
    pub fn ideal_component(&self, d: usize) -> Result<Subspace> {
        Ok(self.projection(d)?.kernel())
    }

    pub fn multiplication_table(&self) -> MultiplicationTable {
        MultiplicationTable::build(self)
    }
}

/// Products of standard monomials `A^k × A^l → A^{k+l}` for `k + l ≤ d_max`.
#[derive(Clone, Debug)]
pub struct MultiplicationTable {
    dims: Vec<usize>,
    d_max: usize,
    /// `(k, l)` → matrix with row `u * dim A^l + w` holding `u·w`.
    products: BTreeMap<(usize, usize), FpMatrix>,
}

impl MultiplicationTable {
    fn build(c: &GradedComponents) -> Self {
        let p = c.prime();
        let mut products = BTreeMap::new();
        for k in 0..=c.d_max {
            let ident = FpMatrix::identity(p, c.dims[k]);
            products.insert((k, 0), ident);
            for l in 1..=c.d_max - k {
                let prev = &products[&(k, l - 1)];
                let mut m = FpMatrix::zeros(p, c.dims[k] * c.dims[l], c.dims[k + l]);
                for u in 0..c.dims[k] {
                    for w in 0..c.dims[l] {
                        let (parent, x) = c.parents[l][w];
                        let base = prev.row(u * c.dims[l - 1] + parent);
                        m.set_row(u * c.dims[l] + w, &c.right_multiply(k + l - 1, &base, x));
                    }
                }
                products.insert((k, l), m);
            }
        }
        MultiplicationTable {
            dims: c.dims.clone(),
            d_max: c.d_max,
            products,
        }
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims[d]
    }

    /// Nonzero coordinates of `u · w` for basis elements `u ∈ A^k`, `w ∈ A^l`.
    pub fn product(&self, k: usize, u: usize, l: usize, w: usize) -> Vec<(usize, u8)> {
        self.products[&(k, l)].row_support(u * self.dims[l] + w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{}", i + 1)).collect()
    }

    fn hyperbolic() -> QuadraticPresentation {
        // xx, yy, xy + yx span the kernel of the hyperbolic pairing
        QuadraticPresentation::new(Prime::TWO, labels(2), &[[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 1, 0]])
            .unwrap()
    }

    #[test]
    fn construction_cases() {
        let free = QuadraticPresentation::new::<Vec<u8>>(Prime::TWO, labels(1), &[]).unwrap();
        assert!(free.relations().is_zero());
        let trunc = QuadraticPresentation::new(Prime::TWO, labels(1), &[[1]]).unwrap();
        assert_eq!(trunc.relations().dim(), 1);
        let full = QuadraticPresentation::new(
            Prime::TWO,
            labels(2),
            &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        )
        .unwrap();
        assert_eq!(full.hilbert_prefix(4).unwrap().coefficients, vec![1, 2, 0, 0, 0]);
        assert!(matches!(
            QuadraticPresentation::new(Prime::TWO, labels(2), &[[1, 0, 0]]),
            Err(Error::InvalidRelation(_))
        ));
        assert!(Prime::new(4).is_err());
        assert!(matches!(
            QuadraticPresentation::new::<Vec<u8>>(Prime::TWO, vec!["x".into(), "x".into()], &[]),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn ideal_components_small() {
        let a = hyperbolic();
        assert_eq!(&a.ideal_component(2).unwrap(), a.relations());
        let free = QuadraticPresentation::new::<Vec<u8>>(Prime::TWO, labels(2), &[]).unwrap();
        assert!(free.ideal_component(3).unwrap().is_zero());
        // F_2[x]/(x^2): the tensor cube is one-dimensional and killed
        let trunc = QuadraticPresentation::new(Prime::TWO, labels(1), &[[1]]).unwrap();
        let i3 = trunc.ideal_component(3).unwrap();
        assert!(i3.is_full());
        assert_eq!(trunc.hilbert_prefix(3).unwrap().coefficients, vec![1, 1, 0, 0]);
    }

    #[test]
    fn resource_guard_is_an_error() {
        let a = hyperbolic();
        assert!(matches!(
            a.ideal_component_with_cap(12, 1 << 10),
            Err(Error::ResourceCap { .. })
        ));
        let free = QuadraticPresentation::new::<Vec<u8>>(Prime::TWO, labels(3), &[]).unwrap();
        assert!(matches!(
            free.components_with_cap(8, 1000),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn hyperbolic_hilbert_and_dual() {
        let a = hyperbolic();
        assert_eq!(a.hilbert_prefix(4).unwrap().coefficients, vec![1, 2, 1, 0, 0]);
        let dual = a.quadratic_dual();
        assert_eq!(dual.relations().dim(), 1);
        assert_eq!(dual.hilbert_prefix(4).unwrap().coefficients, vec![1, 2, 3, 4, 5]);
        assert_eq!(dual.quadratic_dual().relations(), a.relations());
    }

    #[test]
    fn numerical_test_examples() {
        let trunc = QuadraticPresentation::new(Prime::TWO, labels(1), &[[1]]).unwrap();
        let t = trunc.numerical_koszul_test(4).unwrap();
        assert_eq!(t.product, vec![1, 0, 0, 0, 0]);
        assert!(t.passed());
        let free = QuadraticPresentation::new::<Vec<u8>>(Prime::TWO, labels(2), &[]).unwrap();
        assert!(free.numerical_koszul_test(5).unwrap().passed());
    }

    #[test]
    fn commutativity_checks() {
        assert!(hyperbolic().is_graded_commutative());
        let free = QuadraticPresentation::new::<Vec<u8>>(Prime::TWO, labels(2), &[]).unwrap();
        assert!(!free.is_graded_commutative());
        let full = QuadraticPresentation::from_subspace(Prime::TWO, labels(2), Subspace::full(Prime::TWO, 4))
            .unwrap();
        assert!(full.is_graded_commutative());
        // over F_3 the span of xy + yx alone misses xx and yy
        let p3 = Prime::new(3).unwrap();
        let partial = QuadraticPresentation::new(p3, labels(2), &[[0, 1, 1, 0]]).unwrap();
        assert!(!partial.is_graded_commutative());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let a = hyperbolic();
        let js = serde_json::to_string(&a.to_json()).unwrap();
        let back: PresentationJson = serde_json::from_str(&js).unwrap();
        assert_eq!(QuadraticPresentation::from_json(&back).unwrap().digest(), a.digest());

        let txt = r#"{"p":2,"generators":["x","y"],"relations":[[{"c":1,"w":["x","y"]},{"c":1,"w":["y","x"]}],[0,0,0,1]]}"#;
        let parsed: PresentationJson = serde_json::from_str(txt).unwrap();
        let b = QuadraticPresentation::from_json(&parsed).unwrap();
        assert_eq!(b.relations().dim(), 2);

        let bad = r#"{"p":2,"generators":["x"],"relations":[[{"c":1,"w":["x","z"]}]]}"#;
        let parsed: PresentationJson = serde_json::from_str(bad).unwrap();
        assert!(matches!(QuadraticPresentation::from_json(&parsed), Err(Error::UnknownLabel(l)) if l == "z"));
        let bad = r#"{"p":2,"generators":["x"],"relations":[[{"c":1,"w":["x"]}]]}"#;
        let parsed: PresentationJson = serde_json::from_str(bad).unwrap();
        assert!(matches!(QuadraticPresentation::from_json(&parsed), Err(Error::InvalidRelation(_))));
    }

    #[test]
    fn standard_words_and_products() {
        let a = hyperbolic();
        let c = a.components(3).unwrap();
        // A^2 is spanned by a single standard monomial of length 2
        assert_eq!(c.dim(2), 1);
        assert_eq!(c.standard_word(2, 0).len(), 2);
        let t = c.multiplication_table();
        // x·y = y·x ≠ 0 and x·x = 0
        let xy = t.product(1, 0, 1, 1);
        let yx = t.product(1, 1, 1, 0);
        assert_eq!(xy, yx);
        assert!(!xy.is_empty());
        assert!(t.product(1, 0, 1, 0).is_empty());
    }

    #[test]
    fn projection_kernel_matches_direct_sum() {
        let a = hyperbolic();
        let c = a.components(4).unwrap();
        for d in 0..=4 {
            assert_eq!(c.ideal_component(d).unwrap(), a.ideal_component(d).unwrap(), "degree {d}");
        }
    }
}
