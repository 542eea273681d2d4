//! Standard cohomology algebras: free pro-p groups, Demuškin groups and free
//! pro-p products.

use serde::{Deserialize, Serialize};

use crate::algebra::QuadraticPresentation;
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Prime, Subspace};

/// Cup-product pairing `B[i][j] = x_i ∪ x_j` of a Demuškin group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemuskinForm {
    form: FpMatrix,
}

impl DemuskinForm {
    /// Validates nondegeneracy and the parity required by `p`: symmetric for
    /// `p = 2`, alternating (hence even rank) for odd `p`. Rank must be at
    /// least 2.
    pub fn new(form: FpMatrix) -> Result<Self> {
        let n = form.nrows();
        let p = form.prime();
        if form.ncols() != n {
            return Err(Error::InvalidForm(format!("form is {}x{}, not square", n, form.ncols())));
        }
        if n < 2 {
            return Err(Error::InvalidForm(format!("rank {n} is below 2")));
        }
        if form.rank() != n {
            return Err(Error::InvalidForm("form is degenerate".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (form.get(i, j), form.get(j, i));
                if p.get() == 2 {
                    if a != b {
                        return Err(Error::InvalidForm(format!(
                            "p = 2 requires a symmetric form; B[{i}][{j}] != B[{j}][{i}]"
                        )));
                    }
                } else if a != p.neg(b) || (i == j && a != 0) {
                    return Err(Error::InvalidForm(format!(
                        "odd p requires an alternating form; violated at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(DemuskinForm { form })
    }

    pub fn from_integers(p: Prime, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidForm(format!(
                "row of length {} in a {n}-row form",
                r.len()
            )));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::new(FpMatrix::from_integers(p, n, n, &flat)?)
    }

    /// Orthogonal sum of `n / 2` hyperbolic planes.
    pub fn hyperbolic(p: Prime, n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidForm(format!("hyperbolic form needs even rank, got {n}")));
        }
        let mut m = FpMatrix::zeros(p, n, n);
        for k in 0..n / 2 {
            m.set(2 * k, 2 * k + 1, 1);
            m.set(2 * k + 1, 2 * k, p.neg(1));
        }
        Self::new(m)
    }

    pub fn prime(&self) -> Prime {
        self.form.prime()
    }

    pub fn rank(&self) -> usize {
        self.form.nrows()
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.form
    }

    /// The pairing as a functional on `V ⊗ V`, `e_i ⊗ e_j ↦ B[i][j]`.
    pub fn functional(&self) -> FpMatrix {
        let n = self.rank();
        let mut f = FpMatrix::zeros(self.prime(), 1, n * n);
        for i in 0..n {
            for j in 0..n {
                f.set(0, i * n + j, self.form.get(i, j));
            }
        }
        f
    }

    pub fn to_json(&self) -> DemuskinFormJson {
        DemuskinFormJson {
            p: self.prime().get() as u32,
            form: self
                .form
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(i64::from).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &DemuskinFormJson) -> Result<Self> {
        Self::from_integers(Prime::new(json.p)?, &json.form)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemuskinFormJson {
    pub p: u32,
    pub form: Vec<Vec<i64>>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Cohomology of a free pro-p group of rank `n`: `R = V ⊗ V`.
pub fn free_group_algebra(p: Prime, n: usize) -> QuadraticPresentation {
    QuadraticPresentation::from_subspace(p, default_labels(n), Subspace::full(p, n * n))
        .expect("full relation space has the right ambient dimension")
}

/// `R = ker(v ⊗ w ↦ B(v, w))`, of codimension one in `V ⊗ V`.
pub fn demuskin_algebra(form: &DemuskinForm) -> QuadraticPresentation {
    let relations = form.functional().kernel();
    QuadraticPresentation::from_subspace(form.prime(), default_labels(form.rank()), relations)
        .expect("kernel lives in V ⊗ V")
}

/// Cohomology of a free pro-p product: positive-degree parts add up and all
/// mixed products vanish. Labels are namespaced `L.` and `R.`.
pub fn free_product(a1: &QuadraticPresentation, a2: &QuadraticPresentation) -> Result<QuadraticPresentation> {
    let p = a1.prime();
    if a2.prime() != p {
        return Err(Error::ModulusMismatch(p.get(), a2.prime().get()));
    }
    let (n1, n2) = (a1.rank(), a2.rank());
    let n = n1 + n2;
    let mut rows = FpMatrix::zeros(p, a1.relations().dim() + a2.relations().dim() + 2 * n1 * n2, n * n);
    let mut r = 0;
    for (a, offset, m) in [(a1, 0, n1), (a2, n1, n2)] {
        let basis = a.relations().basis();
        for i in 0..basis.nrows() {
            for (k, v) in basis.row_support(i) {
                let (x, y) = (k / m + offset, k % m + offset);
                rows.set(r, x * n + y, v);
            }
            r += 1;
        }
    }
    for i in 0..n1 {
        for j in n1..n {
            rows.set(r, i * n + j, 1);
            rows.set(r + 1, j * n + i, 1);
            r += 2;
        }
    }
    let generators = a1
        .generators()
        .iter()
        .map(|g| format!("L.{g}"))
        .chain(a2.generators().iter().map(|g| format!("R.{g}")))
        .collect();
    QuadraticPresentation::from_subspace(p, generators, Subspace::from_rows(rows))
}

/// Ground field `F_p`, the rank-zero case.
pub fn ground_field(p: Prime) -> QuadraticPresentation {
    free_group_algebra(p, 0)
}
