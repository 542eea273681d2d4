//! Brute-force references used by the integration tests. Nothing here calls
//! into the library's linear algebra: quotients are formed inside the full
//! tensor powers `V^{⊗d}` and Tor is read off the normalized bar complex.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use quadkoszul::algebra::{PresentationJson, QuadraticPresentation};

fn inv(p: u32, a: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("nonzero residue")
}

/// Row-reduces in place and returns the pivot columns.
pub fn eliminate(p: u32, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let s = inv(p, rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = *v * s % p;
        }
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(p: u32, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    eliminate(p, &mut m).len()
}

/// `V^{⊗d} / S` for an explicit spanning set `S`, with a basis of normal
/// words (non-pivot columns) and the projection of every word.
struct Quotient {
    /// `proj[w]` = coordinates of the class of word `w`.
    proj: Vec<Vec<u32>>,
    /// `normal[k]` = word index of the k-th basis element.
    normal: Vec<usize>,
}

impl Quotient {
    fn new(p: u32, ambient: usize, mut spanners: Vec<Vec<u32>>) -> Self {
        let pivots = eliminate(p, &mut spanners);
        let normal: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        let mut proj = Vec::with_capacity(ambient);
        for w in 0..ambient {
            let mut v = vec![0u32; ambient];
            v[w] = 1;
            for (row, &c) in spanners.iter().zip(&pivots) {
                let f = v[c];
                if f != 0 {
                    for (x, y) in v.iter_mut().zip(row) {
                        *x = (*x + p - f * y % p) % p;
                    }
                }
            }
            proj.push(normal.iter().map(|&k| v[k]).collect());
        }
        Quotient { proj, normal }
    }

    fn dim(&self) -> usize {
        self.normal.len()
    }
}

pub struct BarOracle {
    p: u32,
    n: usize,
    algebra: Vec<Quotient>,
    module: Vec<Quotient>,
}

fn pow(n: usize, d: usize) -> usize {
    n.pow(d as u32)
}

impl BarOracle {
    /// `relations` are vectors of length `n²`; `element` selects `A/Aa`
    /// instead of the ground field.
    pub fn new(p: u32, n: usize, relations: &[Vec<u32>], element: Option<&[u32]>, d_max: usize) -> Self {
        let mut algebra = Vec::new();
        let mut module = Vec::new();
        for d in 0..=d_max {
            let ambient = pow(n, d);
            let mut ideal = Vec::new();
            if d >= 2 {
                for left in 0..=d - 2 {
                    let right = d - 2 - left;
                    for u in 0..pow(n, left) {
                        for w in 0..pow(n, right) {
                            for r in relations {
                                let mut v = vec![0u32; ambient];
                                for (k, &c) in r.iter().enumerate() {
                                    v[(u * n * n + k) * pow(n, right) + w] = c % p;
                                }
                                ideal.push(v);
                            }
                        }
                    }
                }
            }
            let mut sub = ideal.clone();
            match element {
                None => {
                    if d > 0 {
                        sub = (0..ambient).map(|w| {
                            let mut v = vec![0u32; ambient];
                            v[w] = 1;
                            v
                        }).collect();
                    }
                }
                Some(a) => {
                    if d > 0 {
                        for u in 0..pow(n, d - 1) {
                            let mut v = vec![0u32; ambient];
                            for (x, &c) in a.iter().enumerate() {
                                v[u * n + x] = c % p;
                            }
                            sub.push(v);
                        }
                    }
                }
            }
            algebra.push(Quotient::new(p, ambient, ideal));
            module.push(Quotient::new(p, ambient, sub));
        }
        BarOracle { p, n, algebra, module }
    }

    pub fn from_presentation(a: &QuadraticPresentation, element: Option<&[u8]>, d_max: usize) -> Self {
        let rel: Vec<Vec<u32>> = a
            .relations()
            .vectors()
            .into_iter()
            .map(|r| r.into_iter().map(u32::from).collect())
            .collect();
        let el: Option<Vec<u32>> = element.map(|e| e.iter().map(|&c| u32::from(c)).collect());
        Self::new(u32::from(a.prime().get()), a.rank(), &rel, el.as_deref(), d_max)
    }

    /// Basis of `(A^+)^{⊗i} ⊗ M` in total degree `j`: each entry lists
    /// `(degree, basis index)` of the `i` bar factors followed by the module factor.
    fn bar_basis(&self, i: usize, j: usize) -> Vec<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_basis(i, j, &mut current, &mut out);
        out
    }

    fn extend_basis(&self, left: usize, budget: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if left == 0 {
            for b in 0..self.module[budget].dim() {
                let mut t = cur.clone();
                t.push((budget, b));
                out.push(t);
            }
            return;
        }
        for d in 1..=budget {
            for b in 0..self.algebra[d].dim() {
                cur.push((d, b));
                self.extend_basis(left - 1, budget - d, cur, out);
                cur.pop();
            }
        }
    }

    fn word(&self, q: &Quotient, b: usize) -> usize {
        q.normal[b]
    }

    /// Matrix of `d_i : B_i → B_{i-1}` in degree `j`, one row per source basis element.
    fn differential(&self, i: usize, j: usize) -> Vec<Vec<u32>> {
        let p = self.p;
        let src = self.bar_basis(i, j);
        let tgt = self.bar_basis(i - 1, j);
        let index: HashMap<Vec<(usize, usize)>, usize> = tgt.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect();
        let mut rows = Vec::with_capacity(src.len());
        for s in &src {
            let mut row = vec![0u32; tgt.len()];
            for r in 0..i {
                let sign = if (r + 1) % 2 == 0 { 1 } else { p - 1 };
                let (d1, b1) = s[r];
                let (d2, b2) = s[r + 1];
                let last = r + 1 == i;
                let q = if last { &self.module[d1 + d2] } else { &self.algebra[d1 + d2] };
                let w1 = self.word(&self.algebra[d1], b1);
                let w2 = if last { self.word(&self.module[d2], b2) } else { self.word(&self.algebra[d2], b2) };
                let prod = w1 * pow(self.n, d2) + w2;
                for (k, &c) in q.proj[prod].iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut t: Vec<(usize, usize)> = s[..r].to_vec();
                    t.push((d1 + d2, k));
                    t.extend_from_slice(&s[r + 2..]);
                    let slot = index[&t];
                    row[slot] = (row[slot] + sign * c) % p;
                }
            }
            rows.push(row);
        }
        rows
    }

    fn dim(&self, i: usize, j: usize) -> usize {
        self.bar_basis(i, j).len()
    }

    /// `dim Tor_{i,j}(F_p, M)`.
    pub fn tor(&self, i: usize, j: usize) -> usize {
        let dim = self.dim(i, j);
        let out = if i == 0 { 0 } else { rank(self.p, &self.differential(i, j)) };
        let inc = if self.dim(i + 1, j) == 0 { 0 } else { rank(self.p, &self.differential(i + 1, j)) };
        dim - out - inc
    }

    pub fn table(&self, h_max: usize, d_max: usize) -> Vec<Vec<usize>> {
        (0..=h_max).map(|i| (0..=d_max).map(|j| self.tor(i, j)).collect()).collect()
    }

    pub fn algebra_dims(&self) -> Vec<usize> {
        self.algebra.iter().map(|q| q.dim()).collect()
    }
}

/// `d_{i}·d_{i+1} = 0` on the bar complex itself, as a sanity check of the oracle.
pub fn bar_squares_to_zero(o: &BarOracle, i: usize, j: usize) -> bool {
    let hi = o.differential(i + 1, j);
    let lo = o.differential(i, j);
    let p = o.p;
    hi.iter().all(|row| {
        (0..lo.first().map_or(0, |r| r.len())).all(|c| {
            row.iter().zip(&lo).map(|(&x, r)| x * r[c] % p).sum::<u32>() % p == 0
        })
    })
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Every presentation file in the fixture directory, sorted by file name.
pub fn corpus() -> Vec<(String, QuadraticPresentation)> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(fixtures_dir()).expect("fixture directory") {
        let path = entry.expect("fixture entry").path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path).expect("readable fixture");
        let Ok(json) = serde_json::from_str::<PresentationJson>(&text) else { continue };
        let a = QuadraticPresentation::from_json(&json).expect("valid fixture presentation");
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        out.push((name, a));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Truncated power series in `x` (homological) and `y` (internal), with
/// `c[i][j]` the coefficient of `x^i y^j` and `j <= d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub d: usize,
    pub c: Vec<Vec<i64>>,
}

impl Series {
    pub fn from_table(t: &[Vec<usize>], d: usize) -> Self {
        let mut c = vec![vec![0i64; d + 1]; d + 1];
        for (i, row) in t.iter().enumerate().take(d + 1) {
            for (j, &v) in row.iter().enumerate().take(d + 1) {
                c[i][j] = v as i64;
            }
        }
        Series { d, c }
    }

    pub fn one(d: usize) -> Self {
        let mut c = vec![vec![0i64; d + 1]; d + 1];
        c[0][0] = 1;
        Series { d, c }
    }

    pub fn add(&self, o: &Series) -> Series {
        let mut r = self.clone();
        for i in 0..=self.d {
            for j in 0..=self.d {
                r.c[i][j] += o.c[i][j];
            }
        }
        r
    }

    pub fn sub(&self, o: &Series) -> Series {
        let mut r = self.clone();
        for i in 0..=self.d {
            for j in 0..=self.d {
                r.c[i][j] -= o.c[i][j];
            }
        }
        r
    }

    /// Requires `c[0][0] = 1` and no pure `x` terms.
    pub fn inverse(&self) -> Series {
        let d = self.d;
        let mut q = vec![vec![0i64; d + 1]; d + 1];
        for j in 0..=d {
            for i in 0..=d {
                if (i, j) == (0, 0) {
                    q[0][0] = 1;
                    continue;
                }
                let mut acc = 0;
                for b in 1..=j {
                    for a in 0..=i {
                        acc += self.c[a][b] * q[i - a][j - b];
                    }
                }
                q[i][j] = -acc;
            }
        }
        Series { d, c: q }
    }
}

pub mod random {
    use quadkoszul::algebra::QuadraticPresentation;
    use quadkoszul::constructors::DemuskinForm;
    use quadkoszul::{FpMatrix, Prime, Subspace};
    use rand::Rng;

    /// Nondegenerate symmetric form over F_2 of rank `n`: `P^T D P` with `P`
    /// random invertible and `D` the identity or a sum of hyperbolic planes.
    pub fn symmetric_form<R: Rng>(n: usize, rng: &mut R) -> DemuskinForm {
        let p = Prime::TWO;
        let change = surjection(p, n, n, rng);
        let seed = if n % 2 == 1 || rng.gen_bool(0.5) {
            FpMatrix::identity(p, n)
        } else {
            DemuskinForm::hyperbolic(p, n).unwrap().matrix().clone()
        };
        let form = change.transpose().mul(&seed).unwrap().mul(&change).unwrap();
        DemuskinForm::new(form).unwrap()
    }

    pub fn labels(stem: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{stem}{i}")).collect()
    }

    /// Uniform `rows × cols` matrix of full row rank; `rows <= cols`.
    pub fn surjection<R: Rng>(p: Prime, rows: usize, cols: usize, rng: &mut R) -> FpMatrix {
        loop {
            let entries: Vec<Vec<u8>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..p.get())).collect()).collect();
            let m = FpMatrix::from_rows(p, cols, &entries).unwrap();
            if m.rank() == rows {
                return m;
            }
        }
    }

    /// Graded-commutative presentation with `extra` random relations on top
    /// of the commutativity tensors `x⊗y + y⊗x` (and `x⊗x` for odd `p`).
    pub fn commutative<R: Rng>(p: Prime, n: usize, extra: usize, stem: &str, rng: &mut R) -> QuadraticPresentation {
        let nn = n * n;
        let pm = p.get();
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut v = vec![0u8; nn];
                if i == j {
                    if pm == 2 {
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
        for _ in 0..extra {
            rows.push((0..nn).map(|_| rng.gen_range(0..pm)).collect());
        }
        QuadraticPresentation::new(p, labels(stem, n), &rows).unwrap()
    }

    /// Largest presentation on `F_p^{cols}` compatible with `res`: relations
    /// `(res⊗res)^{-1}(R_0)`, cut down by `extra` random conditions that keep
    /// the commutativity tensors.
    pub fn pulled_back<R: Rng>(base: &QuadraticPresentation, res: &FpMatrix, stem: &str, rng: &mut R) -> QuadraticPresentation {
        let p = base.prime();
        let n = res.ncols();
        let pre = res.kron(res).unwrap().preimage(base.relations()).unwrap();
        let keep = commutative(p, n, 0, stem, rng).relations().clone();
        let mut r = pre.clone();
        if rng.gen_bool(0.5) {
            let sub = pre.vectors();
            let mut picked: Vec<Vec<u8>> = sub.into_iter().filter(|_| rng.gen_bool(0.7)).collect();
            picked.extend(keep.vectors());
            let kernel_part = res.kron(res).unwrap().kernel();
            picked.extend(kernel_part.vectors());
            r = Subspace::span(p, n * n, &picked).unwrap().intersect(&pre).unwrap();
        }
        QuadraticPresentation::from_subspace(p, labels(stem, n), r).unwrap()
    }
}
