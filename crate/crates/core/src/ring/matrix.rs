use super::poly::Polynomial;
use super::section::Section;
use crate::scalar::Scalar;

/// Dense `rows × cols` matrix of polynomials: a bundle morphism between
/// trivial bundles, or a zero-order operator coefficient.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyMatrix<C> {
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial<C>>,
}

impl<C: Scalar> PolyMatrix<C> {
    pub fn zero(nvars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            nvars,
            rows,
            cols,
            entries: vec![Polynomial::zero(nvars); rows * cols],
        }
    }

    pub fn identity(nvars: usize, m: usize) -> Self {
        Self::scalar(Polynomial::one(nvars), m)
    }

    /// `f · I_m`.
    pub fn scalar(f: Polynomial<C>, m: usize) -> Self {
        let mut out = Self::zero(f.nvars(), m, m);
        for i in 0..m {
            out.set(i, i, f.clone());
        }
        out
    }

    /// Builds from row vectors; panics on ragged input.
    pub fn from_rows(nvars: usize, rows: Vec<Vec<Polynomial<C>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            for p in row {
                assert_eq!(p.nvars(), nvars);
                entries.push(p);
            }
        }
        PolyMatrix {
            nvars,
            rows: r,
            cols: c,
            entries,
        }
    }

    /// `m × 1` column from a section.
    pub fn column(s: &Section<C>) -> Self {
        Self::from_rows(s.nvars(), s.components().iter().map(|p| vec![p.clone()]).collect())
    }

    /// `1 × m` row from a section.
    pub fn row(s: &Section<C>) -> Self {
        Self::from_rows(s.nvars(), vec![s.components().to_vec()])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<C>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row_entries(&self, i: usize) -> &[Polynomial<C>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Polynomial<C>) -> Polynomial<C>) -> Self {
        PolyMatrix {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zero(self.nvars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(self.nvars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Matrix-vector product `M s`.
    pub fn apply(&self, s: &Section<C>) -> Section<C> {
        assert_eq!(self.cols, s.rank(), "matrix/section rank mismatch");
        let comps = (0..self.rows)
            .map(|i| {
                self.row_entries(i)
                    .iter()
                    .zip(s.components())
                    .fold(Polynomial::zero(self.nvars), |acc, (a, b)| &acc + &(a * b))
            })
            .collect();
        Section::new(self.nvars, comps).expect("dimensions agree")
    }

    pub fn eval(&self, point: &[C]) -> Vec<C> {
        self.entries.iter().map(|p| p.eval_unchecked(point)).collect()
    }
}
