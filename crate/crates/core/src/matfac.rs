//! Polynomial matrices and the rank-two matrix factorization of the universal length-two flop.

use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::commpoly::{CommPoly, PolyError, VarSet};
use crate::rational::{q, Q};
use crate::report::Check;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("shape mismatch: {0}x{1} against {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("matrix needs at least one row and one column")]
    Empty,
    #[error("ragged rows")]
    Ragged,
    #[error("matrices do not factor the given polynomial")]
    InvalidFactorization,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Dense matrix of commutative polynomials over one variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<CommPoly>,
}

/// The coordinate ring variables `x, y, z, t, u, v, w`.
pub fn coords() -> VarSet {
    VarSet::new(&["x", "y", "z", "t", "u", "v", "w"]).expect("fixed names")
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<CommPoly>>) -> Result<Self, MatError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if r == 0 || c == 0 {
            return Err(MatError::Empty);
        }
        if rows.iter().any(|x| x.len() != c) {
            return Err(MatError::Ragged);
        }
        let vars = rows[0][0].vars().clone();
        if let Some(bad) = rows.iter().flatten().find(|p| p.vars() != &vars) {
            return Err(PolyError::VarSetMismatch(vars.to_string(), bad.vars().to_string()).into());
        }
        Ok(PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Parses a grid of polynomial strings over `vars`.
    pub fn parse(vars: &VarSet, rows: &[&[&str]]) -> Result<Self, MatError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| CommPoly::parse(s, vars)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(rows)
    }

    pub fn scalar(vars: &VarSet, n: usize, f: &CommPoly) -> Self {
        let mut entries = vec![CommPoly::zero(vars); n * n];
        for i in 0..n {
            entries[i * n + i] = f.clone();
        }
        PolyMatrix { rows: n, cols: n, entries }
    }

    pub fn identity(vars: &VarSet, n: usize) -> Self {
        Self::scalar(vars, n, &CommPoly::one(vars))
    }

    pub fn zeros(vars: &VarSet, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![CommPoly::zero(vars); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &VarSet {
        self.entries[0].vars()
    }

    pub fn get(&self, i: usize, j: usize) -> &CommPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: CommPoly) {
        self.entries[i * self.cols + j] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CommPoly::is_zero)
    }

    fn same_shape(&self, o: &Self) -> Result<(), MatError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(MatError::Shape(self.rows, self.cols, o.rows, o.cols));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, MatError> {
        self.same_shape(o)?;
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.checked_add(b)).collect::<Result<_, _>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, MatError> {
        self.same_shape(o)?;
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.checked_sub(b)).collect::<Result<_, _>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, MatError> {
        if self.cols != o.rows {
            return Err(MatError::Shape(self.rows, self.cols, o.rows, o.cols));
        }
        let vars = self.vars().clone();
        let mut out = Self::zeros(&vars, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = CommPoly::zero(&vars);
                for k in 0..self.cols {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(o.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Multiplies every entry by a polynomial.
    pub fn times(&self, f: &CommPoly) -> Result<Self, MatError> {
        let entries = self.entries.iter().map(|a| a.checked_mul(f)).collect::<Result<_, _>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, c: &Q) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| a.scale(c)).collect() }
    }

    /// Row-major text with `;` between rows and `,` between entries.
    pub fn render(&self) -> String {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(", "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.render())
    }
}

fn p(s: &str) -> CommPoly {
    CommPoly::parse(s, &coords()).expect("constant polynomial parses")
}

/// The hypersurface equation of the universal length-two flop.
pub fn f_poly() -> CommPoly {
    p("x^2 + u*y^2 + 2*v*y*z + w*z^2 + (u*w - v^2)*t^2")
}

pub fn xi() -> PolyMatrix {
    PolyMatrix::parse(
        &coords(),
        &[
            &["-v*t", "y", "z", "t"],
            &["-u*y - 2*v*z", "v*t", "-u*t", "z"],
            &["-w*z", "w*t", "-v*t", "-y"],
            &["-u*w*t", "-w*z", "u*y + 2*v*z", "v*t"],
        ],
    )
    .expect("constant matrix")
}

pub fn phi() -> PolyMatrix {
    PolyMatrix::scalar(&coords(), 4, &p("x")).sub(&xi()).expect("4x4")
}

pub fn psi() -> PolyMatrix {
    PolyMatrix::scalar(&coords(), 4, &p("x")).add(&xi()).expect("4x4")
}

pub fn gen_a() -> PolyMatrix {
    PolyMatrix::parse(
        &coords(),
        &[&["0", "1", "0", "0"], &["-u", "0", "0", "0"], &["-2*v", "0", "0", "1"], &["0", "2*v", "-u", "0"]],
    )
    .expect("constant matrix")
}

pub fn gen_b() -> PolyMatrix {
    PolyMatrix::parse(
        &coords(),
        &[&["0", "0", "1", "0"], &["0", "0", "0", "-1"], &["-w", "0", "0", "0"], &["0", "w", "0", "0"]],
    )
    .expect("constant matrix")
}

pub fn gen_c() -> PolyMatrix {
    PolyMatrix::parse(&coords(), &[&["x - v*t", "y", "z", "t"]]).expect("constant matrix")
}

pub fn gen_d() -> PolyMatrix {
    PolyMatrix::parse(&coords(), &[&["0"], &["0"], &["0"], &["1"]]).expect("constant matrix")
}

/// Checks `phi * psi = psi * phi = f * I`.
pub fn mf_verify(phi: &PolyMatrix, psi: &PolyMatrix, f: &CommPoly) -> bool {
    if phi.rows != phi.cols || psi.rows != psi.cols || phi.rows != psi.rows {
        return false;
    }
    let target = PolyMatrix::scalar(phi.vars(), phi.rows, f);
    matches!(phi.mul(psi), Ok(m) if m == target) && matches!(psi.mul(phi), Ok(m) if m == target)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// `r = phi * witness`.
    Member(PolyMatrix),
    /// First entry of `psi * r` that `f` does not divide.
    NonMember { row: usize, col: usize },
}

/// Decides whether the columns of `r` lie in the image of `phi`.
pub fn in_image(r: &PolyMatrix, phi: &PolyMatrix, psi: &PolyMatrix, f: &CommPoly) -> Result<Membership, MatError> {
    if !mf_verify(phi, psi, f) {
        return Err(MatError::InvalidFactorization);
    }
    if r.rows != phi.cols {
        return Err(MatError::Shape(phi.rows, phi.cols, r.rows, r.cols));
    }
    let pr = psi.mul(r)?;
    let mut x = PolyMatrix::zeros(r.vars(), pr.rows, pr.cols);
    for i in 0..pr.rows {
        for j in 0..pr.cols {
            match pr.get(i, j).divexact(f)? {
                Some(qt) => x.set(i, j, qt),
                None => return Ok(Membership::NonMember { row: i, col: j }),
            }
        }
    }
    if &phi.mul(&x)? != r {
        return Err(MatError::InvalidFactorization);
    }
    Ok(Membership::Member(x))
}

fn scalar4(s: &str) -> PolyMatrix {
    PolyMatrix::scalar(&coords(), 4, &p(s))
}

fn prod(ms: &[&PolyMatrix]) -> PolyMatrix {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = acc.mul(m).expect("compatible shapes");
    }
    acc
}

fn zero_check(name: &str, m: &PolyMatrix) -> Check {
    let detail = (0..m.rows)
        .flat_map(|i| (0..m.cols).map(move |j| (i, j)))
        .find(|&(i, j)| !m.get(i, j).is_zero())
        .map(|(i, j)| format!("entry ({i},{j}) = {}", m.get(i, j)))
        .unwrap_or_default();
    Check::from_bool(name, m.is_zero(), detail)
}

fn membership_check(name: &str, r: &PolyMatrix) -> Check {
    match in_image(r, &phi(), &psi(), &f_poly()) {
        Ok(Membership::Member(x)) => Check::from_bool(name, true, format!("witness {x}")),
        Ok(Membership::NonMember { row, col }) => {
            Check::from_bool(name, false, format!("entry ({row},{col}) of psi*R not divisible by F"))
        }
        Err(e) => Check::from_bool(name, false, e.to_string()),
    }
}

/// Residual `y - tb + bdc + dcb`.
pub fn residual_y() -> PolyMatrix {
    let (b, c, d) = (gen_b(), gen_c(), gen_d());
    scalar4("y").sub(&b.times(&p("t")).unwrap()).unwrap().add(&prod(&[&b, &d, &c])).unwrap().add(&prod(&[&d, &c, &b])).unwrap()
}

/// Residual `z + ta - adc - dca`.
pub fn residual_z() -> PolyMatrix {
    let (a, c, d) = (gen_a(), gen_c(), gen_d());
    scalar4("z").add(&a.times(&p("t")).unwrap()).unwrap().sub(&prod(&[&a, &d, &c])).unwrap().sub(&prod(&[&d, &c, &a])).unwrap()
}

/// Residual `x + vt + tba + sign * (dcab - badc)`.
///
/// The displayed matrix computation adds `dcab` and subtracts `badc` (`sign = 1`);
/// the heading above it carries the opposite sign (`sign = -1`).
pub fn residual_x(sign: i64) -> PolyMatrix {
    let (a, b, c, d) = (gen_a(), gen_b(), gen_c(), gen_d());
    let tail = prod(&[&d, &c, &a, &b]).sub(&prod(&[&b, &a, &d, &c])).unwrap().scale(&q(sign));
    scalar4("x + v*t").add(&prod(&[&b, &a]).times(&p("t")).unwrap()).unwrap().add(&tail).unwrap()
}

/// Identities satisfied by the generator matrices of the endomorphism algebra.
pub fn generator_identity_suite() -> Vec<Check> {
    let (a, b, c, d) = (gen_a(), gen_b(), gen_c(), gen_d());
    let one = |s: &str| PolyMatrix::scalar(&coords(), 1, &p(s));
    let mut out = vec![Check::from_bool("phi*psi = psi*phi = F*I", mf_verify(&phi(), &psi(), &f_poly()), "")];
    out.push(zero_check("a^2 + u = 0", &prod(&[&a, &a]).add(&scalar4("u")).unwrap()));
    out.push(zero_check("b^2 + w = 0", &prod(&[&b, &b]).add(&scalar4("w")).unwrap()));
    out.push(zero_check("ab + ba + 2v = 0", &prod(&[&a, &b]).add(&prod(&[&b, &a])).unwrap().add(&scalar4("2*v")).unwrap()));
    out.push(zero_check("cd = t", &prod(&[&c, &d]).sub(&one("t")).unwrap()));
    out.push(zero_check("cad = z", &prod(&[&c, &a, &d]).sub(&one("z")).unwrap()));
    out.push(zero_check("cbd = -y", &prod(&[&c, &b, &d]).add(&one("y")).unwrap()));
    out.push(zero_check("cbad = x - vt", &prod(&[&c, &b, &a, &d]).sub(&one("x - v*t")).unwrap()));
    out.push(membership_check("y - tb + bdc + dcb in Im(phi)", &residual_y()));
    out.push(membership_check("z + ta - adc - dca in Im(phi)", &residual_z()));
    out.push(membership_check("x + vt + tba + dcab - badc in Im(phi)", &residual_x(1)));
    let heading = in_image(&residual_x(-1), &phi(), &psi(), &f_poly());
    out.push(Check::from_bool(
        "x + vt + tba - dcab + badc (sign-flipped reading) is not in Im(phi)",
        matches!(heading, Ok(Membership::NonMember { .. })),
        format!("{heading:?}"),
    ));
    let ph = phi();
    for (name, m) in [("a", &a), ("b", &b)] {
        let comm = m.mul(&ph).unwrap().sub(&ph.mul(m).unwrap()).unwrap();
        out.push(zero_check(&format!("{name} commutes with phi"), &comm));
    }
    out
}

/// Variables of the polynomial identity suite: coordinates plus `l1..l{2n}`.
pub fn identity_vars(n: u32) -> VarSet {
    let lambdas: Vec<String> = (1..=2 * n).map(|i| format!("l{i}")).collect();
    coords().extended(&lambdas).expect("fresh names")
}

fn neg_w_pow(vars: &VarSet, k: u32) -> CommPoly {
    CommPoly::var(vars, "w").unwrap().scale(&q(-1)).pow(k)
}

/// `F_lambda` as displayed, with symbolic `l_i`.
pub fn f_lambda(n: u32) -> CommPoly {
    let vars = identity_vars(n);
    let v = |s: &str| CommPoly::var(&vars, s).unwrap();
    let (x, y, z, w) = (v("x"), v("y"), v("z"), v("w"));
    let mut f = &(&(&x * &x) + &y.pow(3)) + &(&(&z * &z) * &w);
    f = &f + &(&y * &w.pow(2 * n + 1));
    for i in 1..=2 * n {
        let l = v(&format!("l{i}"));
        f = &f + &(&(&l * &(&y * &y)) * &neg_w_pow(&vars, i));
        f = &f - &(&l * &neg_w_pow(&vars, i + 2 * n + 1));
    }
    f
}

/// Identities `uF = ux^2 + B^2 + AC`, the Laufer substitution, and the Euler relation.
pub fn polynomial_identity_suite(n: u32) -> Vec<Check> {
    let mut out = Vec::new();
    let c = coords();
    let f = f_poly();
    let lhs = &p("u") * &f;
    let (a, b, cc) = (p("u*w - v^2"), p("u*y + v*z"), p("z^2 + u*t^2"));
    let rhs = &(&(&p("u") * &p("x^2")) + &(&b * &b)) + &(&a * &cc);
    out.push(Check::from_bool("uF = ux^2 + B^2 + AC", lhs == rhs, (&lhs - &rhs).to_string()));

    let vars = identity_vars(n);
    let mut images = std::collections::BTreeMap::new();
    images.insert("t".to_string(), neg_w_pow(&vars, n));
    let mut u = CommPoly::var(&vars, "y").unwrap();
    for i in 1..=2 * n {
        u = &u + &(&CommPoly::var(&vars, &format!("l{i}")).unwrap() * &neg_w_pow(&vars, i));
    }
    images.insert("u".to_string(), u);
    images.insert("v".to_string(), CommPoly::zero(&vars));
    let sub = f.embed(&c).unwrap().substitute(&images, &vars).unwrap();
    let fl = f_lambda(n);
    out.push(Check::from_bool(format!("F_lambda is the substitution of F (n={n})"), sub == fl, (&sub - &fl).to_string()));

    let d = |s: &str| fl.partial(vars.index(s).unwrap());
    let v = |s: &str| CommPoly::var(&vars, s).unwrap();
    let k = |x: u32| CommPoly::constant(&vars, q(x as i64));
    let euler = &(&(&(&k(6 * n + 3) * &(&v("x") * &d("x"))) + &(&k(4 * n + 2) * &(&v("y") * &d("y"))))
        + &(&k(6 * n + 1) * &(&v("z") * &d("z"))))
        + &(&k(4) * &(&v("w") * &d("w")));
    let mut rhs = &k(12 * n + 6) * &fl;
    for j in 1..=2 * n {
        let coef = CommPoly::constant(&vars, q(4 * j as i64 - 4 * n as i64 - 2));
        let inner = &(&(&v("y") * &v("y")) * &neg_w_pow(&vars, j)) - &neg_w_pow(&vars, j + 2 * n + 1);
        rhs = &rhs + &(&(&coef * &v(&format!("l{j}"))) * &inner);
    }
    out.push(Check::from_bool(format!("Euler identity (n={n})"), euler == rhs, (&euler - &rhs).to_string()));
    out
}

/// Whether every entry is a constant polynomial equal to the given integer grid.
pub fn entries_equal(m: &PolyMatrix, grid: &[&[&str]]) -> bool {
    PolyMatrix::parse(m.vars(), grid).is_ok_and(|g| &g == m)
}

/// `2x` on the diagonal; used as a sanity value for `phi + psi`.
pub fn two_x() -> PolyMatrix {
    PolyMatrix::scalar(&coords(), 4, &p("2*x"))
}

/// The `1x1` factorization `(f)(1) = f`.
pub fn trivial_factorization(f: &CommPoly) -> (PolyMatrix, PolyMatrix) {
    let vars = f.vars();
    (PolyMatrix::scalar(vars, 1, f), PolyMatrix::scalar(vars, 1, &CommPoly::constant(vars, Q::one())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_pass;

    #[test]
    fn displayed_entries() {
        assert!(entries_equal(&xi(), &[
            &["-v*t", "y", "z", "t"],
            &["-u*y-2*v*z", "v*t", "-u*t", "z"],
            &["-w*z", "w*t", "-v*t", "-y"],
            &["-u*w*t", "-w*z", "u*y+2*v*z", "v*t"],
        ]));
        assert_eq!(gen_b().get(2, 0), &p("-w"));
        assert_eq!(gen_a().get(3, 1), &p("2*v"));
        assert_eq!(gen_c().get(0, 0), &p("x - v*t"));
        assert!(gen_d().get(3, 0).constant_term().is_one());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(phi().add(&psi()).unwrap(), two_x());
        assert_eq!(gen_c().mul(&gen_d()).unwrap(), PolyMatrix::scalar(&coords(), 1, &p("t")));
        assert!(entries_equal(&gen_b().mul(&gen_d()).unwrap(), &[&["0"], &["-1"], &["0"], &["0"]]));
        assert!(matches!(phi().mul(&gen_c()), Err(MatError::Shape(..))));
    }

    #[test]
    fn factorization() {
        assert!(mf_verify(&phi(), &psi(), &f_poly()));
        assert!(!mf_verify(&phi(), &phi(), &f_poly()));
        let (a, b) = trivial_factorization(&f_poly());
        assert!(mf_verify(&a, &b, &f_poly()));
    }

    #[test]
    fn image_membership() {
        let i4 = PolyMatrix::identity(&coords(), 4);
        assert!(matches!(in_image(&i4, &phi(), &psi(), &f_poly()).unwrap(), Membership::NonMember { .. }));
        assert!(matches!(in_image(&i4, &phi(), &phi(), &f_poly()), Err(MatError::InvalidFactorization)));
        assert!(matches!(in_image(&residual_z(), &phi(), &psi(), &f_poly()).unwrap(), Membership::Member(_)));
    }

    #[test]
    fn suites_pass() {
        let g = generator_identity_suite();
        assert!(all_pass(&g), "{g:?}");
        for n in 1..=2 {
            let s = polynomial_identity_suite(n);
            assert!(all_pass(&s), "{s:?}");
        }
    }
}
