//! Commutative multivariate polynomials over the rationals, Buchberger Groebner
//! bases, normal forms and monomial quotient bases.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::expr::{self, ExprRing, ParseError};
use crate::rational::Q;

pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable sets differ: [{0}] vs [{1}]")]
    VarSetMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("duplicate variable '{0}'")]
    DuplicateVariable(String),
    #[error("invalid variable name '{0}'")]
    InvalidName(String),
    #[error("monomial order has {got} weights for {expected} variables")]
    OrderArity { got: usize, expected: usize },
    #[error("monomial weights must be positive")]
    ZeroWeight,
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
}

/// Ordered list of distinct variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<Vec<String>>);

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => chars.all(|c| c.is_alphanumeric() || c == '_'),
        _ => false,
    }
}

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, PolyError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !valid_name(n) {
                return Err(PolyError::InvalidName(n.to_string()));
            }
            if !seen.insert(n.to_string()) {
                return Err(PolyError::DuplicateVariable(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(VarSet(Arc::new(out)))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// This set followed by `more` (symbolic parameters go last).
    pub fn extended<S: AsRef<str>>(&self, more: &[S]) -> Result<Self, PolyError> {
        let mut all: Vec<String> = self.0.to_vec();
        all.extend(more.iter().map(|s| s.as_ref().to_string()));
        VarSet::new(&all)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(","))
    }
}

/// Graded order by weighted degree; ties broken lexicographically in variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    weights: Vec<u32>,
}

impl MonomialOrder {
    pub fn graded(nvars: usize) -> Self {
        MonomialOrder { weights: vec![1; nvars] }
    }

    pub fn weighted(weights: Vec<u32>) -> Result<Self, PolyError> {
        if weights.contains(&0) {
            return Err(PolyError::ZeroWeight);
        }
        Ok(MonomialOrder { weights })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn degree(&self, e: &[u32]) -> u64 {
        e.iter().zip(&self.weights).map(|(&a, &w)| a as u64 * w as u64).sum()
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.degree(a).cmp(&self.degree(b)).then_with(|| a.cmp(b))
    }

    fn key(&self, e: &[u32]) -> (u64, Exponent) {
        (self.degree(e), e.to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommPoly {
    vars: VarSet,
    terms: BTreeMap<Exponent, Q>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mono_mul(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn mono_div(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mono_lcm(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

impl CommPoly {
    pub fn zero(vars: &VarSet) -> Self {
        CommPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarSet, c: Q) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Q::one())
    }

    pub fn var(vars: &VarSet, name: &str) -> Result<Self, PolyError> {
        let i = vars.index(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var_at(vars, i))
    }

    pub fn var_at(vars: &VarSet, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Q::one())
    }

    pub fn monomial(vars: &VarSet, e: Exponent, c: Q) -> Self {
        assert_eq!(e.len(), vars.len(), "exponent arity");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms(vars: &VarSet, terms: impl IntoIterator<Item = (Exponent, Q)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn parse(text: &str, vars: &VarSet) -> Result<Self, PolyError> {
        let e = expr::parse(text)?;
        let proto = Self::zero(vars);
        Ok(expr::eval(&e, &proto, &mut |name: &str, line, col| {
            Self::var(vars, name).map_err(|_| ParseError {
                line,
                col,
                message: format!("unknown variable '{name}'"),
            })
        })?)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    pub fn add_term(&mut self, e: Exponent, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VarSetMismatch(self.vars.to_string(), other.vars.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(mono_mul(e1, e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        CommPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Leading monomial and coefficient under `order`.
    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Exponent, &Q)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Q::from_integer(e[i].into()));
            }
        }
        out
    }

    /// One partial derivative per variable, in variable order.
    pub fn partials(&self) -> Vec<Self> {
        (0..self.vars.len()).map(|i| self.partial(i)).collect()
    }

    /// Composes with `images`; unmapped variables map to the same name in `target`.
    pub fn substitute(
        &self,
        images: &BTreeMap<String, CommPoly>,
        target: &VarSet,
    ) -> Result<Self, PolyError> {
        let mut per_var = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            let img = match images.get(name) {
                Some(p) => {
                    if &p.vars != target {
                        return Err(PolyError::VarSetMismatch(p.vars.to_string(), target.to_string()));
                    }
                    p.clone()
                }
                None => Self::var(target, name)?,
            };
            per_var.push(img);
        }
        let mut out = Self::zero(target);
        let mut powers: Vec<Vec<CommPoly>> = per_var.iter().map(|p| vec![Self::one(target), p.clone()]).collect();
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &per_var[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            for (e2, c2) in term.terms {
                out.add_term(e2, c2);
            }
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over `target`, matching variables by name.
    pub fn embed(&self, target: &VarSet) -> Result<Self, PolyError> {
        self.substitute(&BTreeMap::new(), target)
    }

    /// Exact quotient `f / g`, or `None` when `g` does not divide `f`.
    pub fn divexact(&self, g: &Self) -> Result<Option<Self>, PolyError> {
        self.check_vars(g)?;
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let order = MonomialOrder::graded(self.vars.len());
        let (glead, gc) = g.leading(&order).map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((e, c)) = rem.leading(&order).map(|(e, c)| (e.clone(), c.clone())) {
            if !divides(&glead, &e) {
                return Ok(None);
            }
            let m = mono_div(&e, &glead);
            let f = c / &gc;
            for (ge, gcoef) in &g.terms {
                rem.add_term(mono_mul(&m, ge), -(&f * gcoef));
            }
            quot.add_term(m, f);
        }
        Ok(Some(quot))
    }

    fn fmt_term(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                let n = &self.vars.names()[i];
                if k == 1 { n.clone() } else { format!("{n}^{k}") }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let order = MonomialOrder::graded(self.vars.len());
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| order.cmp(b.0, a.0));
        for (k, (e, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            let mono = self.fmt_term(e);
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<'a> std::ops::Add<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &'a CommPoly) -> CommPoly {
        self.checked_add(rhs).expect("CommPoly add")
    }
}

impl<'a> std::ops::Sub<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &'a CommPoly) -> CommPoly {
        self.checked_sub(rhs).expect("CommPoly sub")
    }
}

impl<'a> std::ops::Mul<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &'a CommPoly) -> CommPoly {
        self.checked_mul(rhs).expect("CommPoly mul")
    }
}

impl std::ops::Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        self.scale(&-Q::one())
    }
}

impl ExprRing for CommPoly {
    fn scalar(&self, q: &Q) -> Self {
        Self::constant(&self.vars, q.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Q) -> Self {
        CommPoly::scale(self, q)
    }
}

pub fn cp_arith(f: &CommPoly, g: &CommPoly, kind: ArithKind) -> Result<CommPoly, PolyError> {
    match kind {
        ArithKind::Add => f.checked_add(g),
        ArithKind::Sub => f.checked_sub(g),
        ArithKind::Mul => f.checked_mul(g),
    }
}

/// Polynomial as terms sorted by decreasing order, leading term first, monic.
#[derive(Debug, Clone)]
struct SortedPoly {
    terms: Vec<(Exponent, Q)>,
}

impl SortedPoly {
    fn from_map(m: BTreeMap<(u64, Exponent), Q>) -> Self {
        SortedPoly { terms: m.into_iter().rev().map(|((_, e), c)| (e, c)).collect() }
    }

    fn lead(&self) -> &Exponent {
        &self.terms[0].0
    }

    fn make_monic(&mut self) {
        let inv = Q::one() / &self.terms[0].1;
        for (_, c) in self.terms.iter_mut() {
            *c *= &inv;
        }
    }
}

fn to_keyed(p: &CommPoly, order: &MonomialOrder) -> BTreeMap<(u64, Exponent), Q> {
    p.terms.iter().map(|(e, c)| (order.key(e), c.clone())).collect()
}

fn add_keyed(map: &mut BTreeMap<(u64, Exponent), Q>, k: (u64, Exponent), c: Q) {
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Full reduction of `work` by a monic basis; returns the remainder.
fn reduce_keyed(
    mut work: BTreeMap<(u64, Exponent), Q>,
    basis: &[SortedPoly],
    order: &MonomialOrder,
) -> BTreeMap<(u64, Exponent), Q> {
    let mut rem = BTreeMap::new();
    while let Some((k, c)) = work.pop_last() {
        match basis.iter().find(|g| divides(g.lead(), &k.1)) {
            Some(g) => {
                let m = mono_div(&k.1, g.lead());
                for (e, d) in &g.terms[1..] {
                    let t = mono_mul(&m, e);
                    add_keyed(&mut work, order.key(&t), -(&c * d));
                }
            }
            None => {
                rem.insert(k, c);
            }
        }
    }
    rem
}

/// Reduced Groebner basis with respect to a graded monomial order.
#[derive(Debug, Clone)]
pub struct CommGB {
    vars: VarSet,
    order: MonomialOrder,
    basis: Vec<SortedPoly>,
}

impl CommGB {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn basis(&self) -> Vec<CommPoly> {
        self.basis
            .iter()
            .map(|g| CommPoly::from_terms(&self.vars, g.terms.iter().cloned()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<Exponent> {
        self.basis.iter().map(|g| g.lead().clone()).collect()
    }

    pub fn is_reducible(&self, e: &[u32]) -> bool {
        self.basis.iter().any(|g| divides(g.lead(), e))
    }

    pub fn contains_one(&self) -> bool {
        self.basis.iter().any(|g| g.lead().iter().all(|&k| k == 0))
    }
}

/// Buchberger's algorithm with the coprime-leads criterion, returning the reduced basis.
pub fn cp_groebner(gens: &[CommPoly], order: &MonomialOrder) -> Result<CommGB, PolyError> {
    let vars = match gens.first() {
        Some(g) => g.vars.clone(),
        None => VarSet::new::<&str>(&[])?,
    };
    if order.weights.len() != vars.len() {
        return Err(PolyError::OrderArity { got: order.weights.len(), expected: vars.len() });
    }
    for g in gens {
        g.check_vars(&gens[0])?;
    }
    let mut basis: Vec<SortedPoly> = Vec::new();
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let push = |basis: &mut Vec<SortedPoly>, pairs: &mut BTreeSet<(u64, usize, usize)>, mut p: SortedPoly| {
        p.make_monic();
        let k = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let l = mono_lcm(g.lead(), p.lead());
            pairs.insert((order.degree(&l), i, k));
        }
        basis.push(p);
    };
    for g in gens {
        let r = reduce_keyed(to_keyed(g, order), &basis, order);
        if !r.is_empty() {
            push(&mut basis, &mut pairs, SortedPoly::from_map(r));
        }
    }
    while let Some((_, i, j)) = pairs.pop_first() {
        let (a, b) = (&basis[i], &basis[j]);
        if a.lead().iter().zip(b.lead()).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let l = mono_lcm(a.lead(), b.lead());
        let ma = mono_div(&l, a.lead());
        let mb = mono_div(&l, b.lead());
        let mut s = BTreeMap::new();
        for (e, c) in &a.terms[1..] {
            add_keyed(&mut s, order.key(&mono_mul(&ma, e)), c.clone());
        }
        for (e, c) in &b.terms[1..] {
            add_keyed(&mut s, order.key(&mono_mul(&mb, e)), -c.clone());
        }
        let r = reduce_keyed(s, &basis, order);
        if !r.is_empty() {
            push(&mut basis, &mut pairs, SortedPoly::from_map(r));
        }
    }
    // Minimalize, then inter-reduce tails.
    let mut keep: Vec<SortedPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && divides(h.lead(), g.lead()) && (h.lead() != g.lead() || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<SortedPoly> =
            keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let g = &keep[i];
        let tail: BTreeMap<(u64, Exponent), Q> =
            g.terms[1..].iter().map(|(e, c)| (order.key(e), c.clone())).collect();
        let mut r = reduce_keyed(tail, &others, order);
        r.insert(order.key(g.lead()), Q::one());
        reduced.push(SortedPoly::from_map(r));
    }
    reduced.sort_by(|a, b| order.cmp(a.lead(), b.lead()));
    Ok(CommGB { vars, order: order.clone(), basis: reduced })
}

pub fn cp_normal_form(f: &CommPoly, gb: &CommGB) -> CommPoly {
    let r = reduce_keyed(to_keyed(f, &gb.order), &gb.basis, &gb.order);
    CommPoly::from_terms(&gb.vars, r.into_iter().map(|((_, e), c)| (e, c)))
}

/// All exponent vectors of total degree `d` in `n` variables, in lexicographic order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Exponent> {
    fn rec(n: usize, d: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n - 1, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisStatus {
    Finite { dim: usize },
    NotFiniteUpTo(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBasis {
    pub monomials: Vec<Exponent>,
    pub status: BasisStatus,
}

/// Order-irreducible monomials of total degree below `bound`.
///
/// The status is finite when the two highest degrees examined hold no irreducible
/// monomial; irreducibles are closed under division, so none exist beyond.
pub fn cp_quotient_basis(gb: &CommGB, bound: u32) -> QuotientBasis {
    let n = gb.vars.len();
    let mut monomials = Vec::new();
    let mut per_degree = Vec::new();
    for d in 0..bound {
        let level: Vec<Exponent> =
            monomials_of_degree(n, d).into_iter().filter(|e| !gb.is_reducible(e)).collect();
        per_degree.push(level.len());
        monomials.extend(level);
    }
    let top_empty = |k: u32| k >= 1 && bound >= k && per_degree[(bound - k) as usize] == 0;
    let finite = if bound >= 2 { top_empty(1) && top_empty(2) } else { top_empty(1) };
    monomials.sort_by(|a, b| gb.order.cmp(a, b));
    let status = if finite {
        BasisStatus::Finite { dim: monomials.len() }
    } else {
        BasisStatus::NotFiniteUpTo(bound)
    };
    QuotientBasis { monomials, status }
}

/// Generators `x, zw, 3y^2 + w^(2n+1), z^2 + (2n+1)yw^(2n)` of `J_0` in `k[x,y,z,w]`.
pub fn j0_generators(n: u32) -> (VarSet, Vec<CommPoly>) {
    let vars = VarSet::new(&["x", "y", "z", "w"]).expect("fixed names");
    let texts = [
        "x".to_string(),
        "z*w".to_string(),
        format!("3*y^2 + w^{}", 2 * n + 1),
        format!("z^2 + {}*y*w^{}", 2 * n + 1, 2 * n),
    ];
    let gens = texts.iter().map(|t| CommPoly::parse(t, &vars).expect("valid")).collect();
    (vars, gens)
}

/// Weights making `J_0` weighted homogeneous: `x, y, z, w -> 6n+3, 4n+2, 6n+1, 4`.
pub fn j0_weights(n: u32) -> Vec<u32> {
    vec![6 * n + 3, 4 * n + 2, 6 * n + 1, 4]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalStatus {
    Finite { dim: usize, certified_at: u32 },
    NotFiniteUpTo(u32),
}

/// Dimensions of `k[x]/(I + m^N)` for `N = 1..=max_n`.
pub fn local_quotient_dims(gens: &[CommPoly], vars: &VarSet, max_n: u32) -> Result<Vec<usize>, PolyError> {
    let order = MonomialOrder::graded(vars.len());
    let mut dims = Vec::new();
    for big_n in 1..=max_n {
        let mut all: Vec<CommPoly> = gens.to_vec();
        for e in monomials_of_degree(vars.len(), big_n) {
            all.push(CommPoly::monomial(vars, e, Q::one()));
        }
        let gb = cp_groebner(&all, &order)?;
        let mut count = 0;
        for d in 0..big_n {
            count += monomials_of_degree(vars.len(), d).iter().filter(|e| !gb.is_reducible(e)).count();
        }
        dims.push(count);
    }
    Ok(dims)
}

/// Local (completed) quotient dimension, certified by one-step stabilization.
pub fn local_dimension(gens: &[CommPoly], vars: &VarSet, max_n: u32) -> Result<(LocalStatus, Vec<usize>), PolyError> {
    let dims = local_quotient_dims(gens, vars, max_n)?;
    for big_n in 1..max_n {
        if dims[(big_n - 1) as usize] == dims[big_n as usize] {
            return Ok((
                LocalStatus::Finite { dim: dims[(big_n - 1) as usize], certified_at: big_n },
                dims,
            ));
        }
    }
    Ok((LocalStatus::NotFiniteUpTo(max_n), dims))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn j0_quotients() {
        for (n, want) in [(1u32, 11usize), (2, 17)] {
            let (_, g) = j0_generators(n);
            let gb = cp_groebner(&g, &MonomialOrder::weighted(j0_weights(n)).unwrap()).unwrap();
            let qb = cp_quotient_basis(&gb, 4 * n + 6);
            assert_eq!(qb.status, BasisStatus::Finite { dim: want }, "{:?}", qb.monomials);
        }
    }

    fn vs(names: &[&str]) -> VarSet {
        VarSet::new(names).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let v = vs(&["x", "y"]);
        let x = CommPoly::var(&v, "x").unwrap();
        let y = CommPoly::var(&v, "y").unwrap();
        assert_eq!(&(&x + &y) * &(&x - &y), CommPoly::parse("x^2 - y^2", &v).unwrap());
    }

    #[test]
    fn mismatched_varsets_error() {
        let x = CommPoly::var(&vs(&["x"]), "x").unwrap();
        let y = CommPoly::var(&vs(&["y"]), "y").unwrap();
        assert!(matches!(cp_arith(&x, &y, ArithKind::Add), Err(PolyError::VarSetMismatch(..))));
    }

    #[test]
    fn divexact_cases() {
        let v = vs(&["x", "y"]);
        let f = CommPoly::parse("x^2 + y^2 + 1", &v).unwrap();
        let g = CommPoly::parse("x + 1", &v).unwrap();
        assert_eq!((&f * &g).divexact(&f).unwrap(), Some(g.clone()));
        assert_eq!(CommPoly::var(&v, "x").unwrap().divexact(&f).unwrap(), None);
        assert_eq!(f.divexact(&CommPoly::zero(&v)), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn groebner_of_coordinates() {
        let v = vs(&["x", "y"]);
        let gens = vec![CommPoly::var(&v, "x").unwrap(), CommPoly::var(&v, "y").unwrap()];
        let gb = cp_groebner(&gens, &MonomialOrder::graded(2)).unwrap();
        assert_eq!(gb.basis().len(), 2);
        let f = CommPoly::parse("x + y + 1", &v).unwrap();
        assert_eq!(cp_normal_form(&f, &gb), CommPoly::one(&v));
        let qb = cp_quotient_basis(&gb, 4);
        assert_eq!(qb.monomials, vec![vec![0, 0]]);
        assert_eq!(qb.status, BasisStatus::Finite { dim: 1 });
    }

    #[test]
    fn partial_of_constant_is_zero() {
        let v = vs(&["x"]);
        assert!(CommPoly::constant(&v, q(5)).partial(0).is_zero());
    }

    #[test]
    fn local_dimension_differs_from_polynomial_dimension() {
        let v = vs(&["x"]);
        let f = CommPoly::parse("x^2 - x^3", &v).unwrap();
        let (status, _) = local_dimension(std::slice::from_ref(&f), &v, 8).unwrap();
        assert!(matches!(status, LocalStatus::Finite { dim: 2, .. }));
        let gb = cp_groebner(&[f], &MonomialOrder::graded(1)).unwrap();
        assert_eq!(cp_quotient_basis(&gb, 6).monomials.len(), 3);
    }

    #[test]
    fn display_round_trips() {
        let v = vs(&["x", "y", "z"]);
        let f = CommPoly::parse("3/2*x^2*y - z + 7 - x*z", &v).unwrap();
        assert_eq!(CommPoly::parse(&f.to_string(), &v).unwrap(), f);
    }
}
