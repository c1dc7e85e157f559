//! Degree-truncated two-sided completion for presented algebras.
//!
//! The engine computes `k<X>/(I + m^N)` where `m^N` is spanned by the words of
//! length at least `N`. Rewrite leads are chosen in the lowest length present
//! (ties broken by the presentation's order), so every rewrite step keeps or
//! increases word length and truncation commutes with reduction. Central letters
//! are handled implicitly: a lead `(C, n)` divides a word `(C', w)` when the
//! multiset `C` is contained in `C'` and `n` is a factor of `w`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::commpoly::{self, LocalStatus, PolyError};
use crate::freealg::{nc_abelianize, order_key, AlgError, GenSet, NcPoly, Word, WordOrder};
use crate::linalg::{self, EchelonSpan};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GbError {
    #[error("relation {0} is zero")]
    ZeroRelation(usize),
    #[error("relation {0} has a nonzero constant term")]
    ConstantTerm(usize),
    #[error("relation {0} is over a different generator set")]
    GenSetMismatch(usize),
    #[error("truncation degree must be at least 2, got {0}")]
    TruncationTooSmall(u32),
    #[error("dimension undefined: free central parameters {params:?}")]
    DimensionUndefined { params: Vec<String>, graded_dims: Vec<usize> },
    #[error("operation needs a finite-dimensional quotient")]
    NotFinite,
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Generators, relations and the monomial order used to pick leads.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    gens: GenSet,
    relations: Vec<NcPoly>,
    order: WordOrder,
}

impl Presentation {
    pub fn new(gens: GenSet, relations: Vec<NcPoly>, order: WordOrder) -> Result<Self, GbError> {
        for (i, r) in relations.iter().enumerate() {
            if r.gens() != &gens {
                return Err(GbError::GenSetMismatch(i));
            }
            if r.is_zero() {
                return Err(GbError::ZeroRelation(i));
            }
            if !r.constant_term().is_zero() {
                return Err(GbError::ConstantTerm(i));
            }
        }
        Ok(Presentation { gens, relations, order })
    }

    pub fn gens(&self) -> &GenSet {
        &self.gens
    }

    pub fn relations(&self) -> &[NcPoly] {
        &self.relations
    }

    pub fn order(&self) -> WordOrder {
        self.order
    }

    /// The same presentation with extra relations appended.
    pub fn with_relations(&self, extra: Vec<NcPoly>) -> Result<Self, GbError> {
        let mut rels = self.relations.clone();
        rels.extend(extra);
        Presentation::new(self.gens.clone(), rels, self.order)
    }

    /// Adds the commutator of every pair of non-central generators.
    pub fn abelianized(&self) -> Result<Self, GbError> {
        let nc = self.gens.noncentral();
        let mut extra = Vec::new();
        for (k, &i) in nc.iter().enumerate() {
            for &j in &nc[k + 1..] {
                let a = NcPoly::gen(&self.gens, self.gens.name(i))?;
                let b = NcPoly::gen(&self.gens, self.gens.name(j))?;
                extra.push(a.commutator(&b));
            }
        }
        self.with_relations(extra)
    }
}

/// Engine monomial; the derived order ranks the preferred lead highest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Mono {
    rlen: Reverse<u16>,
    grade: u32,
    ncl: u16,
    nc: Vec<u8>,
    cen: Vec<u8>,
}

impl Mono {
    fn len(&self) -> usize {
        self.nc.len() + self.cen.len()
    }
}

type Poly = BTreeMap<Mono, Q>;
type CertKey = (Vec<u8>, Vec<u8>, u32, Vec<u8>);
type Cert = BTreeMap<CertKey, Q>;

fn add_to<K: Ord>(map: &mut BTreeMap<K, Q>, k: K, c: Q) {
    if c.is_zero() {
        return;
    }
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

fn ms_sub(big: &[u8], small: &[u8]) -> Option<Vec<u8>> {
    let mut out = Vec::with_capacity(big.len().saturating_sub(small.len()));
    let mut j = 0;
    for &x in big {
        if j < small.len() && small[j] == x {
            j += 1;
        } else if j < small.len() && small[j] < x {
            return None;
        } else {
            out.push(x);
        }
    }
    if j == small.len() {
        Some(out)
    } else {
        None
    }
}

fn ms_merge(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] <= b[j]) {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out
}

fn ms_lcm(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

fn ms_share(a: &[u8], b: &[u8]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn find_factor(hay: &[u8], needle: &[u8], from: usize) -> Option<usize> {
    if needle.is_empty() {
        return Some(from.min(hay.len()));
    }
    if needle.len() > hay.len() {
        return None;
    }
    (from..=hay.len() - needle.len()).find(|&p| &hay[p..p + needle.len()] == needle)
}

fn cat3(a: &[u8], b: &[u8], c: &[u8]) -> Vec<u8> {
    let mut v = Vec::with_capacity(a.len() + b.len() + c.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v.extend_from_slice(c);
    v
}

#[derive(Debug, Clone)]
struct Ctx {
    gens: GenSet,
    order: WordOrder,
    trunc: usize,
    nc_letters: Vec<u8>,
}

impl Ctx {
    fn mono(&self, cen: Vec<u8>, nc: Vec<u8>) -> Mono {
        let grade = match self.order {
            WordOrder::Deglex => (cen.len() + nc.len()) as u32,
            WordOrder::Wdeglex => cen.iter().chain(&nc).map(|&l| self.gens.weight(l as usize)).sum(),
        };
        Mono { rlen: Reverse((cen.len() + nc.len()) as u16), grade, ncl: nc.len() as u16, nc, cen }
    }

    fn word_mono(&self, w: &Word) -> Mono {
        let c = w.central_len(&self.gens);
        self.mono(w.0[..c].to_vec(), w.0[c..].to_vec())
    }

    fn to_word(&self, m: &Mono) -> Word {
        Word(cat3(&m.cen, &m.nc, &[]))
    }

    fn poly_from(&self, f: &NcPoly) -> Poly {
        f.terms().iter().map(|(w, c)| (self.word_mono(w), c.clone())).collect()
    }

    fn to_ncpoly(&self, p: &Poly) -> NcPoly {
        NcPoly::from_terms(&self.gens, p.iter().map(|(m, c)| (self.to_word(m), c.clone())))
    }
}

#[derive(Debug, Clone)]
struct Rule {
    lead: Mono,
    tail: Vec<(Mono, Q)>,
    cert: Option<Cert>,
    exact: bool,
    alive: bool,
}

#[derive(Debug, Clone)]
struct Emb {
    rule: usize,
    cen_rest: Vec<u8>,
    left: Vec<u8>,
    right: Vec<u8>,
}

#[derive(Debug, Clone)]
struct Amb {
    e1: Emb,
    e2: Emb,
}

/// Step of a reduction trace: `coef * central * left * rule * right` was subtracted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub coef: Q,
    pub rule: usize,
    pub central: Word,
    pub left: Word,
    pub right: Word,
}

/// One summand `coef * central * left * relation * right` of an ideal-membership proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertTerm {
    pub coef: Q,
    pub central: Word,
    pub left: Word,
    pub relation: usize,
    pub right: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lead: Word,
    pub tail: NcPoly,
    /// False when the rule is only known modulo words of length at least the truncation degree.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionOptions {
    pub certificates: bool,
    /// Stop once this many rules have been created; the basis is then complete
    /// only below the length of the first unprocessed ambiguity.
    pub max_rules: usize,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        CompletionOptions { certificates: false, max_rules: 200_000 }
    }
}

/// Degree-truncated rewrite system.
#[derive(Debug, Clone)]
pub struct TruncatedGB {
    ctx: Ctx,
    rules: Vec<Rule>,
    alive: Vec<usize>,
    by_letter: HashMap<Option<u8>, Vec<usize>>,
    relations: Vec<NcPoly>,
    complete_below: u32,
    ambiguities_processed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub normal_form: NcPoly,
    pub truncated: bool,
    pub trace: Vec<TraceStep>,
}

struct Reduced {
    rem: Poly,
    truncated: bool,
    inexact: bool,
}

struct Engine {
    gb: TruncatedGB,
    queue: BTreeMap<(usize, u64), Amb>,
    seq: u64,
    opts: CompletionOptions,
}

impl TruncatedGB {
    fn empty(p: &Presentation, trunc: u32) -> Self {
        let gens = p.gens().clone();
        let nc_letters = gens.noncentral().into_iter().map(|i| i as u8).collect();
        TruncatedGB {
            ctx: Ctx { gens, order: p.order(), trunc: trunc as usize, nc_letters },
            rules: Vec::new(),
            alive: Vec::new(),
            by_letter: HashMap::new(),
            relations: p.relations().to_vec(),
            complete_below: trunc.saturating_sub(1),
            ambiguities_processed: 0,
        }
    }

    pub fn gens(&self) -> &GenSet {
        &self.ctx.gens
    }

    pub fn trunc(&self) -> u32 {
        self.ctx.trunc as u32
    }

    /// Largest word length below which every ambiguity was resolved.
    pub fn complete_below(&self) -> u32 {
        self.complete_below
    }

    pub fn ambiguities_processed(&self) -> u64 {
        self.ambiguities_processed
    }

    pub fn rules(&self) -> Vec<RewriteRule> {
        self.alive
            .iter()
            .map(|&i| {
                let r = &self.rules[i];
                RewriteRule {
                    lead: self.ctx.to_word(&r.lead),
                    tail: NcPoly::from_terms(
                        &self.ctx.gens,
                        r.tail.iter().map(|(m, c)| (self.ctx.to_word(m), -c.clone())),
                    ),
                    exact: r.exact,
                }
            })
            .collect()
    }

    pub fn leads(&self) -> Vec<Word> {
        self.alive.iter().map(|&i| self.ctx.to_word(&self.rules[i].lead)).collect()
    }

    fn rebuild_index(&mut self) {
        self.alive = (0..self.rules.len()).filter(|&i| self.rules[i].alive).collect();
        self.alive.sort_by(|a, b| self.rules[*a].lead.cmp(&self.rules[*b].lead));
        self.by_letter.clear();
        for &i in &self.alive {
            let key = self.rules[i].lead.nc.first().copied();
            self.by_letter.entry(key).or_default().push(i);
        }
    }

    fn divides(lead: &Mono, m: &Mono, from: usize) -> Option<(usize, Vec<u8>)> {
        if lead.len() > m.len() || lead.nc.len() > m.nc.len() || lead.cen.len() > m.cen.len() {
            return None;
        }
        let rest = ms_sub(&m.cen, &lead.cen)?;
        let pos = find_factor(&m.nc, &lead.nc, from)?;
        Some((pos, rest))
    }

    fn find_reducer(&self, m: &Mono, skip: Option<usize>) -> Option<(usize, usize, Vec<u8>)> {
        if let Some(list) = self.by_letter.get(&None) {
            for &i in list {
                if Some(i) == skip {
                    continue;
                }
                if let Some((pos, rest)) = Self::divides(&self.rules[i].lead, m, 0) {
                    return Some((i, pos, rest));
                }
            }
        }
        let mut tried = [false; 256];
        for &l in &m.nc {
            if tried[l as usize] {
                continue;
            }
            tried[l as usize] = true;
            if let Some(list) = self.by_letter.get(&Some(l)) {
                for &i in list {
                    if Some(i) == skip {
                        continue;
                    }
                    if let Some((pos, rest)) = Self::divides(&self.rules[i].lead, m, 0) {
                        return Some((i, pos, rest));
                    }
                }
            }
        }
        None
    }

    fn is_irreducible(&self, m: &Mono) -> bool {
        m.len() < self.ctx.trunc && self.find_reducer(m, None).is_none()
    }

    /// Value of `cen_rest * left * tail * right`, dropping words at or beyond truncation.
    fn apply_tail(&self, rule: usize, cen_rest: &[u8], left: &[u8], right: &[u8], coef: &Q, out: &mut Poly) -> bool {
        let mut truncated = false;
        for (t, d) in &self.rules[rule].tail {
            if cen_rest.len() + left.len() + right.len() + t.len() >= self.ctx.trunc {
                truncated = true;
                continue;
            }
            let m = self.ctx.mono(ms_merge(cen_rest, &t.cen), cat3(left, &t.nc, right));
            add_to(out, m, coef * d);
        }
        truncated
    }

    fn shift_cert(cert: &Cert, cen_rest: &[u8], left: &[u8], right: &[u8], coef: &Q, out: &mut Cert) {
        for ((c, l, r, rt), q) in cert {
            let key = (ms_merge(cen_rest, c), cat3(left, l, &[]), *r, cat3(rt, right, &[]));
            add_to(out, key, q * coef);
        }
    }

    /// Full reduction; `acc` collects the certificate of what was subtracted.
    fn reduce_poly(
        &self,
        mut work: Poly,
        mut acc: Option<&mut Cert>,
        mut trace: Option<&mut Vec<TraceStep>>,
        skip: Option<usize>,
    ) -> Reduced {
        let mut rem = Poly::new();
        let mut truncated = false;
        let mut inexact = false;
        let keys: Vec<Mono> = work.keys().filter(|m| m.len() >= self.ctx.trunc).cloned().collect();
        for k in keys {
            work.remove(&k);
            truncated = true;
        }
        while let Some((m, c)) = work.pop_last() {
            match self.find_reducer(&m, skip) {
                Some((ri, pos, rest)) => {
                    let rule = &self.rules[ri];
                    let left = &m.nc[..pos];
                    let right = &m.nc[pos + rule.lead.nc.len()..];
                    // m - c * rest*left*(lead - tail)*right = c * rest*left*tail*right, tail stored negated
                    truncated |= self.apply_tail(ri, &rest, left, right, &-c.clone(), &mut work);
                    if !rule.exact {
                        inexact = true;
                    }
                    if let (Some(acc), Some(cert)) = (acc.as_deref_mut(), rule.cert.as_ref()) {
                        Self::shift_cert(cert, &rest, left, right, &c, acc);
                    }
                    if let Some(tr) = trace.as_deref_mut() {
                        tr.push(TraceStep {
                            coef: c.clone(),
                            rule: ri,
                            central: Word(rest.clone()),
                            left: Word(left.to_vec()),
                            right: Word(right.to_vec()),
                        });
                    }
                }
                None => {
                    rem.insert(m, c);
                }
            }
        }
        Reduced { rem, truncated, inexact: inexact || truncated }
    }

    /// The polynomial `lead - tail` of a rule (tail stored with the sign of the rule polynomial).
    fn rule_poly(&self, i: usize) -> Poly {
        let r = &self.rules[i];
        let mut p = Poly::new();
        p.insert(r.lead.clone(), Q::one());
        for (m, c) in &r.tail {
            p.insert(m.clone(), c.clone());
        }
        p
    }

    /// Normal form with trace; words at or beyond the truncation degree are dropped.
    pub fn reduce(&self, f: &NcPoly) -> Reduction {
        let mut trace = Vec::new();
        let red = self.reduce_poly(self.ctx.poly_from(f), None, Some(&mut trace), None);
        Reduction { normal_form: self.ctx.to_ncpoly(&red.rem), truncated: red.truncated, trace }
    }

    /// Whether the word is irreducible and shorter than the truncation degree.
    pub fn is_normal_word(&self, w: &Word) -> bool {
        self.is_irreducible(&self.ctx.word_mono(w))
    }

    /// Irreducible words of length below `max_len`, up to `cap` words.
    /// Returns the words and whether the enumeration was complete.
    pub fn irreducible_words(&self, max_len: usize, cap: usize) -> (Vec<Word>, bool) {
        let max_len = max_len.min(self.ctx.trunc);
        let mut out = Vec::new();
        let central: Vec<u8> = self.ctx.gens.central().into_iter().map(|i| i as u8).collect();
        let mut stack: Vec<Mono> = vec![self.ctx.mono(Vec::new(), Vec::new())];
        while let Some(m) = stack.pop() {
            if m.len() >= max_len || !self.is_irreducible(&m) {
                continue;
            }
            if out.len() >= cap {
                return (out, false);
            }
            out.push(self.ctx.to_word(&m));
            for &l in self.ctx.nc_letters.iter().rev() {
                let mut nc = m.nc.clone();
                nc.push(l);
                stack.push(self.ctx.mono(m.cen.clone(), nc));
            }
            if m.nc.is_empty() {
                for &z in central.iter().rev() {
                    if m.cen.last().is_none_or(|&last| z >= last) {
                        let mut cen = m.cen.clone();
                        cen.push(z);
                        stack.push(self.ctx.mono(cen, Vec::new()));
                    }
                }
            }
        }
        (out, true)
    }

    /// Counts `|B_N|` of irreducible words of length below `N`, for `N = 1..=trunc`.
    pub fn basis_counts(&self, cap: usize) -> Option<Vec<usize>> {
        let (words, complete) = self.irreducible_words(self.ctx.trunc, cap);
        if !complete {
            return None;
        }
        let mut per_len = vec![0usize; self.ctx.trunc];
        for w in &words {
            per_len[w.len()] += 1;
        }
        let mut acc = 0;
        Some(
            per_len
                .iter()
                .map(|c| {
                    acc += c;
                    acc
                })
                .collect(),
        )
    }

    fn word_vector(&self, w: &Word, index: &HashMap<Word, usize>) -> Vec<Q> {
        let red = self.reduce_poly(self.ctx.poly_from(&NcPoly::term(&self.ctx.gens, w.clone(), Q::one())), None, None, None);
        let mut v = vec![Q::zero(); index.len()];
        for (m, c) in red.rem {
            let i = index[&self.ctx.to_word(&m)];
            v[i] = c;
        }
        v
    }

    fn poly_vector(&self, f: &NcPoly, index: &HashMap<Word, usize>) -> Vec<Q> {
        let red = self.reduce_poly(self.ctx.poly_from(f), None, None, None);
        let mut v = vec![Q::zero(); index.len()];
        for (m, c) in red.rem {
            let i = index[&self.ctx.to_word(&m)];
            v[i] = c;
        }
        v
    }

    /// Certificate for the subtracted part of a reduction to zero, if the claim reduces to zero.
    fn certify(&self, claim: &NcPoly) -> (Reduced, Cert) {
        let mut acc = Cert::new();
        let red = self.reduce_poly(self.ctx.poly_from(claim), Some(&mut acc), None, None);
        (red, acc)
    }

    fn cert_terms(&self, cert: &Cert) -> Vec<CertTerm> {
        cert.iter()
            .map(|((c, l, r, rt), q)| CertTerm {
                coef: q.clone(),
                central: Word(c.clone()),
                left: Word(l.clone()),
                relation: *r as usize,
                right: Word(rt.clone()),
            })
            .collect()
    }
}

impl Engine {
    fn new(p: &Presentation, trunc: u32, opts: CompletionOptions) -> Self {
        Engine { gb: TruncatedGB::empty(p, trunc), queue: BTreeMap::new(), seq: 0, opts }
    }

    fn enqueue(&mut self, cen: Vec<u8>, nc: Vec<u8>, a: (usize, usize), b: (usize, usize)) {
        let len = cen.len() + nc.len();
        if len >= self.gb.ctx.trunc {
            return;
        }
        let emb = |rule: usize, pos: usize, gb: &TruncatedGB| {
            let lead = &gb.rules[rule].lead;
            Emb {
                rule,
                cen_rest: ms_sub(&cen, &lead.cen).expect("lcm contains lead centrals"),
                left: nc[..pos].to_vec(),
                right: nc[pos + lead.nc.len()..].to_vec(),
            }
        };
        let e1 = emb(a.0, a.1, &self.gb);
        let e2 = emb(b.0, b.1, &self.gb);
        self.seq += 1;
        self.queue.insert((len, self.seq), Amb { e1, e2 });
    }

    fn nc_words_upto(&self, max: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..max {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &self.gb.ctx.nc_letters {
                    let mut v: Vec<u8> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn ambiguities(&mut self, k: usize, j: usize) {
        let a = self.gb.rules[k].lead.clone();
        let b = self.gb.rules[j].lead.clone();
        let (na, nb) = (&a.nc, &b.nc);
        let lcm = ms_lcm(&a.cen, &b.cen);
        let trunc = self.gb.ctx.trunc;
        let same = k == j;
        if !na.is_empty() && !nb.is_empty() {
            for s in 1..na.len().min(nb.len()) {
                if na[na.len() - s..] == nb[..s] {
                    self.enqueue(lcm.clone(), cat3(na, &nb[s..], &[]), (k, 0), (j, na.len() - s));
                }
                if !same && nb[nb.len() - s..] == na[..s] {
                    self.enqueue(lcm.clone(), cat3(nb, &na[s..], &[]), (k, nb.len() - s), (j, 0));
                }
            }
            if nb.len() <= na.len() {
                let mut from = 0;
                while let Some(p) = find_factor(na, nb, from) {
                    if !(same && p == 0) {
                        self.enqueue(lcm.clone(), na.clone(), (k, 0), (j, p));
                    }
                    from = p + 1;
                }
            }
            if !same && na.len() < nb.len() {
                let mut from = 0;
                while let Some(p) = find_factor(nb, na, from) {
                    self.enqueue(lcm.clone(), nb.clone(), (k, p), (j, 0));
                    from = p + 1;
                }
            }
            let shared = if same { !a.cen.is_empty() } else { ms_share(&a.cen, &b.cen) };
            if shared {
                let base = lcm.len() + na.len() + nb.len();
                if base < trunc {
                    for x in self.nc_words_upto(trunc - 1 - base) {
                        self.enqueue(lcm.clone(), cat3(na, &x, nb), (k, 0), (j, na.len() + x.len()));
                        if !same {
                            self.enqueue(lcm.clone(), cat3(nb, &x, na), (k, nb.len() + x.len()), (j, 0));
                        }
                    }
                }
            }
        } else if na.is_empty() && nb.is_empty() {
            if !same {
                self.enqueue(lcm, Vec::new(), (k, 0), (j, 0));
            }
        } else if na.is_empty() {
            self.enqueue(lcm, nb.clone(), (k, 0), (j, 0));
        } else {
            self.enqueue(lcm, na.clone(), (k, 0), (j, 0));
        }
        if same && na.is_empty() && !a.cen.is_empty() {
            for l in self.gb.ctx.nc_letters.clone() {
                self.enqueue(a.cen.clone(), vec![l], (k, 0), (k, 1));
            }
        }
    }

    /// Inserts a reduced nonzero polynomial as a monic rule and schedules ambiguities.
    fn insert(&mut self, poly: Poly, cert: Option<Cert>, exact: bool) {
        let mut pending = vec![(poly, cert, exact)];
        while let Some((poly, cert, exact)) = pending.pop() {
            let (lead, lc) = poly.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let inv = Q::one() / &lc;
            let tail: Vec<(Mono, Q)> = poly.iter().rev().skip(1).map(|(m, c)| (m.clone(), c * &inv)).collect();
            let cert = cert.map(|c| c.into_iter().map(|(k, q)| (k, q * &inv)).collect::<Cert>());
            let k = self.gb.rules.len();
            self.gb.rules.push(Rule { lead: lead.clone(), tail, cert, exact, alive: true });
            let mut killed = Vec::new();
            for &i in &self.gb.alive {
                if TruncatedGB::divides(&lead, &self.gb.rules[i].lead, 0).is_some() {
                    killed.push(i);
                }
            }
            for &i in &killed {
                self.gb.rules[i].alive = false;
            }
            self.gb.rebuild_index();
            for &i in &killed {
                let p = self.gb.rule_poly(i);
                let mut acc = Cert::new();
                let red = self.gb.reduce_poly(p, self.opts.certificates.then_some(&mut acc), None, None);
                if !red.rem.is_empty() {
                    let c = self.gb.rules[i].cert.as_ref().map(|c0| {
                        let mut c = c0.clone();
                        for (key, q) in acc {
                            add_to(&mut c, key, -q);
                        }
                        c
                    });
                    let ex = self.gb.rules[i].exact && !red.inexact;
                    pending.push((red.rem, c, ex));
                }
            }
            let alive = self.gb.alive.clone();
            for j in alive {
                if self.gb.rules[k].alive && self.gb.rules[j].alive {
                    self.ambiguities(k, j);
                }
            }
        }
    }

    fn add_relation(&mut self, i: usize, f: &NcPoly) {
        let p = self.gb.ctx.poly_from(f);
        let mut acc = Cert::new();
        let red = self.gb.reduce_poly(p, self.opts.certificates.then_some(&mut acc), None, None);
        if red.rem.is_empty() {
            return;
        }
        let cert = self.opts.certificates.then(|| {
            let mut c = Cert::new();
            c.insert((Vec::new(), Vec::new(), i as u32, Vec::new()), Q::one());
            for (key, q) in acc {
                add_to(&mut c, key, -q);
            }
            c
        });
        self.insert(red.rem, cert, !red.inexact);
    }

    fn run(mut self) -> TruncatedGB {
        let rels = self.gb.relations.clone();
        for (i, r) in rels.iter().enumerate() {
            self.add_relation(i, r);
        }
        while let Some((&(len, _), _)) = self.queue.iter().next() {
            if self.gb.rules.len() >= self.opts.max_rules {
                self.gb.complete_below = (len as u32).saturating_sub(1);
                break;
            }
            let (_, amb) = self.queue.pop_first().unwrap();
            if !self.gb.rules[amb.e1.rule].alive || !self.gb.rules[amb.e2.rule].alive {
                continue;
            }
            self.gb.ambiguities_processed += 1;
            let mut s = Poly::new();
            let one = Q::one();
            let mut truncated =
                self.gb.apply_tail(amb.e1.rule, &amb.e1.cen_rest, &amb.e1.left, &amb.e1.right, &-one.clone(), &mut s);
            truncated |= self.gb.apply_tail(amb.e2.rule, &amb.e2.cen_rest, &amb.e2.left, &amb.e2.right, &one, &mut s);
            let mut cert = self.opts.certificates.then(Cert::new);
            if let Some(c) = cert.as_mut() {
                if let Some(c2) = self.gb.rules[amb.e2.rule].cert.as_ref() {
                    TruncatedGB::shift_cert(c2, &amb.e2.cen_rest, &amb.e2.left, &amb.e2.right, &one, c);
                }
                if let Some(c1) = self.gb.rules[amb.e1.rule].cert.as_ref() {
                    TruncatedGB::shift_cert(c1, &amb.e1.cen_rest, &amb.e1.left, &amb.e1.right, &-one.clone(), c);
                }
            }
            let exact_in = self.gb.rules[amb.e1.rule].exact && self.gb.rules[amb.e2.rule].exact && !truncated;
            if s.is_empty() {
                continue;
            }
            let mut acc = Cert::new();
            let red = self.gb.reduce_poly(s, self.opts.certificates.then_some(&mut acc), None, None);
            if !red.rem.is_empty() {
                if let Some(c) = cert.as_mut() {
                    for (key, q) in acc {
                        add_to(c, key, -q);
                    }
                }
                self.insert(red.rem, cert, exact_in && !red.inexact);
            }
        }
        self.interreduce();
        self.gb
    }

    fn interreduce(&mut self) {
        let alive = self.gb.alive.clone();
        for i in alive {
            let p = self.gb.rule_poly(i);
            let mut acc = Cert::new();
            let red = self.gb.reduce_poly(p, self.opts.certificates.then_some(&mut acc), None, Some(i));
            let lead = self.gb.rules[i].lead.clone();
            debug_assert!(red.rem.contains_key(&lead));
            let tail: Vec<(Mono, Q)> =
                red.rem.iter().rev().filter(|(m, _)| **m != lead).map(|(m, c)| (m.clone(), c.clone())).collect();
            let rule = &mut self.gb.rules[i];
            rule.tail = tail;
            rule.exact &= !red.inexact;
            if let Some(c) = rule.cert.as_mut() {
                for (key, q) in acc {
                    add_to(c, key, -q);
                }
            }
        }
    }
}

pub fn nc_complete(p: &Presentation, trunc: u32) -> Result<TruncatedGB, GbError> {
    nc_complete_with(p, trunc, CompletionOptions::default())
}

pub fn nc_complete_with(p: &Presentation, trunc: u32, opts: CompletionOptions) -> Result<TruncatedGB, GbError> {
    if trunc < 2 {
        return Err(GbError::TruncationTooSmall(trunc));
    }
    Ok(Engine::new(p, trunc, opts).run())
}

pub fn nc_reduce(f: &NcPoly, gb: &TruncatedGB) -> Reduction {
    gb.reduce(f)
}

/// Expands a certificate into `sum coef * central * left * relation * right`.
pub fn replay(relations: &[NcPoly], gens: &GenSet, cert: &[CertTerm]) -> NcPoly {
    let mut total = NcPoly::zero(gens);
    for t in cert {
        let u = NcPoly::term(gens, t.central.concat(&t.left, gens), t.coef.clone());
        let v = NcPoly::term(gens, t.right.clone(), Q::one());
        let term = &(&u * &relations[t.relation]) * &v;
        total = &total + &term;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DimStatus {
    Finite { dim: usize, certified_at: u32 },
    NotFiniteUpTo { n: u32 },
}

impl DimStatus {
    pub fn dim(&self) -> Option<usize> {
        match self {
            DimStatus::Finite { dim, .. } => Some(*dim),
            DimStatus::NotFiniteUpTo { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientReport {
    pub status: DimStatus,
    pub basis: Vec<Word>,
    pub graded_dims: Vec<usize>,
    pub weight_list: Option<Vec<u32>>,
    pub ab_dim_status: Option<DimStatus>,
    pub center_dim: Option<usize>,
    /// `|B_N|` for `N = 1..=trunc`.
    pub basis_counts: Vec<usize>,
    pub trunc: u32,
    pub rule_count: usize,
}

const WORD_CAP: usize = 400_000;

/// Words of the finite quotient that are standard for the presentation's order:
/// a word is kept when its image is independent of the images of all smaller words.
fn order_basis(gb: &TruncatedGB, local: &[Word], dim: usize) -> Vec<Word> {
    let gens = gb.gens().clone();
    let order = gb.ctx.order;
    let index: HashMap<Word, usize> = local.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    let mut kept: HashSet<Word> = HashSet::new();
    let mut out = Vec::new();
    let mut span = EchelonSpan::new();
    heap.push(Reverse((order_key(&gens, &Word::empty(), order), Word::empty())));
    seen.insert(Word::empty());
    let all_letters: Vec<usize> = (0..gens.len()).collect();
    while let Some(Reverse((_, w))) = heap.pop() {
        if span.dim() == dim {
            break;
        }
        let c = w.central_len(&gens);
        let mut divisors_ok = true;
        if w.len() > c {
            let pre = Word(w.0[..w.len() - 1].to_vec());
            let mut suf_letters = w.0[..c].to_vec();
            suf_letters.extend_from_slice(&w.0[c + 1..]);
            divisors_ok &= kept.contains(&pre) && kept.contains(&Word(suf_letters));
        }
        for i in 0..c {
            let mut v = w.0.clone();
            v.remove(i);
            divisors_ok &= kept.contains(&Word(v));
        }
        if !divisors_ok {
            continue;
        }
        if span.insert(gb.word_vector(&w, &index)) {
            kept.insert(w.clone());
            out.push(w.clone());
            for &g in &all_letters {
                let child = w.concat(&Word(vec![g as u8]), &gens);
                if child.len() < gb.ctx.trunc && seen.insert(child.clone()) {
                    heap.push(Reverse((order_key(&gens, &child, order), child)));
                }
            }
        }
    }
    out
}

fn free_central(gb: &TruncatedGB) -> Vec<String> {
    let gens = gb.gens();
    let len = gb.complete_below().max(1) as usize;
    gens.central()
        .into_iter()
        .filter(|&z| gb.is_normal_word(&Word(vec![z as u8; len.min(gb.ctx.trunc - 1)])))
        .map(|z| gens.name(z).to_string())
        .collect()
}

/// Certified dimension of the completed quotient by one-step stabilization.
pub fn quotient_report(p: &Presentation, max_n: u32) -> Result<QuotientReport, GbError> {
    let gb = nc_complete(p, max_n)?;
    report_from_gb(&gb)
}

pub fn report_from_gb(gb: &TruncatedGB) -> Result<QuotientReport, GbError> {
    let reliable = (gb.complete_below() + 1).min(gb.trunc()) as usize;
    let (words, complete) = gb.irreducible_words(reliable, WORD_CAP);
    let mut per_len = vec![0usize; reliable];
    for w in &words {
        per_len[w.len()] += 1;
    }
    let mut counts = Vec::new();
    let mut acc = 0;
    for c in &per_len {
        acc += c;
        counts.push(acc);
    }
    let mut status = DimStatus::NotFiniteUpTo { n: gb.trunc() };
    if complete {
        if let Some(n) = (1..reliable).find(|&n| per_len[n] == 0) {
            status = DimStatus::Finite { dim: counts[n - 1], certified_at: n as u32 };
        }
    }
    let free = free_central(gb);
    let gens = gb.gens().clone();
    let rule_count = gb.alive.len();
    match status {
        DimStatus::Finite { dim, certified_at } if free.is_empty() => {
            let local: Vec<Word> = words.into_iter().filter(|w| w.len() < certified_at as usize).collect();
            let basis = order_basis(gb, &local, dim);
            if basis.len() != dim {
                return Err(GbError::InternalConsistency(format!(
                    "order basis has {} words for dimension {dim}",
                    basis.len()
                )));
            }
            let max_len = basis.iter().map(|w| w.len()).max().unwrap_or(0);
            let mut graded = vec![0usize; max_len + 1];
            for w in &basis {
                graded[w.len()] += 1;
            }
            let mut weights: Vec<u32> = basis.iter().map(|w| w.weight(&gens)).collect();
            weights.sort_unstable();
            Ok(QuotientReport {
                status,
                basis,
                graded_dims: graded,
                weight_list: Some(weights),
                ab_dim_status: None,
                center_dim: None,
                basis_counts: counts,
                trunc: gb.trunc(),
                rule_count,
            })
        }
        _ if !free.is_empty() => Err(GbError::DimensionUndefined { params: free, graded_dims: per_len }),
        _ => Ok(QuotientReport {
            status,
            basis: words,
            graded_dims: per_len,
            weight_list: None,
            ab_dim_status: None,
            center_dim: None,
            basis_counts: counts,
            trunc: gb.trunc(),
            rule_count,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ClaimStatus {
    CertifiedZero,
    InconclusiveAt { n: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimResult {
    pub status: ClaimStatus,
    /// Normal form left after reduction (zero when certified).
    pub residual: NcPoly,
    pub certificate: Vec<CertTerm>,
}

/// Certifies claims as ideal members by replayable reduction to zero.
pub fn derive_check(p: &Presentation, claims: &[NcPoly], trunc: u32) -> Result<Vec<ClaimResult>, GbError> {
    let opts = CompletionOptions { certificates: true, ..CompletionOptions::default() };
    let gb = nc_complete_with(p, trunc, opts)?;
    derive_with(&gb, p, claims)
}

pub fn derive_with(gb: &TruncatedGB, p: &Presentation, claims: &[NcPoly]) -> Result<Vec<ClaimResult>, GbError> {
    let mut out = Vec::new();
    for claim in claims {
        if claim.gens() != p.gens() {
            return Err(GbError::Alg(AlgError::GenSetMismatch));
        }
        let (red, cert) = gb.certify(claim);
        let residual = gb.ctx.to_ncpoly(&red.rem);
        if red.rem.is_empty() && !red.inexact {
            let terms = gb.cert_terms(&cert);
            let replayed = replay(p.relations(), p.gens(), &terms);
            if &replayed == claim {
                out.push(ClaimResult { status: ClaimStatus::CertifiedZero, residual, certificate: terms });
                continue;
            }
        }
        out.push(ClaimResult {
            status: ClaimStatus::InconclusiveAt { n: gb.trunc() },
            residual,
            certificate: Vec::new(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterReport {
    pub dim: usize,
    pub elements: Vec<NcPoly>,
}

/// Solves `[x, g] = 0` for every non-central generator over the quotient basis.
pub fn center_basis(report: &QuotientReport, p: &Presentation) -> Result<CenterReport, GbError> {
    let DimStatus::Finite { certified_at, .. } = report.status else {
        return Err(GbError::NotFinite);
    };
    let gb = nc_complete(p, report.trunc)?;
    let (words, _) = gb.irreducible_words(certified_at as usize, WORD_CAP);
    let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let gens = p.gens();
    let n = words.len();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for g in gens.noncentral() {
        let gp = NcPoly::gen(gens, gens.name(g))?;
        let cols: Vec<Vec<Q>> = words
            .iter()
            .map(|w| {
                let b = NcPoly::term(gens, w.clone(), Q::one());
                gb.poly_vector(&b.commutator(&gp), &index)
            })
            .collect();
        for r in 0..n {
            rows.push(cols.iter().map(|c| c[r].clone()).collect());
        }
    }
    let null = linalg::nullspace(&rows, n);
    let elements = null
        .iter()
        .map(|v| NcPoly::from_terms(gens, words.iter().cloned().zip(v.iter().cloned())))
        .collect();
    Ok(CenterReport { dim: null.len(), elements })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPart {
    pub symmetric: NcPoly,
    pub alternating: NcPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticClassification {
    pub parts: Vec<QuadraticPart>,
    pub symmetric_span: usize,
    pub alternating_span: usize,
}

/// Splits the length-2 part of each relation (non-central letters only) into
/// symmetric and alternating tensors.
pub fn quadratic_classify(relations: &[NcPoly]) -> QuadraticClassification {
    let mut parts = Vec::new();
    let mut sym_rows = Vec::new();
    let mut alt_rows = Vec::new();
    let mut k = 0;
    for r in relations {
        let gens = r.gens();
        let nc = gens.noncentral();
        k = nc.len();
        let pos: HashMap<u8, usize> = nc.iter().enumerate().map(|(i, &g)| (g as u8, i)).collect();
        let mut m = vec![vec![Q::zero(); k]; k];
        for (w, c) in r.terms() {
            if w.len() == 2 && w.central_len(gens) == 0 {
                m[pos[&w.0[0]]][pos[&w.0[1]]] += c;
            }
        }
        let half = Q::new(1.into(), 2.into());
        let mut sym = NcPoly::zero(gens);
        let mut alt = NcPoly::zero(gens);
        let mut srow = Vec::with_capacity(k * k);
        let mut arow = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let s = (&m[i][j] + &m[j][i]) * &half;
                let a = (&m[i][j] - &m[j][i]) * &half;
                let w = Word(vec![nc[i] as u8, nc[j] as u8]);
                sym.add_term(w.clone(), s.clone());
                alt.add_term(w, a.clone());
                srow.push(s);
                arow.push(a);
            }
        }
        sym_rows.push(srow);
        alt_rows.push(arow);
        parts.push(QuadraticPart { symmetric: sym, alternating: alt });
    }
    QuadraticClassification {
        parts,
        symmetric_span: linalg::rank(&sym_rows, k * k),
        alternating_span: linalg::rank(&alt_rows, k * k),
    }
}

fn local_to_dim_status(s: &LocalStatus) -> DimStatus {
    match s {
        LocalStatus::Finite { dim, certified_at } => DimStatus::Finite { dim: *dim, certified_at: *certified_at },
        LocalStatus::NotFiniteUpTo(n) => DimStatus::NotFiniteUpTo { n: *n },
    }
}

/// Abelianization dimension through the NC engine, cross-checked commutatively.
pub fn abelianization_report(p: &Presentation, max_n: u32) -> Result<QuotientReport, GbError> {
    let ab = p.abelianized()?;
    let mut report = quotient_report(&ab, max_n)?;
    let vars = p.gens().varset();
    let images: Vec<_> = p.relations().iter().map(nc_abelianize).filter(|f| !f.is_zero()).collect();
    let (comm, _) = commpoly::local_dimension(&images, &vars, max_n)?;
    let comm = local_to_dim_status(&comm);
    let agree = match (&report.status, &comm) {
        (DimStatus::Finite { dim: a, .. }, DimStatus::Finite { dim: b, .. }) => a == b,
        (DimStatus::NotFiniteUpTo { .. }, DimStatus::NotFiniteUpTo { .. }) => true,
        _ => false,
    };
    if !agree {
        return Err(GbError::InternalConsistency(format!(
            "abelianization: noncommutative engine {:?}, commutative engine {:?}",
            report.status, comm
        )));
    }
    report.ab_dim_status = Some(comm);
    Ok(report)
}

/// All words of length below `n` over the given letters, canonicalized and deduplicated.
pub fn words_below(gens: &GenSet, n: usize) -> Vec<Word> {
    let mut set = BTreeSet::new();
    let mut frontier = vec![Vec::<usize>::new()];
    set.insert(Word::empty());
    for _ in 1..n {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..gens.len() {
                let mut v = w.clone();
                v.push(g);
                set.insert(Word::from_letters(gens, &v));
                next.push(v);
            }
        }
        frontier = next;
    }
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(gens: &GenSet, rels: &[&str], order: WordOrder) -> Presentation {
        let rels = rels.iter().map(|r| NcPoly::parse(r, gens).unwrap()).collect();
        Presentation::new(gens.clone(), rels, order).unwrap()
    }

    fn ab() -> GenSet {
        GenSet::plain(&["a", "b"]).unwrap()
    }

    fn leads(gb: &TruncatedGB) -> BTreeSet<String> {
        gb.leads().iter().map(|w| w.render(gb.gens())).collect()
    }

    #[test]
    fn laufer_one_leads() {
        let p = pres(&ab(), &["a*b + b*a", "a^2 + b^3"], WordOrder::Deglex);
        let gb = nc_complete(&p, 8).unwrap();
        let expect: BTreeSet<String> = ["b*a", "a^2", "a*b^3", "b^6"].iter().map(|s| s.to_string()).collect();
        assert_eq!(leads(&gb), expect);
    }

    #[test]
    fn single_generator_relation() {
        let g = GenSet::plain(&["a"]).unwrap();
        let p = pres(&g, &["a"], WordOrder::Deglex);
        let gb = nc_complete(&p, 4).unwrap();
        let rules = gb.rules();
        assert_eq!(rules.len(), 1);
        assert!(rules[0].tail.is_zero());
        let r = quotient_report(&p, 6).unwrap();
        assert_eq!(r.status.dim(), Some(1));
    }

    #[test]
    fn reduce_examples() {
        let p = pres(&ab(), &["b*a + a*b"], WordOrder::Deglex);
        let gb = nc_complete(&p, 6).unwrap();
        let ba = NcPoly::parse("b*a", &ab()).unwrap();
        assert_eq!(nc_reduce(&ba, &gb).normal_form, NcPoly::parse("-a*b", &ab()).unwrap());
        let p = pres(&ab(), &["b^3"], WordOrder::Deglex);
        let gb = nc_complete(&p, 10).unwrap();
        let r = nc_reduce(&NcPoly::parse("b^12", &ab()).unwrap(), &gb);
        assert!(r.normal_form.is_zero());
        assert!(r.truncated);
    }

    #[test]
    fn remark_pair() {
        let fin = pres(&ab(), &["a*b + b*a", "a^2 + b^2 + b^3"], WordOrder::Deglex);
        assert_eq!(quotient_report(&fin, 20).unwrap().status.dim(), Some(8));
        let inf = pres(&ab(), &["a*b + b*a", "a^2 + b^2"], WordOrder::Deglex);
        assert_eq!(quotient_report(&inf, 20).unwrap().status, DimStatus::NotFiniteUpTo { n: 20 });
    }

    #[test]
    fn central_relation_forces_commutation() {
        let g = GenSet::new(&["b", "c", "u"], &[1, 1, 2], &[false, false, true]).unwrap();
        let p = pres(&g, &["b^2 - u"], WordOrder::Wdeglex);
        let res = derive_check(&p, &[NcPoly::parse("b^2*c - c*b^2", &g).unwrap()], 6).unwrap();
        assert_eq!(res[0].status, ClaimStatus::CertifiedZero);
    }

    #[test]
    fn free_central_parameter_is_reported() {
        let g = GenSet::new(&["a", "t"], &[1, 1], &[false, true]).unwrap();
        let p = pres(&g, &["a^2"], WordOrder::Deglex);
        assert!(matches!(quotient_report(&p, 8), Err(GbError::DimensionUndefined { .. })));
    }

    #[test]
    fn center_of_truncated_polynomial_ring() {
        let g = GenSet::plain(&["a"]).unwrap();
        let p = pres(&g, &["a^3"], WordOrder::Deglex);
        let r = quotient_report(&p, 8).unwrap();
        assert_eq!(center_basis(&r, &p).unwrap().dim, 3);
    }

    #[test]
    fn quadratic_parts() {
        let g = ab();
        let q = quadratic_classify(&[NcPoly::parse("a*b", &g).unwrap()]);
        assert_eq!(q.parts[0].symmetric, NcPoly::parse("1/2*a*b + 1/2*b*a", &g).unwrap());
        assert_eq!(q.parts[0].alternating, NcPoly::parse("1/2*a*b - 1/2*b*a", &g).unwrap());
    }
}
