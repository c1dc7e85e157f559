#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use ncdef::cli::presentation_parse;
use ncdef::commpoly::{CommPoly, VarSet};
use ncdef::freealg::{GenSet, NcPoly, Word, WordOrder};
use ncdef::ncgb::{nc_complete, Presentation};
use ncdef::rational::{q, Q};
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

/// Every `.pres` fixture, sorted by file name.
pub fn corpus() -> Vec<(String, Presentation)> {
    let mut paths: Vec<_> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pres"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, presentation_parse(&text).unwrap())
        })
        .collect()
}

/// Words with central letters collected in front, of length below `n`.
pub fn canonical_words(gens: &GenSet, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 1..n {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..gens.len() {
                let x = w.concat(&Word::from_letters(gens, &[g]), gens);
                next.push(x);
            }
        }
        next.sort();
        next.dedup();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out.dedup();
    out
}

fn noncentral_words(gens: &GenSet, n: usize) -> Vec<Word> {
    let nc = gens.noncentral();
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in &nc {
                let mut l = w.0.clone();
                l.push(g as u8);
                next.push(Word(l));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Sparse row echelon over Q; returns the rank of the inserted rows.
#[derive(Default)]
pub struct SparseSpan {
    pivots: HashMap<usize, BTreeMap<usize, Q>>,
}

impl SparseSpan {
    pub fn insert(&mut self, mut row: BTreeMap<usize, Q>) -> bool {
        while let Some((&c, v)) = row.iter().next_back() {
            let v = v.clone();
            match self.pivots.get(&c) {
                Some(p) => {
                    for (k, x) in p {
                        let e = row.entry(*k).or_insert_with(Q::zero);
                        *e -= &v * x;
                        if e.is_zero() {
                            row.remove(k);
                        }
                    }
                }
                None => {
                    let inv = Q::one() / v;
                    for x in row.values_mut() {
                        *x *= &inv;
                    }
                    self.pivots.insert(c, row);
                    return true;
                }
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// `dim k<gens>/(I + m^n)` by brute-force row reduction of `u r v` products.
pub fn brute_force_dim(p: &Presentation, n: usize) -> usize {
    let gens = p.gens();
    let words = canonical_words(gens, n);
    let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut span = SparseSpan::default();
    for r in p.relations() {
        let low = r.terms().keys().map(Word::len).min().unwrap_or(0);
        if low >= n {
            continue;
        }
        let room = n - 1 - low;
        let rights = noncentral_words(gens, room);
        for u in words.iter().filter(|u| u.len() <= room) {
            for v in rights.iter().filter(|v| u.len() + v.len() <= room) {
                let f = &(&NcPoly::term(gens, u.clone(), Q::one()) * r) * &NcPoly::term(gens, v.clone(), Q::one());
                let row: BTreeMap<usize, Q> =
                    f.terms().iter().filter(|(w, _)| w.len() < n).map(|(w, c)| (index[w], c.clone())).collect();
                if !row.is_empty() {
                    span.insert(row);
                }
            }
        }
    }
    words.len() - span.rank()
}

/// `|B_n|` from the completion engine.
pub fn engine_dim(p: &Presentation, n: usize) -> usize {
    if n == 1 {
        return 1;
    }
    let gb = nc_complete(p, n as u32).unwrap();
    *gb.basis_counts(2_000_000).unwrap().last().unwrap()
}

pub fn nc_gens() -> GenSet {
    GenSet::new(&["a", "b", "t"], &[1, 1, 1], &[false, false, true]).unwrap()
}

pub fn nc_poly(gens: GenSet, letters: usize, max_len: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((prop::collection::vec(0..letters, 0..=max_len), -3i64..=3), 0..5).prop_map(move |ts| {
        NcPoly::from_terms(&gens, ts.into_iter().map(|(l, c)| (Word::from_letters(&gens, &l), q(c))))
    })
}

pub fn comm_poly(vars: VarSet) -> impl Strategy<Value = CommPoly> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0u32..3, n), -3i64..=3), 0..5)
        .prop_map(move |ts| CommPoly::from_terms(&vars, ts.into_iter().map(|(e, c)| (e, q(c)))))
}

/// Two non-central letters, one to three relations of length 2 or 3.
pub fn small_presentation() -> impl Strategy<Value = Presentation> {
    let g = GenSet::plain(&["a", "b"]).unwrap();
    let term = (prop::collection::vec(0usize..2, 2..=3), prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)]);
    prop::collection::vec(prop::collection::vec(term, 1..=3), 1..=3).prop_filter_map("zero relation", move |rs| {
        let rels: Vec<NcPoly> = rs
            .into_iter()
            .map(|ts| NcPoly::from_terms(&g, ts.into_iter().map(|(l, c)| (Word::from_letters(&g, &l), q(c)))))
            .collect();
        Presentation::new(g.clone(), rels, WordOrder::Deglex).ok()
    })
}
