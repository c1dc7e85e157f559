mod common;

use std::collections::{BTreeMap, HashMap};

use ncdef::commpoly::{
    cp_groebner, cp_normal_form, cp_quotient_basis, j0_generators, j0_weights, monomials_of_degree, BasisStatus,
    CommPoly, MonomialOrder,
};
use ncdef::freealg::{NcPoly, Word};
use ncdef::ncgb::{abelianization_report, derive_check, quotient_report, replay, ClaimStatus};
use ncdef::rational::q;
use ncdef::report::all_pass;
use ncdef::zoo::*;

use common::SparseSpan;

fn laufer_words(n: u32) -> Vec<Word> {
    let p = laufer_a(n, 0).unwrap();
    let mut out = Vec::new();
    for s in 0..=2usize {
        for t in 0..=(2 * n as usize) {
            let mut l = vec![0usize; s];
            l.extend(vec![1usize; t]);
            out.push(Word::from_letters(p.gens(), &l));
        }
    }
    out.sort();
    out
}

#[test]
fn laufer_dimensions_and_basis() {
    for n in 1..=3 {
        let p = laufer_a(n, 0).unwrap();
        let r = quotient_report(&p, laufer_default_max(n)).unwrap();
        assert_eq!(r.status.dim(), Some((6 * n + 3) as usize), "n={n}");
        let mut got = r.basis.clone();
        got.sort();
        assert_eq!(got, laufer_words(n), "n={n}");
    }
}

#[test]
fn abelianization_dimensions() {
    for n in 1..=3u32 {
        for i in 0..=2 * n {
            let want = if (1..=n).contains(&i) { 2 + 2 * i } else { 2 * n + 3 };
            let r = abelianization_report(&laufer_a(n, i).unwrap(), laufer_default_max(n)).unwrap();
            assert_eq!(r.status.dim(), Some(want as usize), "n={n} i={i}");
        }
    }
}

#[test]
fn invariant_tables() {
    let t = invariant_table(1, laufer_default_max(1)).unwrap();
    assert!(all_pass(&t.checks), "{:?}", t.checks);
    assert_eq!(t.rows[0].weight_list, Some(vec![0, 2, 3, 4, 5, 6, 7, 8, 10]));
    let t = invariant_table(2, laufer_default_max(2)).unwrap();
    assert!(all_pass(&t.checks), "{:?}", t.checks);
    let dims: Vec<_> = [0, 3, 4].iter().map(|&i| t.rows[i].dim.dim()).collect();
    assert_eq!(dims, vec![Some(15); 3]);
}

#[test]
fn universal_and_specialization() {
    let checks = length2_universal_suite(8).unwrap();
    assert!(all_pass(&checks), "{checks:?}");
    for n in 1..=2 {
        let mut l = vec![q(0); 2 * n as usize];
        let checks = laufer_specialization_check(n, &l, 10).unwrap();
        assert!(all_pass(&checks), "{checks:?}");
        l[0] = q(1);
        let checks = laufer_specialization_check(n, &l, 10).unwrap();
        assert!(all_pass(&checks), "{checks:?}");
    }
}

#[test]
fn higher_length_forward_certificates_replay() {
    for l in 2..=4 {
        let k = karmazyn(l).unwrap();
        let g = k.presentation.gens().clone();
        let claims: Vec<NcPoly> = k.claims.iter().map(|c| c.readings[0].1.embed(&g).unwrap()).collect();
        for (c, r) in claims.iter().zip(derive_check(&k.presentation, &claims, 10).unwrap()) {
            assert_eq!(r.status, ClaimStatus::CertifiedZero, "l={l} {c}");
            assert_eq!(&replay(k.presentation.relations(), &g, &r.certificate), c);
        }
    }
}

#[test]
fn higher_lengths_verify() {
    for l in 2..=5 {
        let r = verify_higher_length(l, 10).unwrap();
        assert!(r.forward_ok() && r.backward_ok(), "l={l}: {r:?}");
        assert!(r.typo_mismatch.is_empty(), "l={l}");
    }
    let r = verify_higher_length(6, 10).unwrap();
    assert!(r.forward_ok() && r.backward_ok(), "{r:?}");
    assert_eq!(r.typo_mismatch.len(), 2);
    let long = &r.forward[2];
    assert_eq!(long.certified_reading(), Some("recomputed [b, E2]"));
}

/// `dim k[x,y,z,w]/(J_0 + m^d)` by row reduction of monomial multiples.
fn j0_brute_force(n: u32, d: u32) -> usize {
    let (vars, gens) = j0_generators(n);
    let mut cols: HashMap<Vec<u32>, usize> = HashMap::new();
    for k in 0..d {
        for e in monomials_of_degree(4, k) {
            let i = cols.len();
            cols.insert(e, i);
        }
    }
    let mut span = SparseSpan::default();
    for g in &gens {
        for k in 0..d {
            for e in monomials_of_degree(4, k) {
                let f = &CommPoly::monomial(&vars, e, q(1)) * g;
                let row: BTreeMap<usize, _> =
                    f.terms().iter().filter_map(|(m, c)| cols.get(m).map(|&i| (i, c.clone()))).collect();
                if !row.is_empty() {
                    span.insert(row);
                }
            }
        }
    }
    cols.len() - span.rank()
}

#[test]
fn jacobian_quotient_matches_linear_algebra() {
    for n in 1..=2u32 {
        let (_, gens) = j0_generators(n);
        let gb = cp_groebner(&gens, &MonomialOrder::weighted(j0_weights(n)).unwrap()).unwrap();
        let qb = cp_quotient_basis(&gb, 4 * n + 6);
        let BasisStatus::Finite { dim } = qb.status else { panic!("n={n}: {:?}", qb.status) };
        let top = 4 * n + 6;
        assert_eq!(j0_brute_force(n, top), j0_brute_force(n, top + 1), "n={n} not stable");
        assert_eq!(dim, j0_brute_force(n, top), "n={n}");
        assert_eq!(dim, (6 * n + 5) as usize);
    }
}

#[test]
fn jacobian_reductions_n1() {
    let (vars, gens) = j0_generators(1);
    let gb = cp_groebner(&gens, &MonomialOrder::weighted(j0_weights(1)).unwrap()).unwrap();
    for m in ["y*w^3", "w^6", "y^3", "z^3"] {
        assert!(cp_normal_form(&CommPoly::parse(m, &vars).unwrap(), &gb).is_zero(), "{m}");
    }
    let qb = cp_quotient_basis(&gb, 10);
    let rendered: Vec<String> =
        qb.monomials.iter().map(|e| CommPoly::monomial(&vars, e.clone(), q(1)).to_string()).collect();
    let mut rendered = rendered;
    rendered.sort();
    let mut want: Vec<String> = ["1", "w", "w^2", "w^3", "w^4", "w^5", "z", "z^2", "y", "y*w", "y*z"]
        .iter()
        .map(|s| CommPoly::parse(s, &vars).unwrap().to_string())
        .collect();
    want.sort();
    assert_eq!(rendered, want);
}
