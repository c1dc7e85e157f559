//! Presentations of the deformation algebras and their verification suites.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::commpoly::{cp_groebner, cp_normal_form, monomials_of_degree, CommPoly, MonomialOrder};
use crate::freealg::{nc_abelianize, AlgError, GenSet, NcPoly, WordOrder};
use crate::ncgb::{
    abelianization_report, center_basis, derive_check, derive_with, nc_complete, nc_complete_with, nc_reduce,
    quadratic_classify, quotient_report, ClaimStatus, CompletionOptions, DimStatus, GbError, Presentation,
};
use crate::rational::{q, Q};
use crate::report::{Check, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZooError {
    #[error("lambda needs {expected} entries, got {got}")]
    LambdaLength { expected: usize, got: usize },
    #[error("n must be at least 1")]
    BadN,
    #[error("length must be in {min}..=6, got {got}")]
    BadLength { min: u32, got: u32 },
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// A deformation parameter: a rational value or a free central symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lambda {
    Value(Q),
    Symbolic,
}

pub fn laufer_default_max(n: u32) -> u32 {
    4 * n + 6
}

fn laufer_relation_text(n: u32, lambda: &[Lambda]) -> String {
    let mut s = format!("a^2 + b^{}", 2 * n + 1);
    for (i, l) in lambda.iter().enumerate() {
        let i = i + 1;
        match l {
            Lambda::Value(v) if v.is_zero() => {}
            Lambda::Value(v) if crate::rational::is_one(v) => s.push_str(&format!(" + b^{}", 2 * i)),
            Lambda::Value(v) => s.push_str(&format!(" + ({v})*b^{}", 2 * i)),
            Lambda::Symbolic => s.push_str(&format!(" + l{i}*b^{}", 2 * i)),
        }
    }
    s
}

/// `k<a,b>/(ab + ba, a^2 + b^(2n+1) + sum l_i b^(2i))`, weights `(2n+1, 2)`.
pub fn laufer_presentation_with(n: u32, lambda: &[Lambda]) -> Result<Presentation, ZooError> {
    if n == 0 {
        return Err(ZooError::BadN);
    }
    if lambda.len() != 2 * n as usize {
        return Err(ZooError::LambdaLength { expected: 2 * n as usize, got: lambda.len() });
    }
    let mut names = vec!["a".to_string(), "b".to_string()];
    let mut weights = vec![2 * n + 1, 2];
    let mut central = vec![false, false];
    for (i, l) in lambda.iter().enumerate() {
        if *l == Lambda::Symbolic {
            names.push(format!("l{}", i + 1));
            weights.push(1);
            central.push(true);
        }
    }
    let gens = GenSet::new(&names, &weights, &central)?;
    let rels = vec![NcPoly::parse("a*b + b*a", &gens)?, NcPoly::parse(&laufer_relation_text(n, lambda), &gens)?];
    Ok(Presentation::new(gens, rels, WordOrder::Wdeglex)?)
}

pub fn laufer_presentation(n: u32, lambda: &[Q]) -> Result<Presentation, ZooError> {
    let l: Vec<Lambda> = lambda.iter().cloned().map(Lambda::Value).collect();
    laufer_presentation_with(n, &l)
}

/// The algebra `A_i`: `lambda = e_i`, or all zero for `i = 0`.
pub fn laufer_a(n: u32, i: u32) -> Result<Presentation, ZooError> {
    let mut l = vec![Q::zero(); 2 * n as usize];
    if i > 0 {
        l[i as usize - 1] = q(1);
    }
    laufer_presentation(n, &l)
}

fn status_of(s: &ClaimStatus) -> Status {
    match s {
        ClaimStatus::CertifiedZero => Status::Pass,
        ClaimStatus::InconclusiveAt { .. } => Status::Inconclusive,
    }
}

fn claim_checks(prefix: &str, names: &[String], results: &[crate::ncgb::ClaimResult]) -> Vec<Check> {
    names
        .iter()
        .zip(results)
        .map(|(n, r)| {
            let detail = match &r.status {
                ClaimStatus::CertifiedZero => format!("{} certificate terms", r.certificate.len()),
                ClaimStatus::InconclusiveAt { n: bound } => format!("residual {} at N={bound}", r.residual),
            };
            Check::new(format!("{prefix}: {n}"), status_of(&r.status), detail)
        })
        .collect()
}

/// Which algebra to build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZooSpec {
    Laufer { n: u32, lambda: Vec<Lambda> },
    Length2Universal,
    Length2Scheme,
    Karmazyn { length: u32 },
}

impl ZooSpec {
    pub fn presentation(&self) -> Result<Presentation, ZooError> {
        match self {
            ZooSpec::Laufer { n, lambda } => laufer_presentation_with(*n, lambda),
            ZooSpec::Length2Universal => Ok(length2_claimed_presentation()),
            ZooSpec::Length2Scheme => Ok(length2_scheme_presentation()),
            ZooSpec::Karmazyn { length } => karmazyn_contraction_presentation(*length),
        }
    }
}

/// Commutative on `u, v, w` with no relations. Recorded only; nothing is computed from it.
pub fn length2_scheme_presentation() -> Presentation {
    let g = GenSet::commutative(&["u", "v", "w"], &[1, 1, 1], &[true, true, true]).expect("fixed names");
    Presentation::new(g, vec![], WordOrder::Deglex).expect("valid")
}

/// Generators `a, b` and central `t` of the length-two universal algebra.
pub fn length2_gens() -> GenSet {
    GenSet::new(&["a", "b", "t"], &[1, 1, 1], &[false, false, true]).expect("fixed names")
}

pub fn length2_claimed() -> Vec<&'static str> {
    vec!["t*a*b - t*b*a", "a*b^2 - b^2*a", "a^2*b - b*a^2"]
}

/// The central elements `u, w, v, y, z, x` rewritten in `a, b, t`.
pub fn length2_central_elements() -> Vec<(&'static str, &'static str)> {
    vec![
        ("u", "-a^2"),
        ("w", "-b^2"),
        ("v", "-1/2*(a*b + b*a)"),
        ("y", "t*b"),
        ("z", "-t*a"),
        ("x", "-t*b*a + 1/2*(a*b + b*a)*t"),
    ]
}

fn centrality_relations(gens: &GenSet, elems: &[NcPoly]) -> Result<(Vec<String>, Vec<NcPoly>), ZooError> {
    let mut names = Vec::new();
    let mut rels = Vec::new();
    for (k, e) in elems.iter().enumerate() {
        for g in gens.noncentral() {
            let gp = NcPoly::gen(gens, gens.name(g))?;
            let c = e.commutator(&gp);
            if !c.is_zero() {
                names.push(format!("[E{k}, {}]", gens.name(g)));
                rels.push(c);
            }
        }
    }
    Ok((names, rels))
}

pub fn length2_claimed_presentation() -> Presentation {
    let g = length2_gens();
    let rels = length2_claimed().iter().map(|s| NcPoly::parse(s, &g).unwrap()).collect();
    Presentation::new(g, rels, WordOrder::Deglex).expect("valid")
}

/// Both derivation directions, abelianization, and the versal equations.
pub fn length2_universal_suite(trunc: u32) -> Result<Vec<Check>, ZooError> {
    let g = length2_gens();
    let claimed = length2_claimed_presentation();
    let elems: Vec<NcPoly> =
        length2_central_elements().iter().map(|(_, s)| NcPoly::parse(s, &g)).collect::<Result<_, _>>()?;
    let (cnames, crels) = centrality_relations(&g, &elems)?;
    let derived = Presentation::new(g.clone(), crels.clone(), WordOrder::Deglex)?;
    let mut out = Vec::new();
    let fwd = derive_check(&derived, claimed.relations(), trunc)?;
    let names: Vec<String> = length2_claimed().iter().map(|s| s.to_string()).collect();
    out.extend(claim_checks("forward", &names, &fwd));
    let bwd = derive_check(&claimed, &crels, trunc)?;
    let labels: Vec<String> = cnames
        .iter()
        .map(|n| {
            let k: usize = n[2..n.find(',').unwrap()].parse().unwrap();
            n.replace(&format!("E{k}"), length2_central_elements()[k].0)
        })
        .collect();
    out.extend(claim_checks("backward", &labels, &bwd));
    for (s, r) in length2_claimed().iter().zip(claimed.relations()) {
        let img = nc_abelianize(r);
        out.push(Check::from_bool(format!("abelianizes to 0: {s}"), img.is_zero(), img.to_string()));
    }
    let ab_gens: Vec<CommPoly> =
        claimed.relations().iter().map(nc_abelianize).filter(|f| !f.is_zero()).collect();
    let vars = g.varset();
    let gb = if ab_gens.is_empty() { None } else { Some(cp_groebner(&ab_gens, &MonomialOrder::graded(vars.len())).unwrap()) };
    let val: BTreeMap<&str, NcPoly> = length2_central_elements()
        .iter()
        .map(|(n, s)| (*n, NcPoly::parse(s, &g).unwrap()))
        .collect();
    let t = NcPoly::gen(&g, "t")?;
    let s1 = [
        ("x", val["x"].clone()),
        ("uw - v^2", &(&val["u"] * &val["w"]) - &(&val["v"] * &val["v"])),
        ("uy + vz", &(&val["u"] * &val["y"]) + &(&val["v"] * &val["z"])),
        ("z^2 + ut^2", &(&val["z"] * &val["z"]) + &(&(&val["u"] * &t) * &t)),
        ("y^2 + wt^2", &(&val["y"] * &val["y"]) + &(&(&val["w"] * &t) * &t)),
    ];
    for (name, f) in s1 {
        let img = nc_abelianize(&f);
        let nf = match &gb {
            Some(gb) => cp_normal_form(&img, gb),
            None => img,
        };
        out.push(Check::from_bool(format!("vanishes in the abelianization: {name}"), nf.is_zero(), nf.to_string()));
    }
    let gb8 = nc_complete(&claimed, trunc.max(8))?;
    let tab = NcPoly::parse("t*a*b", &g)?;
    let tba = NcPoly::parse("t*b*a", &g)?;
    let same = nc_reduce(&tab, &gb8).normal_form == nc_reduce(&tba, &gb8).normal_form;
    out.push(Check::from_bool("tab and tba share a normal form", same, ""));
    let (qs, qa) = length2_commutator_classification();
    out.push(Check::from_bool(
        "central-commutator relations are alternating",
        qs == 0 && qa == 2,
        format!("sym {qs} alt {qa}"),
    ));
    Ok(out)
}

/// `{at - ta, bt - tb}` with `t` taken non-central; returns (symmetric, alternating) span dims.
pub fn length2_commutator_classification() -> (usize, usize) {
    let g = GenSet::plain(&["a", "b", "t"]).expect("fixed names");
    let rels = [NcPoly::parse("a*t - t*a", &g).unwrap(), NcPoly::parse("b*t - t*b", &g).unwrap()];
    let c = quadratic_classify(&rels);
    (c.symmetric_span, c.alternating_span)
}

/// Universal relations specialized by `t = b^(2n)`, `v = 0` and the Laufer substitution.
pub fn laufer_specialization_presentation(n: u32, lambda: &[Q]) -> Result<Presentation, ZooError> {
    if lambda.len() != 2 * n as usize {
        return Err(ZooError::LambdaLength { expected: 2 * n as usize, got: lambda.len() });
    }
    let g = GenSet::new(&["a", "b", "t"], &[2 * n + 1, 2, 4 * n], &[false, false, true])?;
    let mut rels: Vec<NcPoly> = length2_claimed().iter().map(|s| NcPoly::parse(s, &g)).collect::<Result<_, _>>()?;
    rels.push(NcPoly::parse(&format!("t - b^{}", 2 * n), &g)?);
    rels.push(NcPoly::parse("a*b + b*a", &g)?);
    let mut sq = "a^2 + t*b".to_string();
    for (i, l) in lambda.iter().enumerate() {
        if !l.is_zero() {
            sq.push_str(&format!(" + ({l})*b^{}", 2 * (i + 1)));
        }
    }
    rels.push(NcPoly::parse(&sq, &g)?);
    Ok(Presentation::new(g, rels, WordOrder::Wdeglex)?)
}

pub fn laufer_specialization_check(n: u32, lambda: &[Q], trunc: u32) -> Result<Vec<Check>, ZooError> {
    let p = laufer_specialization_presentation(n, lambda)?;
    let g = p.gens().clone();
    let lam: Vec<Lambda> = lambda.iter().cloned().map(Lambda::Value).collect();
    let texts = vec![
        "a*b + b*a".to_string(),
        laufer_relation_text(n, &lam),
        format!("a*b^{}", 2 * n + 1),
        "t*a*b".to_string(),
        "t*b*a".to_string(),
    ];
    let claims: Vec<NcPoly> = texts.iter().map(|s| NcPoly::parse(s, &g)).collect::<Result<_, _>>()?;
    let res = derive_check(&p, &claims, trunc)?;
    Ok(claim_checks(&format!("specialization n={n}"), &texts, &res))
}

/// One claimed relation with its alternative readings, as text over the claim generators.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimSpec {
    pub name: String,
    pub readings: Vec<(String, NcPoly)>,
}

/// Eliminated contraction-algebra presentation for a given length.
#[derive(Debug, Clone, PartialEq)]
pub struct Karmazyn {
    pub length: u32,
    pub presentation: Presentation,
    pub claim_gens: GenSet,
    pub eliminated: Vec<(String, NcPoly)>,
    pub claims: Vec<ClaimSpec>,
}

struct KData {
    central: Vec<(&'static str, u32)>,
    surviving: &'static [&'static str],
    c_weight: u32,
    d: &'static str,
    relations: Vec<&'static str>,
    eliminated: Vec<&'static str>,
    claims: Vec<(&'static str, Vec<(&'static str, &'static str)>)>,
    /// Claims recomputed as `[x, E]` for the listed eliminated expression index and letter.
    recomputed: Vec<(usize, usize, &'static str)>,
}

const L6_STATEMENT: &str = "(-5/1296*t^4 + 1/12*t^2*u7 + 1/3*t*u6 + u5)*(b*c - c*b) \
 + (5/108*t^3 - 1/2*t - u6)*(b^2*c - c*b^2 + b*c^2 - c^2*b) \
 + (-5/18*t^2 + 1/6*u7)*(b^3*c - c*b^3 + b^2*c^2 - c^2*b^2 + b*c*b*c - c*b*c*b + b*c^3 - c^3*b) \
 + 5/6*t*(c^4*b - b*c^4 + c^3*b^2 - b^2*c^3 + c^2*b*c*b - b*c*b*c^2 + c*b*c^2*b - b*c^2*b*c \
 + c^2*b^3 - b^3*c^2 + c*b*c*b^2 - b*c*b^2*c + c*b^2*c*b - b^2*c*b*c + c*b^4 - b^4*c) \
 - (b^5*c - c*b^5) \
 + (b^4*c^2 - c^2*b^4 + b^3*c*b*c - c*b*c*b^3 + b*c*b^3*c - c*b^3*c*b + b^2*c*b^2*c - c*b^2*c*b^2) \
 + (b^3*c^3 - c^3*b^3 + b^2*c*b*c^2 - c*b*c^2*b^2 + b^2*c^2*b*c - c^2*b*c*b^2 + b*c*b^2*c^2 - c*b^2*c^2*b \
 + b*c^2*b^2*c - c^2*b^2*c*b + b*c*b*c*b*c - c*b*c*b*c*b) \
 + (b^2*c^4 - c^4*b^2 + b*c*b*c^3 - c*b*c^3*b + b*c^2*b*c^2 - c^2*b*c^2*b + b*c^3*b*c - c^3*b*c*b) \
 + (b*c^5 - c^5*b)";

const L6_PROOF: &str = "(-5/1296*t^4 + 1/12*t^2*u7 + 1/3*t*u6 + u5)*(b*c - c*b) \
 + (5/108*t^3 - 1/2*t - u6)*(b^2*c - b*c*b + b*c^2 - c^2*b) \
 + (-5/18*t^2 + 1/6*u7)*(b^3*c - c*b^3 + b^2*c^2 - c^2*b^2 + b*c*b*c - c*b*c*b + b*c^3 - c^3*b) \
 + 5/6*t*(c^4*b - b*c^4 + c^3*b^2 - b^2*c^3 + c^2*b*c*b - b*c*b*c^2 + c*b*c^2*b - b*c^2*b*c \
 + c^2*b^3 - b^3*c^2 + c*b*c*b^2 - b*c*b^2*c + c*b^2*c*b - b^2*c*b*c + c*b^4 - b^4*c) \
 - (b^5*c - c*b^5) \
 + (b^4*c^2 - c^2*b^4 + b^3*c*b*c - c*b*c*b^3 + b*c*b^3*c - c*b^3*c*b + b^2*c*b^2*c - c*b^2*c*b^2) \
 + (b^3*c^3 - c^3*b^3 + b^2*c*b*c^2 - c*b*c^2*b^2 + b^2*c^2*b*c - c^2*b*c*b^2 + b*c*b^2*c^2 - c*b^2*c^2*b \
 + b*c^2*b^2*c - c^2*b^2*c*b + b*c*b*c*b*c - c*b*c*b*c*b) \
 + (b*c^4 - c^4*b + b*c*b*c^3 - c*b*c^3*b + b*c^2*b*c^2 - c^2*b*c^2*b + b*c^3*b*c - c^3*b*c*b) \
 + (b*c^5 - c^5*b)";

fn kdata(l: u32) -> KData {
    match l {
        2 => KData {
            central: vec![("t", 1), ("u1", 2), ("u2", 2), ("u3", 2)],
            surviving: &["t"],
            c_weight: 1,
            d: "(1/2*t - b - c)",
            relations: vec!["b^2 - u1", "c^2 - u2", "D^2 - u3"],
            eliminated: vec!["b^2", "c^2", "D^2"],
            claims: vec![
                ("tbc - tcb", vec![("statement", "t*b*c - t*c*b")]),
                ("bc^2 - c^2b", vec![("statement", "b*c^2 - c^2*b")]),
                ("b^2c - cb^2", vec![("statement", "b^2*c - c*b^2")]),
            ],
            recomputed: vec![],
        },
        3 => KData {
            central: vec![("t", 1), ("u1", 3), ("u2", 2), ("u3", 3), ("u4", 2), ("u5", 2)],
            surviving: &["t", "u2", "u4"],
            c_weight: 1,
            d: "(1/3*t - b - c)",
            relations: vec!["b^3 - u2*b - u1", "c^3 - u4*c - u3", "D^2 - u5"],
            eliminated: vec!["b^3 - u2*b", "c^3 - u4*c", "D^2"],
            claims: vec![
                ("u2[b,c] - [b^3,c]", vec![("statement", "u2*(b*c - c*b) - (b^3*c - c*b^3)")]),
                ("u4[b,c] - [b,c^3]", vec![("statement", "u4*(b*c - c*b) - (b*c^3 - c^3*b)")]),
                (
                    "3[b,c^2] + 3[b^2,c] - 2t[b,c]",
                    vec![("statement", "3*(b*c^2 - c^2*b) + 3*(b^2*c - c*b^2) - 2*(t*b*c - t*c*b)")],
                ),
            ],
            recomputed: vec![],
        },
        4 => KData {
            central: vec![("t", 1), ("u1", 2), ("u2", 4), ("u3", 3), ("u4", 2), ("u5", 3), ("u6", 2)],
            surviving: &["t", "u3", "u4", "u6"],
            c_weight: 1,
            d: "(1/4*t - b - c)",
            relations: vec!["b^2 - u1", "c^4 - u4*c^2 - u3*c - u2", "D^3 - u6*D - u5"],
            eliminated: vec!["b^2", "c^4 - u4*c^2 - u3*c", "D^3 - u6*D"],
            claims: vec![
                ("b^2c - cb^2", vec![("statement", "b^2*c - c*b^2")]),
                (
                    "u3[b,c] + u4[b,c^2] - [b,c^4]",
                    vec![("statement", "u3*(b*c - c*b) + u4*(b*c^2 - c^2*b) - (b*c^4 - c^4*b)")],
                ),
                (
                    "(16u6 - 3t^2)[b,c] + 12t[b,c^2] - 16(...)",
                    vec![(
                        "statement",
                        "(16*u6 - 3*t^2)*(b*c - c*b) + 12*t*(b*c^2 - c^2*b) \
                         - 16*(b^3*c - c*b^3 + b^2*c^2 - c^2*b^2 + b*c*b*c - c*b*c*b - c^3*b + b*c^3)",
                    )],
                ),
            ],
            recomputed: vec![],
        },
        5 => KData {
            central: vec![("t", 1), ("u1", 4), ("u2", 3), ("u3", 2), ("u4", 5), ("u5", 4), ("u6", 3), ("u7", 2)],
            surviving: &["t", "u2", "u3", "u6", "u7"],
            c_weight: 2,
            d: "(1/5*t + b)",
            relations: vec![
                "c*b*c + b*c^2 + b^3*c + u7*b*c + u6*c + u4",
                "(c + b^2)^2 + b*c*b + u7*(c + b^2) + u6*b + u5",
                "D^4 - u3*D^2 - u2*D - u1",
            ],
            eliminated: vec![
                "c*b*c + b*c^2 + b^3*c + u7*b*c + u6*c",
                "(c + b^2)^2 + b*c*b + u7*(c + b^2) + u6*b",
                "D^4 - u3*D^2 - u2*D",
            ],
            claims: vec![
                (
                    "u7[b,c] + [b,c^2] + [b^3,c]",
                    vec![("statement", "u7*(b*c - c*b) + (b*c^2 - c^2*b) + (b^3*c - c*b^3)")],
                ),
                (
                    "u6[b,c] + u7(b^2c - bcb) + ...",
                    vec![(
                        "statement",
                        "u6*(b*c - c*b) + u7*(b^2*c - b*c*b) + (b*c*b*c - c*b*c*b) + (b^2*c^2 - b*c^2*b) + (b^4*c - b^3*c*b)",
                    )],
                ),
                (
                    "u2[b,c] + u3(...) - ... - [b^4,c]",
                    vec![(
                        "statement read with b^3c - cb^3",
                        "u2*(b*c - c*b) + u3*(b^2*c - c*b^2 + 2/5*t*(b*c - c*b)) - 4/125*t^3*(b*c - c*b) \
                         - 6/25*t^2*(b^2*c - c*b^2) - 4/5*t*(b^3*c - c*b^3) - (b^4*c - c*b^4)",
                    )],
                ),
            ],
            recomputed: vec![(1, 0, "b"), (0, 1, "b"), (2, 2, "c")],
        },
        _ => KData {
            central: vec![
                ("t", 1),
                ("u1", 2),
                ("u2", 3),
                ("u3", 2),
                ("u4", 5),
                ("u5", 4),
                ("u6", 3),
                ("u7", 2),
            ],
            surviving: &["t", "u3", "u5", "u6", "u7"],
            c_weight: 1,
            d: "(1/6*t - b - c)",
            relations: vec!["b^2 - u1", "c^3 - u3*c - u2", "D^5 - u7*D^3 - u6*D^2 - u5*D - u4"],
            eliminated: vec!["b^2", "c^3 - u3*c", "D^5 - u7*D^3 - u6*D^2 - u5*D"],
            claims: vec![
                ("b^2c - cb^2", vec![("statement", "b^2*c - c*b^2")]),
                (
                    "u3[b,c] and [b,c^3]",
                    vec![
                        ("statement", "u3*(b*c - c*b) - b*c^3 - c^3*b"),
                        ("proof", "-u3*(b*c - c*b) + b*c^3 - c^3*b"),
                    ],
                ),
                ("long relation", vec![("statement", L6_STATEMENT), ("proof", L6_PROOF)]),
            ],
            recomputed: vec![(1, 1, "b"), (2, 2, "b")],
        },
    }
}

pub fn karmazyn_contraction_presentation(l: u32) -> Result<Presentation, ZooError> {
    if l == 1 {
        let g = GenSet::commutative(&["t"], &[1], &[true])?;
        return Ok(Presentation::new(g.clone(), vec![NcPoly::gen(&g, "t")?], WordOrder::Deglex)?);
    }
    Ok(karmazyn(l)?.presentation)
}

/// Full data for lengths 2..6: presentation, eliminated central expressions and claims.
pub fn karmazyn(l: u32) -> Result<Karmazyn, ZooError> {
    if !(2..=6).contains(&l) {
        return Err(ZooError::BadLength { min: 2, got: l });
    }
    let k = kdata(l);
    let mut names = vec!["b".to_string(), "c".to_string()];
    let mut weights = vec![1, k.c_weight];
    let mut central = vec![false, false];
    for (n, w) in &k.central {
        names.push(n.to_string());
        weights.push(*w);
        central.push(true);
    }
    let full = GenSet::new(&names, &weights, &central)?;
    let mut cnames = vec!["b".to_string(), "c".to_string()];
    let mut cweights = vec![1, k.c_weight];
    let mut ccentral = vec![false, false];
    for s in k.surviving {
        let w = k.central.iter().find(|(n, _)| n == s).unwrap().1;
        cnames.push(s.to_string());
        cweights.push(w);
        ccentral.push(true);
    }
    let claim_gens = GenSet::new(&cnames, &cweights, &ccentral)?;
    let sub = |s: &str| s.replace('D', k.d);
    let label = |s: &str| s.replace('D', "d");
    let rels = k.relations.iter().map(|s| NcPoly::parse(&sub(s), &full)).collect::<Result<Vec<_>, _>>()?;
    let presentation = Presentation::new(full.clone(), rels, WordOrder::Wdeglex)?;
    let eliminated: Vec<(String, NcPoly)> = k
        .eliminated
        .iter()
        .map(|s| Ok((label(s), NcPoly::parse(&sub(s), &claim_gens)?)))
        .collect::<Result<_, AlgError>>()?;
    let mut claims: Vec<ClaimSpec> = k
        .claims
        .iter()
        .map(|(name, rs)| {
            let readings = rs
                .iter()
                .map(|(lab, txt)| Ok((lab.to_string(), NcPoly::parse(txt, &claim_gens)?)))
                .collect::<Result<Vec<_>, AlgError>>()?;
            Ok(ClaimSpec { name: name.to_string(), readings })
        })
        .collect::<Result<_, AlgError>>()?;
    for &(ci, ei, letter) in &k.recomputed {
        let x = NcPoly::gen(&claim_gens, letter)?;
        let e = &eliminated[ei].1;
        let comm = if letter == "b" { x.commutator(e) } else { e.commutator(&x) };
        claims[ci].readings.push((format!("recomputed [{letter}, E{ei}]"), comm));
    }
    Ok(Karmazyn { length: l, presentation, claim_gens, eliminated, claims })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReadingOutcome {
    pub label: String,
    pub status: ClaimStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimOutcome {
    pub name: String,
    pub readings: Vec<ReadingOutcome>,
}

impl ClaimOutcome {
    pub fn certified_reading(&self) -> Option<&str> {
        self.readings.iter().find(|r| r.status == ClaimStatus::CertifiedZero).map(|r| r.label.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HigherLengthReport {
    pub length: u32,
    pub dim: Option<usize>,
    pub forward: Vec<ClaimOutcome>,
    pub backward: Vec<(String, ClaimStatus)>,
    /// Claims whose first (as stated) reading does not certify.
    pub typo_mismatch: Vec<String>,
}

fn reading_word(s: &ClaimStatus) -> String {
    match s {
        ClaimStatus::CertifiedZero => "certified".to_string(),
        ClaimStatus::InconclusiveAt { n } => format!("inconclusive at {n}"),
    }
}

impl HigherLengthReport {
    pub fn forward_ok(&self) -> bool {
        self.forward.iter().all(|c| c.certified_reading().is_some())
    }

    pub fn backward_ok(&self) -> bool {
        self.backward.iter().all(|(_, s)| *s == ClaimStatus::CertifiedZero)
    }

    pub fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        if let Some(d) = self.dim {
            out.push(Check::from_bool(format!("l={} dimension", self.length), d == 1, format!("dim {d}")));
        }
        for c in &self.forward {
            let listing: Vec<String> =
                c.readings.iter().map(|r| format!("{}: {}", r.label, reading_word(&r.status))).collect();
            let status = if c.certified_reading().is_some() { Status::Pass } else { Status::Inconclusive };
            let mut detail = listing.join("; ");
            if c.readings[0].status != ClaimStatus::CertifiedZero {
                detail = format!("typo-mismatch, {detail}");
            }
            out.push(Check::new(format!("l={} forward {}", self.length, c.name), status, detail));
        }
        for (n, s) in &self.backward {
            out.push(Check::new(format!("l={} backward {n}", self.length), status_of(s), ""));
        }
        out
    }
}

/// Forward: claimed relations follow from the presentation. Backward: the eliminated
/// expressions are central modulo the claimed relations.
pub fn verify_higher_length(l: u32, trunc: u32) -> Result<HigherLengthReport, ZooError> {
    if l == 1 {
        let p = karmazyn_contraction_presentation(1)?;
        let r = quotient_report(&p, trunc)?;
        return Ok(HigherLengthReport {
            length: 1,
            dim: r.status.dim(),
            forward: vec![],
            backward: vec![],
            typo_mismatch: vec![],
        });
    }
    let k = karmazyn(l)?;
    let full = k.presentation.gens().clone();
    let opts = CompletionOptions { certificates: true, ..CompletionOptions::default() };
    let gb = nc_complete_with(&k.presentation, trunc, opts)?;
    let mut forward = Vec::new();
    let mut typo = Vec::new();
    let mut chosen = Vec::new();
    for c in &k.claims {
        let polys: Vec<NcPoly> = c.readings.iter().map(|(_, p)| p.embed(&full)).collect::<Result<_, _>>()?;
        let res = derive_with(&gb, &k.presentation, &polys)?;
        let readings: Vec<ReadingOutcome> = c
            .readings
            .iter()
            .zip(&res)
            .map(|((lab, _), r)| ReadingOutcome { label: lab.clone(), status: r.status.clone() })
            .collect();
        let outcome = ClaimOutcome { name: c.name.clone(), readings };
        if outcome.readings[0].status != ClaimStatus::CertifiedZero {
            typo.push(c.name.clone());
        }
        let idx = outcome.readings.iter().position(|r| r.status == ClaimStatus::CertifiedZero).unwrap_or(0);
        chosen.push(c.readings[idx].1.clone());
        forward.push(outcome);
    }
    let claimed = Presentation::new(k.claim_gens.clone(), chosen, WordOrder::Wdeglex)?;
    let mut bnames = Vec::new();
    let mut bclaims = Vec::new();
    for (name, e) in &k.eliminated {
        for g in ["b", "c"] {
            let x = NcPoly::gen(&k.claim_gens, g)?;
            let comm = e.commutator(&x);
            if !comm.is_zero() {
                bnames.push(format!("[{name}, {g}]"));
                bclaims.push(comm);
            }
        }
    }
    let bres = derive_check(&claimed, &bclaims, trunc)?;
    let backward = bnames.into_iter().zip(bres).map(|(n, r)| (n, r.status)).collect();
    Ok(HigherLengthReport { length: l, dim: None, forward, backward, typo_mismatch: typo })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantRow {
    pub name: String,
    pub dim: DimStatus,
    pub ab_dim: Option<DimStatus>,
    pub graded_dims: Vec<usize>,
    pub weight_list: Option<Vec<u32>>,
    pub center_dim: Option<usize>,
    pub symmetric_span: usize,
    pub alternating_span: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantTable {
    pub n: u32,
    pub rows: Vec<InvariantRow>,
    pub checks: Vec<Check>,
}

fn ab_ideal_basis(p: &Presentation, big_n: u32) -> Result<Vec<CommPoly>, ZooError> {
    let vars = p.gens().varset();
    let mut gens: Vec<CommPoly> = p.relations().iter().map(nc_abelianize).filter(|f| !f.is_zero()).collect();
    for e in monomials_of_degree(vars.len(), big_n) {
        gens.push(CommPoly::monomial(&vars, e, q(1)));
    }
    let gb = cp_groebner(&gens, &MonomialOrder::graded(vars.len())).map_err(GbError::from)?;
    Ok(gb.basis())
}

/// Dimensions, abelianizations, centers and quadratic parts of `A_0, .., A_2n`.
pub fn invariant_table(n: u32, max_n: u32) -> Result<InvariantTable, ZooError> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut ab_bases = Vec::new();
    for i in 0..=2 * n {
        let p = laufer_a(n, i)?;
        let rep = quotient_report(&p, max_n)?;
        let ab = abelianization_report(&p, max_n)?;
        let center = center_basis(&rep, &p).ok().map(|c| c.dim);
        let qc = quadratic_classify(p.relations());
        ab_bases.push(ab_ideal_basis(&p, max_n)?);
        rows.push(InvariantRow {
            name: format!("A_{i}"),
            dim: rep.status.clone(),
            ab_dim: Some(ab.status.clone()),
            graded_dims: rep.graded_dims.clone(),
            weight_list: if i == 0 { rep.weight_list.clone() } else { None },
            center_dim: center,
            symmetric_span: qc.symmetric_span,
            alternating_span: qc.alternating_span,
        });
    }
    let target = (6 * n + 3) as usize;
    for i in std::iter::once(0).chain(n + 1..=2 * n) {
        let d = rows[i as usize].dim.dim();
        checks.push(Check::from_bool(format!("dim A_{i} = 6n+3"), d == Some(target), format!("{d:?}")));
    }
    for i in 0..=2 * n {
        let expect = if (1..=n).contains(&i) { 2 + 2 * i } else { 2 * n + 3 } as usize;
        let got = rows[i as usize].ab_dim.as_ref().and_then(|s| s.dim());
        checks.push(Check::from_bool(format!("ab dim A_{i}"), got == Some(expect), format!("{got:?}")));
    }
    for j in 1..=n {
        checks.push(Check::from_bool(
            format!("A_0 and A_{} have identical abelianized ideals", n + j),
            ab_bases[0] == ab_bases[(n + j) as usize],
            "",
        ));
    }
    for r in &rows {
        checks.push(Check::from_bool(
            format!("{} quadratic parts symmetric", r.name),
            r.symmetric_span == 2 && r.alternating_span == 0,
            format!("sym {} alt {}", r.symmetric_span, r.alternating_span),
        ));
    }
    let a0 = laufer_a(n, 0)?;
    let gb = nc_complete(&a0, max_n)?;
    let b = NcPoly::gen(a0.gens(), "b")?;
    let bp = b.pow(2 * n + 1);
    let central = ["a", "b"].iter().all(|g| {
        let x = NcPoly::gen(a0.gens(), g).unwrap();
        nc_reduce(&bp.commutator(&x), &gb).normal_form.is_zero()
    });
    checks.push(Check::from_bool("b^(2n+1) is central in A_0", central, ""));
    Ok(InvariantTable { n, rows, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Word;

    #[test]
    fn laufer_constructor_examples() {
        let p = laufer_presentation(1, &[q(0), q(1)]).unwrap();
        assert_eq!(p.relations()[1], NcPoly::parse("a^2 + b^3 + b^4", p.gens()).unwrap());
        let p = laufer_presentation(2, &[q(1), q(0), q(0), q(0)]).unwrap();
        assert_eq!(p.relations()[1], NcPoly::parse("a^2 + b^5 + b^2", p.gens()).unwrap());
        assert!(matches!(laufer_presentation(1, &[q(0)]), Err(ZooError::LambdaLength { .. })));
    }

    #[test]
    fn laufer_basis_n1() {
        let p = laufer_a(1, 0).unwrap();
        let r = quotient_report(&p, laufer_default_max(1)).unwrap();
        assert_eq!(r.status.dim(), Some(9));
        let g = p.gens();
        let mut want: Vec<Word> = Vec::new();
        for s in 0..=2 {
            for t in 0..=2 {
                let mut v = vec![0usize; s];
                v.extend(vec![1usize; t]);
                want.push(Word::from_letters(g, &v));
            }
        }
        let mut got = r.basis.clone();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(r.weight_list.unwrap(), vec![0, 2, 3, 4, 5, 6, 7, 8, 10]);
    }

    #[test]
    fn spec_dispatch() {
        let p = ZooSpec::Laufer { n: 1, lambda: vec![Lambda::Value(q(0)), Lambda::Symbolic] }.presentation().unwrap();
        assert_eq!(p.gens().names(), &["a", "b", "l2"]);
        assert!(ZooSpec::Length2Scheme.presentation().unwrap().relations().is_empty());
        assert!(matches!(karmazyn(7), Err(ZooError::BadLength { .. })));
    }

    #[test]
    fn length_one_is_k() {
        let r = verify_higher_length(1, 6).unwrap();
        assert_eq!(r.dim, Some(1));
    }

    #[test]
    fn length_two_forward() {
        let r = verify_higher_length(2, 10).unwrap();
        assert!(r.forward_ok() && r.backward_ok(), "{r:?}");
    }
}
